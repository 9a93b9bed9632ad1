"""Brute-force verdicts for family instances, building-block suites and sweeps.

Every check compares against value tables: the forward table of ``P`` and
its table inverse are the oracle, closed forms are only ever the subject.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from .errors import ParameterError
from .families import (CASE_SPLIT, IFF, SUFFICIENT, PPInstance, build_P_general, get_family,
                       instantiate, normalized_mapping, conjugate_identity_holds, _FAMILIES)
from .field import FieldCtx, mk_field
from .linearized import (lemma4_inverse_coeffs, lemma4_is_perm, lemma5_inverse_coeffs,
                         lemma5_is_perm)
from .mapping import (GSpec, build_P, build_tau, compose, find_collision, first_difference,
                      identity, invert_table, is_permutation, lemma3_inverse, tabulate)

EXHAUSTIVE_BUDGET = 10**7  # |parameter space| * q^2 evaluations
DEFAULT_SAMPLES = 200

VERDICTS = ("inverse_matches_oracle", "involution_holds", "conjugate_holds", "quartic_criterion_agrees",
            "is_permutation")


@dataclass
class VerificationReport:
    family: str
    p: int
    m: int
    params: dict
    condition_kind: str
    condition_holds: bool | None
    branch: str | None
    is_permutation: bool
    inverse_matches_oracle: bool | None = None
    involution_holds: bool | None = None
    conjugate_holds: bool | None = None
    quartic_criterion_agrees: bool | None = None
    counterexample: dict | None = None
    passed: bool = False
    note: str | None = None
    elapsed: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        doc = {
            "family": self.family, "p": self.p, "m": self.m,
            "params": dict(sorted(self.params.items())),
            "condition_kind": self.condition_kind, "condition_holds": self.condition_holds,
            "branch": self.branch, "is_permutation": self.is_permutation,
            "inverse_matches_oracle": self.inverse_matches_oracle,
            "involution_holds": self.involution_holds, "conjugate_holds": self.conjugate_holds,
            "quartic_criterion_agrees": self.quartic_criterion_agrees, "counterexample": self.counterexample,
            "passed": self.passed, "note": self.note,
        }
        if timing:
            doc["elapsed"] = round(self.elapsed, 6)
        return doc


def _first_false(report: VerificationReport) -> str | None:
    for name in VERDICTS:
        if getattr(report, name) is False:
            return name
    return None


def verify_instance(inst: PPInstance) -> VerificationReport:
    """Check every claim attached to ``inst`` against the table oracle."""
    t0 = time.perf_counter()
    ctx, m = inst.ctx, inst.m
    fam = get_family(inst.family_id)
    kind = fam.descriptor.condition_kind
    fwd = inst.forward
    perm = is_permutation(fwd)
    rep = VerificationReport(inst.family_id, ctx.p, m, dict(inst.params), kind,
                             inst.condition_holds, inst.branch, perm, note=inst.note)
    cex = None

    claims_inverse = (kind == CASE_SPLIT and perm and inst.branch is not None) or \
                     (kind != CASE_SPLIT and bool(inst.condition_holds))
    if claims_inverse and perm:
        oracle = invert_table(fwd)
        if inst.inverse_closed is None:
            rep.inverse_matches_oracle = False
            cex = cex or {"check": "inverse", "x": None, "expected": None, "actual": None}
        else:
            x = first_difference(inst.inverse_closed, oracle)
            rep.inverse_matches_oracle = x is None
            if x is not None:
                cex = {"check": "inverse", "x": x, "expected": oracle(x),
                       "actual": inst.inverse_closed(x)}

    if fam.descriptor.involution:
        twice = compose(fwd, fwd)
        x = first_difference(twice, identity(ctx))
        rep.involution_holds = x is None
        if x is not None and cex is None:
            cex = {"check": "involution", "x": x, "expected": x, "actual": twice(x)}

    holds, x = conjugate_identity_holds(ctx, m, inst.gspec)
    rep.conjugate_holds = holds
    if not holds and cex is None:
        cex = {"check": "conjugate", "x": x, "expected": None, "actual": None}

    if "quartic_criterion" in inst.extra:
        crit = inst.extra["quartic_criterion"]
        rep.quartic_criterion_agrees = crit == perm
        if crit != perm and cex is None:
            cex = {"check": "quartic", "x": None, "expected": perm, "actual": crit}

    if not perm and cex is None:
        x1, x2 = find_collision(fwd)
        cex = {"check": "permutation", "x": x1, "other": x2, "image": fwd(x1)}
    rep.counterexample = cex

    ok = rep.conjugate_holds is not False and rep.involution_holds is not False \
        and rep.quartic_criterion_agrees is not False and rep.inverse_matches_oracle is not False
    if kind == IFF:
        ok = ok and bool(inst.condition_holds) == perm
    elif kind == SUFFICIENT:
        ok = ok and (not inst.condition_holds or perm)
        if not inst.condition_holds and perm:
            rep.note = "permutation although the sufficient condition fails"
    rep.passed = ok
    rep.elapsed = time.perf_counter() - t0
    return rep


def recheck_counterexample(inst: PPInstance, rep: VerificationReport) -> bool:
    """Re-evaluate the cited element; true when the recorded failure reproduces."""
    cex = rep.counterexample
    if cex is None:
        return True
    check = cex["check"]
    fwd = inst.forward
    if check == "permutation":
        return cex["x"] != cex["other"] and fwd(cex["x"]) == fwd(cex["other"]) == cex["image"]
    if check == "inverse":
        if cex["x"] is None:
            return inst.inverse_closed is None
        return inst.inverse_closed(cex["x"]) == cex["actual"] and fwd(cex["actual"]) != cex["x"]
    if check == "involution":
        return fwd(fwd(cex["x"])) == cex["actual"] != cex["x"]
    if check == "quartic":
        return inst.extra["quartic_criterion"] == cex["actual"] != is_permutation(fwd)
    if check == "conjugate":
        return not conjugate_identity_holds(inst.ctx, inst.m, inst.gspec)[0]
    return False


# --- sweeps ----------------------------------------------------------------------

@dataclass(frozen=True)
class SweepPlan:
    family_id: str
    fields: tuple
    strategy: str = "auto"          # auto | exhaustive | sampled
    samples: int = DEFAULT_SAMPLES
    seed: int | None = 0
    filters: dict = field(default_factory=dict)
    budget: int = EXHAUSTIVE_BUDGET

    def __post_init__(self):
        if self.strategy not in ("auto", "exhaustive", "sampled"):
            raise ParameterError(f"unknown strategy {self.strategy!r}")
        if self.strategy != "exhaustive" and self.seed is None:
            raise ParameterError("sampled sweeps need an explicit seed")
        if self.samples < 0:
            raise ParameterError("sample count must be non-negative")
        object.__setattr__(self, "fields", tuple((int(p), int(m)) for p, m in self.fields))

    def families(self) -> list[str]:
        if self.family_id.lower() == "all":
            return list(_FAMILIES)
        fid = self.family_id.upper()
        get_family(fid)
        return [fid]


def sample_rng(seed: int, family_id: str, p: int, m: int, index: int) -> random.Random:
    """Counter-based generator: each sample index gets its own stream."""
    key = f"{seed}|{family_id}|{p}|{m}|{index}".encode()
    return random.Random(int.from_bytes(hashlib.sha256(key).digest()[:8], "big"))


def _matches(params: dict, filters: dict) -> bool:
    for name, want in filters.items():
        have = params.get(name)
        if isinstance(want, (list, tuple, set, frozenset)):
            if have not in want:
                return False
        elif have != want:
            return False
    return True


def resolve_strategy(plan: SweepPlan, fam_id: str, ctx: FieldCtx, m: int) -> str:
    fam = get_family(fam_id)
    size = fam.space_size(ctx, m)
    fits = size * ctx.order <= plan.budget
    if plan.strategy == "exhaustive" and not fits:
        raise ParameterError(
            f"{fam_id} over {ctx.ctx_id}: {size} tuples x {ctx.order} points exceeds "
            f"the exhaustive budget {plan.budget}")
    if plan.strategy == "auto":
        return "exhaustive" if fits else "sampled"
    return plan.strategy


def plan_params(plan: SweepPlan, fam_id: str, p: int, m: int) -> list[dict]:
    ctx = mk_field(p, 2 * m)
    fam = get_family(fam_id)
    strategy = resolve_strategy(plan, fam_id, ctx, m)
    if strategy == "exhaustive":
        tuples = list(fam.enumerate_params(ctx, m))
    else:
        tuples = [fam.sample_params(ctx, m, sample_rng(plan.seed, fam_id, p, m, i))
                  for i in range(plan.samples)]
    return [t for t in tuples if _matches(t, plan.filters)]


def _param_key(params: dict) -> tuple:
    return tuple(sorted(params.items()))


def _verify_task(task: tuple) -> VerificationReport:
    fam_id, p, m, params = task
    return verify_instance(instantiate(fam_id, mk_field(p, 2 * m), m, params))


def run_sweep(plan: SweepPlan, jobs: int = 1) -> list[VerificationReport]:
    tasks = []
    for fam_id in plan.families():
        fam = get_family(fam_id)
        for p, m in plan.fields:
            mk_field(p, 2 * m)  # order-cap check rejects the plan up front
            if not fam.admissible(p, m):
                if len(plan.families()) == 1:
                    raise ParameterError(f"{fam_id} is not defined for p={p}, m={m}")
                continue
            params = plan_params(plan, fam_id, p, m)
            params.sort(key=_param_key)
            tasks += [(fam_id, p, m, t) for t in params]
    tasks.sort(key=lambda t: (t[1], t[2], t[0]))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_verify_task, tasks, chunksize=16))
    return [_verify_task(t) for t in tasks]


def reports_to_json(reports: Iterable[VerificationReport], timing: bool = False) -> str:
    docs = [r.to_json(timing) for r in reports]
    return json.dumps(docs, sort_keys=True, indent=1) + "\n"


CSV_COLUMNS = ("family", "p", "m", "params", "condition_kind", "condition_holds", "branch",
               "is_permutation", "inverse_matches_oracle", "involution_holds", "conjugate_holds",
               "quartic_criterion_agrees", "passed", "counterexample", "note")


def reports_to_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        doc = r.to_json()
        row = []
        for col in CSV_COLUMNS:
            v = doc[col]
            if isinstance(v, dict):
                v = json.dumps(v, sort_keys=True, separators=(",", ":"))
            elif v is None:
                v = ""
            row.append(v)
        w.writerow(row)
    return buf.getvalue()


def summarize(reports: list[VerificationReport]) -> dict:
    by_family: dict = {}
    for r in reports:
        s = by_family.setdefault(r.family, {"count": 0, "passed": 0, "permutations": 0})
        s["count"] += 1
        s["passed"] += r.passed
        s["permutations"] += r.is_permutation
    return by_family


# --- iff aggregation -------------------------------------------------------------

@dataclass
class IffReport:
    family: str
    p: int
    m: int
    count: int = 0
    permutations: int = 0
    inverse_checked: int = 0
    violations: list = field(default_factory=list)
    inverse_failures: list = field(default_factory=list)
    method: str = "tables"
    branch_counts: dict = field(default_factory=dict)  # permutation instances per branch

    @property
    def passed(self) -> bool:
        return not self.violations and not self.inverse_failures

    def to_json(self) -> dict:
        return {"family": self.family, "p": self.p, "m": self.m, "count": self.count,
                "permutations": self.permutations, "inverse_checked": self.inverse_checked,
                "violations": self.violations, "inverse_failures": self.inverse_failures,
                "method": self.method, "branch_counts": dict(sorted(self.branch_counts.items())),
                "passed": self.passed}


def check_iff(family_id: str, ctx: FieldCtx, m: int, enumeration="exhaustive") -> IffReport:
    """Condition <=> permutation for every tuple, plus closed inverse = table inverse.

    ``enumeration`` is an iterable of parameter dicts or ``"exhaustive"``;
    exhaustive runs of the three-term families go through the vectorized grid.
    """
    fam = get_family(family_id)
    if fam.descriptor.condition_kind != IFF:
        raise ParameterError(f"{fam.id} is not an iff family")
    if enumeration == "exhaustive" and fam.id in ("F15", "F16"):
        from .bulk import bulk_check
        b = bulk_check(fam.id, ctx, m)
        return IffReport(fam.id, ctx.p, m, b.count, b.permutations, b.inverse_checked,
                         b.violations, b.inverse_failures, f"vectorized-{b.level}",
                         dict(b.branch_inverses))
    if enumeration == "exhaustive":
        enumeration = fam.enumerate_params(ctx, m)
    out = IffReport(fam.id, ctx.p, m)
    for params in enumeration:
        inst = instantiate(fam.id, ctx, m, params)
        perm = is_permutation(inst.forward)
        out.count += 1
        out.permutations += perm
        if bool(inst.condition_holds) != perm:
            out.violations.append(dict(inst.params))
        if perm and inst.condition_holds:
            key = inst.branch or "-"
            out.branch_counts[key] = out.branch_counts.get(key, 0) + 1
            out.inverse_checked += 1
            if inst.inverse_closed is None or \
                    first_difference(inst.inverse_closed, invert_table(inst.forward)) is not None:
                out.inverse_failures.append(dict(inst.params))
    return out


# --- building-block suites ---------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    count: int = 0
    checks: int = 0
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "count": self.count, "checks": self.checks,
                "failures": self.failures[:20], "failure_count": len(self.failures),
                "detail": self.detail, "passed": self.passed}


def quartic_suite(ms: Iterable[int] = (2, 3, 4, 5, 6)) -> SuiteResult:
    """``x^4 + b x^2 + a x`` over GF(2^m): criterion vs table, inverse vs table inverse."""
    res = SuiteResult("quartic")
    for m in ms:
        ctx = mk_field(2, m)
        for a in range(1, ctx.order):
            for b in ctx.elements():
                L = tabulate(ctx, lambda x: ctx.add(ctx.add(ctx.pow(x, 4), ctx.mul(b, ctx.pow(x, 2))),
                                                    ctx.mul(a, x)))
                perm = is_permutation(L)
                res.count += 1
                if lemma4_is_perm(ctx, a, b, m) != perm:
                    res.failures.append({"m": m, "a": a, "b": b, "permutation": perm})
                    continue
                if perm:
                    res.checks += 1
                    inv = lemma4_inverse_coeffs(ctx, a, b, m)
                    if first_difference(tabulate(ctx, lambda x: inv(ctx, x)), invert_table(L)) is not None:
                        res.failures.append({"m": m, "a": a, "b": b, "inverse": False})
    return res


BINOMIAL_CASES = ((2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (5, 2))


def binomial_suite(cases: Iterable[tuple[int, int]] = BINOMIAL_CASES) -> SuiteResult:
    """``x^{q^r} - a x`` over GF(q^M): norm criterion and inverse vs tables."""
    res = SuiteResult("binomial")
    for q, M in cases:
        p = min(d for d in range(2, q + 1) if q % d == 0)
        s = 0
        while p**s < q:
            s += 1
        ctx = mk_field(p, s * M)
        for r in range(1, M):
            for a in range(1, ctx.order):
                L = tabulate(ctx, lambda x: ctx.sub(ctx.pow(x, q**r), ctx.mul(a, x)))
                perm = is_permutation(L)
                res.count += 1
                if lemma5_is_perm(ctx, a, r, q) != perm:
                    res.failures.append({"q": q, "M": M, "r": r, "a": a, "permutation": perm})
                    continue
                if perm:
                    res.checks += 1
                    inv = lemma5_inverse_coeffs(ctx, a, r, q)
                    if first_difference(tabulate(ctx, lambda x: inv(ctx, x)), invert_table(L)) is not None:
                        res.failures.append({"q": q, "M": M, "r": r, "a": a, "inverse": False})
    return res


def random_gspec(ctx: FieldCtx, rng: random.Random, max_terms: int = 3) -> GSpec:
    """Random ``g`` with up to ``max_terms`` terms and ``1 <= s_i < q^2 - 1``."""
    k = rng.randint(1, max_terms)
    terms = [(rng.randrange(ctx.order), rng.randint(1, max(1, ctx.order - 2))) for _ in range(k)]
    return GSpec.of(terms, rng.randrange(ctx.order))


def _field_for_q(q: int) -> tuple[FieldCtx, int]:
    p = min(d for d in range(2, q + 1) if q % d == 0)
    m = 0
    while p**m < q:
        m += 1
    return mk_field(p, 2 * m), m


def trace_reduction_suite(qs: Iterable[int] = (4, 8, 9), count: int = 500, seed: int = 0) -> SuiteResult:
    """P permutes iff tau does; where it does, the trace-built inverse inverts P."""
    res = SuiteResult("trace-reduction")
    for q in qs:
        ctx, m = _field_for_q(q)
        ident = identity(ctx)
        perms = 0
        for i in range(count):
            g = random_gspec(ctx, sample_rng(seed, "trace-reduction", ctx.p, m, i))
            P = build_P(ctx, g, m)
            p_perm, t_perm = is_permutation(P), is_permutation(build_tau(ctx, g, m))
            res.count += 1
            if p_perm != t_perm:
                res.failures.append({"q": q, "index": i, "P": p_perm, "tau": t_perm})
                continue
            if p_perm:
                perms += 1
                res.checks += 1
                inv = lemma3_inverse(ctx, g, m)
                if compose(inv, P) != ident or compose(P, inv) != ident:
                    res.failures.append({"q": q, "index": i, "inverse": False})
        res.detail[str(q)] = perms
    return res


def _permutation_pool(ctx: FieldCtx, m: int, count: int, seed: int, tag: str):
    """Deterministic stream of permutation GSpecs: family instances and random ``g``.

    Yields (g, draws_so_far).  Random ``g`` alone are rarely permutations once
    q > 5, so every other draw comes from an admissible catalog family.
    """
    fams = [f for f in _FAMILIES.values() if f.admissible(ctx.p, m)]
    draws = found = 0
    while found < count:
        rng = sample_rng(seed, tag, ctx.p, m, draws)
        draws += 1
        if draws % 2 and fams:
            fam = fams[rng.randrange(len(fams))]
            try:
                g = fam.gspec(ctx, m, fam.validate(ctx, m, fam.sample_params(ctx, m, rng)))
            except ParameterError:
                continue
        else:
            g = random_gspec(ctx, rng)
        if is_permutation(build_P(ctx, g, m)):
            found += 1
            yield g, draws
        if draws > 10**6:
            raise RuntimeError("permutation pool exhausted")


def conjugation_suite(qs: Iterable[int] = (4, 9), count: int = 200, seed: int = 0) -> SuiteResult:
    """Conjugate pairs: permutation verdicts agree and the inverse relation holds."""
    res = SuiteResult("conjugation")
    for q in qs:
        ctx, m = _field_for_q(q)
        draws = 0
        for g, draws in _permutation_pool(ctx, m, count, seed, "conjugation"):
            holds, x = conjugate_identity_holds(ctx, m, g)
            res.count += 1
            res.checks += ctx.order
            if not holds:
                res.failures.append({"q": q, "terms": [list(t) for t in g.terms],
                                     "delta": g.delta, "x": x})
        res.detail[str(q)] = {"instances": count, "draws": draws}
    return res


def normalization_suite(qs: Iterable[int] = (3, 5, 9), count: int = 50, seed: int = 0) -> SuiteResult:
    """``a``-twisted polynomials agree pointwise with their rescaled ``a = 1`` form."""
    from .families import admissible_a
    res = SuiteResult("normalization")
    for q in qs:
        ctx, m = _field_for_q(q)
        avals = admissible_a(ctx, m)
        res.detail[str(q)] = len(avals)
        for a in avals:
            for i in range(count):
                g = random_gspec(ctx, sample_rng(seed, f"norm-{a}", ctx.p, m, i))
                res.count += 1
                res.checks += ctx.order
                x = first_difference(build_P_general(ctx, g, m, a), normalized_mapping(ctx, m, a, g))
                if x is not None:
                    res.failures.append({"q": q, "a": a, "index": i, "x": x})
    return res


SUITES = {
    "quartic": quartic_suite,
    "binomial": binomial_suite,
    "trace-reduction": trace_reduction_suite,
    "conjugation": conjugation_suite,
    "normalization": normalization_suite,
}


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()
