"""Catalog of permutation-polynomial families over GF(q^2), q = p^m.

Every member has the shape ``P(x) = sum b_i (x^q + x + delta)^{s_i} - x``
(``+x`` in characteristic 2), so the forward table always comes from
:func:`ppinv.mapping.build_P`.  Each family contributes its side condition,
the branch selection for case analyses, and its closed-form inverse.

Parameters are flat ``{name: int}`` dicts.  Field-valued parameters are
encodings in the GF(q^2) context; multi-term families index their parameters
``b1, s1, b2, s2, ...``.  The exponent written ``2^i`` / ``p^i`` in the
statements is called ``e`` here so it cannot be confused with summation
indices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterator

from .errors import NotPermutationError, ParameterError
from .field import FieldCtx
from .linearized import lemma4_is_perm, s_sequence
from .mapping import (GSpec, Mapping, build_P, build_tau, eval_g, invert_table,
                      is_permutation, lemma3_inverse, tabulate)

IFF = "iff"
SUFFICIENT = "sufficient"
CASE_SPLIT = "case-split"


@dataclass(frozen=True)
class FamilyDescriptor:
    id: str
    forward: str
    char_constraint: str
    min_q: int
    param_schema: dict
    condition_kind: str
    anchor: str
    variants: tuple = ()
    involution: bool = False

    def to_json(self) -> dict:
        return {
            "id": self.id, "forward": self.forward, "char_constraint": self.char_constraint,
            "min_q": self.min_q, "params": dict(self.param_schema),
            "condition_kind": self.condition_kind, "anchor": self.anchor,
            "variants": list(self.variants), "involution": self.involution,
        }


@dataclass
class PPInstance:
    family_id: str
    ctx: FieldCtx
    m: int
    params: dict
    condition_holds: bool | None
    branch: str | None
    gspec: GSpec
    forward: Mapping
    inverse_closed: Mapping | None = None
    note: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.ctx.p**self.m

    def to_json(self) -> dict:
        return {
            "family": self.family_id, "p": self.ctx.p, "m": self.m,
            "params": dict(sorted(self.params.items())),
            "condition": self.condition_holds,
            "permutation": is_permutation(self.forward),
        }


# --- small helpers -------------------------------------------------------------

def _q(ctx: FieldCtx, m: int) -> int:
    return ctx.p**m


def _tr(ctx: FieldCtx, m: int, x: int) -> int:
    return ctx.add(x, ctx.frob(x, m))


def _in_fq(ctx: FieldCtx, m: int, x: int) -> bool:
    return ctx.frob(x, m) == x


def _is_square_in_fq(ctx: FieldCtx, m: int, x: int) -> bool:
    if x == 0 or ctx.p == 2:
        return True
    return ctx.pow(x, (_q(ctx, m) - 1) // 2) == 1


def _fq_nonzero(ctx: FieldCtx, m: int) -> list[int]:
    return [x for x in ctx.subfield(m) if x]


def _not_fq(ctx: FieldCtx, m: int) -> list[int]:
    return [x for x in ctx.elements() if not _in_fq(ctx, m, x)]


def _lin_apply(ctx: FieldCtx, coeffs: list[tuple[int, int]], z: int) -> int:
    acc = 0
    for c, e in coeffs:
        acc = ctx.add(acc, ctx.mul(c, ctx.pow(z, e)))
    return acc


def _terms_from(params: dict, prefix: str) -> list[int]:
    vals = []
    i = 1
    while f"{prefix}{i}" in params:
        vals.append(params[f"{prefix}{i}"])
        i += 1
    return vals


def _trace_one_element(ctx: FieldCtx, m: int) -> int:
    for x in ctx.elements():
        if _tr(ctx, m, x) == 1:
            return x
    raise AssertionError("trace onto the subfield is surjective")


def _odd(rng: random.Random, bound: int) -> int:
    return 2 * rng.randrange(max(bound // 2, 1)) + 1


# --- base class ----------------------------------------------------------------

class Family:
    descriptor: FamilyDescriptor
    max_terms = 1

    # which parameters are field elements (validated as encodings)
    element_params: tuple = ()

    @property
    def id(self) -> str:
        return self.descriptor.id

    def admissible(self, p: int, m: int) -> bool:
        c = self.descriptor.char_constraint
        if c == "p=2" and p != 2 or c == "p odd" and p == 2 or c == "p=3" and p != 3:
            return False
        return p**m >= self.descriptor.min_q

    def validate(self, ctx: FieldCtx, m: int, params: dict) -> dict:
        if ctx.n != 2 * m:
            raise ParameterError(f"{ctx.ctx_id} is not GF(q^2) for m={m}")
        if not self.admissible(ctx.p, m):
            raise ParameterError(
                f"{self.id} needs {self.descriptor.char_constraint}, q >= {self.descriptor.min_q}")
        params = {k: int(v) for k, v in params.items()}
        allowed = self.allowed_names(params)
        unknown = sorted(set(params) - allowed)
        if unknown:
            raise ParameterError(f"{self.id}: unknown parameters {unknown}")
        for name in self.required_names(params):
            if name not in params:
                raise ParameterError(f"{self.id}: missing parameter {name!r}")
        for name, v in params.items():
            if self.is_element(name) and not 0 <= v < ctx.order:
                raise ParameterError(f"{name}={v} is not an element of {ctx.ctx_id}")
        self.check(ctx, m, params)
        return params

    def is_element(self, name: str) -> bool:
        return name.rstrip("0123456789") in self.element_params

    def allowed_names(self, params: dict) -> set:
        return set(self.required_names(params))

    def required_names(self, params: dict) -> list[str]:
        return list(self.descriptor.param_schema)

    def check(self, ctx: FieldCtx, m: int, params: dict) -> None:
        """Family-specific schema checks; raise ParameterError."""

    def gspec(self, ctx: FieldCtx, m: int, params: dict) -> GSpec:
        raise NotImplementedError

    def condition(self, ctx: FieldCtx, m: int, params: dict) -> bool | None:
        return None

    def branch(self, ctx: FieldCtx, m: int, params: dict) -> str | None:
        return None

    def inverse(self, ctx: FieldCtx, m: int, params: dict, branch: str | None) -> Callable[[int], int]:
        raise NotImplementedError

    def extra_checks(self, ctx: FieldCtx, m: int, params: dict) -> dict:
        return {}

    # parameter spaces

    def space_size(self, ctx: FieldCtx, m: int) -> int:
        return sum(1 for _ in self.enumerate_params(ctx, m))

    def enumerate_params(self, ctx: FieldCtx, m: int) -> Iterator[dict]:
        raise NotImplementedError

    def sample_params(self, ctx: FieldCtx, m: int, rng: random.Random) -> dict:
        raise NotImplementedError


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterError(msg)


# --- single-term characteristic-2 families with b in F_q^* --------------------

class _SingleB(Family):
    """``b (x^q + x + delta)^s + x`` with ``b`` in F_q^*, ``delta`` in GF(q^2)."""

    element_params = ("b", "delta")
    delta_outside_fq = False

    def exponent(self, q: int, params: dict) -> int:
        raise NotImplementedError

    def check(self, ctx, m, params):
        _require(params["b"] != 0 and _in_fq(ctx, m, params["b"]), "b must lie in F_q^*")
        if self.delta_outside_fq:
            _require(not _in_fq(ctx, m, params["delta"]), "delta must lie outside F_q")

    def gspec(self, ctx, m, params):
        return GSpec.of([(params["b"], self.exponent(_q(ctx, m), params))], params["delta"])

    def _deltas(self, ctx, m):
        return _not_fq(ctx, m) if self.delta_outside_fq else list(ctx.elements())

    def enumerate_params(self, ctx, m):
        for b in _fq_nonzero(ctx, m):
            for delta in self._deltas(ctx, m):
                yield {"b": b, "delta": delta}

    def space_size(self, ctx, m):
        return (_q(ctx, m) - 1) * len(self._deltas(ctx, m))

    def sample_params(self, ctx, m, rng):
        return {"b": rng.choice(_fq_nonzero(ctx, m)), "delta": rng.choice(self._deltas(ctx, m))}

    def _with_e(self, ctx, m, base_iter):
        for params in base_iter:
            for e in range(2 * m):
                yield dict(params, e=e)


# --- involutions ---------------------------------------------------------------

class F01(Family):
    """Involutions: char 2, ``b_i`` in F_q^*.

    Variant ``a``: every ``s_i`` satisfies ``s_i q = s_i (mod q^2 - 1)``.
    Variant ``b``: ``delta`` in F_q^*, any ``s_i``.
    """

    descriptor = FamilyDescriptor(
        id="F01", forward="sum b_i (x^q+x+delta)^{s_i} + x",
        char_constraint="p=2", min_q=2,
        param_schema={"variant": "0 (a) or 1 (b)", "b1": "F_q^*", "s1": "positive int",
                      "delta": "GF(q^2) (variant a) / F_q^* (variant b)"},
        condition_kind=SUFFICIENT,
        anchor="a: b_i in F_q^*, s_i q = s_i mod q^2-1; b: b_i, delta in F_q^*",
        variants=("a", "b"), involution=True,
    )
    max_terms = 3
    element_params = ("b", "delta")

    def allowed_names(self, params):
        k = len(_terms_from(params, "b"))
        return {"variant", "delta"} | {f"{x}{i}" for i in range(1, k + 1) for x in "bs"}

    def required_names(self, params):
        return sorted(self.allowed_names(params) | {"b1", "s1"})

    def check(self, ctx, m, params):
        q = _q(ctx, m)
        _require(params["variant"] in (0, 1), "variant must be 0 (a) or 1 (b)")
        for b in _terms_from(params, "b"):
            _require(b != 0 and _in_fq(ctx, m, b), "b_i must lie in F_q^*")
        for s in _terms_from(params, "s"):
            _require(s >= 1, "s_i must be positive")
            if params["variant"] == 0:
                _require(s * q % (q * q - 1) == s % (q * q - 1), "s_i q must equal s_i mod q^2-1")
        if params["variant"] == 1:
            d = params["delta"]
            _require(d != 0 and _in_fq(ctx, m, d), "delta must lie in F_q^*")

    def gspec(self, ctx, m, params):
        terms = list(zip(_terms_from(params, "b"), _terms_from(params, "s")))
        return GSpec.of(terms, params["delta"])

    def condition(self, ctx, m, params):
        return True

    def inverse(self, ctx, m, params, branch):
        g = self.gspec(ctx, m, params)
        return lambda x: ctx.sub(eval_g(ctx, g, _tr(ctx, m, x)), x)

    def _s_values(self, q, variant):
        if variant == 0:
            return [(q + 1) * c for c in range(1, q)]
        return list(range(1, q * q))

    def _deltas(self, ctx, m, variant):
        return list(ctx.elements()) if variant == 0 else _fq_nonzero(ctx, m)

    def enumerate_params(self, ctx, m):
        q = _q(ctx, m)
        for variant in (0, 1):
            for b in _fq_nonzero(ctx, m):
                for s in self._s_values(q, variant):
                    for delta in self._deltas(ctx, m, variant):
                        yield {"variant": variant, "b1": b, "s1": s, "delta": delta}

    def space_size(self, ctx, m):
        q = _q(ctx, m)
        return sum((q - 1) * len(self._s_values(q, v)) * len(self._deltas(ctx, m, v))
                   for v in (0, 1))

    def sample_params(self, ctx, m, rng):
        q = _q(ctx, m)
        variant = rng.randrange(2)
        k = rng.randint(1, self.max_terms)
        params = {"variant": variant, "delta": rng.choice(self._deltas(ctx, m, variant))}
        svals = self._s_values(q, variant)
        for i in range(1, k + 1):
            params[f"b{i}"] = rng.choice(_fq_nonzero(ctx, m))
            params[f"s{i}"] = rng.choice(svals)
        return params


# --- tau or a power of tau is affine in x^2 ----------------------------------

class F02(_SingleB):
    descriptor = FamilyDescriptor(
        id="F02", forward="b (x^q+x+delta)^{q(2q+3)/4} + x",
        char_constraint="p=2", min_q=4,
        param_schema={"b": "F_q^*", "delta": "GF(q^2)"},
        condition_kind=SUFFICIENT, anchor="b^4 Tr(delta) = 1",
    )

    def exponent(self, q, params):
        return q * (2 * q + 3) // 4

    def condition(self, ctx, m, params):
        return ctx.mul(ctx.pow(params["b"], 4), _tr(ctx, m, params["delta"])) == 1

    def inverse(self, ctx, m, params, branch):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        ti = ctx.inv(_tr(ctx, m, delta))
        const = ctx.add(ctx.mul(ctx.pow(delta, q + 1), ti), delta)
        s = self.exponent(q, params)

        def inv(x):
            u = ctx.add(ctx.mul(ti, ctx.pow(_tr(ctx, m, x), 2)), const)
            return ctx.add(x, ctx.mul(b, ctx.pow(u, s)))
        return inv


class F03(F02):
    descriptor = FamilyDescriptor(
        id="F03", forward="b (x^q+x+delta)^{(q^2+q)/2+1} + x",
        char_constraint="p=2", min_q=2,
        param_schema={"b": "F_q^*", "delta": "GF(q^2)"},
        condition_kind=SUFFICIENT, anchor="b Tr(delta) = 1",
    )

    def exponent(self, q, params):
        return (q * q + q) // 2 + 1

    def condition(self, ctx, m, params):
        return ctx.mul(params["b"], _tr(ctx, m, params["delta"])) == 1


class F04(Family):
    descriptor = FamilyDescriptor(
        id="F04", forward="b (x^q+x+delta)^{q(q+1)/2} + x",
        char_constraint="p=2", min_q=2,
        param_schema={"b": "GF(q^2)^*", "delta": "GF(q^2)"},
        condition_kind=CASE_SPLIT,
        anchor="P permutes; branch 'subfield': b or delta in F_q; branch 'trace-one': Tr(b) = 1",
    )
    element_params = ("b", "delta")

    def check(self, ctx, m, params):
        _require(params["b"] != 0, "b must be nonzero")

    def gspec(self, ctx, m, params):
        q = _q(ctx, m)
        return GSpec.of([(params["b"], q * (q + 1) // 2)], params["delta"])

    def branch(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        if _tr(ctx, m, b) == 1:
            return "trace-one"
        if _in_fq(ctx, m, b) or _in_fq(ctx, m, delta):
            return "subfield"
        return None

    def inverse(self, ctx, m, params, branch):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        s = q * (q + 1) // 2
        tb = _tr(ctx, m, b)
        if branch == "subfield":
            den = ctx.inv(ctx.add(tb, 1))
            const = ctx.add(ctx.mul(ctx.mul(ctx.pow(delta, (q + 1) * q // 2), tb), den), delta)

            def inv(x):
                u = ctx.add(ctx.mul(_tr(ctx, m, x), den), const)
                return ctx.add(ctx.mul(b, ctx.pow(u, s)), x)
            return inv
        if branch == "trace-one":
            # tau^2 is affine in x with slope Tr(delta); requires Tr(delta) != 0
            ti = ctx.inv(_tr(ctx, m, delta))
            const = ctx.add(ctx.mul(ti, ctx.pow(delta, q + 1)), delta)

            def inv(x):
                u = ctx.add(ctx.mul(ti, ctx.pow(_tr(ctx, m, x), 2)), const)
                return ctx.add(ctx.mul(b, ctx.pow(u, s)), x)
            return inv
        raise ParameterError("no applicable branch")

    def enumerate_params(self, ctx, m):
        for b in range(1, ctx.order):
            for delta in ctx.elements():
                yield {"b": b, "delta": delta}

    def space_size(self, ctx, m):
        return (ctx.order - 1) * ctx.order

    def sample_params(self, ctx, m, rng):
        target = rng.randrange(4)
        delta = rng.randrange(ctx.order)
        if target == 0:
            b = rng.choice(_fq_nonzero(ctx, m))
        elif target == 1:
            delta = rng.choice(ctx.subfield(m))
            b = rng.randrange(1, ctx.order)
        elif target == 2:
            b = ctx.add(_trace_one_element(ctx, m), rng.choice(ctx.subfield(m)))
        else:
            b = rng.randrange(1, ctx.order)
        return {"b": b, "delta": delta}


class F05(F02):
    descriptor = FamilyDescriptor(
        id="F05", forward="b (x^q+x+delta)^{q+2} + x",
        char_constraint="p=2", min_q=2,
        param_schema={"b": "F_q^*", "delta": "GF(q^2)"},
        condition_kind=SUFFICIENT, anchor="b Tr(delta)^2 = 1",
    )

    def exponent(self, q, params):
        return q + 2

    def condition(self, ctx, m, params):
        return ctx.mul(params["b"], ctx.pow(_tr(ctx, m, params["delta"]), 2)) == 1

    def inverse(self, ctx, m, params, branch):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        t = _tr(ctx, m, delta)
        dq1 = ctx.pow(delta, q + 1)
        s = self.exponent(q, params)

        def inv(x):
            u = ctx.add(ctx.pow(ctx.add(ctx.mul(t, _tr(ctx, m, x)), dq1), q // 2), delta)
            return ctx.add(ctx.mul(b, ctx.pow(u, s)), x)
        return inv


class F06(F05):
    descriptor = FamilyDescriptor(
        id="F06", forward="b (x^q+x+delta)^{2^e+q+1} + x",
        char_constraint="p=2", min_q=2,
        param_schema={"b": "F_q^*", "delta": "GF(q^2)", "e": "0 <= e < 2m"},
        condition_kind=SUFFICIENT, anchor="b Tr(delta)^{2^e+1} = 1",
    )

    def check(self, ctx, m, params):
        super().check(ctx, m, params)
        _require(params["e"] >= 0, "e must be non-negative")

    def exponent(self, q, params):
        return 2 ** params["e"] + q + 1

    def condition(self, ctx, m, params):
        t = _tr(ctx, m, params["delta"])
        return ctx.mul(params["b"], ctx.pow(t, 2 ** params["e"] + 1)) == 1

    def enumerate_params(self, ctx, m):
        return self._with_e(ctx, m, super().enumerate_params(ctx, m))

    def space_size(self, ctx, m):
        return super().space_size(ctx, m) * 2 * m

    def sample_params(self, ctx, m, rng):
        return dict(super().sample_params(ctx, m, rng), e=rng.randrange(2 * m))


class F07(Family):
    """Odd q: ``-x + sum b_i eps^{t l_i} (X^{s_i} + X^{q s_i})``, X = x^q+x+delta."""

    descriptor = FamilyDescriptor(
        id="F07", forward="-x + sum b_i eps^{t l_i} ((x^q+x+delta)^{s_i} + (x^q+x+delta)^{q s_i})",
        char_constraint="p odd", min_q=3,
        param_schema={"b1": "F_q", "l1": "odd positive int", "s1": "positive int",
                      "delta": "GF(q^2)"},
        condition_kind=SUFFICIENT,
        anchor="eps primitive, t = (q+1)/2, l_i odd; unconditional",
    )
    max_terms = 2
    element_params = ("b", "delta")

    def allowed_names(self, params):
        k = len(_terms_from(params, "b"))
        return {"delta"} | {f"{x}{i}" for i in range(1, k + 1) for x in "bls"}

    def required_names(self, params):
        return sorted(self.allowed_names(params) | {"b1", "l1", "s1"})

    def check(self, ctx, m, params):
        for b in _terms_from(params, "b"):
            _require(_in_fq(ctx, m, b), "b_i must lie in F_q")
        for l in _terms_from(params, "l"):
            _require(l >= 1 and l % 2 == 1, "l_i must be odd and positive")
        for s in _terms_from(params, "s"):
            _require(s >= 1, "s_i must be positive")

    def _betas(self, ctx, m, params):
        t = (_q(ctx, m) + 1) // 2
        eps = ctx.primitive
        return [ctx.mul(b, ctx.pow(eps, t * l))
                for b, l in zip(_terms_from(params, "b"), _terms_from(params, "l"))]

    def gspec(self, ctx, m, params):
        q = _q(ctx, m)
        terms = []
        for beta, s in zip(self._betas(ctx, m, params), _terms_from(params, "s")):
            terms += [(beta, s), (beta, q * s)]
        return GSpec.of(terms, params["delta"])

    def condition(self, ctx, m, params):
        return True

    def inverse(self, ctx, m, params, branch):
        q = _q(ctx, m)
        delta = params["delta"]
        terms = list(zip(self._betas(ctx, m, params), _terms_from(params, "s")))

        def inv(x):
            y = ctx.sub(delta, _tr(ctx, m, x))
            acc = ctx.neg(x)
            for beta, s in terms:
                acc = ctx.add(acc, ctx.mul(beta, ctx.add(ctx.pow(y, s), ctx.pow(y, q * s))))
            return acc
        return inv

    def enumerate_params(self, ctx, m):
        q = _q(ctx, m)
        for b in ctx.subfield(m):
            for l in range(1, q * q - 1, 2):
                for s in range(1, q * q):
                    for delta in ctx.elements():
                        yield {"b1": b, "l1": l, "s1": s, "delta": delta}

    def space_size(self, ctx, m):
        q = _q(ctx, m)
        return q * ((q * q - 1) // 2) * (q * q - 1) * q * q

    def sample_params(self, ctx, m, rng):
        q = _q(ctx, m)
        params = {"delta": rng.randrange(ctx.order)}
        for i in range(1, rng.randint(1, self.max_terms) + 1):
            params[f"b{i}"] = rng.choice(ctx.subfield(m))
            params[f"l{i}"] = _odd(rng, q * q - 1)
            params[f"s{i}"] = rng.randint(1, q * q - 1)
        return params


class F08(Family):
    descriptor = FamilyDescriptor(
        id="F08", forward="sum b_i (x^q+x+delta)^{s_i(q-1)+1} - x",
        char_constraint="any", min_q=2,
        param_schema={"b1": "GF(q^2)", "s1": "positive int", "delta": "F_q"},
        condition_kind=IFF, anchor="sum_i Tr(b_i) != 1",
    )
    max_terms = 2
    element_params = ("b", "delta")

    def allowed_names(self, params):
        k = len(_terms_from(params, "b"))
        return {"delta"} | {f"{x}{i}" for i in range(1, k + 1) for x in "bs"}

    def required_names(self, params):
        return sorted(self.allowed_names(params) | {"b1", "s1"})

    def check(self, ctx, m, params):
        _require(_in_fq(ctx, m, params["delta"]), "delta must lie in F_q")
        for s in _terms_from(params, "s"):
            _require(s >= 1, "s_i must be positive")

    def gspec(self, ctx, m, params):
        q = _q(ctx, m)
        terms = [(b, s * (q - 1) + 1)
                 for b, s in zip(_terms_from(params, "b"), _terms_from(params, "s"))]
        return GSpec.of(terms, params["delta"])

    def _trace_sum(self, ctx, m, params):
        return ctx.sum(_tr(ctx, m, b) for b in _terms_from(params, "b"))

    def condition(self, ctx, m, params):
        return self._trace_sum(ctx, m, params) != 1

    def inverse(self, ctx, m, params, branch):
        delta = params["delta"]
        t = self._trace_sum(ctx, m, params)
        den = ctx.inv(ctx.sub(t, 1))
        const = ctx.sub(delta, ctx.mul(ctx.mul(delta, t), den))
        g = self.gspec(ctx, m, params)

        def inv(x):
            u = ctx.add(ctx.mul(_tr(ctx, m, x), den), const)
            acc = ctx.neg(x)
            for b, s in g.terms:
                acc = ctx.add(acc, ctx.mul(b, ctx.pow(u, s)))
            return acc
        return inv

    def enumerate_params(self, ctx, m):
        q = _q(ctx, m)
        for b in ctx.elements():
            for s in range(1, q + 2):
                for delta in ctx.subfield(m):
                    yield {"b1": b, "s1": s, "delta": delta}

    def space_size(self, ctx, m):
        q = _q(ctx, m)
        return ctx.order * (q + 1) * q

    def sample_params(self, ctx, m, rng):
        q = _q(ctx, m)
        params = {"delta": rng.choice(ctx.subfield(m))}
        for i in range(1, rng.randint(1, self.max_terms) + 1):
            params[f"b{i}"] = rng.randrange(ctx.order)
            params[f"s{i}"] = rng.randint(1, q + 1)
        return params


class F09(Family):
    """Conjugate ``P_2 = sum b_i^q (x^q+x+delta)^{q s_i} - x`` of a base ``P_1``.

    Parameters describe ``P_1``; the forward table is ``P_2`` and the closed
    inverse is ``P_2^{-1}(x) = (P_1^{-1}(x) + x)^q - x``.
    """

    descriptor = FamilyDescriptor(
        id="F09", forward="sum b_i^q (x^q+x+delta)^{q s_i} - x  (conjugate of P_1)",
        char_constraint="any", min_q=2,
        param_schema={"b1": "GF(q^2)", "s1": "positive int", "delta": "GF(q^2)"},
        condition_kind=IFF,
        anchor="P_1 permutes iff P_2 permutes; P_1^{-1}(x)+x = (P_2^{-1}(x)+x)^q",
    )
    max_terms = 3
    element_params = ("b", "delta")

    def allowed_names(self, params):
        k = len(_terms_from(params, "b"))
        return {"delta"} | {f"{x}{i}" for i in range(1, k + 1) for x in "bs"}

    def required_names(self, params):
        return sorted(self.allowed_names(params) | {"b1", "s1"})

    def check(self, ctx, m, params):
        for s in _terms_from(params, "s"):
            _require(s >= 1, "s_i must be positive")

    def base_gspec(self, ctx, m, params):
        return GSpec.of(list(zip(_terms_from(params, "b"), _terms_from(params, "s"))),
                        params["delta"])

    def gspec(self, ctx, m, params):
        return conjugate_gspec(ctx, m, self.base_gspec(ctx, m, params))

    def condition(self, ctx, m, params):
        return is_permutation(build_tau(ctx, self.base_gspec(ctx, m, params), m))

    def inverse(self, ctx, m, params, branch):
        p1_inv = lemma3_inverse(ctx, self.base_gspec(ctx, m, params), m)
        return lambda x: ctx.sub(ctx.frob(ctx.add(p1_inv(x), x), m), x)

    def enumerate_params(self, ctx, m):
        for b in ctx.elements():
            for s in range(1, ctx.order - 1):
                for delta in ctx.elements():
                    yield {"b1": b, "s1": s, "delta": delta}

    def space_size(self, ctx, m):
        return ctx.order * (ctx.order - 2) * ctx.order

    def sample_params(self, ctx, m, rng):
        params = {"delta": rng.randrange(ctx.order)}
        for i in range(1, rng.randint(1, self.max_terms) + 1):
            params[f"b{i}"] = rng.randrange(ctx.order)
            params[f"s{i}"] = rng.randint(1, ctx.order - 2)
        return params


# --- tau (or tau^4) is a quartic handled by the S-sequence ---------------------

class _Quartic(_SingleB):
    """Shared machinery: ``tau`` reduces to ``x^4 + C x^2 + D x`` over F_q."""

    delta_outside_fq = True

    def constants(self, ctx, m, params) -> dict:
        raise NotImplementedError

    def branch(self, ctx, m, params):
        return "quartic"

    def extra_checks(self, ctx, m, params):
        k = self.constants(ctx, m, params)
        return {"quartic_criterion": lemma4_is_perm(ctx, k["D"], k["C"], m)}


class F10(_Quartic):
    descriptor = FamilyDescriptor(
        id="F10", forward="b (x^q+x+delta)^{1+(q^2+q)/4} + x",
        char_constraint="p=2", min_q=4,
        param_schema={"b": "F_q^*", "delta": "GF(q^2) \\ F_q"},
        condition_kind=CASE_SPLIT, anchor="P permutes; tau^4 = x^4 + C x^2 + D x + B",
    )

    def exponent(self, q, params):
        return 1 + (q * q + q) // 4

    def constants(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        b4 = ctx.pow(b, 4)
        w4 = ctx.pow(_tr(ctx, m, delta), 4)
        C = ctx.mul(b4, w4)
        return {"B": ctx.mul(C, ctx.pow(delta, q + 1)), "C": C,
                "D": ctx.mul(C, _tr(ctx, m, delta))}

    def _z(self, ctx, m, x, B):
        return ctx.add(ctx.pow(_tr(ctx, m, x), 4), B)

    def inverse(self, ctx, m, params, branch):
        b, delta = params["b"], params["delta"]
        k = self.constants(ctx, m, params)
        S = s_sequence(ctx, k["D"], k["C"], m)
        coeffs = [(ctx.add(ctx.pow(S[m - 2 - i], 2 ** (i + 1)),
                           ctx.mul(ctx.pow(k["D"], 1 - 2 ** (i + 1)), S[i])), 2**i)
                  for i in range(m)]
        s = self.exponent(_q(ctx, m), params)

        def inv(x):
            u = ctx.add(delta, _lin_apply(ctx, coeffs, self._z(ctx, m, x, k["B"])))
            return ctx.add(x, ctx.mul(b, ctx.pow(u, s)))
        return inv


class F11(F10):
    descriptor = FamilyDescriptor(
        id="F11", forward="b (x^q+x+delta)^{q(2q+1)/4} + x",
        char_constraint="p=2", min_q=4,
        param_schema={"b": "F_q^*", "delta": "GF(q^2) \\ F_q"},
        condition_kind=CASE_SPLIT, anchor="P permutes; tau^4 = x^4 + C x^2 + D x + B",
    )

    def exponent(self, q, params):
        return q * (2 * q + 1) // 4

    def constants(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        t = _tr(ctx, m, delta)
        b4 = ctx.pow(b, 4)
        return {"B": ctx.mul(ctx.mul(b4, ctx.pow(delta, q + 1)), t),
                "C": ctx.mul(b4, t), "D": ctx.mul(b4, ctx.pow(t, 2))}

    def _z(self, ctx, m, x, B):
        q = _q(ctx, m)
        return ctx.add(ctx.add(ctx.pow(x, 4 * q), ctx.pow(x, 4)), B)


class F12(_Quartic):
    descriptor = FamilyDescriptor(
        id="F12", forward="b (x^q+x+delta)^{2q+3} + x",
        char_constraint="p=2", min_q=4,
        param_schema={"b": "F_q^*", "delta": "GF(q^2) \\ F_q"},
        condition_kind=CASE_SPLIT, anchor="P permutes; tau = A (x^4 + C x^2 + D x) + B, D = 1/A",
    )

    def exponent(self, q, params):
        return 2 * q + 3

    def constants(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        t = _tr(ctx, m, delta)
        A = ctx.mul(b, t)
        return {"A": A, "B": ctx.mul(A, ctx.pow(delta, 2 * q + 2)),
                "C": ctx.pow(t, 2), "D": ctx.inv(A)}

    def inverse(self, ctx, m, params, branch):
        b, delta = params["b"], params["delta"]
        k = self.constants(ctx, m, params)
        D = k["D"]
        S = s_sequence(ctx, D, k["C"], m)
        coeffs = [(ctx.add(ctx.mul(ctx.pow(D, 2**i), ctx.pow(S[m - 2 - i], 2 ** (i + 1))),
                           ctx.mul(ctx.pow(D, 1 - 2**i), S[i])), 2**i)
                  for i in range(m)]
        s = self.exponent(_q(ctx, m), params)

        def inv(x):
            z = ctx.add(_tr(ctx, m, x), k["B"])
            u = ctx.add(delta, _lin_apply(ctx, coeffs, z))
            return ctx.add(x, ctx.mul(b, ctx.pow(u, s)))
        return inv


class F13(F12):
    descriptor = FamilyDescriptor(
        id="F13", forward="b (x^q+x+delta)^{2q+2^e+2} + x",
        char_constraint="p=2", min_q=4,
        param_schema={"b": "F_q^*", "delta": "GF(q^2) \\ F_q", "e": "0 <= e < 2m"},
        condition_kind=CASE_SPLIT, anchor="P permutes; tau = A (x^4 + C x^2 + D x) + B, D = 1/A",
    )

    def check(self, ctx, m, params):
        super().check(ctx, m, params)
        _require(params["e"] >= 0, "e must be non-negative")

    def exponent(self, q, params):
        return 2 * q + 2 ** params["e"] + 2

    def constants(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        t = _tr(ctx, m, delta)
        A = ctx.mul(b, ctx.pow(t, 2 ** params["e"]))
        return {"A": A, "B": ctx.mul(A, ctx.pow(delta, 2 * q + 2)),
                "C": ctx.pow(t, 2), "D": ctx.inv(A)}

    def enumerate_params(self, ctx, m):
        return self._with_e(ctx, m, super().enumerate_params(ctx, m))

    def space_size(self, ctx, m):
        return super().space_size(ctx, m) * 2 * m

    def sample_params(self, ctx, m, rng):
        return dict(super().sample_params(ctx, m, rng), e=rng.randrange(2 * m))


class F14(F12):
    descriptor = FamilyDescriptor(
        id="F14", forward="b (x^q+x+delta)^6 + x",
        char_constraint="p=2", min_q=4,
        param_schema={"b": "F_q^*", "delta": "GF(q^2) \\ F_q"},
        condition_kind=CASE_SPLIT, anchor="P permutes; tau = A (x^4 + C x^2 + D x) + B, D = 1/A",
    )

    def exponent(self, q, params):
        return 6

    def constants(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        t = _tr(ctx, m, delta)
        A = ctx.mul(b, ctx.pow(t, 2))
        B = ctx.mul(b, ctx.add(ctx.pow(delta, 6 * q), ctx.pow(delta, 6)))
        return {"A": A, "B": B, "C": ctx.pow(t, 2), "D": ctx.inv(A)}


# --- tau = A x^{p^j} - B x + C --------------------------------------------------

class _ThreeTerm(Family):
    """Shared branch logic for ``tau(x) = A x^{p^j} -/+ B x + C`` on F_q."""

    descriptor: FamilyDescriptor
    element_params = ("b", "delta")

    def coefficients(self, ctx, m, params) -> tuple[int, int, int]:
        raise NotImplementedError

    def branch(self, ctx, m, params):
        A, B, _ = self.coefficients(ctx, m, params)
        if params["e"] % m == 0:
            return "linear"
        if A == 0 and B != 0:
            return "A=0"
        if A != 0 and B == 0:
            return "B=0"
        if A != 0 and B != 0:
            return "AB!=0"
        return None

    def _norm_ratio(self, ctx, m, params):
        A, B, _ = self.coefficients(ctx, m, params)
        j = params["e"] % m
        d = gcd(m, j)
        return ctx.norm(ctx.div(B, A), d, m), d

    def condition(self, ctx, m, params):
        A, B, _ = self.coefficients(ctx, m, params)
        br = self.branch(ctx, m, params)
        if br == "linear":
            return self._linear_coeff(ctx, A, B) != 0
        if br in ("A=0", "B=0"):
            return True
        if br == "AB!=0":
            return self._norm_ratio(ctx, m, params)[0] != 1
        return False

    def exponents(self, ctx, m, params) -> list[int]:
        raise NotImplementedError

    def betas(self, ctx, m, params) -> list[int]:
        raise NotImplementedError

    def gspec(self, ctx, m, params):
        return GSpec.of(list(zip(self.betas(ctx, m, params), self.exponents(ctx, m, params))),
                        params["delta"])

    def tau_inverse(self, ctx, m, params, branch) -> Callable[[int], int]:
        raise NotImplementedError

    def closed_outer(self, ctx, m, params, branch) -> Callable:
        """``y -> g(tau^{-1}(y))`` from the closed form; ``P^{-1}(x) = outer(Tr x) - x``.

        Only field operations are used, so ``ctx`` may also be an array mirror.
        """
        arg = self.tau_inverse(ctx, m, params, branch)
        delta = params["delta"]
        terms = list(zip(self.betas(ctx, m, params), self.exponents(ctx, m, params)))

        def outer(y):
            u = ctx.add(arg(y), delta)
            acc = 0
            for beta, s in terms:
                acc = ctx.add(acc, ctx.mul(beta, ctx.pow(u, s)))
            return acc
        return outer

    def inverse(self, ctx, m, params, branch):
        outer = self.closed_outer(ctx, m, params, branch)
        return lambda x: ctx.sub(outer(_tr(ctx, m, x)), x)


class F15(_ThreeTerm):
    descriptor = FamilyDescriptor(
        id="F15",
        forward="b1 eps^{t d1} X^{p^e+q} + b2 eps^{t d2} X^{p^e+1} + b3 eps^{t d3} X^{2p^e} - x, "
                "X = x^q+x+delta",
        char_constraint="p odd", min_q=3,
        param_schema={"b1": "F_q", "b2": "F_q", "b3": "F_q", "d1": "odd", "d2": "odd",
                      "d3": "odd", "e": "0 <= e < 2m", "delta": "GF(q^2)"},
        condition_kind=IFF,
        anchor="e = 0 mod m: A-B != 0; A=0,B!=0; A!=0,B=0; AB!=0: N(B/A) != 1",
    )

    def check(self, ctx, m, params):
        for name in ("b1", "b2", "b3"):
            _require(_in_fq(ctx, m, params[name]), f"{name} must lie in F_q")
        for name in ("d1", "d2", "d3"):
            _require(params[name] >= 1 and params[name] % 2 == 1, f"{name} must be odd and positive")
        _require(0 <= params["e"] < 2 * m, "need 0 <= e < 2m")

    def betas(self, ctx, m, params):
        t = (_q(ctx, m) + 1) // 2
        return [ctx.mul(params[f"b{k}"], ctx.pow(ctx.primitive, t * params[f"d{k}"]))
                for k in (1, 2, 3)]

    def exponents(self, ctx, m, params):
        pe = ctx.p ** params["e"]
        return [pe + _q(ctx, m), pe + 1, 2 * pe]

    def _linear_coeff(self, ctx, A, B):
        return ctx.sub(A, B)

    def coefficients(self, ctx, m, params):
        q = _q(ctx, m)
        delta = params["delta"]
        b1, b2, b3 = self.betas(ctx, m, params)
        pe = ctx.p ** params["e"]
        P = ctx.pow
        two = ctx.scalar(2)
        A = ctx.add(ctx.mul(ctx.sub(P(delta, q), delta), ctx.sub(b1, b2)),
                    ctx.mul(ctx.mul(two, b3), ctx.sub(P(delta, pe), P(delta, pe * q))))
        # x-coefficient of tau is -B; expanding tau gives a plus sign inside B
        B = ctx.add(1, ctx.mul(ctx.sub(P(delta, pe * q), P(delta, pe)), ctx.add(b1, b2)))
        C = ctx.sum([
            ctx.mul(ctx.sub(P(delta, pe + q), P(delta, pe * q + 1)), b1),
            ctx.mul(ctx.sub(P(delta, pe + 1), P(delta, pe * q + q)), b2),
            ctx.mul(ctx.sub(P(delta, 2 * pe), P(delta, 2 * pe * q)), b3),
        ])
        return A, B, C

    def tau_inverse(self, ctx, m, params, branch):
        A, B, C = self.coefficients(ctx, m, params)
        p = ctx.p
        j = params["e"] % m
        if branch == "linear":
            ab = ctx.inv(ctx.sub(A, B))
            return lambda y: ctx.sub(ctx.mul(ab, y), ctx.mul(ab, C))
        if branch == "A=0":
            bi = ctx.inv(B)
            return lambda y: ctx.add(ctx.neg(ctx.mul(bi, y)), ctx.mul(bi, C))
        if branch == "B=0":
            f = p ** (m - j)
            ai = ctx.pow(ctx.inv(A), f)
            ca = ctx.pow(ctx.div(C, A), f)
            return lambda y: ctx.sub(ctx.mul(ai, ctx.pow(y, f)), ca)
        if branch == "AB!=0":
            N, d = self._norm_ratio(ctx, m, params)
            pref = ctx.div(N, ctx.sub(1, N))
            ratio = ctx.div(A, B)
            coeffs = [(ctx.mul(pref, ctx.pow(ratio, (p ** ((k + 1) * j) - 1) // (p**j - 1))),
                       p ** (k * j)) for k in range(m // d)]
            ai = ctx.inv(A)
            ca = ctx.div(C, A)
            return lambda y: _lin_apply(ctx, coeffs, ctx.sub(ctx.mul(y, ai), ca))
        raise ParameterError("no applicable branch")

    def _space(self, ctx, m):
        return ctx.subfield(m), (1, 3)

    def enumerate_params(self, ctx, m):
        fq, ds = self._space(ctx, m)
        for e in range(2 * m):
            for b1 in fq:
                for b2 in fq:
                    for b3 in fq:
                        for d1 in ds:
                            for d2 in ds:
                                for d3 in ds:
                                    for delta in ctx.elements():
                                        yield {"b1": b1, "b2": b2, "b3": b3, "d1": d1,
                                               "d2": d2, "d3": d3, "e": e, "delta": delta}

    def space_size(self, ctx, m):
        q = _q(ctx, m)
        return 2 * m * q**3 * 8 * ctx.order

    def _random(self, ctx, m, rng):
        q = _q(ctx, m)
        fq = ctx.subfield(m)
        params = {f"b{k}": rng.choice(fq) for k in (1, 2, 3)}
        params.update({f"d{k}": _odd(rng, q * q - 1) for k in (1, 2, 3)})
        params["delta"] = rng.randrange(ctx.order)
        params["e"] = rng.choice([e for e in range(2 * m) if e % m]) if m > 1 else rng.randrange(2)
        return params

    def sample_params(self, ctx, m, rng):
        params = self._random(ctx, m, rng)
        target = rng.randrange(5)
        if target == 0 or m == 1:
            params["e"] = rng.choice([0, m])
        elif target == 1:
            params["delta"] = rng.choice(ctx.subfield(m))
        elif target == 2:
            self._solve_a_zero(ctx, m, params)
        elif target == 3:
            self._solve_b_zero(ctx, m, params)
        return params

    def _solve_a_zero(self, ctx, m, params):
        q = _q(ctx, m)
        pe = ctx.p ** params["e"]
        delta = params["delta"]
        b1, b2, _ = self.betas(ctx, m, params)
        v = ctx.sub(ctx.pow(delta, pe), ctx.pow(delta, pe * q))
        if v == 0:
            return
        beta3 = ctx.neg(ctx.div(ctx.mul(ctx.sub(ctx.pow(delta, q), delta), ctx.sub(b1, b2)),
                                ctx.mul(ctx.scalar(2), v)))
        t = (q + 1) // 2
        b3 = ctx.div(beta3, ctx.pow(ctx.primitive, t * params["d3"]))
        if _in_fq(ctx, m, b3):
            params["b3"] = b3

    def _solve_b_zero(self, ctx, m, params):
        q = _q(ctx, m)
        pe = ctx.p ** params["e"]
        delta = params["delta"]
        _, b2, _ = self.betas(ctx, m, params)
        w = ctx.sub(ctx.pow(delta, pe * q), ctx.pow(delta, pe))
        if w == 0:
            return
        t = (q + 1) // 2
        b1 = ctx.div(ctx.neg(ctx.add(ctx.inv(w), b2)), ctx.pow(ctx.primitive, t * params["d1"]))
        if _in_fq(ctx, m, b1):
            params["b1"] = b1


class F16(_ThreeTerm):
    descriptor = FamilyDescriptor(
        id="F16",
        forward="b1 X^{2^e+q} + b2 X^{2^e+1} + b3 X^{2^e} + x, X = x^q+x+delta",
        char_constraint="p=2", min_q=2,
        param_schema={"b1": "F_q", "b2": "F_q", "b3": "GF(q^2)", "e": "0 <= e < 2m",
                      "delta": "GF(q^2)"},
        condition_kind=IFF,
        anchor="e = 0 mod m: A+B != 0; A=0,B!=0; A!=0,B=0; AB!=0: N(B/A) != 1",
    )

    def check(self, ctx, m, params):
        for name in ("b1", "b2"):
            _require(_in_fq(ctx, m, params[name]), f"{name} must lie in F_q")
        _require(0 <= params["e"] < 2 * m, "need 0 <= e < 2m")

    def betas(self, ctx, m, params):
        return [params["b1"], params["b2"], params["b3"]]

    def exponents(self, ctx, m, params):
        pe = 2 ** params["e"]
        return [pe + _q(ctx, m), pe + 1, pe]

    def _linear_coeff(self, ctx, A, B):
        return ctx.add(A, B)

    def coefficients(self, ctx, m, params):
        q = _q(ctx, m)
        delta = params["delta"]
        b1, b2, b3 = self.betas(ctx, m, params)
        pe = 2 ** params["e"]
        P = ctx.pow
        b12 = ctx.add(b1, b2)
        A = ctx.add(ctx.mul(_tr(ctx, m, delta), b12), _tr(ctx, m, b3))
        B = ctx.add(1, ctx.mul(ctx.add(P(delta, pe * q), P(delta, pe)), b12))
        C = ctx.sum([
            ctx.mul(b1, ctx.add(P(delta, pe * q + 1), P(delta, pe + q))),
            ctx.mul(b2, ctx.add(P(delta, pe * q + q), P(delta, pe + 1))),
            ctx.mul(ctx.frob(b3, m), P(delta, pe * q)),
            ctx.mul(b3, P(delta, pe)),
        ])
        return A, B, C

    def tau_inverse(self, ctx, m, params, branch):
        A, B, C = self.coefficients(ctx, m, params)
        j = params["e"] % m
        if branch == "linear":
            ab = ctx.inv(ctx.add(A, B))
            return lambda y: ctx.add(ctx.mul(ab, y), ctx.mul(ab, C))
        if branch == "A=0":
            bi = ctx.inv(B)
            return lambda y: ctx.add(ctx.mul(bi, y), ctx.mul(bi, C))
        if branch == "B=0":
            f = 2 ** (m - j)
            ai = ctx.pow(ctx.inv(A), f)
            ca = ctx.pow(ctx.div(C, A), f)
            return lambda y: ctx.add(ctx.mul(ai, ctx.pow(y, f)), ca)
        if branch == "AB!=0":
            N, d = self._norm_ratio(ctx, m, params)
            pref = ctx.div(N, ctx.add(1, N))
            ratio = ctx.div(A, B)
            coeffs = [(ctx.mul(pref, ctx.pow(ratio, (2 ** ((k + 1) * j) - 1) // (2**j - 1))),
                       2 ** (k * j)) for k in range(m // d)]
            ai = ctx.inv(A)
            ca = ctx.div(C, A)
            return lambda y: _lin_apply(ctx, coeffs, ctx.add(ctx.mul(y, ai), ca))
        raise ParameterError("no applicable branch")

    def enumerate_params(self, ctx, m):
        fq = ctx.subfield(m)
        for e in range(2 * m):
            for b1 in fq:
                for b2 in fq:
                    for b3 in ctx.elements():
                        for delta in ctx.elements():
                            yield {"b1": b1, "b2": b2, "b3": b3, "e": e, "delta": delta}

    def space_size(self, ctx, m):
        q = _q(ctx, m)
        return 2 * m * q * q * ctx.order**2

    def sample_params(self, ctx, m, rng):
        fq = ctx.subfield(m)
        params = {"b1": rng.choice(fq), "b2": rng.choice(fq), "b3": rng.randrange(ctx.order),
                  "delta": rng.randrange(ctx.order)}
        nonlinear = [e for e in range(2 * m) if e % m]
        target = rng.randrange(5)
        if target == 0 or not nonlinear:
            params["e"] = rng.choice([0, m])
            return params
        params["e"] = rng.choice(nonlinear)
        if target == 1:
            # A = 0: Tr(b3) = Tr(delta)(b1 + b2)
            want = ctx.mul(_tr(ctx, m, params["delta"]), ctx.add(params["b1"], params["b2"]))
            params["b3"] = ctx.add(ctx.mul(want, _trace_one_element(ctx, m)), rng.choice(fq))
        elif target == 2:
            # B = 0: b1 + b2 = 1 / Tr(delta^{2^e})
            w = _tr(ctx, m, ctx.pow(params["delta"], 2 ** params["e"]))
            if w:
                params["b1"] = ctx.add(ctx.inv(w), params["b2"])
        return params


class F17(Family):
    descriptor = FamilyDescriptor(
        id="F17", forward="b (x^q+x+delta)^{q+2} - x",
        char_constraint="p=3", min_q=3,
        param_schema={"b": "F_q^*", "delta": "GF(q^2)"},
        condition_kind=IFF,
        anchor="C = (delta^q - delta)^2 - 1/b: C = 0, or C not a square in F_q",
    )
    element_params = ("b", "delta")

    def check(self, ctx, m, params):
        _require(params["b"] != 0 and _in_fq(ctx, m, params["b"]), "b must lie in F_q^*")

    def gspec(self, ctx, m, params):
        return GSpec.of([(params["b"], _q(ctx, m) + 2)], params["delta"])

    def constants(self, ctx, m, params):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        dq = ctx.pow(delta, q)
        A = ctx.neg(b)
        B = ctx.mul(ctx.mul(b, ctx.pow(delta, q + 1)), ctx.add(dq, delta))
        C = ctx.sub(ctx.pow(ctx.sub(dq, delta), 2), ctx.inv(b))
        return A, B, C

    def branch(self, ctx, m, params):
        _, _, C = self.constants(ctx, m, params)
        if C == 0:
            return "C=0"
        if not _is_square_in_fq(ctx, m, C):
            return "C nonsquare"
        return None

    def condition(self, ctx, m, params):
        return self.branch(ctx, m, params) is not None

    def inverse(self, ctx, m, params, branch):
        b, delta = params["b"], params["delta"]
        q = _q(ctx, m)
        A, B, C = self.constants(ctx, m, params)
        s = q + 2
        if branch == "C=0":
            ai = ctx.pow(ctx.inv(A), q // 3)

            def arg(y):
                return ctx.add(ctx.mul(ai, ctx.pow(ctx.sub(y, B), q // 3)), delta)
        elif branch == "C nonsquare":
            N = ctx.norm(C, 1, m)
            pref = ctx.div(N, ctx.sub(1, N))
            coeffs = [(ctx.mul(pref, ctx.mul(ctx.pow(A, -(3**i)),
                                             ctx.pow(C, -((3 ** (i + 1) - 1) // 2)))), 3**i)
                      for i in range(m)]

            def arg(y):
                return ctx.add(delta, _lin_apply(ctx, coeffs, ctx.sub(y, B)))
        else:
            raise ParameterError("no applicable branch")
        return lambda x: ctx.sub(ctx.mul(b, ctx.pow(arg(_tr(ctx, m, x)), s)), x)

    def enumerate_params(self, ctx, m):
        for b in _fq_nonzero(ctx, m):
            for delta in ctx.elements():
                yield {"b": b, "delta": delta}

    def space_size(self, ctx, m):
        return (_q(ctx, m) - 1) * ctx.order

    def sample_params(self, ctx, m, rng):
        q = _q(ctx, m)
        delta = rng.randrange(ctx.order)
        w = ctx.sub(ctx.pow(delta, q), delta)
        if rng.randrange(3) == 0 and w:
            return {"b": ctx.inv(ctx.pow(w, 2)), "delta": delta}
        return {"b": rng.choice(_fq_nonzero(ctx, m)), "delta": delta}


# --- catalog ---------------------------------------------------------------------

_FAMILIES: dict[str, Family] = {
    f.descriptor.id: f for f in (
        F01(), F02(), F03(), F04(), F05(), F06(), F07(), F08(), F09(),
        F10(), F11(), F12(), F13(), F14(), F15(), F16(), F17(),
    )
}


def catalog() -> list[FamilyDescriptor]:
    return [f.descriptor for f in _FAMILIES.values()]


def get_family(family_id: str) -> Family:
    fid = family_id.upper()
    if fid in ("F01A", "F01B"):
        fid = "F01"
    try:
        return _FAMILIES[fid]
    except KeyError:
        raise ParameterError(f"unknown family {family_id!r}") from None


def lookup(family_id: str) -> FamilyDescriptor:
    return get_family(family_id).descriptor


def _variant_params(family_id: str, params: dict) -> dict:
    fid = family_id.upper()
    if fid == "F01A":
        return dict(params, variant=0)
    if fid == "F01B":
        return dict(params, variant=1)
    return dict(params)


def instantiate(family_id: str, ctx: FieldCtx, m: int, params: dict) -> PPInstance:
    fam = get_family(family_id)
    params = fam.validate(ctx, m, _variant_params(family_id, params))
    cond = fam.condition(ctx, m, params)
    branch = fam.branch(ctx, m, params)
    g = fam.gspec(ctx, m, params)
    forward = build_P(ctx, g, m)
    inst = PPInstance(fam.id, ctx, m, params, cond, branch, g, forward)
    inst.extra = fam.extra_checks(ctx, m, params)

    kind = fam.descriptor.condition_kind
    if kind == CASE_SPLIT:
        wanted = is_permutation(forward) and branch is not None
        if not is_permutation(forward):
            inst.note = "oracle: not a permutation"
        elif branch is None:
            inst.note = "no applicable branch"
    else:
        wanted = bool(cond)
        if not cond:
            inst.note = "condition false"
    if wanted:
        try:
            inst.inverse_closed = tabulate(ctx, fam.inverse(ctx, m, params, branch))
        except (ZeroDivisionError, ParameterError) as exc:
            inst.note = f"closed form undefined: {exc}"
    return inst


def closed_form_inverse(instance: PPInstance) -> Mapping:
    if instance.inverse_closed is None:
        raise NotPermutationError(
            f"{instance.family_id}: no closed-form inverse ({instance.note or 'precondition failed'})")
    return instance.inverse_closed


# --- conjugation and normalization ------------------------------------------------

def conjugate_gspec(ctx: FieldCtx, m: int, g: GSpec) -> GSpec:
    q = _q(ctx, m)
    return GSpec.of([(ctx.frob(b, m), q * s) for b, s in g.terms], g.delta)


def _gspec_params(g: GSpec) -> dict:
    params = {"delta": g.delta}
    for i, (b, s) in enumerate(g.terms, 1):
        params[f"b{i}"] = b
        params[f"s{i}"] = s
    return params


def conjugate_pair(instance: PPInstance) -> PPInstance:
    """The conjugate ``P_2`` of an instance, as an F09 instance."""
    return instantiate("F09", instance.ctx, instance.m, _gspec_params(instance.gspec))


def conjugate_identity_holds(ctx: FieldCtx, m: int, g: GSpec) -> tuple[bool, int | None]:
    """Check ``P1 perm <=> P2 perm`` and, when they permute,
    ``P1^{-1}(x) + x = (P2^{-1}(x) + x)^q`` at every point.

    Returns (holds, first failing point or None).
    """
    p1 = build_P(ctx, g, m)
    p2 = build_P(ctx, conjugate_gspec(ctx, m, g), m)
    perm1, perm2 = is_permutation(p1), is_permutation(p2)
    if perm1 != perm2:
        return False, None
    if not perm1:
        return True, None
    i1, i2 = invert_table(p1), invert_table(p2)
    for x in ctx.elements():
        if ctx.add(i1(x), x) != ctx.frob(ctx.add(i2(x), x), m):
            return False, x
    return True, None


def admissible_a(ctx: FieldCtx, m: int) -> list[int]:
    """All ``a`` with ``a^{q+1} = 1``."""
    q = _q(ctx, m)
    return [a for a in range(1, ctx.order) if ctx.pow(a, q + 1) == 1]


def build_P_general(ctx: FieldCtx, g: GSpec, m: int, a: int) -> Mapping:
    """Table of ``sum b_i (x^q + a x + delta)^{s_i} - a x``."""
    def f(x):
        ax = ctx.mul(a, x)
        return ctx.sub(eval_g(ctx, g, ctx.add(ctx.frob(x, m), ax)), ax)
    return tabulate(ctx, f)


def normalize_general_a(ctx: FieldCtx, m: int, a: int, g: GSpec):
    """Rewrite the ``a``-twisted polynomial in the ``a = 1`` shape.

    Returns ``(g_bar, eps, t, scale)`` with ``eps`` the primitive element,
    ``a = eps^{(q-1)t}``, ``0 <= t <= q`` and ``scale = eps^{qt}`` such that
    ``P_a(x) = scale * P_bar(eps^{-t} x)`` pointwise.
    """
    q = _q(ctx, m)
    if ctx.pow(a, q + 1) != 1:
        raise ParameterError(f"a={a} does not satisfy a^(q+1) = 1")
    eps = ctx.primitive
    for t in range(q + 1):
        if ctx.pow(eps, (q - 1) * t) == a:
            break
    else:
        raise AssertionError(f"no t with eps^((q-1)t) = {a}")
    terms = [(ctx.mul(b, ctx.pow(eps, q * t * (s - 1))), s) for b, s in g.terms]
    g_bar = GSpec.of(terms, ctx.mul(ctx.pow(eps, -q * t), g.delta))
    return g_bar, eps, t, ctx.pow(eps, q * t)


def normalized_mapping(ctx: FieldCtx, m: int, a: int, g: GSpec) -> Mapping:
    """``x -> scale * P_bar(eps^{-t} x)``; equals :func:`build_P_general` pointwise."""
    g_bar, eps, t, scale = normalize_general_a(ctx, m, a, g)
    p_bar = build_P(ctx, g_bar, m)
    shift = ctx.pow(eps, -t)
    return tabulate(ctx, lambda x: ctx.mul(scale, p_bar(ctx.mul(shift, x))))
