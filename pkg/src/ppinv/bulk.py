"""Vectorized exhaustive checks for the three-term families (F15, F16).

:class:`ArrayField` mirrors the integer API of :class:`FieldCtx` on numpy
arrays of encodings, so the families' coefficient and closed-form code runs
unchanged on whole parameter grids.  The oracle side never uses a family
formula: it evaluates ``P`` (or ``tau``) from the forward terms and inverts
the resulting tables.

Two oracle levels:

* ``full``  - the value table of ``P`` over all of GF(q^2), row by row.
* ``trace`` - the table of ``tau(y) = Tr(g(y)) - y`` on GF(q); ``P`` permutes
  iff ``tau`` does and then ``P^{-1}(x) = g(tau^{-1}(Tr x)) - x``, so comparing
  the outer functions on the q subfield points decides equality of the full
  inverse tables.  Used when the full tables would not fit the budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import ParameterError
from .field import FieldCtx

FULL_LEVEL_BUDGET = 2 * 10**8  # instances * q^2 above which ``trace`` is used
CHUNK_ELEMENTS = 1 << 22


class ArrayField:
    """Elementwise GF(p^n) arithmetic on integer arrays (broadcasting)."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p, self.n, self.order = ctx.p, ctx.n, ctx.order
        self.primitive = ctx.primitive
        self.ctx_id = ctx.ctx_id
        n1 = ctx.order - 1
        self._n1 = n1
        exp = np.array([ctx.exp(k) for k in range(n1)], dtype=np.int64)
        # log(0) is a sentinel 2*n1 so that any sum involving it lands in the zero tail
        log = np.full(ctx.order, 2 * n1, dtype=np.int64)
        for a in range(1, ctx.order):
            log[a] = ctx.log(a)
        self._log = log
        self._mul_exp = np.concatenate([exp, exp, np.zeros(2 * n1 + 1, dtype=np.int64)])
        if ctx.p == 2:
            self._add_flat = None
            self._neg = np.arange(ctx.order, dtype=np.int64)
        else:
            els = range(ctx.order)
            self._add_flat = np.array([ctx.add(a, b) for a in els for b in els], dtype=np.int64)
            self._neg = np.array([ctx.neg(a) for a in els], dtype=np.int64)
        self._pow_tables: dict[int, np.ndarray] = {}

    @staticmethod
    def _arr(a):
        return np.asarray(a, dtype=np.int64)

    def add(self, a, b):
        a, b = self._arr(a), self._arr(b)
        if self._add_flat is None:
            return a ^ b
        return self._add_flat[a * self.order + b]

    def neg(self, a):
        return self._neg[self._arr(a)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self._mul_exp[self._log[self._arr(a)] + self._log[self._arr(b)]]

    def inv(self, a):
        a = self._arr(a)
        if np.any(a == 0):
            raise ZeroDivisionError(f"inverse of zero in {self.ctx_id}")
        return self._pow_table(-1)[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def _pow_table(self, e: int) -> np.ndarray:
        # positive exponents fold into 1..n1 so 0^e stays 0 when n1 divides e
        key = (e - 1) % self._n1 + 1 if e > 0 else e
        table = self._pow_tables.get(key)
        if table is None:
            table = np.array([self.ctx.pow(a, e) if a else (1 if e == 0 else 0)
                              for a in range(self.order)], dtype=np.int64)
            self._pow_tables[key] = table
        return table

    def pow(self, a, e: int):
        a = self._arr(a)
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError(f"zero to negative power in {self.ctx_id}")
        if e < 0:
            e = -((-e) % self._n1) or -self._n1
        return self._pow_table(e)[a]

    def frob(self, a, k: int = 1):
        return self.pow(a, self.p**k)

    def sum(self, values):
        acc = self._arr(0)
        for v in values:
            acc = self.add(acc, v)
        return acc

    def scalar(self, c: int) -> int:
        return c % self.p

    def norm(self, a, d: int, top: int | None = None):
        top = self.n if top is None else top
        return self.pow(a, (self.p**top - 1) // (self.p**d - 1))


@dataclass
class BulkReport:
    family: str
    p: int
    m: int
    level: str
    count: int = 0
    permutations: int = 0
    inverse_checked: int = 0
    violations: list = field(default_factory=list)
    inverse_failures: list = field(default_factory=list)
    branch_counts: dict = field(default_factory=dict)    # all instances per branch
    branch_inverses: dict = field(default_factory=dict)  # permutations whose inverse was checked

    @property
    def passed(self) -> bool:
        return not self.violations and not self.inverse_failures

    def to_json(self) -> dict:
        return {
            "family": self.family, "p": self.p, "m": self.m, "level": self.level,
            "count": self.count, "permutations": self.permutations,
            "inverse_checked": self.inverse_checked,
            "violations": self.violations, "inverse_failures": self.inverse_failures,
            "branch_counts": dict(sorted(self.branch_counts.items())),
            "branch_inverses": dict(sorted(self.branch_inverses.items())), "passed": self.passed,
        }


MAX_LISTED = 20


def _grid_axes(fam_id: str, ctx: FieldCtx, m: int) -> list[tuple[str, list[int]]]:
    fq = ctx.subfield(m)
    every = list(ctx.elements())
    if fam_id == "F15":
        # b eps^{t d} runs over the same set for every odd d, so d = 1 is complete
        return [("b1", fq), ("b2", fq), ("b3", fq), ("delta", every)]
    if fam_id == "F16":
        return [("b1", fq), ("b2", fq), ("b3", every), ("delta", every)]
    raise ParameterError(f"no batch grid for {fam_id}")


def grid_size(fam_id: str, ctx: FieldCtx, m: int) -> int:
    size = 2 * m
    for _, vals in _grid_axes(fam_id, ctx, m):
        size *= len(vals)
    return size


def _classify(A, B, j: int) -> np.ndarray:
    """Branch label per row: 0 linear, 1 A=0, 2 B=0, 3 AB!=0, -1 none."""
    A, B = A[:, 0], B[:, 0]
    if j == 0:
        return np.zeros(A.shape, dtype=np.int64)
    lab = np.full(A.shape, -1, dtype=np.int64)
    lab[(A == 0) & (B != 0)] = 1
    lab[(A != 0) & (B == 0)] = 2
    lab[(A != 0) & (B != 0)] = 3
    return lab


_BRANCH_NAMES = {0: "linear", 1: "A=0", 2: "B=0", 3: "AB!=0", -1: "none"}


def _rows_distinct(T: np.ndarray) -> np.ndarray:
    s = np.sort(T, axis=1)
    return (np.diff(s, axis=1) != 0).all(axis=1)


def _subset(params: dict, mask: np.ndarray) -> dict:
    return {k: (v[mask] if isinstance(v, np.ndarray) else v) for k, v in params.items()}


def bulk_check(fam_id: str, ctx: FieldCtx, m: int, level: str = "auto") -> BulkReport:
    """Exhaustive condition-vs-permutation and closed-inverse check over the grid."""
    from .families import get_family

    fam = get_family(fam_id)
    if not fam.admissible(ctx.p, m) or ctx.n != 2 * m:
        raise ParameterError(f"{fam_id} is not defined over {ctx.ctx_id} with m={m}")
    axes = _grid_axes(fam.id, ctx, m)
    q = ctx.p**m
    if level == "auto":
        level = "full" if grid_size(fam.id, ctx, m) * ctx.order <= FULL_LEVEL_BUDGET else "trace"
    if level not in ("full", "trace"):
        raise ParameterError(f"unknown level {level!r}")

    af = ArrayField(ctx)
    fq = np.array(ctx.subfield(m), dtype=np.int64)
    every = np.arange(ctx.order, dtype=np.int64)
    Y = fq[None, :]
    sub_index = np.full(ctx.order, -1, dtype=np.int64)
    sub_index[fq] = np.arange(q)
    tr_index = sub_index[af.add(every, af.frob(every, m))]
    report = BulkReport(fam.id, ctx.p, m, level)

    names = [n for n, _ in axes]
    lead, rest = axes[0], axes[1:]
    rest_grid = np.array(list(product(*[v for _, v in rest])), dtype=np.int64)
    points = ctx.order if level == "full" else q
    rows_per_chunk = max(1, CHUNK_ELEMENTS // points)

    for e in range(2 * m):
        j = e % m
        for lv in lead[1]:
            for start in range(0, len(rest_grid), rows_per_chunk):
                block = rest_grid[start:start + rows_per_chunk]
                params = {names[0]: np.full((len(block), 1), lv, dtype=np.int64), "e": e}
                for i, name in enumerate(names[1:]):
                    params[name] = block[:, i:i + 1]
                if fam.id == "F15":
                    params.update(d1=1, d2=1, d3=1)
                _check_block(af, fam, m, params, j, Y, tr_index, sub_index, every, level, report)
    return report


def _check_block(af, fam, m, params, j, Y, tr_index, sub_index, every, level, report):
    betas = fam.betas(af, m, params)
    exps = fam.exponents(af, m, params)
    delta = params["delta"]
    U = af.add(Y, delta)
    G = af.sum(af.mul(beta, af.pow(U, s)) for beta, s in zip(betas, exps))
    nrows = G.shape[0]

    if level == "full":
        table = af.sub(G[:, tr_index], every[None, :])
    else:
        table = af.sub(af.add(G, af.frob(G, m)), Y)
    perm = _rows_distinct(table)

    A, B, _ = fam.coefficients(af, m, params)
    A = np.broadcast_to(A, (nrows, 1))
    B = np.broadcast_to(B, (nrows, 1))
    labels = _classify(A, B, j)
    cond = np.zeros(nrows, dtype=bool)
    if j == 0:
        cond = fam._linear_coeff(af, A, B)[:, 0] != 0
    else:
        cond[(labels == 1) | (labels == 2)] = True
        both = labels == 3
        if both.any():
            ratio = af.div(B[both], A[both])
            cond[both] = af.norm(ratio, np.gcd(m, j), m)[:, 0] != 1

    report.count += nrows
    report.permutations += int(perm.sum())
    for lab in np.unique(labels):
        key = _BRANCH_NAMES[int(lab)]
        report.branch_counts[key] = report.branch_counts.get(key, 0) + int((labels == lab).sum())
    bad = np.nonzero(cond != perm)[0]
    for r in bad[:max(0, MAX_LISTED - len(report.violations))]:
        report.violations.append(_row_params(params, r) | {"condition": bool(cond[r]),
                                                           "permutation": bool(perm[r])})

    # oracle outer function y -> g(tau^{-1}(y)) on the subfield, or the full inverse table
    good = cond & perm
    if not good.any():
        return
    for lab in np.unique(labels[good]):
        key = _BRANCH_NAMES[int(lab)]
        report.branch_inverses[key] = report.branch_inverses.get(key, 0) + int((labels[good] == lab).sum())
    # oracle inverse rows are aligned with ``good_rows``
    good_rows = np.nonzero(good)[0]
    slot = np.full(nrows, -1, dtype=np.int64)
    slot[good_rows] = np.arange(len(good_rows))
    gtable = table[good_rows]
    if level == "full":
        oracle = np.empty_like(gtable)
        np.put_along_axis(oracle, gtable, np.broadcast_to(every, gtable.shape), axis=1)
    else:
        tau_idx = sub_index[gtable]
        pre = np.empty_like(tau_idx)
        np.put_along_axis(pre, tau_idx, np.broadcast_to(np.arange(Y.shape[1]), tau_idx.shape), axis=1)
        oracle = np.take_along_axis(G[good_rows], pre, axis=1)

    for lab in np.unique(labels[good]):
        rows = np.nonzero(good & (labels == lab))[0]
        sub = _subset(params, rows)
        outer = fam.closed_outer(af, m, sub, _BRANCH_NAMES[int(lab)])
        closed = np.broadcast_to(outer(Y), (len(rows), Y.shape[1]))
        if level == "full":
            closed_inv = af.sub(closed[:, tr_index], every[None, :])
            ok = (closed_inv == oracle[slot[rows]]).all(axis=1)
        else:
            ok = (closed == oracle[slot[rows]]).all(axis=1)
        report.inverse_checked += len(rows)
        for r in rows[~ok][:max(0, MAX_LISTED - len(report.inverse_failures))]:
            report.inverse_failures.append(_row_params(params, r))


def _row_params(params: dict, r: int) -> dict:
    out = {}
    for k, v in params.items():
        out[k] = int(v[r, 0]) if isinstance(v, np.ndarray) else int(v)
    return dict(sorted(out.items()))
