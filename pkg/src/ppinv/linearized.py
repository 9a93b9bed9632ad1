"""Closed-form inverses of two linearized families.

* ``L(x) = x^4 + b x^2 + a x`` over GF(2^m), driven by the sequence
  ``S_{-1} = 0, S_0 = 1, S_i = b^{2^{i-1}} S_{i-1} + a^{2^{i-1}} S_{i-2}``.
* ``L_r(x) = x^{q^r} - a x`` over GF(q^M), driven by the relative norm of ``a``.

Both work inside any context that contains the working field as a subfield;
``m`` / ``top`` name the working field's degree over the prime field.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotPermutationError, ParameterError
from .field import FieldCtx


@dataclass(frozen=True)
class SSequence:
    values: tuple[int, ...]  # S_{-1}, S_0, ..., S_M
    a: int
    b: int
    M: int

    def __getitem__(self, i: int) -> int:
        if not -1 <= i <= self.M:
            raise IndexError(i)
        return self.values[i + 1]


@dataclass(frozen=True)
class LinearizedPoly:
    """``sum c x^e`` with every ``e`` a power of the characteristic."""

    coeffs: tuple[tuple[int, int], ...]
    ctx_id: str

    def __call__(self, ctx: FieldCtx, x: int) -> int:
        if ctx.ctx_id != self.ctx_id:
            raise ValueError(f"polynomial over {self.ctx_id} evaluated in {ctx.ctx_id}")
        acc = 0
        for c, e in self.coeffs:
            acc = ctx.add(acc, ctx.mul(c, ctx.pow(x, e)))
        return acc

    def to_json(self) -> list[dict]:
        return [{"c": c, "e": e} for c, e in self.coeffs]


def _require_char2(ctx: FieldCtx) -> None:
    if ctx.p != 2:
        raise ParameterError(f"characteristic 2 required, got {ctx.p}")


def _require_in(ctx: FieldCtx, m: int, **named: int) -> None:
    if ctx.n % m:
        raise ParameterError(f"GF({ctx.p}^{m}) is not a subfield of {ctx.ctx_id}")
    for name, v in named.items():
        if not ctx.in_subfield(v, m):
            raise ParameterError(f"{name}={v} is not in GF({ctx.p}^{m})")


def s_sequence(ctx: FieldCtx, a: int, b: int, M: int) -> SSequence:
    _require_char2(ctx)
    vals = [0, 1]
    for i in range(1, M + 1):
        e = 1 << (i - 1)
        vals.append(ctx.add(ctx.mul(ctx.pow(b, e), vals[-1]),
                            ctx.mul(ctx.pow(a, e), vals[-2])))
    return SSequence(tuple(vals), a, b, M)


def _check_quartic(ctx: FieldCtx, a: int, b: int, m: int) -> None:
    _require_char2(ctx)
    if m < 2:
        raise ParameterError("the quartic criterion needs m > 1")
    if a == 0:
        raise ParameterError("a = 0 is unsupported (criterion and inverse assume a != 0)")
    _require_in(ctx, m, a=a, b=b)


def lemma4_is_perm(ctx: FieldCtx, a: int, b: int, m: int) -> bool:
    """Does ``x^4 + b x^2 + a x`` permute GF(2^m)?"""
    _check_quartic(ctx, a, b, m)
    S = s_sequence(ctx, a, b, m)
    return ctx.add(S[m], ctx.mul(a, ctx.pow(S[m - 2], 2))) == 1


def lemma4_inverse_coeffs(ctx: FieldCtx, a: int, b: int, m: int) -> LinearizedPoly:
    if not lemma4_is_perm(ctx, a, b, m):
        raise NotPermutationError(f"x^4 + {b}x^2 + {a}x does not permute GF(2^{m})")
    S = s_sequence(ctx, a, b, m)
    coeffs = []
    for i in range(m):
        c = ctx.add(ctx.pow(S[m - 2 - i], 1 << (i + 1)),
                    ctx.mul(ctx.pow(a, 1 - (1 << (i + 1))), S[i]))
        coeffs.append((c, 1 << i))
    return LinearizedPoly(tuple(coeffs), ctx.ctx_id)


def _base_degree(ctx: FieldCtx, q: int) -> int:
    s, v = 0, 1
    while v < q:
        v *= ctx.p
        s += 1
    if v != q or s == 0:
        raise ParameterError(f"{q} is not a power of the characteristic {ctx.p}")
    return s


def _binomial_setup(ctx: FieldCtx, a: int, r: int, q: int, top: int | None):
    top = ctx.n if top is None else top
    s = _base_degree(ctx, q)
    if top % s:
        raise ParameterError(f"GF({q}) is not a subfield of GF({ctx.p}^{top})")
    M = top // s
    if not 1 <= r <= M - 1:
        raise ParameterError(f"need 1 <= r <= {M - 1}, got r={r}")
    if a == 0:
        raise ParameterError("a = 0 is outside the binomial setting")
    _require_in(ctx, top, a=a)
    d = gcd(M, r)
    return top, s, M, d, ctx.norm(a, s * d, top)


def lemma5_is_perm(ctx: FieldCtx, a: int, r: int, q: int, top: int | None = None) -> bool:
    """Does ``x^{q^r} - a x`` permute GF(q^M) (M = top / log_p q)?"""
    return _binomial_setup(ctx, a, r, q, top)[4] != 1


def lemma5_inverse_coeffs(ctx: FieldCtx, a: int, r: int, q: int,
                          top: int | None = None) -> LinearizedPoly:
    top, s, M, d, N = _binomial_setup(ctx, a, r, q, top)
    if N == 1:
        raise NotPermutationError(f"norm of {a} is 1; x^(q^{r}) - a x is not a permutation")
    prefactor = ctx.div(N, ctx.sub(1, N))
    qr = q**r
    coeffs = []
    for i in range(M // d):
        num = q ** ((i + 1) * r) - 1
        k, rem = divmod(num, qr - 1)
        assert rem == 0, "geometric exponent must divide exactly"
        c = ctx.mul(prefactor, ctx.pow(a, -k))
        # x^(q^(ir)) acts as x^(p^(s*i*r mod top)) on the working field
        coeffs.append((c, ctx.p ** (s * i * r % top)))
    return LinearizedPoly(tuple(coeffs), ctx.ctx_id)
