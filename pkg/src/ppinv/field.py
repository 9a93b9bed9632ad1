"""Exact arithmetic in GF(p^n).

Elements are integers in ``[0, p^n)``: the coefficient vector ``c0..c_{n-1}``
of the polynomial-basis representative, read little-endian in base ``p``.
A :class:`FieldCtx` fixes the modulus (smallest monic irreducible under that
encoding unless overridden) and a primitive element (smallest encoding of full
multiplicative order), then serves every operation from exp/log tables.

The hot-path methods on :class:`FieldCtx` take and return plain ``int``
encodings.  :class:`FieldElem` wraps an encoding together with its context for
operator-style use and refuses to mix contexts.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContextMismatchError, FieldConstructionError, OrderCapError

DEFAULT_ORDER_CAP = 1 << 20


def order_cap() -> int:
    """Largest field order accepted; ``PPINV_ORDER_CAP`` overrides the default."""
    raw = os.environ.get("PPINV_ORDER_CAP")
    if raw is None:
        return DEFAULT_ORDER_CAP
    return int(raw)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in ascending order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def to_digits(enc: int, p: int, n: int) -> list[int]:
    digits = []
    for _ in range(n):
        enc, r = divmod(enc, p)
        digits.append(r)
    return digits


def from_digits(digits: Iterable[int], p: int) -> int:
    enc = 0
    for c in reversed(list(digits)):
        enc = enc * p + c
    return enc


# --- polynomials over GF(p), coefficient lists low -> high -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    lead_inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    return _trim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Ben-Or test: no factor of degree <= n/2, i.e. gcd(x^(p^i) - x, f) = 1."""
    f = _trim(list(coeffs))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    h = [0, 1]
    for _ in range(n // 2):
        h = _ppowmod(h, p, f, p)
        if len(_pgcd(f, _psub(h, [0, 1], p), p)) > 1:
            return False
    return True


def find_irreducible(p: int, n: int) -> list[int]:
    """Monic irreducible of degree ``n`` whose low coefficients encode smallest."""
    if not is_prime(p) or n < 1:
        raise FieldConstructionError(f"need prime p and n >= 1, got p={p}, n={n}")
    for enc in range(p**n):
        f = to_digits(enc, p, n) + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError("unreachable: irreducibles exist in every degree")


# --- the field ---------------------------------------------------------------

class FieldCtx:
    """GF(p^n) with a fixed modulus and cached primitive element.

    Immutable after construction.  All arithmetic methods operate on integer
    encodings.
    """

    __slots__ = (
        "p", "n", "order", "modulus", "primitive", "ctx_id",
        "_n1", "_exp", "_log", "_zech", "_neg_one_log",
    )

    def __init__(self, p: int, n: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldConstructionError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldConstructionError(f"degree must be >= 1, got {n}")
        order = p**n
        cap = order_cap()
        if order > cap:
            raise OrderCapError(f"GF({p}^{n}) has order {order} > cap {cap}")
        if modulus is None:
            modulus = find_irreducible(p, n)
        else:
            modulus = [int(c) % p for c in modulus]
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise FieldConstructionError(
                    f"modulus {modulus} is not monic of degree {n}")
            if not is_irreducible(modulus, p):
                raise FieldConstructionError(f"modulus {modulus} is reducible over GF({p})")

        self.p = p
        self.n = n
        self.order = order
        self.modulus = tuple(modulus)
        self.ctx_id = f"GF({p}^{n})[{','.join(map(str, self.modulus))}]"
        self._n1 = order - 1
        self.primitive = self._find_primitive()
        self._build_tables()

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and other.ctx_id == self.ctx_id

    def __hash__(self) -> int:
        return hash(self.ctx_id)

    def __call__(self, enc: int) -> FieldElem:
        return FieldElem(self.check(enc), self)

    # construction helpers

    def _find_primitive(self) -> int:
        p, n, f = self.p, self.n, self.modulus
        n1 = self._n1
        if n1 == 1:
            return 1
        cofactors = [n1 // r for r in prime_factors(n1)]
        for enc in range(2, self.order):
            g = _trim(to_digits(enc, p, n))
            if all(_ppowmod(g, c, f, p) != [1] for c in cofactors):
                return enc
        raise AssertionError("unreachable: the multiplicative group is cyclic")

    def _build_tables(self) -> None:
        p, n, f, n1 = self.p, self.n, self.modulus, self._n1
        g = _trim(to_digits(self.primitive, p, n))
        exp = [0] * n1
        log = [-1] * self.order
        if p == 2:
            # carry-less multiply on bit patterns
            fbits = from_digits(f, 2)
            gbits = self.primitive
            cur = 1
            for k in range(n1):
                exp[k] = cur
                log[cur] = k
                acc, a, b = 0, cur, gbits
                while b:
                    if b & 1:
                        acc ^= a
                    b >>= 1
                    a <<= 1
                for bit in range(acc.bit_length() - 1, n - 1, -1):
                    if acc >> bit & 1:
                        acc ^= fbits << (bit - n)
                cur = acc
        else:
            cur = [1]
            for k in range(n1):
                enc = from_digits(cur, p)
                exp[k] = enc
                log[enc] = k
                cur = _pmod(_pmul(cur, g, p), f, p)
        self._exp = exp
        self._log = log
        if p == 2:
            self._zech = None
            self._neg_one_log = 0
        else:
            # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
            zech = [0] * n1
            for k in range(n1):
                e = exp[k]
                c0 = e % p
                zech[k] = log[e - c0 + (c0 + 1) % p]
            self._zech = zech
            self._neg_one_log = n1 // 2

    # membership

    def check(self, a: int) -> int:
        if isinstance(a, FieldElem):
            return self.unwrap(a)
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element encoding of {self.ctx_id}")
        return a

    def unwrap(self, a: FieldElem | int) -> int:
        if isinstance(a, FieldElem):
            if a.ctx.ctx_id != self.ctx_id:
                raise ContextMismatchError(f"element of {a.ctx.ctx_id} used in {self.ctx_id}")
            return a.enc
        return a

    def elements(self) -> range:
        return range(self.order)

    # arithmetic on encodings

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        n1 = self._n1
        z = self._zech[(lb - la) % n1]
        if z < 0:
            return 0
        return self._exp[(la + z) % n1]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self._exp[(self._log[a] + self._neg_one_log) % self._n1]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self._n1]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self.ctx_id}")
        return self._exp[-self._log[a] % self._n1]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """``a**e`` for an exact integer ``e``; negative ``e`` needs ``a != 0``."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError(f"zero to negative power in {self.ctx_id}")
            return 0
        return self._exp[self._log[a] * e % self._n1]

    def frob(self, a: int, k: int = 1) -> int:
        """``a**(p**k)``."""
        if a == 0:
            return 0
        return self._exp[self._log[a] * pow(self.p, k, self._n1) % self._n1]

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def log(self, a: int) -> int:
        """Discrete log to base ``primitive``."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % self._n1]

    def scalar(self, c: int) -> int:
        """Encoding of the prime-field element ``c mod p``."""
        return c % self.p

    # subfields, trace, norm

    def _check_divides(self, d: int, top: int) -> None:
        if d < 1 or top % d:
            raise ValueError(f"degree {d} does not divide {top}")

    def in_subfield(self, a: int, m: int) -> bool:
        return self.frob(a, m) == a

    def subfield(self, m: int) -> list[int]:
        """Elements of GF(p^m) inside this field, ascending."""
        self._check_divides(m, self.n)
        step = self._n1 // (self.p**m - 1)
        return sorted([0] + [self._exp[k] for k in range(0, self._n1, step)])

    def trace(self, a: int, m: int) -> int:
        """Relative trace onto GF(p^m); for n = 2m this is ``a + a^(p^m)``."""
        self._check_divides(m, self.n)
        return self.sum(self.frob(a, m * j) for j in range(self.n // m))

    def norm(self, a: int, d: int, top: int | None = None) -> int:
        """Relative norm GF(p^top) -> GF(p^d); ``a`` must lie in GF(p^top)."""
        top = self.n if top is None else top
        self._check_divides(top, self.n)
        self._check_divides(d, top)
        if not self.in_subfield(a, top):
            raise ValueError(f"{a} is not in the subfield GF({self.p}^{top})")
        if a == 0:
            return 0
        # product of a^(p^(d j)) = a^((p^top - 1)/(p^d - 1))
        return self.pow(a, (self.p**top - 1) // (self.p**d - 1))

    def is_square(self, a: int) -> bool:
        """Quadratic residuosity in the whole field (zero counts as a square)."""
        return a == 0 or self.p == 2 or self._log[a] % 2 == 0

    # serialization

    def descriptor(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus),
                "primitive": self.primitive}

    @classmethod
    def from_descriptor(cls, doc: dict) -> FieldCtx:
        ctx = mk_field(doc["p"], doc["n"], doc.get("modulus"))
        if "primitive" in doc and doc["primitive"] != ctx.primitive:
            raise FieldConstructionError(
                f"descriptor primitive {doc['primitive']} != computed {ctx.primitive}")
        return ctx


@functools.lru_cache(maxsize=64)
def _mk_field_cached(p: int, n: int, modulus: tuple | None, cap: int) -> FieldCtx:
    return FieldCtx(p, n, modulus)


def mk_field(p: int, n: int, modulus: Sequence[int] | None = None) -> FieldCtx:
    """Construct (or fetch the cached) GF(p^n)."""
    mod = None if modulus is None else tuple(modulus)
    return _mk_field_cached(p, n, mod, order_cap())


@dataclass(frozen=True)
class FieldElem:
    """A field element bound to its context."""

    enc: int
    ctx: FieldCtx

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx.ctx_id != self.ctx.ctx_id:
                raise ContextMismatchError(
                    f"cannot combine {self.ctx.ctx_id} with {other.ctx.ctx_id}")
            return other.enc
        if isinstance(other, int):
            return self.ctx.scalar(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElem(self.ctx.add(self.enc, self._other(other)), self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx.sub(self.enc, self._other(other)), self.ctx)

    def __rsub__(self, other):
        return FieldElem(self.ctx.sub(self._other(other), self.enc), self.ctx)

    def __mul__(self, other):
        return FieldElem(self.ctx.mul(self.enc, self._other(other)), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx.div(self.enc, self._other(other)), self.ctx)

    def __neg__(self):
        return FieldElem(self.ctx.neg(self.enc), self.ctx)

    def __pow__(self, e: int):
        return FieldElem(self.ctx.pow(self.enc, e), self.ctx)

    def __int__(self) -> int:
        return self.enc

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx.ctx_id == other.ctx.ctx_id and self.enc == other.enc
        if isinstance(other, int):
            return self.enc == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.ctx_id, self.enc))

    def __repr__(self) -> str:
        return f"FieldElem({self.enc}, {self.ctx.ctx_id})"

    def inv(self) -> FieldElem:
        return FieldElem(self.ctx.inv(self.enc), self.ctx)


# --- functional surface -------------------------------------------------------
# Each accepts encodings or FieldElems and returns the same kind it was given.

def _wrap(ctx: FieldCtx, like, enc: int):
    return FieldElem(enc, ctx) if isinstance(like, FieldElem) else enc


def field_arith(ctx: FieldCtx, op: str, a, b=None):
    x = ctx.check(a)
    if op == "neg":
        return _wrap(ctx, a, ctx.neg(x))
    if op == "inv":
        return _wrap(ctx, a, ctx.inv(x))
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    y = ctx.check(b)
    fn = {"add": ctx.add, "sub": ctx.sub, "mul": ctx.mul, "div": ctx.div}.get(op)
    if fn is None:
        raise ValueError(f"unknown operation {op!r}")
    return _wrap(ctx, a, fn(x, y))


def pow_big(ctx: FieldCtx, a, e: int):
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return _wrap(ctx, a, ctx.pow(ctx.check(a), e))


def frobenius(ctx: FieldCtx, a, k: int):
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    return _wrap(ctx, a, ctx.frob(ctx.check(a), k))


def trace_rel(ctx: FieldCtx, a, m: int):
    if ctx.n != 2 * m:
        raise ValueError(f"{ctx.ctx_id} is not a degree-2 extension of GF({ctx.p}^{m})")
    return _wrap(ctx, a, ctx.trace(ctx.check(a), m))


def norm_rel(ctx: FieldCtx, a, d: int, top: int | None = None):
    return _wrap(ctx, a, ctx.norm(ctx.check(a), d, top))


def subfield_elements(ctx: FieldCtx, m: int) -> list[int]:
    return ctx.subfield(m)
