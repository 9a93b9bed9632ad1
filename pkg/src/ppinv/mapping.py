"""Exhaustive value tables and the trace-reduction machinery for
``P(x) = sum b_i (x^q + x + delta)^{s_i} - x`` over GF(q^2).

``P`` permutes GF(q^2) exactly when the companion map
``tau(x) = Tr(g(x)) - x`` permutes the subfield GF(q), where
``g(x) = sum b_i (x + delta)^{s_i}``; then
``P^{-1}(x) = g(tau^{-1}(Tr(x))) - x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import ContextMismatchError, NotPermutationError
from .field import FieldCtx


@dataclass(frozen=True)
class Mapping:
    """Value table of a function on a finite domain of encodings."""

    domain: tuple[int, ...]
    image: tuple[int, ...]
    ctx_id: str
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.domain) != len(self.image):
            raise ValueError("domain and image lengths differ")
        if any(b <= a for a, b in zip(self.domain, self.domain[1:])):
            raise ValueError("domain must be strictly ascending")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(self.domain)})

    def __call__(self, x: int) -> int:
        return self.image[self._index[x]]

    def __len__(self) -> int:
        return len(self.domain)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain, self.image))

    def to_json(self) -> dict:
        return {"ctx": self.ctx_id, "domain": list(self.domain), "image": list(self.image)}

    @classmethod
    def from_json(cls, doc: dict) -> Mapping:
        return cls(tuple(doc["domain"]), tuple(doc["image"]), doc["ctx"])


def tabulate(ctx: FieldCtx, f: Callable[[int], int], domain: Iterable[int] | None = None) -> Mapping:
    dom = tuple(sorted(ctx.elements() if domain is None else domain))
    image = []
    for x in dom:
        y = f(x)
        if not 0 <= y < ctx.order:
            raise ValueError(f"f({x}) = {y} is not an element of {ctx.ctx_id}")
        image.append(y)
    return Mapping(dom, tuple(image), ctx.ctx_id)


def identity(ctx: FieldCtx, domain: Iterable[int] | None = None) -> Mapping:
    return tabulate(ctx, lambda x: x, domain)


def is_permutation(M: Mapping) -> bool:
    return len(set(M.image)) == len(M.domain) and set(M.image) <= M._index.keys()


def find_collision(M: Mapping) -> tuple[int, int] | None:
    """Two domain points with equal image, or ``None`` if the image is injective."""
    seen = {}
    for x, y in zip(M.domain, M.image):
        if y in seen:
            return seen[y], x
        seen[y] = x
    return None


def invert_table(M: Mapping) -> Mapping:
    if not is_permutation(M):
        raise NotPermutationError("table is not a permutation of its domain")
    inv = {y: x for x, y in zip(M.domain, M.image)}
    return Mapping(M.domain, tuple(inv[x] for x in M.domain), M.ctx_id)


def compose(M1: Mapping, M2: Mapping) -> Mapping:
    """``x -> M1(M2(x))``."""
    if M1.ctx_id != M2.ctx_id:
        raise ContextMismatchError(f"{M1.ctx_id} vs {M2.ctx_id}")
    if M1.domain != M2.domain:
        raise ValueError("mappings have different domains")
    return Mapping(M2.domain, tuple(M1(y) for y in M2.image), M1.ctx_id)


def first_difference(M1: Mapping, M2: Mapping) -> int | None:
    """First domain point where the tables disagree."""
    if M1.domain != M2.domain:
        raise ValueError("mappings have different domains")
    for x, a, b in zip(M1.domain, M1.image, M2.image):
        if a != b:
            return x
    return None


@dataclass(frozen=True)
class GSpec:
    """``g(x) = sum b_i (x + delta)^{s_i}`` with element encodings ``b_i``."""

    terms: tuple[tuple[int, int], ...]
    delta: int = 0

    def __post_init__(self):
        terms = tuple((int(b), int(s)) for b, s in self.terms)
        if not terms:
            raise ValueError("GSpec needs at least one term")
        if any(s < 1 for _, s in terms):
            raise ValueError("exponents s_i must be positive")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, terms: Sequence[tuple[int, int]], delta: int = 0) -> GSpec:
        return cls(tuple(terms), delta)


def eval_g(ctx: FieldCtx, g: GSpec, x: int) -> int:
    u = ctx.add(x, g.delta)
    acc = 0
    for b, s in g.terms:
        acc = ctx.add(acc, ctx.mul(b, ctx.pow(u, s)))
    return acc


def _trace_fn(ctx: FieldCtx, m: int) -> Callable[[int], int]:
    if ctx.n != 2 * m:
        raise ValueError(f"{ctx.ctx_id} is not GF(q^2) with q = {ctx.p}^{m}")
    return lambda x: ctx.add(x, ctx.frob(x, m))


def build_P(ctx: FieldCtx, g: GSpec, m: int) -> Mapping:
    """Table of ``x -> g(x^q + x) - x`` over all of GF(q^2)."""
    tr = _trace_fn(ctx, m)
    # g(Tr x) only depends on Tr x, which ranges over the q subfield values
    on_subfield = {y: eval_g(ctx, g, y) for y in ctx.subfield(m)}
    return tabulate(ctx, lambda x: ctx.sub(on_subfield[tr(x)], x))


def build_tau(ctx: FieldCtx, g: GSpec, m: int) -> Mapping:
    """Table of ``x -> Tr(g(x)) - x`` over the subfield GF(q)."""
    tr = _trace_fn(ctx, m)
    return tabulate(ctx, lambda x: ctx.sub(tr(eval_g(ctx, g, x)), x), ctx.subfield(m))


def lemma3_inverse(ctx: FieldCtx, g: GSpec, m: int) -> Mapping:
    """``x -> g(tau^{-1}(Tr x)) - x`` with ``tau`` inverted by table."""
    tau = build_tau(ctx, g, m)
    if not is_permutation(tau):
        raise NotPermutationError("tau does not permute GF(q), so P does not permute GF(q^2)")
    tau_inv = invert_table(tau)
    tr = _trace_fn(ctx, m)
    on_subfield = {y: eval_g(ctx, g, tau_inv(y)) for y in tau.domain}
    return tabulate(ctx, lambda x: ctx.sub(on_subfield[tr(x)], x))
