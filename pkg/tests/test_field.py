import pytest
from hypothesis import given, strategies as st

from ppinv.errors import ContextMismatchError, FieldConstructionError, OrderCapError
from ppinv.field import (FieldCtx, FieldElem, field_arith, find_irreducible, frobenius, mk_field,
                         norm_rel, pow_big, subfield_elements, trace_rel)

from naive import NaiveField, digits, is_irreducible_naive

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 2), (3, 3)]
W = 2  # class of x in GF(4)


# --- construction -------------------------------------------------------------

def test_irreducible_examples():
    assert find_irreducible(2, 1) == [0, 1]
    assert find_irreducible(2, 2) == [1, 1, 1]
    assert find_irreducible(2, 4) == [1, 1, 0, 0, 1]


@pytest.mark.parametrize("p,n", SMALL)
def test_irreducible_is_smallest_by_trial_division(p, n):
    got = find_irreducible(p, n)
    assert is_irreducible_naive(got, p)
    got_low = sum(c * p**i for i, c in enumerate(got[:-1]))
    for low in range(got_low):
        assert not is_irreducible_naive(digits(low, p, n) + [1], p)


def test_context_examples():
    c = mk_field(2, 2)
    assert (c.order, list(c.modulus), c.primitive) == (4, [1, 1, 1], 2)
    assert mk_field(3, 1).primitive == 2


def test_reducible_modulus_rejected():
    with pytest.raises(FieldConstructionError):
        mk_field(2, 2, [0, 1, 1])
    with pytest.raises(FieldConstructionError):
        mk_field(4, 1)


def test_order_cap(monkeypatch):
    with pytest.raises(OrderCapError):
        mk_field(2, 24)
    monkeypatch.setenv("PPINV_ORDER_CAP", "8")
    with pytest.raises(OrderCapError):
        mk_field(2, 4)
    assert mk_field(2, 3).order == 8


@pytest.mark.parametrize("p,n", SMALL)
def test_primitive_is_smallest_generator(p, n):
    c = mk_field(p, n)
    nf = NaiveField(p, c.modulus)

    def order(a):
        k, r = 1, a
        while r != 1:
            r, k = nf.mul(r, a), k + 1
        return k

    assert order(c.primitive) == c.order - 1
    assert all(order(a) < c.order - 1 for a in range(1, c.primitive))


def test_descriptor_round_trip():
    c = mk_field(3, 4)
    assert FieldCtx.from_descriptor(c.descriptor()) == c


# --- arithmetic ---------------------------------------------------------------

def test_gf4_examples():
    c = mk_field(2, 2)
    assert c.mul(W, W) == 3
    assert c.add(W, W) == 0
    assert mk_field(3, 1).inv(2) == 2
    assert pow_big(c, W, 5) == 3
    assert pow_big(c, 0, 11) == 0
    assert frobenius(c, W, 1) == 3
    assert frobenius(c, W, 2) == W
    assert trace_rel(c, W, 1) == 1
    assert trace_rel(c, 1, 1) == 0


@pytest.mark.parametrize("p,n", SMALL)
def test_tables_match_naive_arithmetic(p, n):
    c = mk_field(p, n)
    nf = NaiveField(p, c.modulus)
    for a in c.elements():
        assert c.neg(a) == nf.neg(a)
        for b in c.elements():
            assert c.add(a, b) == nf.add(a, b)
            assert c.mul(a, b) == nf.mul(a, b)


def test_trace_and_norm_gf9():
    c = mk_field(3, 2)
    for a in c.elements():
        assert c.trace(a, 1) == c.add(a, c.pow(a, 3))
    g = c.primitive
    assert norm_rel(c, g, 1) == c.pow(g, 4)
    assert norm_rel(c, 1, 1) == 1 and norm_rel(c, 0, 1) == 0


def test_subfields():
    assert subfield_elements(mk_field(2, 2), 1) == [0, 1]
    assert subfield_elements(mk_field(3, 2), 1) == [0, 1, 2]
    c = mk_field(2, 4)
    sub = c.subfield(2)
    assert len(sub) == 4
    assert sub == [a for a in c.elements() if c.pow(a, 4) == a]
    assert all(c.add(a, b) in sub and c.mul(a, b) in sub for a in sub for b in sub)


def test_pow_edges():
    c = mk_field(5, 2)
    for a in c.elements():
        assert c.pow(a, 0) == 1
    assert c.pow(7, 10**30) == c.pow(7, 10**30 % 24)
    with pytest.raises(ZeroDivisionError):
        c.inv(0)


def test_elem_wrapper_and_context_mismatch():
    c = mk_field(2, 2)
    w = c(W)
    assert isinstance(w * w, FieldElem) and int(w * w) == 3
    assert field_arith(c, "mul", w, w) == c(3)
    assert field_arith(c, "add", 2, 3) == 1
    assert (w / w) == 1 and (w**3) == 1 and -w == w
    other = mk_field(2, 3)
    with pytest.raises(ContextMismatchError):
        w + other(1)


# --- properties ----------------------------------------------------------------

fields = st.sampled_from([(2, 4), (2, 6), (3, 2), (3, 4), (5, 2), (7, 2), (2, 8), (13, 2)])


@st.composite
def field_and_elems(draw, k=2):
    p, n = draw(fields)
    c = mk_field(p, n)
    return c, [draw(st.integers(0, c.order - 1)) for _ in range(k)]


@given(field_and_elems(3))
def test_field_axioms(data):
    c, (a, b, d) = data
    assert c.mul(a, c.add(b, d)) == c.add(c.mul(a, b), c.mul(a, d))
    assert c.add(a, c.neg(a)) == 0
    if a:
        assert c.mul(a, c.inv(a)) == 1


@given(field_and_elems(2))
def test_frobenius_is_a_ring_homomorphism(data):
    c, (a, b) = data
    assert c.frob(c.add(a, b)) == c.add(c.frob(a), c.frob(b))
    assert c.frob(c.mul(a, b)) == c.mul(c.frob(a), c.frob(b))
    assert c.frob(a, c.n) == a


@given(field_and_elems(2))
def test_trace_is_linear_onto_subfield(data):
    c, (a, b) = data
    m = c.n // 2
    t = c.trace(a, m)
    assert c.in_subfield(t, m)
    assert c.trace(c.add(a, b), m) == c.add(t, c.trace(b, m))
    for s in c.subfield(m):
        assert c.trace(c.mul(s, a), m) == c.mul(s, t)


@given(field_and_elems(2))
def test_norm_is_multiplicative(data):
    c, (a, b) = data
    for d in (1, c.n // 2):
        assert c.norm(c.mul(a, b), d) == c.mul(c.norm(a, d), c.norm(b, d))
        assert c.in_subfield(c.norm(a, d), d)


@given(field_and_elems(1), st.integers(0, 10**6), st.integers(0, 10**6))
def test_pow_laws(data, e1, e2):
    c, (a,) = data
    assert c.mul(c.pow(a, e1), c.pow(a, e2)) == c.pow(a, e1 + e2)
    assert c.pow(c.pow(a, e1), e2) == c.pow(a, e1 * e2)
