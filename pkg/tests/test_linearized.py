from math import gcd

import pytest
from hypothesis import given, strategies as st

from ppinv.errors import NotPermutationError, ParameterError
from ppinv.field import mk_field
from ppinv.linearized import (lemma4_inverse_coeffs, lemma4_is_perm, lemma5_inverse_coeffs,
                              lemma5_is_perm, s_sequence)
from ppinv.mapping import first_difference, invert_table, is_permutation, tabulate

W = 2
GF4 = mk_field(2, 2)


def quartic(c, a, b):
    return tabulate(c, lambda x: c.add(c.add(c.pow(x, 4), c.mul(b, c.pow(x, 2))), c.mul(a, x)))


def test_s_sequence_start():
    c = mk_field(2, 4)
    for a, b in [(3, 5), (1, 0), (9, 14)]:
        S = s_sequence(c, a, b, 4)
        assert (S[-1], S[0], S[1]) == (0, 1, b)
        assert S[2] == c.add(c.pow(b, 3), c.pow(a, 2))


def test_quartic_examples():
    assert lemma4_is_perm(GF4, W, 0, 2)
    assert not lemma4_is_perm(GF4, 1, 0, 2)
    L = lemma4_inverse_coeffs(GF4, W, 0, 2)
    assert L.coeffs == ((W, 1), (0, 2))
    assert all(L(GF4, x) == GF4.mul(W, x) for x in GF4.elements())
    with pytest.raises(NotPermutationError):
        lemma4_inverse_coeffs(GF4, 1, 0, 2)


def test_quartic_rejects_bad_input():
    with pytest.raises(ParameterError):
        lemma4_is_perm(GF4, 0, 1, 2)
    with pytest.raises(ParameterError):
        lemma4_is_perm(mk_field(3, 2), 1, 1, 2)
    with pytest.raises(ParameterError):
        lemma4_is_perm(mk_field(2, 1), 1, 1, 1)


def test_quartic_zero_a_would_mislead():
    # the criterion says "permutation" at (a, b) = (0, 1) but x^4 + x^2 is not one on GF(4)
    S = s_sequence(GF4, 0, 1, 2)
    assert GF4.add(S[2], 0) == 1
    assert not is_permutation(quartic(GF4, 0, 1))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_quartic_criterion_exhaustive(m):
    c = mk_field(2, m)
    for a in range(1, c.order):
        for b in c.elements():
            L = quartic(c, a, b)
            assert lemma4_is_perm(c, a, b, m) == is_permutation(L)
            if is_permutation(L):
                inv = lemma4_inverse_coeffs(c, a, b, m)
                assert len(inv.coeffs) <= m
                assert first_difference(tabulate(c, lambda x: inv(c, x)), invert_table(L)) is None


def test_quartic_inside_larger_context():
    c = mk_field(2, 6)
    sub = c.subfield(3)
    for a in sub[1:]:
        for b in sub:
            table = tabulate(c, lambda x: c.add(c.add(c.pow(x, 4), c.mul(b, c.pow(x, 2))), c.mul(a, x)),
                             sub)
            assert lemma4_is_perm(c, a, b, 3) == is_permutation(table)


def test_binomial_examples():
    assert not lemma5_is_perm(GF4, W, 1, 2)
    c9 = mk_field(3, 2)
    g = c9.primitive
    assert lemma5_is_perm(c9, g, 1, 3)
    inv = lemma5_inverse_coeffs(c9, g, 1, 3)
    assert len(inv.coeffs) == 2
    L = tabulate(c9, lambda x: c9.sub(c9.pow(x, 3), c9.mul(g, x)))
    assert first_difference(tabulate(c9, lambda x: inv(c9, x)), invert_table(L)) is None
    with pytest.raises(ParameterError):
        lemma5_is_perm(c9, 0, 1, 3)
    with pytest.raises(NotPermutationError):
        lemma5_inverse_coeffs(c9, 1, 1, 3)


@pytest.mark.parametrize("q,M", [(2, 4), (3, 3), (4, 2), (2, 6)])
def test_binomial_exhaustive(q, M):
    p = 2 if q % 2 == 0 else q
    s = {2: 1, 3: 1, 4: 2}[q]
    c = mk_field(p, s * M)
    for r in range(1, M):
        for a in range(1, c.order):
            L = tabulate(c, lambda x: c.sub(c.pow(x, q**r), c.mul(a, x)))
            N = c.norm(a, s * gcd(M, r))
            assert lemma5_is_perm(c, a, r, q) == (N != 1) == is_permutation(L)
            if N != 1:
                inv = lemma5_inverse_coeffs(c, a, r, q)
                assert len(inv.coeffs) == M // gcd(M, r)
                assert all(inv(c, L(x)) == x for x in c.elements())


@given(st.sampled_from([2, 3, 4, 5]), st.data())
def test_quartic_inverse_composes(m, data):
    c = mk_field(2, m)
    a = data.draw(st.integers(1, c.order - 1))
    b = data.draw(st.integers(0, c.order - 1))
    if lemma4_is_perm(c, a, b, m):
        inv = lemma4_inverse_coeffs(c, a, b, m)
        L = quartic(c, a, b)
        assert all(inv(c, L(x)) == x for x in c.elements())


def test_binomial_on_embedded_subfield():
    # x^3 - a x on GF(9) viewed inside GF(81)
    c = mk_field(3, 4)
    sub = c.subfield(2)
    for a in sub[1:]:
        L = tabulate(c, lambda x: c.sub(c.pow(x, 3), c.mul(a, x)), sub)
        assert lemma5_is_perm(c, a, 1, 3, top=2) == is_permutation(L)
        if is_permutation(L):
            inv = lemma5_inverse_coeffs(c, a, 1, 3, top=2)
            assert all(inv(c, L(x)) == x for x in sub)
    with pytest.raises(ParameterError):
        lemma5_is_perm(c, c.primitive, 1, 3, top=2)
