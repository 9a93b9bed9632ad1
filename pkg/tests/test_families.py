import random

import pytest

from ppinv.errors import NotPermutationError, ParameterError
from ppinv.families import (CASE_SPLIT, IFF, SUFFICIENT, admissible_a, build_P_general, catalog,
                            closed_form_inverse, conjugate_gspec, conjugate_pair, get_family,
                            instantiate, lookup, normalize_general_a, normalized_mapping,
                            conjugate_identity_holds)
from ppinv.field import mk_field
from ppinv.mapping import (GSpec, build_P, build_tau, compose, first_difference, identity,
                           invert_table, is_permutation, tabulate)

GF16 = mk_field(2, 4)
GF9 = mk_field(3, 2)


def tr(c, m, x):
    return c.add(x, c.frob(x, m))


def inverse_ok(inst):
    return inst.inverse_closed is not None and \
        first_difference(inst.inverse_closed, invert_table(inst.forward)) is None


# --- catalog -----------------------------------------------------------------------

def test_catalog_census():
    ids = [d.id for d in catalog()]
    assert len(ids) == 17 and ids == [f"F{i:02d}" for i in range(1, 18)]
    assert lookup("F01").variants == ("a", "b")
    assert lookup("F01a") is lookup("F01b") is lookup("f01")


def test_catalog_descriptors():
    f02 = lookup("F02")
    assert (f02.char_constraint, f02.min_q) == ("p=2", 4)
    assert lookup("F08").condition_kind == IFF
    kinds = {d.id: d.condition_kind for d in catalog()}
    assert {k for k, v in kinds.items() if v == SUFFICIENT} >= {"F02", "F03", "F05", "F06", "F07"}
    assert {k for k, v in kinds.items() if v == CASE_SPLIT} == {"F04", "F10", "F11", "F12", "F13", "F14"}
    assert {k for k, v in kinds.items() if v == IFF} == {"F08", "F09", "F15", "F16", "F17"}
    assert all(set(d.to_json()) >= {"id", "params", "condition_kind"} for d in catalog())
    with pytest.raises(ParameterError):
        get_family("F99")


def test_admissibility():
    assert not get_family("F02").admissible(2, 1)
    assert get_family("F02").admissible(2, 2)
    assert not get_family("F07").admissible(2, 2)
    assert get_family("F17").admissible(3, 1) and not get_family("F17").admissible(5, 1)
    assert not get_family("F12").admissible(2, 1)


def test_validation_errors():
    with pytest.raises(ParameterError, match="unknown"):
        instantiate("F02", GF16, 2, {"b": 1, "delta": 2, "zz": 1})
    with pytest.raises(ParameterError, match="missing"):
        instantiate("F02", GF16, 2, {"b": 1})
    with pytest.raises(ParameterError):
        instantiate("F02", GF16, 2, {"b": 99, "delta": 2})
    with pytest.raises(ParameterError):
        instantiate("F02", GF16, 2, {"b": 2, "delta": 2})  # b outside F_q
    with pytest.raises(ParameterError):
        instantiate("F02", mk_field(2, 2), 1, {"b": 1, "delta": 2})
    with pytest.raises(ParameterError):
        instantiate("F07", GF9, 1, {"b1": 1, "l1": 2, "s1": 1, "delta": 0})
    with pytest.raises(ParameterError):
        instantiate("F02", GF9, 1, {"b": 1, "delta": 2})


# --- spec examples -------------------------------------------------------------------

def test_f02_example():
    delta = next(d for d in GF16.elements() if tr(GF16, 2, d) == 1)
    inst = instantiate("F02", GF16, 2, {"b": 1, "delta": delta})
    assert inst.condition_holds and is_permutation(inst.forward)
    assert compose(closed_form_inverse(inst), inst.forward) == identity(GF16)


def test_f07_example():
    inst = instantiate("F07", GF9, 1, {"b1": 1, "l1": 1, "s1": 1, "delta": 0})
    assert is_permutation(inst.forward)
    assert compose(inst.inverse_closed, inst.forward) == identity(GF9)


def test_f08_trace_one_is_not_a_permutation():
    for b in GF9.elements():
        if tr(GF9, 1, b) != 1:
            continue
        for s in (1, 2, 5):
            inst = instantiate("F08", GF9, 1, {"b1": b, "s1": s, "delta": 0})
            assert not inst.condition_holds and not is_permutation(inst.forward)
            with pytest.raises(NotPermutationError):
                closed_form_inverse(inst)


def test_f08_gf9_iff():
    fam = get_family("F08")
    for b in GF9.elements():
        for s in range(1, 11):
            for delta in GF9.subfield(1):
                inst = instantiate("F08", GF9, 1, {"b1": b, "s1": s, "delta": delta})
                assert inst.condition_holds == is_permutation(inst.forward)
                if inst.condition_holds:
                    assert inverse_ok(inst)
    assert fam.space_size(GF9, 1) == 9 * 4 * 3


def test_f01_involution_is_its_own_inverse():
    c = mk_field(2, 6)
    sub = c.subfield(3)
    a = instantiate("F01a", c, 3, {"b1": sub[3], "s1": 9 * 3, "delta": 17})
    b = instantiate("F01b", c, 3, {"b1": sub[2], "s1": 11, "b2": sub[5], "s2": 4, "delta": sub[4]})
    for inst in (a, b):
        assert inst.inverse_closed == inst.forward
        assert compose(inst.forward, inst.forward) == identity(c)


def test_f15_linear_branch_matches_affine_tau_inverse():
    c = mk_field(5, 2)
    fam = get_family("F15")
    rng = random.Random(3)
    checked = 0
    while checked < 20:
        params = {"b1": rng.choice(c.subfield(1)), "b2": rng.choice(c.subfield(1)),
                  "b3": rng.choice(c.subfield(1)), "d1": 1, "d2": 3, "d3": 5,
                  "e": 0, "delta": rng.randrange(c.order)}
        A, B, C = fam.coefficients(c, 1, params)
        if A == B:
            continue
        checked += 1
        g = fam.gspec(c, 1, params)
        tau_inv = invert_table(build_tau(c, g, 1))
        k = c.inv(c.sub(A, B))
        assert all(tau_inv(y) == c.sub(c.mul(k, y), c.mul(k, C)) for y in c.subfield(1))
        inst = instantiate("F15", c, 1, params)
        assert inst.branch == "linear" and inverse_ok(inst)


def test_every_inverse_composes_to_identity():
    rng = random.Random(11)
    for d in catalog():
        fam = get_family(d.id)
        for p, m in [(2, 2), (2, 3), (3, 1), (3, 2), (5, 1)]:
            if not fam.admissible(p, m):
                continue
            c = mk_field(p, 2 * m)
            for _ in range(15):
                inst = instantiate(d.id, c, m, fam.sample_params(c, m, rng))
                if inst.inverse_closed is not None:
                    assert compose(inst.inverse_closed, inst.forward) == identity(c), (d.id, inst.params)


def test_case_split_branches_agree_with_oracle():
    for fid in ("F04", "F10", "F11", "F12", "F13", "F14"):
        fam = get_family(fid)
        for m in (2, 3):
            c = mk_field(2, 2 * m)
            for params in fam.enumerate_params(c, m):
                inst = instantiate(fid, c, m, params)
                perm = is_permutation(inst.forward)
                if perm and inst.branch:
                    assert inverse_ok(inst), (fid, params)
                if "quartic_criterion" in inst.extra:
                    assert inst.extra["quartic_criterion"] == perm


def test_f04_trace_one_branch_permutes_iff_trace_delta_nonzero():
    fam = get_family("F04")
    for m in (1, 2, 3):
        c = mk_field(2, 2 * m)
        for params in fam.enumerate_params(c, m):
            if fam.branch(c, m, params) == "trace-one":
                perm = is_permutation(build_P(c, fam.gspec(c, m, params), m))
                assert perm == (tr(c, m, params["delta"]) != 0)


# --- corrected closed forms --------------------------------------------------------
# Each test reproduces a formula as originally printed and shows the table oracle
# rejects it, while the implemented version agrees.

def test_f04_trace_one_uncorrected_constant_fails():
    c, m = GF16, 2
    q, s = 4, 10
    fails = 0
    for params in get_family("F04").enumerate_params(c, m):
        inst = instantiate("F04", c, m, params)
        if inst.branch != "trace-one" or not is_permutation(inst.forward):
            continue
        b, delta = params["b"], params["delta"]
        printed = tabulate(c, lambda x: c.add(c.mul(b, c.pow(
            c.add(c.add(c.pow(tr(c, m, x), 2), 1), delta), s)), x))
        fails += printed != invert_table(inst.forward)
        assert inverse_ok(inst)
    assert fails > 0


def test_f08_uncorrected_sign_fails_in_odd_characteristic():
    c, m = GF9, 1
    fam = get_family("F08")
    fails = 0
    for params in fam.enumerate_params(c, m):
        inst = instantiate("F08", c, m, params)
        if not inst.condition_holds:
            continue
        t = tr(c, m, params["b1"])
        den = c.inv(c.sub(t, 1))
        delta = params["delta"]
        const = c.add(c.mul(c.mul(delta, t), den), delta)
        (b, s), = inst.gspec.terms
        printed = tabulate(c, lambda x: c.sub(c.mul(b, c.pow(
            c.add(c.mul(tr(c, m, x), den), const), s)), x))
        fails += printed != invert_table(inst.forward)
        assert inverse_ok(inst)
    assert fails > 0


def test_f15_uncorrected_sign_in_b_contradicts_oracle():
    c, m, q = mk_field(3, 4), 2, 9
    fam = get_family("F15")
    fq = c.subfield(m)
    rng = random.Random(4)
    printed_wrong = fixed_wrong = 0
    for _ in range(1500):
        params = {"b1": rng.choice(fq), "b2": rng.choice(fq), "b3": rng.choice(fq),
                  "d1": 1, "d2": 1, "d3": 1, "e": rng.choice([1, 3]), "delta": rng.randrange(c.order)}
        A, B, _ = fam.coefficients(c, m, params)
        b1, b2, _ = fam.betas(c, m, params)
        pe = 3 ** params["e"]
        delta = params["delta"]
        w = c.sub(c.pow(delta, pe * q), c.pow(delta, pe))
        B_printed = c.sub(1, c.mul(w, c.add(b1, b2)))

        def claim(B_):
            if A == 0 or B_ == 0:
                return (A == 0) != (B_ == 0)
            return c.norm(c.div(B_, A), 1, m) != 1

        perm = is_permutation(build_tau(c, fam.gspec(c, m, params), m))
        printed_wrong += claim(B_printed) != perm
        fixed_wrong += claim(B) != perm
    assert fixed_wrong == 0
    assert printed_wrong > 0


def test_f16_constant_uses_b3_without_stray_factor():
    c, m = mk_field(2, 4), 2
    fam = get_family("F16")
    rng = random.Random(5)
    for _ in range(200):
        params = fam.sample_params(c, m, rng)
        inst = instantiate("F16", c, m, params)
        assert inst.condition_holds == is_permutation(inst.forward)
        if inst.condition_holds:
            assert inverse_ok(inst)


# --- conjugation and normalization ---------------------------------------------------

def test_self_conjugate_pair():
    c, m = mk_field(2, 6), 3
    sub = c.subfield(3)
    inst = instantiate("F01a", c, m, {"b1": sub[3], "s1": 9 * 7, "delta": 5})
    conj = conjugate_pair(inst)
    assert conj.family_id == "F09"
    assert conj.forward == inst.forward


def test_conjugate_verdicts_agree_gf9():
    rng = random.Random(7)
    for _ in range(200):
        g = GSpec.of([(rng.randrange(81), rng.randint(1, 79)) for _ in range(rng.randint(1, 3))],
                     rng.randrange(81))
        c = mk_field(3, 4)
        P1 = build_P(c, g, 2)
        P2 = build_P(c, conjugate_gspec(c, 2, g), 2)
        assert is_permutation(P1) == is_permutation(P2)
        assert conjugate_identity_holds(c, 2, g) == (True, None)


def test_conjugate_identity_on_permutations():
    rng = random.Random(2)
    c, m = GF16, 2
    found = 0
    fam = get_family("F02")
    for _ in range(100):
        inst = instantiate("F02", c, m, fam.sample_params(c, m, rng))
        if not is_permutation(inst.forward):
            continue
        found += 1
        conj = conjugate_pair(inst)
        i1, i2 = invert_table(inst.forward), invert_table(conj.forward)
        assert all(c.add(i1(x), x) == c.frob(c.add(i2(x), x), m) for x in c.elements())
    assert found > 10


def test_normalization_examples():
    c, m = GF9, 1
    g = GSpec.of([(5, 4), (7, 2)], 6)
    g_bar, eps, t, scale = normalize_general_a(c, m, 1, g)
    assert (t, scale, g_bar) == (0, 1, g)
    minus_one = c.neg(1)
    _, eps, t, _ = normalize_general_a(c, m, minus_one, g)
    assert t == 2 and c.pow(eps, 2 * t) == minus_one
    assert build_P_general(c, g, m, minus_one) == normalized_mapping(c, m, minus_one, g)
    assert len(admissible_a(c, m)) == 4
    for a in admissible_a(c, m):
        assert build_P_general(c, g, m, a) == normalized_mapping(c, m, a, g)
    with pytest.raises(ParameterError):
        normalize_general_a(c, m, c.primitive, g)


def test_f16_product_branch_needs_a_proper_intermediate_field():
    # gcd(m, j) = 1 forces N(B/A) = 1 over F_2, so the branch permutes only when gcd > 1
    for m in (1, 2, 3):
        c = mk_field(2, 2 * m)
        fam = get_family("F16")
        rng = random.Random(m)
        for _ in range(300):
            inst = instantiate("F16", c, m, fam.sample_params(c, m, rng))
            if inst.branch == "AB!=0":
                assert not inst.condition_holds and not is_permutation(inst.forward)
    c, m = mk_field(2, 8), 4
    fam = get_family("F16")
    rng = random.Random(0)
    checked = 0
    while checked < 25:
        params = dict(fam.sample_params(c, m, rng), e=rng.choice([2, 6]))
        inst = instantiate("F16", c, m, params)
        if inst.branch == "AB!=0" and inst.condition_holds:
            assert is_permutation(inst.forward) and inverse_ok(inst)
            checked += 1
