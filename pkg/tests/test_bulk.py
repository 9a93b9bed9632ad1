import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppinv.bulk import ArrayField, bulk_check, grid_size
from ppinv.errors import ParameterError
from ppinv.families import get_family, instantiate
from ppinv.field import mk_field
from ppinv.mapping import first_difference, invert_table, is_permutation


@pytest.mark.parametrize("p,n", [(2, 4), (3, 2), (5, 2), (3, 4)])
def test_array_field_matches_scalar(p, n):
    c = mk_field(p, n)
    af = ArrayField(c)
    a = np.repeat(np.arange(c.order), c.order)
    b = np.tile(np.arange(c.order), c.order)
    assert af.add(a, b).tolist() == [c.add(x, y) for x, y in zip(a, b)]
    assert af.sub(a, b).tolist() == [c.sub(x, y) for x, y in zip(a, b)]
    assert af.mul(a, b).tolist() == [c.mul(x, y) for x, y in zip(a, b)]
    els = np.arange(c.order)
    for e in (0, 1, 2, 7, c.order - 1, c.order + 3, -1, -5):
        if e < 0:
            nz = els[1:]
            assert af.pow(nz, e).tolist() == [c.pow(int(x), e) for x in nz]
        else:
            assert af.pow(els, e).tolist() == [c.pow(int(x), e) for x in els]
    assert af.frob(els, 1).tolist() == [c.frob(int(x), 1) for x in els]
    assert af.inv(els[1:]).tolist() == [c.inv(int(x)) for x in els[1:]]
    with pytest.raises(ZeroDivisionError):
        af.inv(els)


@given(st.sampled_from([(2, 4), (3, 4), (5, 2)]), st.data())
def test_array_norm_matches_scalar(field, data):
    c = mk_field(*field)
    af = ArrayField(c)
    xs = data.draw(st.lists(st.integers(0, c.order - 1), min_size=1, max_size=20))
    for d in {1, c.n // 2}:
        assert af.norm(np.array(xs), d).tolist() == [c.norm(x, d) for x in xs]


def scalar_counts(fam_id, c, m):
    """Scalar reference over the same grid (d_i = 1)."""
    fam = get_family(fam_id)
    fq = c.subfield(m)
    b3s = fq if fam_id == "F15" else list(c.elements())
    count = perms = 0
    for e in range(2 * m):
        for b1 in fq:
            for b2 in fq:
                for b3 in b3s:
                    for delta in c.elements():
                        params = {"b1": b1, "b2": b2, "b3": b3, "e": e, "delta": delta}
                        if fam_id == "F15":
                            params.update(d1=1, d2=1, d3=1)
                        inst = instantiate(fam_id, c, m, params)
                        perm = is_permutation(inst.forward)
                        assert inst.condition_holds == perm
                        if perm:
                            assert first_difference(inst.inverse_closed,
                                                    invert_table(inst.forward)) is None
                        count += 1
                        perms += perm
    return count, perms


@pytest.mark.parametrize("fam_id,p,m", [("F16", 2, 1), ("F16", 2, 2), ("F15", 3, 1), ("F15", 5, 1)])
def test_bulk_agrees_with_scalar(fam_id, p, m):
    c = mk_field(p, 2 * m)
    rep = bulk_check(fam_id, c, m)
    assert rep.passed
    assert rep.count == grid_size(fam_id, c, m)
    assert (rep.count, rep.permutations) == scalar_counts(fam_id, c, m)
    assert rep.inverse_checked == rep.permutations


@pytest.mark.parametrize("fam_id,p,m", [("F15", 3, 1), ("F15", 3, 2), ("F16", 2, 2)])
def test_trace_level_agrees_with_full_level(fam_id, p, m):
    c = mk_field(p, 2 * m)
    full = bulk_check(fam_id, c, m, level="full").to_json()
    trace = bulk_check(fam_id, c, m, level="trace").to_json()
    full.pop("level"), trace.pop("level")
    assert full == trace and full["passed"]


def test_bulk_covers_every_branch():
    rep = bulk_check("F16", mk_field(2, 4), 2)
    assert set(rep.branch_counts) >= {"linear", "A=0", "B=0", "AB!=0"}
    rep = bulk_check("F15", mk_field(3, 4), 2)
    assert set(rep.branch_counts) >= {"linear", "A=0", "B=0", "AB!=0"}


def test_bulk_rejects_bad_input():
    with pytest.raises(ParameterError):
        bulk_check("F15", mk_field(2, 4), 2)
    with pytest.raises(ParameterError):
        bulk_check("F08", mk_field(3, 2), 1)
    with pytest.raises(ParameterError):
        bulk_check("F16", mk_field(2, 4), 2, level="nope")
