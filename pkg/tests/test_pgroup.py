import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclic_mip.battery import battery, log_order, random_qform_specs
from cyclic_mip.pgroup import (
    BoundExceeded,
    GroupSpec,
    SpecError,
    agemo,
    center,
    derived,
    format_spec,
    jennings,
    make_group,
    nu_profile,
    omega,
    parse_spec,
    quotient_invariants_by_counts,
    quotient_invariants_snf,
    structure,
    structure_formula,
)

SMALL = battery(10, 6)
TINY = [s for s in SMALL if log_order(s) <= 8]


def ids(s):
    return format_spec(s)


@pytest.mark.parametrize(
    "text",
    ["Q p=2 [(2,2)] []", "Q p=3 [(5,3),(4,1)] []", "R p=2 n=2 [1,1]", "Q p=2 [(3,1)] [2]", "Q p=3 [] [2,1]"],
)
def test_parse_format_roundtrip(text):
    s = parse_spec(text)
    assert parse_spec(format_spec(s)) == s


def test_ll_pairs_move_to_ells():
    s = parse_spec("Q p=2 [(2,2)] []")
    assert s.qpairs == () and s.ells == (2,)
    assert format_spec(s) == "Q p=2 [] [2]"


@pytest.mark.parametrize(
    "text",
    [
        "Q p=4 [] [1]",  # not prime
        "Q p=2 [(2,1)] [1]",  # 1 < n_1 - r_1 fails at p = 2
        "Q p=3 [(3,1),(4,2)] []",  # n_i not decreasing
        "Q p=3 [(5,3),(4,2)] []",  # r_(i-1) = r_i + 1
        "Q p=3 [(4,1)] [4]",  # n_alpha > ell_1 fails
        "R p=3 n=1 []",
        "R p=2 n=1 [2]",
        "Q p=2 [] []",
    ],
)
def test_invalid_specs(text):
    with pytest.raises(SpecError):
        parse_spec(text)


@pytest.mark.parametrize("text", ["Q p=2 [(2", "P p=2 [] [1]", "Q p=2 [x] []", "R p=2 [1]"])
def test_malformed_specs(text):
    with pytest.raises(ValueError) as exc:
        parse_spec(text)
    assert not isinstance(exc.value, SpecError)


def test_battery_specs_valid_and_distinct():
    specs = battery(14, 8)
    assert len(set(specs)) == len(specs)
    for s in specs:
        s.validate()
        assert parse_spec(format_spec(s)) == s
    assert {s.prime for s in specs} == {2, 3}
    assert any(s.form == "R" for s in specs)


@pytest.mark.parametrize("spec", TINY[::3], ids=ids)
def test_group_axioms(spec):
    G = make_group(spec)
    rng = np.random.default_rng(0)
    x, y, w = (rng.integers(0, G.order, 500) for _ in range(3))
    assert np.array_equal(G.mul(G.mul(x, y), w), G.mul(x, G.mul(y, w)))
    assert np.array_equal(G.mul(x, G.inv(x)), np.zeros_like(x))
    assert np.array_equal(G.mul(x, 0), x)
    # class 2: commutators are central
    c = G.comm(x, y)
    assert np.array_equal(G.mul(c, w), G.mul(w, c))
    assert G.order == spec.prime ** log_order(spec)


@pytest.mark.parametrize("spec", TINY[::5], ids=ids)
def test_mul_table_matches_mul(spec):
    G = make_group(spec)
    xs = G.elements()
    T = G.mul_table
    rng = np.random.default_rng(1)
    rows = rng.integers(0, G.order, 20)
    for g in rows:
        assert np.array_equal(T[g], G.mul(np.full_like(xs, g), xs))


@pytest.mark.parametrize("spec", SMALL, ids=ids)
def test_structure_formula_matches_enumeration(spec):
    assert structure(make_group(spec), verify=True) == structure_formula(spec)


@pytest.mark.parametrize("spec", TINY, ids=ids)
def test_center_and_derived(spec):
    G = make_group(spec)
    Z, D = center(G), derived(G)
    sp = structure_formula(spec)
    assert Z.log_order == sp.zeta
    assert D <= Z
    # cyclic center generated by z
    assert int(G.element_log_orders(np.array([G.z]))[0]) == sp.zeta
    assert G.z in Z
    assert quotient_invariants_snf(G, Z) == quotient_invariants_by_counts(G, Z)


@pytest.mark.parametrize("spec", TINY[::4], ids=ids)
def test_agemo_omega_jennings_chain(spec):
    G = make_group(spec)
    Z = center(G)
    e = structure_formula(spec).exponent
    prev = None
    for t in range(e + 1):
        A = agemo(G, t)
        if prev is not None:
            assert A <= prev
        prev = A
    assert agemo(G, e).order == 1
    assert omega(G, e, Z).order == G.order
    D = [jennings(G, s) for s in range(1, 2 ** (e + 1) + 1)]
    assert D[0].order == G.order
    assert all(b <= a for a, b in zip(D, D[1:]))


def test_nu_profile_rejects_rforms_and_negative_t():
    with pytest.raises(ValueError):
        nu_profile(parse_spec("R p=2 n=2 []"), 1)
    with pytest.raises(ValueError):
        nu_profile(parse_spec("Q p=3 [(2,1)] []"), -1)


@given(st.integers(0, 10_000))
def test_random_large_specs_valid(seed):
    for s in random_qform_specs(2, seed=seed):
        s.validate()
        assert log_order(s) >= 15
        sp = structure_formula(s)
        assert 0 <= sp.delta <= sp.zeta < sp.exponent + 1


def test_enumeration_bound():
    G = make_group(parse_spec("Q p=2 [(9,1)] [8]"))
    with pytest.raises(BoundExceeded):
        G.elements()
    # element arithmetic still works beyond the bound
    x = G.element([(3, 5), (1, 2)], 7)
    assert G.mul(x, G.inv(x)) == 0


def test_groupspec_equality_after_canonicalization():
    a = GroupSpec(2, "Q", ((2, 2),), ())
    b = GroupSpec(2, "Q", (), (2,))
    assert a == b and hash(a) == hash(b)
