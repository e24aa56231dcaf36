import json

import pytest
from hypothesis import given, settings, strategies as st

from cyclic_mip.battery import battery, random_qform_specs
from cyclic_mip.finitefield import field_for_order
from cyclic_mip.pgroup import GroupSpec, format_spec, parse_spec
from cyclic_mip.recover import (
    GROUP_FIELDS,
    INF,
    AmbiguousPair,
    DistinguishedBy,
    Fingerprint,
    InconsistentFingerprint,
    SameGroup,
    Undecided,
    criterion_r,
    fingerprint,
    formula_fingerprint,
    is_residual_pair,
    jennings_center_enumerated,
    jennings_center_formula,
    marker_formula,
    mip_verdict,
    quotient_invariants_generators,
    recover_parameters,
)
from cyclic_mip.pgroup import make_group, structure_formula

GF2, GF4 = field_for_order(2), field_for_order(4)
S = parse_spec


def test_fingerprint_json_roundtrip():
    fp = fingerprint(S("Q p=2 [(3,1)] [2]"), GF2)
    text = fp.to_json()
    assert json.loads(text) == fp.to_dict()
    assert Fingerprint.from_json(text) == fp
    assert fp.to_json() == fingerprint(S("Q p=2 [(3,1)] [2]"), GF2).to_json()


def test_group_side_independent_of_field():
    s = S("Q p=2 [] [1,1]")
    assert fingerprint(s, GF2).group_side() == fingerprint(s, GF4).group_side()


@pytest.mark.parametrize(
    "a,b", [("Q p=2 [(2,2)] []", "R p=2 n=2 []"), ("Q p=2 [(2,2)] [1]", "R p=2 n=2 [1]")]
)
def test_arf_pairs(a, b):
    fa, fb = fingerprint(S(a), GF2), fingerprint(S(b), GF2)
    assert fa.group_side() == fb.group_side()
    assert fa.r_alpha_marker == fb.r_alpha_marker == INF
    assert (fa.arf_class, fb.arf_class) == (0, 1)
    assert fa.sources["arf_class"] == "algebra"


@pytest.mark.parametrize(
    "text",
    ["Q p=3 [(5,3),(4,1)] []", "Q p=2 [] [1,1,1]", "R p=2 n=2 []", "Q p=2 [(4,2)] [1]", "Q p=3 [(3,0)] [1]"],
)
def test_spec_examples_round_trip(text):
    s = S(text)
    F = field_for_order(s.prime)
    assert recover_parameters(fingerprint(s, F)) == s


def test_large_spec_uses_formula_fallback():
    s = S("Q p=3 [(5,3),(4,1)] []")
    fp = fingerprint(s, field_for_order(3))
    assert fp.sources["r_alpha_marker"] in ("algebra", "formula-fallback")
    strict = fingerprint(s, field_for_order(3), fallback=False)
    if fp.sources["r_alpha_marker"] == "formula-fallback":
        assert strict.r_alpha_marker is None
        assert any("r_alpha_marker" in f for f in strict.flags)


def test_variety_route_over_gf4():
    fq = fingerprint(S("Q p=2 [] [1,1]"), GF4)
    fr = fingerprint(S("R p=2 n=1 [1]"), GF4)
    assert fq.arf_class is None and fr.arf_class is None
    assert (fq.variety_cardinality, fr.variety_cardinality) == (64, 16)
    assert recover_parameters(fq) == S("Q p=2 [] [1,1]")
    assert recover_parameters(fr) == S("R p=2 n=1 [1]")


def test_ambiguous_without_discriminators():
    fp = fingerprint(S("Q p=2 [] [1,1]"), GF4, varieties=False)
    res = recover_parameters(fp)
    assert isinstance(res, AmbiguousPair)
    assert {format_spec(res.q_form), format_spec(res.r_form)} == {"Q p=2 [] [1,1]", "R p=2 n=1 [1]"}


def test_inconsistent_fingerprints():
    fp = fingerprint(S("Q p=2 [(3,1)] [2]"), GF2)
    bad = Fingerprint.from_dict({**fp.to_dict(), "zeta": fp.zeta + 1})
    with pytest.raises(InconsistentFingerprint):
        recover_parameters(bad)
    bad = Fingerprint.from_dict({**fp.to_dict(), "quotient_invariants": []})
    with pytest.raises(InconsistentFingerprint):
        recover_parameters(bad)
    bad = Fingerprint.from_dict({**fp.to_dict(), "r_alpha_marker": 3})
    with pytest.raises(InconsistentFingerprint):
        recover_parameters(bad)


@pytest.mark.parametrize("spec", battery(10, 6)[::7], ids=format_spec)
def test_group_side_routes_agree(spec):
    G = make_group(spec)
    sp = structure_formula(spec)
    Linv = list(quotient_invariants_generators(G))
    assert sorted(Linv, reverse=True) == Linv
    assert sorted(sp.L + sp.L, reverse=True) == Linv
    if spec.form == "Q":
        assert jennings_center_formula(spec, sp.exponent) == jennings_center_enumerated(G, sp.exponent)


@settings(max_examples=30)
@given(st.integers(0, 2**31))
def test_formula_round_trip_random(seed):
    for s in random_qform_specs(3, seed=seed):
        fp = formula_fingerprint(s)
        assert fp.r_alpha_marker == marker_formula(s)
        assert recover_parameters(fp) == s


def test_criterion_r_out_of_range():
    jc = [[2, 2], [2, 1], [1, 0], [0, 0]]
    assert criterion_r(jc, 2, 9) in (True, False)


def test_verdicts():
    assert mip_verdict(S("Q p=2 [(2,2)] []"), S("R p=2 n=2 []"), GF2) == DistinguishedBy("arf_class", "0 vs 1")
    assert mip_verdict(S("Q p=2 [(2,2)] []"), S("Q p=2 [(2,2)] []"), GF4) == SameGroup()
    v = mip_verdict(S("Q p=2 [] [1,1]"), S("R p=2 n=1 [1]"), GF4)
    assert isinstance(v, DistinguishedBy) and v.invariant == "variety_cardinality"
    assert "64" in v.detail and "16" in v.detail
    assert mip_verdict(S("Q p=3 [(2,1)] []"), S("Q p=2 [] [1]")) == DistinguishedBy("prime")
    v = mip_verdict(S("Q p=2 [(3,1)] [2]"), S("Q p=2 [(4,2)] [1]"), GF2)
    assert isinstance(v, DistinguishedBy) and v.invariant in GROUP_FIELDS


def test_undecided_residual_case():
    a, b = S("Q p=2 [] [1,1,1]"), S("R p=2 n=1 [1,1]")
    assert is_residual_pair(a, b)
    assert structure_formula(a).mG > 2
    assert isinstance(mip_verdict(a, b, GF4, use_varieties=False), Undecided)
    assert isinstance(mip_verdict(a, b, GF2), DistinguishedBy)


def test_cyclic_groups_round_trip():
    for text in ("Q p=2 [(3,0)] []", "Q p=3 [(2,0)] []"):
        s = S(text)
        fp = fingerprint(s, field_for_order(s.prime))
        assert fp.dG == 1 and fp.quotient_invariants == []
        assert recover_parameters(fp) == s
