"""Structural invariants checked over the whole generated battery."""

import pytest

from cyclic_mip.battery import battery, random_qform_specs
from cyclic_mip.finitefield import field_for_order
from cyclic_mip.lemmas import criterion_r, default_groups, power_identity
from cyclic_mip.recover import AmbiguousPair, formula_fingerprint, recover_parameters


def test_defining_set_criterion_on_battery():
    # for t > r_alpha, the D_s & Z step pattern singles out exactly the r_i
    rep = criterion_r(battery(14, 8))
    assert rep.cases
    assert rep.failures == 0, [c for c in rep.cases if c["failures"]][:5]


@pytest.mark.deep
def test_formula_round_trip_large_random_groups():
    F4 = field_for_order(4)
    for spec in random_qform_specs(500, seed=1, min_log=20, max_alpha=5, max_beta=4):
        assert recover_parameters(formula_fingerprint(spec)) == spec
        # over GF(4) the closed forms alone cannot split a residual pair
        r = recover_parameters(formula_fingerprint(spec, F4))
        if spec.prime == 2 and not spec.qpairs:
            assert isinstance(r, AmbiguousPair) and r.q_form == spec
        else:
            assert r == spec


@pytest.mark.deep
def test_power_identity_deep_battery():
    rep = power_identity(default_groups(deep=True), triples=20_000, seed=3)
    assert rep.failures == 0
