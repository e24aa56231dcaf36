import pytest

from cyclic_mip.finitefield import field_for_order
from cyclic_mip.lemmas import (
    LEMMAS,
    agemo_center,
    arf_basis_invariance,
    criterion_r,
    jennings_center,
    jennings_identity,
    power_identity,
    similarity_invariance,
    verify_lemma,
)
from cyclic_mip.quadform import anisotropic_plus_hyperbolic, hyperbolic_form

FEW = ["Q p=2 [(3,1)] [2]", "R p=2 n=2 [1]", "Q p=3 [(3,1)] []", "Q p=3 [(4,2),(3,0)] []"]


def test_group_suites_on_few():
    for fn in (agemo_center, jennings_center, criterion_r):
        rep = fn(FEW)
        assert rep.passed, rep.to_dict()
    assert power_identity(FEW, triples=500).passed


def test_jennings_identity_small():
    rep = jennings_identity(["Q p=2 [] [1,1]", "R p=2 n=2 []", "Q p=3 [(2,1)] []"])
    assert rep.passed and len(rep.cases) == 3


def test_form_suites():
    F = field_for_order(4)
    forms = [hyperbolic_form(F, 2), anisotropic_plus_hyperbolic(F, 2)]
    assert arf_basis_invariance(forms, transforms=50).passed
    assert similarity_invariance(forms, trials=50).passed


@pytest.mark.parametrize("name", LEMMAS)
def test_verify_lemma_single_spec(name):
    spec = {
        "3.5": "Q p=3 [(2,1)] []",
        "5.2": "Q p=2 [] [1,1]",
        "5.4": "R p=2 n=1 [1]",
        "5.5": "Q p=2 [] [1,1]",
    }.get(name, "Q p=3 [(3,1)] []")
    rep = verify_lemma(name, spec)
    assert rep.passed, rep.to_dict()
    assert rep.cases


def test_unknown_lemma():
    with pytest.raises(ValueError):
        verify_lemma("1.1")
