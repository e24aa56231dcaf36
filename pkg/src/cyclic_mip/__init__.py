"""Class-2 p-groups with cyclic center, their modular group algebras, and
the invariants used to tell those algebras apart."""

from .finitefield import FieldSpec, ff_make, field_for_order
from .pgroup import (
    Group,
    GroupElement,
    GroupSpec,
    SpecError,
    Qspec,
    Rspec,
    make_group,
    nu_profile,
    parse_spec,
    format_spec,
    structure,
    subgroup,
    structure_formula,
    BoundExceeded,
)
from .quadform import QuadraticForm, arf, parse_form, format_form
from .varieties import strat_count, brute_count, table1
from .recover import (
    Fingerprint,
    fingerprint,
    formula_fingerprint,
    recover_parameters,
    mip_verdict,
    SameGroup,
    DistinguishedBy,
    Undecided,
    AmbiguousPair,
    InconsistentFingerprint,
)
from .lemmas import verify_lemma

__all__ = [
    "FieldSpec",
    "ff_make",
    "field_for_order",
    "Group",
    "GroupElement",
    "GroupSpec",
    "SpecError",
    "Qspec",
    "Rspec",
    "make_group",
    "nu_profile",
    "parse_spec",
    "format_spec",
    "structure",
    "subgroup",
    "structure_formula",
    "BoundExceeded",
    "QuadraticForm",
    "arf",
    "parse_form",
    "format_form",
    "strat_count",
    "brute_count",
    "table1",
    "Fingerprint",
    "fingerprint",
    "formula_fingerprint",
    "recover_parameters",
    "mip_verdict",
    "SameGroup",
    "DistinguishedBy",
    "Undecided",
    "AmbiguousPair",
    "InconsistentFingerprint",
    "verify_lemma",
]
