"""Invariant fingerprints and recovery of the defining parameters.

A fingerprint collects the quantities of G that any group with an
isomorphic modular group algebra must share.  Group-side entries come from
G alone (enumeration when G is small, closed formulas for Q-form groups of
any size, cross-checked whenever both are available).  Algebra-side
entries (``r_alpha_marker``, ``arf_class``, ``variety_cardinality``) are
computed in the group algebra when the relevant quotient fits the
enumeration bound, and are otherwise absent or replaced by a formula value
with a flag saying so.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from .finitefield import FieldSpec, field_for_order, has_cube_root_of_unity
from .pgroup import (
    ENUM_BOUND,
    BoundExceeded,
    Group,
    GroupSpec,
    SpecError,
    L_from_invariants,
    center,
    format_spec,
    jennings,
    make_group,
    nu_profile,
    parse_spec,
    quotient_invariants_by_counts,
    structure,
    structure_formula,
)
from .smith import abelian_invariants

INF = "inf"
GROUP_FIELDS = ("prime", "exponent", "dG", "zeta", "delta", "quotient_invariants", "jennings_center")
ALGEBRA_FIELDS = ("r_alpha_marker", "arf_class", "variety_cardinality")
# largest |G| for which the lambda5 kernel is computed inside fingerprint()
VARIETY_GROUP_BOUND = 1 << 10


class InconsistentFingerprint(ValueError):
    """No valid parameter list reproduces the fingerprint."""


@dataclass
class Fingerprint:
    prime: int
    exponent: int  # log_p exp(G)
    dG: int
    zeta: int
    delta: int
    quotient_invariants: list  # log_p of the invariant factors of G/Z(G), descending
    jennings_center: list | None  # [log|D_(p^t) & Z|, log|D_(p^t+1) & Z|] for t = 0..exponent
    r_alpha_marker: int | str | None  # "inf" for an empty defining set
    arf_class: int | None = None
    field_order: int | None = None
    variety_cardinality: int | None = None
    flags: list = field(default_factory=list)
    sources: dict = field(default_factory=dict)

    def group_side(self) -> dict:
        return {k: getattr(self, k) for k in GROUP_FIELDS}

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Fingerprint":
        d = dict(d)
        jc = d.get("jennings_center")
        return cls(
            prime=int(d["prime"]),
            exponent=int(d["exponent"]),
            dG=int(d["dG"]),
            zeta=int(d["zeta"]),
            delta=int(d["delta"]),
            quotient_invariants=[int(x) for x in d["quotient_invariants"]],
            jennings_center=None if jc is None else [[int(a), int(b)] for a, b in jc],
            r_alpha_marker=_marker_in(d.get("r_alpha_marker")),
            arf_class=d.get("arf_class"),
            field_order=d.get("field_order"),
            variety_cardinality=d.get("variety_cardinality"),
            flags=list(d.get("flags", [])),
            sources=dict(d.get("sources", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "Fingerprint":
        return cls.from_dict(json.loads(text))


def _marker_in(v):
    if v is None or v == INF:
        return v
    return int(v)


# ---------------------------------------------------------------------------
# group-side entries


def _log(p, n):
    return round(math.log(n, p))


def quotient_invariants_generators(G: Group) -> tuple[int, ...]:
    """Invariants of G/Z(G) from the orders of the generator images, using
    only group arithmetic (valid for any |G| < 2^63).  The generator images
    are checked to be independent through the order of G/Z."""
    gens = G.generators()

    def central(x):
        return all(G.comm(x, s) == 0 for s in gens)

    orders = []
    for g in gens:
        k, x = 0, g
        while not central(x):
            x = G.pow(x, G.p)
            k += 1
        if k:
            orders.append(G.p**k)
    # |Z| from the generator z and the order of G/Z from the images
    zlog = 0
    x = G.z
    while x != 0:
        x = G.pow(x, G.p)
        zlog += 1
    if math.prod(orders) != G.p ** (G.log_order - zlog):
        raise AssertionError("generator images are not independent in G/Z")
    inv = abelian_invariants(np.diag(orders)) if orders else []
    return tuple(sorted((_log(G.p, d) for d in inv if d > 1), reverse=True))


def jennings_center_formula(spec: GroupSpec, exponent: int) -> list:
    """``[zeta - nu(t), zeta - nu~(t)]`` for t = 0..exponent (Q-form only)."""
    zeta = structure_formula(spec).zeta
    out = []
    for t in range(exponent + 1):
        nu = nu_profile(spec, t)
        out.append([zeta - nu.nu, zeta - nu.nu_tilde])
    return out


def jennings_center_enumerated(G: Group, exponent: int) -> list:
    Z = center(G)
    out = []
    for t in range(exponent + 1):
        s = G.p**t
        a = (jennings(G, s) & Z).log_order
        b = (jennings(G, s + 1) & Z).log_order
        out.append([a, b])
    return out


def _group_side(G: Group | None, spec: GroupSpec, flags: list, sources: dict) -> dict:
    sp = structure_formula(spec)
    small = G is not None and G.order <= ENUM_BOUND
    if small:
        sp = structure(G, verify=True)  # raises on formula/enumeration disagreement
        src = "enumeration+formula"
    else:
        src = "formula"
    for k in ("exponent", "dG", "zeta", "delta"):
        sources[k] = src
    inv_formula = tuple(sorted(sp.L + sp.L, reverse=True))
    if G is not None:
        inv = quotient_invariants_generators(G)
        sources["quotient_invariants"] = "smith"
        if small:
            by_counts = quotient_invariants_by_counts(G, center(G))
            if by_counts != inv:
                raise AssertionError(f"G/Z invariants: Smith form {inv}, element counts {by_counts}")
            sources["quotient_invariants"] = "smith+counts"
        if spec.form == "Q" and inv != inv_formula:
            raise AssertionError(f"G/Z invariants {inv} disagree with the parameters ({inv_formula})")
    else:
        inv = inv_formula
        sources["quotient_invariants"] = "formula"
    jc = None
    if spec.form == "Q":
        jc = jennings_center_formula(spec, sp.exponent)
        sources["jennings_center"] = "formula"
    if small:
        en = jennings_center_enumerated(G, sp.exponent)
        if jc is not None and en != jc:
            raise AssertionError(f"D_s & Z: enumerated {en}, closed form {jc} for {format_spec(spec)}")
        jc = en
        sources["jennings_center"] = "enumeration+formula" if spec.form == "Q" else "enumeration"
    if jc is None:
        flags.append("jennings_center: group above the enumeration bound and no closed form")
    return dict(
        prime=spec.prime,
        exponent=sp.exponent,
        dG=sp.dG,
        zeta=sp.zeta,
        delta=sp.delta,
        quotient_invariants=list(inv),
        jennings_center=jc,
    )


# ---------------------------------------------------------------------------
# algebra-side entries


def marker_formula(spec: GroupSpec):
    """The value the power-map criterion takes: ``r_alpha`` when
    ``alpha > 0`` and ``r_alpha > 0``, infinity when ``alpha = 0``;
    ``None`` when ``r_alpha = 0`` (the criterion is then not used)."""
    if spec.form == "R" or not spec.qpairs:
        return INF
    r = spec.qpairs[-1][1]
    return r if r > 0 else None


def marker_algebra(G: Group, F: FieldSpec, L, exponent: int, seed: int = 0, shifts: int = 20):
    """``min {t in L : f_t != 0}`` (with ``t < exponent - 1`` for p = 2),
    each f_t computed in the group algebra.  Returns (marker, modes)."""
    from .groupalgebra import omega_power_map, run_power_map

    modes = {}
    for t in sorted(set(L)):
        if G.p == 2 and not t < exponent - 1:
            continue
        pm, shift_fn = omega_power_map(G, F, t)
        mode = "enumerate" if F.q ** pm.d <= 1 << 20 else "sample"
        res = run_power_map(pm, mode, shift_fn, shifts, seed)
        modes[t] = mode
        if not res.zero_map:
            return t, modes
    return INF, modes


def in_form_setting(spec: GroupSpec) -> bool:
    return spec.prime == 2 and (spec.form == "R" or (not spec.qpairs and bool(spec.ells)))


def arf_class_of(G: Group, F: FieldSpec, seed: int = 0) -> int:
    from .groupalgebra import lambda_quadratic_form
    from .quadform import arf

    return arf(lambda_quadratic_form(G, F, seed=seed)).class_bit


def fingerprint(G_or_spec, F: FieldSpec | None = None, *, algebra: bool = True,
                seed: int = 0, varieties: bool = True, fallback: bool = True) -> Fingerprint:
    """Fingerprint of a group (a :class:`Group`, a :class:`GroupSpec` or
    spec text) over F (default GF(p)).

    With ``algebra=False`` or when a quotient exceeds the enumeration
    bound, ``r_alpha_marker`` and ``arf_class`` fall back to their formula
    values and ``sources`` records it; with ``fallback=False`` they are left
    absent and flagged instead.
    """
    if isinstance(G_or_spec, str):
        G_or_spec = parse_spec(G_or_spec)
    if isinstance(G_or_spec, Group):
        G, spec = G_or_spec, G_or_spec.spec
    else:
        spec = G_or_spec.validate()
        G = make_group(spec) if _log_order(spec) * math.log2(spec.prime) < 62 else None
    if F is None:
        F = field_for_order(spec.prime)
    if F.p != spec.prime:
        raise ValueError("field characteristic must equal the group prime")
    flags, sources = [], {}
    gs = _group_side(G, spec, flags, sources)
    L = L_from_invariants(gs["quotient_invariants"])
    fp = Fingerprint(**gs, r_alpha_marker=None, field_order=F.q, flags=flags, sources=sources)

    # r_alpha_marker
    marker = None
    if algebra and G is not None:
        try:
            marker, modes = marker_algebra(G, F, L, fp.exponent, seed)
            sources["r_alpha_marker"] = "algebra"
            if "sample" in modes.values():
                flags.append("r_alpha_marker: sampled zero-map test (heuristic)")
            formula = marker_formula(spec)
            if formula is not None and marker != formula:
                raise AssertionError(f"power-map marker {marker} disagrees with r_alpha = {formula}")
        except BoundExceeded:
            marker = None
            flags.append("r_alpha_marker: algebra bound exceeded")
    if marker is None and fallback:
        marker = marker_formula(spec)
        if marker is not None:
            sources["r_alpha_marker"] = "formula-fallback"
        else:
            flags.append("r_alpha_marker: not needed (dG odd)")
    elif marker is None and marker_formula(spec) is None:
        flags.append("r_alpha_marker: not needed (dG odd)")
    fp.r_alpha_marker = marker

    # the Q-form / R-form discriminators
    if in_form_setting(spec):
        if not has_cube_root_of_unity(F):
            if algebra and G is not None:
                try:
                    fp.arf_class = arf_class_of(G, F, seed)
                    sources["arf_class"] = "algebra"
                except BoundExceeded:
                    flags.append("arf_class: algebra bound exceeded")
            if fp.arf_class is None and fallback:
                fp.arf_class = arf_class_formula(spec, F)
                sources["arf_class"] = "formula-fallback"
        else:
            flags.append("arf_class: absent, X^2+X+1 splits over the field")
            if algebra and varieties and G is not None and G.order <= VARIETY_GROUP_BOUND:
                from .groupalgebra import lambda5_kernel

                try:
                    res = lambda5_kernel(G, F, seed=seed, verify=False)
                    fp.variety_cardinality = len(res.kernel)
                    sources["variety_cardinality"] = "algebra"
                except BoundExceeded:
                    flags.append("variety_cardinality: algebra bound exceeded")
    return fp


def _log_order(spec: GroupSpec) -> int:
    from .battery import log_order

    return log_order(spec)


def formula_fingerprint(spec: GroupSpec, F: FieldSpec | None = None) -> Fingerprint:
    """Fingerprint from the closed formulas only (any size, Q-form)."""
    spec = spec.validate()
    if spec.form != "Q":
        raise ValueError("closed-form fingerprints cover Q-form groups")
    F = F or field_for_order(spec.prime)
    flags, sources = [], {}
    gs = _group_side(None, spec, flags, sources)
    fp = Fingerprint(**gs, r_alpha_marker=marker_formula(spec), field_order=F.q, flags=flags, sources=sources)
    if fp.r_alpha_marker is None:
        flags.append("r_alpha_marker: not needed (dG odd)")
    else:
        sources["r_alpha_marker"] = "formula-fallback"
    if in_form_setting(spec) and F.p == 2 and not has_cube_root_of_unity(F):
        fp.arf_class = arf_class_formula(spec, F)
        sources["arf_class"] = "formula-fallback"
    return fp


def arf_class_formula(spec: GroupSpec, F: FieldSpec) -> int:
    """Arf class of the closed-form quadratic form of the power map."""
    from .groupalgebra import expected_lambda_form
    from .quadform import arf

    return arf(expected_lambda_form(spec, F)).class_bit


# ---------------------------------------------------------------------------
# recovery


@dataclass(frozen=True)
class AmbiguousPair:
    q_form: GroupSpec
    r_form: GroupSpec

    def __str__(self):
        return f"AmbiguousPair({format_spec(self.q_form)}, {format_spec(self.r_form)})"


def criterion_r(jc: list, p: int, t: int) -> bool:
    """``p |D_(p^(t+1)) & Z| = |D_(p^t) & Z| = |D_(p^(t-1)) & Z|``."""

    def a(s):
        return jc[s][0] if s < len(jc) else 0

    return a(t + 1) + 1 == a(t) == a(t - 1)


def variety_counts(q: int, r: int) -> tuple[int, int]:
    """(|V(f_r,h_r)|, |V(g_r,h_r)|) over GF(q)."""
    from .varieties import strat_count, strat_tables

    F = field_for_order(q)
    T = strat_tables(F, r)
    return strat_count(F, r, "fh", T), strat_count(F, r, "gh", T)


def _require(fp: Fingerprint, name: str):
    if getattr(fp, name) is None:
        raise ValueError(f"fingerprint is missing {name}")


def recover_parameters(fp: Fingerprint):
    """The unique spec with this fingerprint, or an :class:`AmbiguousPair`.

    Steps: L from the G/Z invariants; r_alpha from the parity of dG or the
    power-map marker; the larger r_i from the D_s & Z criterion; n_i from
    ``|D_(p^r_i) & Z| = p^(n_i - r_i)``; the remaining L entries are the
    ells; for p = 2 without Q(n,r) factors the Arf class, or else the
    variety cardinality, separates Q-form from R-form.
    """
    p = fp.prime
    try:
        L = list(L_from_invariants(fp.quotient_invariants))
    except ValueError as exc:
        raise InconsistentFingerprint(str(exc)) from None
    if not L and fp.dG != 1:
        raise InconsistentFingerprint("G/Z(G) is trivial but G is not cyclic")
    if fp.dG % 2:
        r_alpha = 0
    else:
        _require(fp, "r_alpha_marker")
        r_alpha = fp.r_alpha_marker

    if r_alpha == INF:
        q = GroupSpec(p, "Q", (), tuple(L))
        if p != 2:
            return _checked(q, fp)
        r = GroupSpec(2, "R", (), tuple(L[1:]), L[0])
        return _choose_form(q, r, fp)

    _require(fp, "jennings_center")
    jc = fp.jennings_center
    rs = [r_alpha] if r_alpha > 0 else []
    if r_alpha > 0 and r_alpha not in L:
        raise InconsistentFingerprint(f"r_alpha = {r_alpha} is not in L = {L}")
    rs += [t for t in sorted(set(L)) if t > r_alpha and criterion_r(jc, p, t)]
    rs = sorted(rs, reverse=True)
    if r_alpha == 0:
        rs.append(0)
    rest = Counter(L)
    for r in rs:
        if r:
            rest[r] -= 1
    ells = tuple(sorted(rest.elements(), reverse=True))
    pairs = []
    for r in rs:
        if r >= len(jc):
            raise InconsistentFingerprint(f"jennings_center too short for r = {r}")
        pairs.append((r + jc[r][0], r))
    spec = GroupSpec(p, "Q", tuple(pairs), ells)
    return _checked(spec, fp)


def _validated(spec: GroupSpec) -> GroupSpec:
    try:
        return spec.validate()
    except SpecError as exc:
        raise InconsistentFingerprint(f"{format_spec(spec)} violates {exc}") from None


def _checked(spec: GroupSpec, fp: Fingerprint) -> GroupSpec:
    """Validate and confirm the candidate reproduces the group-side entries."""
    spec = _validated(spec)
    if spec.form == "Q":
        ref = formula_fingerprint(spec)
        for k in GROUP_FIELDS:
            if k == "jennings_center" and fp.jennings_center is None:
                continue
            if getattr(ref, k) != getattr(fp, k):
                raise InconsistentFingerprint(f"{format_spec(spec)} gives {k} = {getattr(ref, k)}, fingerprint has {getattr(fp, k)}")
    else:
        sp = structure_formula(spec)
        for k in ("exponent", "dG", "zeta", "delta"):
            if getattr(sp, k) != getattr(fp, k):
                raise InconsistentFingerprint(f"{format_spec(spec)} gives {k} = {getattr(sp, k)}")
    return spec


def _choose_form(q: GroupSpec, r: GroupSpec, fp: Fingerprint):
    q = _checked(q, fp)
    r = _checked(r, fp)
    if fp.arf_class is not None:
        return q if fp.arf_class == 0 else r
    if fp.variety_cardinality is not None and fp.field_order is not None:
        from .groupalgebra import lambda5_setting

        _, rr = lambda5_setting(q)
        fh, gh = variety_counts(fp.field_order, rr)
        if fh != gh:
            if fp.variety_cardinality == fh:
                return q
            if fp.variety_cardinality == gh:
                return r
            raise InconsistentFingerprint(
                f"variety cardinality {fp.variety_cardinality} matches neither {fh} nor {gh}"
            )
    return AmbiguousPair(q, r)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class SameGroup:
    def __str__(self):
        return "SameGroup"


@dataclass(frozen=True)
class DistinguishedBy:
    invariant: str
    detail: str = ""

    def __str__(self):
        return f"DistinguishedBy({self.invariant})"


@dataclass(frozen=True)
class Undecided:
    reason: str = ""

    def __str__(self):
        return "Undecided"


def top_homocyclic_rank(spec: GroupSpec) -> int:
    """m(G): number of cyclic factors of maximal order in G/Z(G)."""
    return structure_formula(spec).mG


def is_residual_pair(a: GroupSpec, b: GroupSpec) -> bool:
    """Q-form without Q(n,r) factors against an R-form with the same L."""
    if a.prime != 2 or b.prime != 2:
        return False
    for x, y in ((a, b), (b, a)):
        if x.form == "Q" and not x.qpairs and y.form == "R":
            return structure_formula(x).L == structure_formula(y).L
    return False


def mip_verdict(specA: GroupSpec, specB: GroupSpec, F: FieldSpec | None = None, *,
                use_varieties: bool = True, algebra: bool = True, seed: int = 0):
    """SameGroup, the first fingerprint entry that separates the groups,
    or Undecided in the residual case when no discriminator applies."""
    specA, specB = specA.validate(), specB.validate()
    if specA.prime != specB.prime:
        return DistinguishedBy("prime")
    if specA == specB:
        return SameGroup()
    F = F or field_for_order(specA.prime)
    fa = fingerprint(specA, F, algebra=False)
    fb = fingerprint(specB, F, algebra=False)
    for k in GROUP_FIELDS[1:]:
        va, vb = getattr(fa, k), getattr(fb, k)
        if va is not None and vb is not None and va != vb:
            return DistinguishedBy(k, f"{va} vs {vb}")
    ma, mb = _marker(specA, F, algebra, seed), _marker(specB, F, algebra, seed)
    if ma != mb:
        return DistinguishedBy("r_alpha_marker", f"{ma} vs {mb}")
    if not is_residual_pair(specA, specB):
        # parameters are recovered uniquely from the entries above
        raise AssertionError(f"{specA} and {specB} share every entry outside the residual case")
    if not has_cube_root_of_unity(F):
        ca = arf_class_of(make_group(specA), F, seed) if algebra else _expected_arf(specA)
        cb = arf_class_of(make_group(specB), F, seed) if algebra else _expected_arf(specB)
        if ca != cb:
            return DistinguishedBy("arf_class", f"{ca} vs {cb}")
    if use_varieties and F.p == 2 and F.q <= 256:
        from .groupalgebra import lambda5_setting

        _, r = lambda5_setting(specA)
        fh, gh = variety_counts(F.q, r)
        if fh != gh:
            return DistinguishedBy("variety_cardinality", f"|V(f_{r},h_{r})| = {fh} != |V(g_{r},h_{r})| = {gh}")
    if top_homocyclic_rank(specA) <= 2:
        return DistinguishedBy("m(G)<=2", "isomorphic algebras force isomorphic groups when m(G) <= 2")
    return Undecided("Q-form / R-form pair with the same L; no discriminator over this field")


def _expected_arf(spec):
    return 1 if spec.form == "R" else 0


def _marker(spec: GroupSpec, F: FieldSpec, algebra: bool, seed: int):
    if algebra and _log_order(spec) * math.log2(spec.prime) < 62:
        G = make_group(spec)
        sp = structure_formula(spec)
        try:
            return marker_algebra(G, F, sp.L, sp.exponent, seed)[0]
        except BoundExceeded:
            pass
    return marker_formula(spec)
