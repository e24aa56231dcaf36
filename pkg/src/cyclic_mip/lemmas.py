"""Executable property suites, one per structural statement the
algorithms rely on.  Each suite returns a :class:`LemmaReport` listing the
cases it checked and the number of failures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .battery import battery
from .finitefield import FieldSpec, field_for_order
from .pgroup import (
    GroupSpec,
    agemo,
    center,
    format_spec,
    jennings,
    make_group,
    nu_profile,
    parse_spec,
    structure_formula,
)


@dataclass
class LemmaReport:
    name: str
    title: str
    cases: list = field(default_factory=list)  # dicts with at least "case" and "failures"

    @property
    def failures(self) -> int:
        return sum(c["failures"] for c in self.cases)

    @property
    def passed(self) -> bool:
        return bool(self.cases) and self.failures == 0

    def add(self, case: str, failures: int, **info):
        self.cases.append({"case": case, "failures": int(failures), **info})

    def to_dict(self) -> dict:
        return {"name": self.name, "title": self.title, "passed": self.passed,
                "failures": self.failures, "cases": self.cases}


def _specs(specs):
    return [parse_spec(s) if isinstance(s, str) else s for s in specs]


def default_groups(deep: bool = False) -> list[GroupSpec]:
    return battery(14, 8) if deep else battery(10, 6)


# ---------------------------------------------------------------------------
# group side


def _pow_array(G, x, k):
    """Elementwise ``x[i]^k[i]`` by binary powering."""
    x = np.asarray(x, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    out = np.zeros_like(x)
    while k.any():
        odd = (k & 1).astype(bool)
        out[odd] = G.mul(out[odd], x[odd])
        k = k >> 1
        x = G.mul(x, x)
    return out


def power_identity(specs, triples: int = 10_000, seed: int = 0) -> LemmaReport:
    """``(gh)^n = g^n h^n [h,g]^(n(n-1)/2)`` on random triples."""
    rep = LemmaReport("2.3", "power identity in class 2")
    rng = np.random.default_rng(seed)
    for spec in _specs(specs):
        G = make_group(spec)
        g = rng.integers(0, G.order, size=triples)
        h = rng.integers(0, G.order, size=triples)
        top = G.p ** (structure_formula(spec).exponent + 1)
        ns = rng.integers(1, 2 * top + 1, size=triples)
        k = ns * (ns - 1) // 2
        lhs = _pow_array(G, G.mul(g, h), ns)
        rhs = G.mul(G.mul(_pow_array(G, g, ns), _pow_array(G, h, ns)), _pow_array(G, G.comm(h, g), k))
        bad = int(np.count_nonzero(lhs != rhs))
        rep.add(format_spec(spec), bad, triples=triples)
    return rep


def agemo_center(specs) -> LemmaReport:
    """``G^(p^t) & Z = Z^(p^nu(t))`` for t = 1..exponent, and with mu(t)
    in place of nu(t) once ``t >= r_alpha`` (Q-form groups)."""
    rep = LemmaReport("3.2", "G^(p^t) & Z(G) from the parameters")
    for spec in _specs(specs):
        if spec.form != "Q":
            continue
        G = make_group(spec)
        Z = center(G)
        sp = structure_formula(spec)
        r_alpha = spec.qpairs[-1][1] if spec.qpairs else None
        ts, bad = [], 0
        for t in range(1, sp.exponent + 1):
            got = sp.zeta - (agemo(G, t) & Z).log_order
            nu = nu_profile(spec, t)
            bad += got != nu.nu
            if r_alpha is not None and t >= r_alpha:
                bad += got != nu.mu
            ts.append(t)
        rep.add(format_spec(spec), bad, t_values=ts)
    return rep


def jennings_center(specs) -> LemmaReport:
    """``D_(p^t) & Z = Z^(p^nu(t))``, ``D_(p^t+1) & Z = Z^(p^nu~(t))``, and
    ``D_(p^t+1) & Z = D_(p^(t+1)) & Z`` once ``t + 1 >= r_alpha``."""
    rep = LemmaReport("3.3", "D_s(G) & Z(G) from the parameters")
    for spec in _specs(specs):
        if spec.form != "Q":
            continue
        G = make_group(spec)
        Z = center(G)
        sp = structure_formula(spec)
        r_alpha = spec.qpairs[-1][1] if spec.qpairs else None
        ts, bad = [], 0
        logs = {}
        for t in range(1, sp.exponent + 2):
            s = G.p**t
            logs[s] = (jennings(G, s) & Z).log_order
            logs[s + 1] = (jennings(G, s + 1) & Z).log_order
        for t in range(1, sp.exponent + 1):
            s = G.p**t
            nu = nu_profile(spec, t)
            bad += logs[s] != sp.zeta - nu.nu
            bad += logs[s + 1] != sp.zeta - nu.nu_tilde
            if r_alpha is not None and t + 1 >= r_alpha:
                bad += logs[s + 1] != logs[G.p ** (t + 1)]
            ts.append(t)
        rep.add(format_spec(spec), bad, t_values=ts)
    return rep


def criterion_r(specs) -> LemmaReport:
    """For ``t > r_alpha``: ``t`` is one of the r_i iff
    ``p|D_(p^(t+1)) & Z| = |D_(p^t) & Z| = |D_(p^(t-1)) & Z|``."""
    from .recover import criterion_r as crit
    from .recover import jennings_center_enumerated

    rep = LemmaReport("3.7", "the D_s & Z criterion for the r_i")
    for spec in _specs(specs):
        if spec.form != "Q" or not spec.qpairs:
            continue
        G = make_group(spec)
        sp = structure_formula(spec)
        jc = jennings_center_enumerated(G, sp.exponent + 1)
        rs = {r for _, r in spec.qpairs}
        r_alpha = spec.qpairs[-1][1]
        ts = list(range(max(1, r_alpha + 1), sp.exponent + 1))
        bad = sum(crit(jc, G.p, t) != (t in rs) for t in ts)
        rep.add(format_spec(spec), bad, t_values=ts)
    return rep


def jennings_identity(specs, F: FieldSpec | None = None) -> LemmaReport:
    """``I^s & (G - 1) = D_s - 1`` with I^s built as a span of products."""
    from .groupalgebra import IdealEvaluator, g_minus_1

    rep = LemmaReport("jennings", "I^s & (G-1) = D_s - 1")
    for spec in _specs(specs):
        G = make_group(spec)
        Fp = F or field_for_order(G.p)
        ev = IdealEvaluator(G, Fp)
        V = np.array([g_minus_1(G, g, G.p) for g in range(G.order)])
        bad, s = 0, 1
        while True:
            D = jennings(G, s)
            E = ev.evaluate(f"I^{s}")
            inside = E.E.contains(V)
            bad += int(np.count_nonzero(inside != D.mask))
            if D.order == 1:
                break
            s += 1
        rep.add(format_spec(spec), bad, s_values=list(range(1, s + 1)))
    return rep


# ---------------------------------------------------------------------------
# algebra side


def frobenius(specs, F: FieldSpec | None = None) -> LemmaReport:
    """``x -> x^p`` from I/I^2 to I^p/I^(p+1) is additive and multiplicative."""
    from .groupalgebra import frobenius_report

    rep = LemmaReport("3.5", "p-power map on I/I^2 is a ring homomorphism")
    for spec in _specs(specs):
        G = make_group(spec)
        Fp = F or field_for_order(G.p)
        r = frobenius_report(G, Fp, max_pairs=1 << 16)
        rep.add(format_spec(spec), r.additive_failures + r.multiplicative_failures,
                pairs=r.pairs, exhaustive=r.exhaustive, product_pairs=r.product_pairs)
    return rep


def _lambda_groups(deep: bool):
    out = ["Q p=2 [] [1,1]", "R p=2 n=1 [1]"]
    if deep:
        out += ["Q p=2 [] [2,2]", "R p=2 n=2 [2]"]
    return out


def lambda_steps(specs, F: FieldSpec, samples: int = 100, seed: int = 0) -> LemmaReport:
    """The map on I/(I^3 + I(Omega_(n-1)(G:Z))FG) and each of its squaring
    steps are well defined, and each later step is additive."""
    from .groupalgebra import Lambda5

    rep = LemmaReport("5.2", "squaring steps are well defined and additive")
    for spec in _specs(specs):
        lm = Lambda5(make_group(spec), F)
        rng = np.random.default_rng(seed)
        res = lm.check_well_defined(rng, samples)
        rep.add(format_spec(spec), sum(res.values()), samples=samples, checks=res)
    return rep


def kernel_system(specs, F: FieldSpec, seed: int = 0) -> LemmaReport:
    """The kernel projection equals the solution set of the coefficient
    system, and each constructed element lies in the kernel."""
    from .groupalgebra import lambda5_kernel

    rep = LemmaReport("5.4", "kernel described by the coefficient system")
    for spec in _specs(specs):
        res = lambda5_kernel(make_group(spec), F, seed=seed)
        c = res.checks
        bad = int(not c["system_set_equal"]) + c["system_elements_not_in_kernel"] + c["additivity_failures"]
        rep.add(format_spec(spec), bad, kernel_size=len(res.kernel), system_size=c["system_set_size"])
    return rep


def kernel_variety(specs, F: FieldSpec, seed: int = 0) -> LemmaReport:
    """The kernel projection is V(f_r, h_r) for Q-form and V(g_r, h_r) for
    R-form groups, point by point."""
    from .groupalgebra import lambda5_kernel
    from .varieties import variety_points

    rep = LemmaReport("5.5", "kernel projection equals the variety")
    for spec in _specs(specs):
        res = lambda5_kernel(make_group(spec), F, seed=seed, verify=False)
        pair = "gh" if spec.form == "R" else "fh"
        V = variety_points(F, res.r, pair)
        bad = len(V ^ res.kernel)
        rep.add(format_spec(spec), bad, n=res.n, r=res.r, kernel_size=len(res.kernel),
                variety_size=len(V), points=F.q ** (2 * res.r))
    return rep


# ---------------------------------------------------------------------------
# quadratic forms


def arf_basis_invariance(forms, transforms: int = 1000, seed: int = 0) -> LemmaReport:
    """The Arf class does not change under random changes of basis."""
    from .quadform import arf, compose, random_invertible

    rep = LemmaReport("arf", "Arf class under change of basis")
    rng = np.random.default_rng(seed)
    for B in forms:
        c0 = arf(B).class_bit
        bad = 0
        for _ in range(transforms):
            A = random_invertible(B.F, B.dim, rng)
            bad += arf(compose(B, A)).class_bit != c0
        rep.add(str(B), bad, transforms=transforms)
    return rep


def similarity_invariance(forms, trials: int = 1000, seed: int = 0) -> LemmaReport:
    """Similar non-singular forms ``s B(Av)`` have the same Arf class."""
    from .quadform import arf, compose, random_invertible, scale

    rep = LemmaReport("4.1", "Arf class under similarity")
    rng = np.random.default_rng(seed)
    for B in forms:
        F = B.F
        c0 = arf(B).class_bit
        bad = 0
        for _ in range(trials):
            A = random_invertible(F, B.dim, rng)
            s = int(rng.integers(1, F.q))
            bad += arf(scale(compose(B, A), s)).class_bit != c0
        rep.add(str(B), bad, trials=trials)
    return rep


# ---------------------------------------------------------------------------
# dispatch


LEMMAS = ("2.3", "3.2", "3.3", "3.5", "3.7", "5.2", "5.4", "5.5")


def verify_lemma(name: str, spec: str | GroupSpec | None = None, field_order: int | None = None,
                 seed: int = 0, deep: bool = False) -> LemmaReport:
    """Run one suite on a given spec or on its default battery."""
    if name not in LEMMAS:
        raise ValueError(f"unknown lemma {name!r}; choose from {', '.join(LEMMAS)}")
    specs = [spec] if spec is not None else None
    if name in ("2.3", "3.2", "3.3", "3.7"):
        specs = specs or default_groups(deep)
        if name == "2.3":
            return power_identity(specs, seed=seed)
        if name == "3.2":
            return agemo_center(specs)
        if name == "3.3":
            return jennings_center(specs)
        return criterion_r(specs)
    if name == "3.5":
        specs = specs or ["Q p=3 [(2,1)] []", "Q p=3 [(3,1)] []"]
        F = field_for_order(field_order) if field_order else None
        return frobenius(specs, F)
    F = field_for_order(field_order or 4)
    specs = specs or _lambda_groups(deep)
    if name == "5.2":
        return lambda_steps(specs, F, seed=seed)
    if name == "5.4":
        return kernel_system(specs, F, seed=seed)
    return kernel_variety(specs, F, seed=seed)
