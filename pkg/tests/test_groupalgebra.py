import numpy as np
import pytest

from cyclic_mip.finitefield import field_for_order
from cyclic_mip.groupalgebra import (
    IdealEvaluator,
    JenningsBasis,
    alg_mul,
    alg_pow,
    augmentation,
    cayley_table,
    expected_lambda_form,
    frobenius_report,
    lambda5_kernel,
    lambda5_setting,
    lambda_form_setting,
    lambda_quadratic_form,
    monomial_ideal,
    omega_power_map,
    parse_ideal,
    quotient_group,
    run_power_map,
)
from cyclic_mip.pgroup import BoundExceeded, SpecError, center, make_group, parse_spec, structure_formula
from cyclic_mip.varieties import variety_points

def group(text):
    return make_group(parse_spec(text))


def test_cayley_table_from_generators():
    G = group("Q p=3 [(2,1)] []")
    xs = G.elements()
    T = cayley_table(G.order, {g: G.mul(xs, g) for g in G.generators() + [G.z]})
    assert np.array_equal(T, G.mul(xs[:, None], xs[None, :]))
    assert not T.flags.writeable
    with pytest.raises(ValueError):
        cayley_table(G.order, {G.z: G.mul(xs, G.z)})


@pytest.mark.parametrize("text", ["Q p=2 [(3,1)] [2]", "R p=2 n=2 [1]", "Q p=3 [(3,1)] []"])
def test_quotient_by_center(text):
    G = group(text)
    Z = center(G)
    Q, proj = quotient_group(G, Z)
    assert Q.order * Z.order == G.order
    xs = G.elements()
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, G.order, 300), rng.integers(0, G.order, 300)
    assert np.array_equal(proj[G.mul(a, b)], Q.mul(proj[a], proj[b]))
    # G/Z is abelian for class 2
    assert np.array_equal(Q.mul(proj[a], proj[b]), Q.mul(proj[b], proj[a]))
    assert len(np.unique(proj[xs])) == Q.order


@pytest.mark.parametrize("q", [2, 3, 4])
def test_algebra_ring_axioms(q):
    F = field_for_order(q)
    G = group("Q p=3 [(2,1)] []" if q == 3 else "Q p=2 [] [1,1]")
    rng = np.random.default_rng(q)
    n = G.order
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    for _ in range(5):
        x, y, w = (rng.integers(0, q, n) for _ in range(3))
        assert np.array_equal(alg_mul(G, F, alg_mul(G, F, x, y), w), alg_mul(G, F, x, alg_mul(G, F, y, w)))
        assert np.array_equal(alg_mul(G, F, x, one), x)
        xy = alg_mul(G, F, x, y)
        assert augmentation(F, xy) == F.mul(augmentation(F, x), augmentation(F, y))
        x3 = alg_mul(G, F, alg_mul(G, F, x, x), x)
        assert np.array_equal(alg_pow(G, F, x, 3), x3)


@pytest.mark.parametrize("text", ["Q p=2 [] [1,1]", "R p=2 n=2 []", "Q p=3 [(2,1)] []", "Q p=2 [(3,1)] []"])
def test_jennings_basis_two_routes(text):
    G = group(text)
    p = G.p
    F = field_for_order(p)
    jb = JenningsBasis(G, z=G.z)
    rng = np.random.default_rng(0)
    V = rng.integers(0, p, size=(4, G.order))
    assert np.array_equal(jb.from_monomial(jb.to_monomial(V)), V)
    ev = IdealEvaluator(G, F)
    for s in range(1, jb.weight.max() + 2):
        E = ev.evaluate(f"I^{s}")
        M = monomial_ideal(jb, F, f"I^{s}")
        assert E.dim == M.dim
        assert E.contains(M.basis_vectors()).all()
    for b in range(1, len(jb.zpows) + 1):
        text = "*".join(["I(Z)"] * b)
        E = ev.evaluate(text)
        M = monomial_ideal(jb, F, text)
        assert E.dim == M.dim
        assert E.contains(M.basis_vectors()).all()


def test_parse_ideal():
    e = parse_ideal("I(Omega(1,Z))*FG + I^4")
    assert str(parse_ideal(str(e))) == str(e)
    ev = IdealEvaluator(group("Q p=2 [] [1,1]"), field_for_order(2))
    assert ev.evaluate("I(Z)*FG").E == ev.evaluate("I(Z)").E
    assert ev.evaluate("I + I^2").E == ev.evaluate("I").E
    for bad in ("I(", "I^^2", "X + I", "I(Omega(1))"):
        with pytest.raises(ValueError):
            parse_ideal(bad)


def test_algebra_bound():
    with pytest.raises(BoundExceeded):
        IdealEvaluator(group("Q p=2 [(5,1)] [4]"), field_for_order(2))


@pytest.mark.parametrize(
    "text,cls",
    [("Q p=2 [] [2]", 0), ("R p=2 n=2 []", 1), ("Q p=2 [] [2,1]", 0), ("R p=2 n=2 [1]", 1), ("Q p=2 [] [1,1,1]", 0)],
)
def test_lambda_form(text, cls):
    from cyclic_mip.quadform import arf

    spec = parse_spec(text)
    F = field_for_order(2)
    B = lambda_quadratic_form(make_group(spec), F)
    assert B == expected_lambda_form(spec, F)
    assert arf(B).class_bit == cls
    assert lambda_form_setting(spec) == structure_formula(spec).L[0]


def test_lambda_form_outside_setting():
    with pytest.raises(SpecError):
        lambda_form_setting(parse_spec("Q p=2 [(3,1)] [2]"))


@pytest.mark.parametrize("text", ["Q p=3 [(2,1)] []", "Q p=3 [] [1,1]"])
def test_frobenius(text):
    rep = frobenius_report(group(text), field_for_order(3), max_pairs=1 << 16)
    assert rep.ok and rep.exhaustive
    assert rep.additive_failures == rep.multiplicative_failures == 0


@pytest.mark.parametrize(
    "text,t,zero",
    [("Q p=2 [(4,2)] [1]", 1, True), ("Q p=2 [(4,2)] [1]", 2, False), ("Q p=3 [(3,1)] []", 1, False)],
)
def test_omega_power_map_flags(text, t, zero):
    """The map vanishes below r_alpha and not at r_alpha."""
    G = group(text)
    F = field_for_order(G.p)
    pm, shift_fn = omega_power_map(G, F, t)
    res = run_power_map(pm, "enumerate", shift_fn, shifts=10, seed=0)
    assert res.zero_map == zero


@pytest.mark.parametrize("text,pair", [("Q p=2 [] [1,1]", "fh"), ("R p=2 n=1 [1]", "gh")])
def test_lambda5_kernel_is_variety(text, pair):
    spec = parse_spec(text)
    F = field_for_order(4)
    n, r = lambda5_setting(spec)
    res = lambda5_kernel(make_group(spec), F, samples=20)
    assert (res.n, res.r) == (n, r) == (1, 2)
    assert res.kernel == variety_points(F, r, pair)
    assert res.checks["system_set_equal"]
