import itertools

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from cyclic_mip.finitefield import field_for_order
from cyclic_mip.quadform import (
    QuadraticForm,
    anisotropic_plus_hyperbolic,
    arf,
    check_symplectic,
    compose,
    format_form,
    hyperbolic_form,
    kernel,
    parse_form,
    polar,
    random_invertible,
    scale,
    similar_class_check,
    symplectic_basis,
)


def zero_count(B):
    F = B.F
    return sum(1 for v in itertools.product(range(F.q), repeat=B.dim) if B(v) == 0)


def class_by_counting(B):
    """Class of a nondegenerate form from its number of zeros."""
    q, k = B.F.q, B.dim // 2
    z = zero_count(B)
    plus = q ** (2 * k - 1) + q**k - q ** (k - 1)
    minus = q ** (2 * k - 1) - q**k + q ** (k - 1)
    assert z in (plus, minus)
    return 0 if z == plus else 1


def forms(q, dim):
    F = field_for_order(q)
    n = dim * (dim + 1) // 2
    return st.lists(st.integers(0, q - 1), min_size=n, max_size=n).map(lambda c: _upper(F, dim, c))


def _upper(F, d, c):
    M = np.zeros((d, d), dtype=np.int64)
    M[np.triu_indices(d)] = c
    return QuadraticForm.from_matrix(F, M)


def nondegenerate(B):
    return not kernel(B.F, polar(B))


@pytest.mark.parametrize("q", [2, 4, 8])
@pytest.mark.parametrize("pairs", [1, 2, 3])
def test_standard_forms(q, pairs):
    F = field_for_order(q)
    H = hyperbolic_form(F, pairs)
    A = anisotropic_plus_hyperbolic(F, pairs)
    assert arf(H).class_bit == 0
    assert arf(A).class_bit == (1 if F.m % 2 else arf(A).class_bit)
    if pairs <= 2 and q <= 4:
        assert class_by_counting(H) == 0
        assert class_by_counting(A) == arf(A).class_bit


@pytest.mark.parametrize("q,dim", [(2, 2), (2, 4), (2, 6), (4, 2), (4, 4)])
def test_arf_class_matches_zero_count(q, dim):
    @given(forms(q, dim))
    def check(B):
        assume(nondegenerate(B))
        assert arf(B).class_bit == class_by_counting(B)

    check()


@given(forms(2, 4))
def test_symplectic_basis_is_symplectic(B):
    assume(nondegenerate(B))
    F = B.F
    C = polar(B)
    S = symplectic_basis(F, C)
    assert check_symplectic(F, C, S)


@pytest.mark.parametrize("q", [2, 4])
def test_basis_and_similarity_invariance(q):
    F = field_for_order(q)
    rng = np.random.default_rng(3)
    for B in (hyperbolic_form(F, 2), anisotropic_plus_hyperbolic(F, 2)):
        c = arf(B).class_bit
        for _ in range(50):
            A = random_invertible(F, B.dim, rng)
            s = int(rng.integers(1, q))
            B2 = scale(compose(B, A), s)
            assert arf(B2).class_bit == c
            assert similar_class_check(B, B2)


def test_compose_evaluates_pullback():
    F = field_for_order(4)
    rng = np.random.default_rng(0)
    B = anisotropic_plus_hyperbolic(F, 2)
    A = random_invertible(F, 4, rng)
    BA = compose(B, A)
    for v in itertools.islice(itertools.product(range(4), repeat=4), 0, 256, 7):
        Av = [0] * 4
        for i in range(4):
            for j in range(4):
                Av[i] = F.add(Av[i], F.mul(int(A[i][j]), v[j]))
        assert BA(v) == B(Av)


def test_singular_form_radical():
    F = field_for_order(2)
    B = parse_form(F, "x1*y1 + x2^2")
    res = arf(B)
    assert res.split and res.radical_dim == 1 and res.defective
    B0 = parse_form(F, "x1*y1", names=("x1", "y1", "x2"))
    assert arf(B0).radical_dim == 1 and not arf(B0).defective


def test_parse_format_roundtrip():
    F = field_for_order(4)
    B = parse_form(F, "x0^2+y0^2+x0*y0+sum{x1*y1,x2*y2}")
    assert B.names == ("x0", "y0", "x1", "y1", "x2", "y2")
    assert parse_form(F, format_form(B)) == B
    assert parse_form(F, "3*x1*y1") == parse_form(F, "x1*y1 + 2*x1*y1")
    with pytest.raises(ValueError):
        parse_form(F, "x1 + y1")
    with pytest.raises(ValueError):
        parse_form(F, "x1^3")


def test_arf_needs_characteristic_two():
    with pytest.raises(ValueError):
        arf(hyperbolic_form(field_for_order(3), 1))
