import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclic_mip.finitefield import (
    DEFAULT_MODULI,
    FieldSpec,
    clmul,
    ff_make,
    field_for_order,
    has_cube_root_of_unity,
    is_irreducible_gf2,
    is_prime,
)

FIELDS = [field_for_order(q) for q in (2, 3, 4, 5, 8, 16, 256)]


def elems(F):
    return st.integers(0, F.q - 1)


@pytest.mark.parametrize("m", sorted(DEFAULT_MODULI))
def test_default_moduli_irreducible(m):
    assert is_irreducible_gf2(DEFAULT_MODULI[m])


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(2, 2, 0b101)  # x^2 + 1 = (x + 1)^2


def test_bad_parameters():
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        FieldSpec(3, 2)
    with pytest.raises(ValueError):
        field_for_order(6)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_clmul_small():
    assert clmul(0b11, 0b11) == 0b101
    assert clmul(0b101, 0b110) == 0b11110


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"GF{F.q}")
def test_multiplicative_group(F):
    xs = list(range(1, F.q))
    for a in xs:
        assert F.mul(a, F.inv(a)) == 1
    T = F.mul_table
    assert sorted(T[1:, 1:][0]) == xs
    # every nonzero row is a permutation of the nonzero elements
    for a in xs:
        assert sorted(T[a, 1:].tolist()) == xs
    assert all(F.pow(a, F.q - 1) == 1 for a in xs)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: f"GF{F.q}")
def test_field_axioms(F):
    @given(elems(F), elems(F), elems(F))
    def check(a, b, c):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        assert F.add(a, F.neg(a)) == 0

    check()


@pytest.mark.parametrize("q", [2, 4, 8, 16, 256])
def test_frobenius_and_roots(q):
    F = field_for_order(q)
    for a in range(q):
        assert F.frobenius(a) == F.sqr(a) == F.mul(a, a)
        assert F.sqr(F.sqrt(a)) == a
        assert F.frobenius(a, F.m) == a
    # trace is additive, onto GF(2), and kills x^2 + x
    tr = [F.trace(a) for a in range(q)]
    assert set(tr) == {0, 1}
    assert sum(tr) == q // 2
    assert all(F.trace(F.add(F.sqr(a), a)) == 0 for a in range(q))


def test_vectorized_ops():
    F = field_for_order(16)
    a = np.arange(16)
    b = (a * 7) % 16
    assert F.mul(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert F.add(a, b).tolist() == [int(x) ^ int(y) for x, y in zip(a, b)]


@pytest.mark.parametrize("m", range(1, 9))
def test_cube_root_iff_even_degree(m):
    F = ff_make(2, m)
    roots = [x for x in range(F.q) if F.add(F.add(F.sqr(x), x), 1) == 0]
    assert has_cube_root_of_unity(F) == bool(roots) == (m % 2 == 0)
