import numpy as np
from hypothesis import given, strategies as st

from cyclic_mip.smith import abelian_invariants, smith_diagonal


def test_known_diagonals():
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert abelian_invariants([[4, 0], [0, 6]]) == [2, 12]
    assert smith_diagonal([[0, 0], [0, 0]]) == []


def _det(M):
    return round(abs(np.linalg.det(np.array(M, dtype=float))))


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_divisibility_chain_and_determinant(M):
    d = smith_diagonal(M)
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert len(d) == np.linalg.matrix_rank(np.array(M, dtype=float))
    prod = 1
    for x in d:
        prod *= x
    assert (prod if len(d) == 3 else 0) == _det(M)
