import itertools

import numpy as np
from hypothesis import given, strategies as st

from cyclic_mip.finitefield import field_for_order
from cyclic_mip.linalg import Echelon, in_span_gf, pack_bits, reduce_planes, solve_gf, unpack_bits


def span_set(p, V):
    """All vectors of the span, by enumerating coefficient tuples."""
    V = np.atleast_2d(np.asarray(V, dtype=np.int64))
    out = set()
    for c in itertools.product(range(p), repeat=V.shape[0]):
        out.add(tuple(np.mod(np.array(c) @ V, p).tolist()))
    return out


def matrices(p, n, rows=5):
    return st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=1, max_size=rows)


@given(st.lists(st.lists(st.integers(0, 1), min_size=70, max_size=70), min_size=1, max_size=4))
def test_pack_roundtrip(V):
    V = np.array(V)
    assert np.array_equal(unpack_bits(pack_bits(V), 70), V)


@given(st.sampled_from([2, 3]), st.data())
def test_echelon_matches_enumerated_span(p, data):
    n = 6
    V = np.array(data.draw(matrices(p, n)))
    W = np.array(data.draw(matrices(p, n, rows=3)))
    E = Echelon.span(p, n, V)
    S = span_set(p, V)
    assert p**E.dim == len(S)
    assert span_set(p, E.rows) == S
    inside = E.contains(W)
    assert inside.tolist() == [tuple(w) in S for w in W.tolist()]
    # reduction changes a vector by an element of the span
    R = E.reduce(W)
    for w, r in zip(W, R):
        assert tuple(np.mod(w - r, p).tolist()) in S
        assert not r[E.pivots].any()


def test_incremental_equals_batch():
    rng = np.random.default_rng(1)
    V = rng.integers(0, 2, size=(40, 130))
    E = Echelon(2, 130)
    for row in V:
        E.add(row)
    assert E == Echelon.span(2, 130, V)
    assert E <= Echelon.span(2, 130, np.eye(130, dtype=np.int64))


def test_coordinates():
    E = Echelon.span(3, 4, [[1, 2, 0, 1], [0, 1, 1, 2]])
    v = np.mod(2 * np.array([1, 2, 0, 1]) + np.array([0, 1, 1, 2]), 3)
    c = E.coordinates(v)
    assert np.array_equal(np.mod(c @ E.rows, 3), np.atleast_2d(v))


def test_reduce_planes():
    F = field_for_order(4)
    E = Echelon.span(2, 3, [[1, 1, 0]])
    # (w, w, 0) lies in the GF(4)-span of a rational vector
    assert not reduce_planes(E, [[2, 2, 0], [3, 3, 0]], F.m).any()
    assert reduce_planes(E, [[2, 0, 0]], F.m).any()


def test_solve_gf():
    F = field_for_order(4)
    A = np.array([[1, 2], [2, 1]])
    x = solve_gf(F, A, [1, 0])
    assert [F.add(F.mul(1, x[0]), F.mul(2, x[1])), F.add(F.mul(2, x[0]), F.mul(1, x[1]))] == [1, 0]
    assert solve_gf(F, [[1, 1], [1, 1]], [0, 1]) is None
    assert in_span_gf(F, [[1, 2]], [2, 3])
    assert not in_span_gf(F, [[1, 2]], [1, 1])
