"""Reduced row echelon bases over prime fields.

Rows over GF(2) are bit-packed into uint64 words; batch reduction against a
basis is a single modular matrix product done in floating point (exact,
since every partial sum stays below 2^24).  Pivots sit on the lowest
nonzero column of each row, so bases are canonical: two spanning sets of
the same space give identical echelon rows.

Vectors with coefficients in GF(2^m) are handled plane by plane with
:func:`reduce_planes`; this is exact for subspaces spanned by GF(2)-rational
vectors, which is the only kind the group-algebra code builds.
"""

from __future__ import annotations

import numpy as np

CHUNK = 2048


def pack_bits(V: np.ndarray) -> np.ndarray:
    V = np.atleast_2d(np.asarray(V)) & 1
    k, n = V.shape
    W = (n + 63) // 64
    buf = np.zeros((k, W * 8), dtype=np.uint8)
    buf[:, : (n + 7) // 8] = np.packbits(V.astype(np.uint8), axis=1, bitorder="little")
    return buf.view("<u8")


def unpack_bits(P: np.ndarray, n: int) -> np.ndarray:
    P = np.ascontiguousarray(P, dtype="<u8")
    return np.unpackbits(P.view(np.uint8), axis=1, count=n, bitorder="little")


def _matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) mod p for small nonnegative integer matrices, via BLAS."""
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    bound = A.shape[1] * (p - 1) ** 2
    if bound < 1 << 24:
        C = A.astype(np.float32) @ B.astype(np.float32)
    else:
        C = A.astype(np.float64) @ B.astype(np.float64)
    return np.mod(C, p).astype(np.int64)


def _rref_dense(A: np.ndarray, p: int):
    """In-place RREF over GF(p) of a small dense int matrix."""
    A = np.mod(A, p).astype(np.int64)
    k, n = A.shape
    piv = []
    r = 0
    for c in range(n):
        if r == k:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows] = (A[rows] - col[rows, None] * A[r]) % p
        piv.append(c)
        r += 1
    return A[:r], np.array(piv, dtype=np.int64)


def _rref_packed(A: np.ndarray, n: int):
    """RREF over GF(2) of bit-packed rows."""
    A = A.copy()
    k = A.shape[0]
    piv = []
    r = 0
    for c in range(n):
        if r == k:
            break
        w, b = divmod(c, 64)
        bit = np.uint64(1) << np.uint64(b)
        col = (A[:, w] & bit) != 0
        below = np.flatnonzero(col[r:])
        if below.size == 0:
            continue
        i = r + below[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
            col[[r, i]] = col[[i, r]]
        col[r] = False
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows, w:] ^= A[r, w:]
        piv.append(c)
        r += 1
    return A[:r], np.array(piv, dtype=np.int64)


class Echelon:
    """A subspace of GF(p)^n held as reduced row echelon rows."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.pivots = np.zeros(0, dtype=np.int64)
        if p == 2:
            self._rows = np.zeros((0, (n + 63) // 64), dtype="<u8")
        else:
            self._rows = np.zeros((0, n), dtype=np.int64)
        self._dense_cache = None

    @classmethod
    def span(cls, p: int, n: int, V) -> "Echelon":
        E = cls(p, n)
        E.add(V)
        return E

    def copy(self) -> "Echelon":
        E = Echelon(self.p, self.n)
        E.pivots = self.pivots.copy()
        E._rows = self._rows.copy()
        return E

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return self.dim

    @property
    def rows(self) -> np.ndarray:
        """Dense echelon rows (dim x n, entries in [0, p))."""
        if self._dense_cache is None:
            if self.p == 2:
                self._dense_cache = unpack_bits(self._rows, self.n).astype(np.int64)
            else:
                self._dense_cache = self._rows
        return self._dense_cache

    def _reduce_packed(self, P: np.ndarray) -> np.ndarray:
        if self.dim == 0 or P.shape[0] == 0:
            return P
        M = unpack_bits(P, self.n)[:, self.pivots]
        C = _matmul_mod(M, self.rows, 2)
        return P ^ pack_bits(C)

    def reduce(self, V) -> np.ndarray:
        """Normal form of each row of V modulo the subspace (zero at pivots)."""
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        if self.dim == 0:
            return np.mod(V, self.p)
        out = np.empty(V.shape, dtype=np.int64)
        for s in range(0, V.shape[0], CHUNK):
            block = np.mod(V[s : s + CHUNK], self.p)
            if self.p == 2:
                out[s : s + CHUNK] = unpack_bits(self._reduce_packed(pack_bits(block)), self.n)
            else:
                out[s : s + CHUNK] = np.mod(block - _matmul_mod(block[:, self.pivots], self.rows, self.p), self.p)
        return out

    def contains(self, V) -> np.ndarray:
        return ~np.any(self.reduce(V), axis=1)

    def coordinates(self, V) -> np.ndarray:
        """Coefficients of vectors *in* the span with respect to the echelon rows."""
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        if not self.contains(V).all():
            raise ValueError("vector not in span")
        return np.mod(V[:, self.pivots], self.p)

    def add(self, V) -> "Echelon":
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        if V.size == 0:
            return self
        for s in range(0, V.shape[0], CHUNK):
            self._add_block(np.mod(V[s : s + CHUNK], self.p))
        return self

    def _add_block(self, V):
        p = self.p
        if p == 2:
            R = self._reduce_packed(pack_bits(V))
            R = R[np.any(R != 0, axis=1)]
            if R.shape[0] == 0:
                return
            new, npiv = _rref_packed(R, self.n)
            if self.dim:
                M = unpack_bits(self._rows, self.n)[:, npiv]
                old = self._rows ^ pack_bits(_matmul_mod(M, unpack_bits(new, self.n), 2))
            else:
                old = self._rows
        else:
            R = self.reduce(V)
            R = R[np.any(R != 0, axis=1)]
            if R.shape[0] == 0:
                return
            new, npiv = _rref_dense(R, p)
            if self.dim:
                old = np.mod(self._rows - _matmul_mod(self._rows[:, npiv], new, p), p)
            else:
                old = self._rows
        rows = np.concatenate([old, new])
        piv = np.concatenate([self.pivots, npiv])
        order = np.argsort(piv, kind="stable")
        self._rows = rows[order]
        self.pivots = piv[order]
        self._dense_cache = None

    def __le__(self, other: "Echelon") -> bool:
        return self.dim == 0 or bool(other.contains(self.rows).all())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Echelon)
            and self.p == other.p
            and np.array_equal(self.pivots, other.pivots)
            and np.array_equal(self.rows, other.rows)
        )

    def __add__(self, other: "Echelon") -> "Echelon":
        E = self.copy()
        E.add(other.rows)
        return E


def reduce_planes(E: Echelon, V: np.ndarray, m: int) -> np.ndarray:
    """Reduce GF(2^m) vectors (int bit-vector entries) modulo a GF(2)-rational
    subspace by reducing each coefficient bit plane separately."""
    V = np.atleast_2d(np.asarray(V, dtype=np.int64))
    out = np.zeros_like(V)
    for b in range(m):
        plane = (V >> b) & 1
        if plane.any():
            out |= E.reduce(plane) << b
    return out


def solve_gf(F, A: np.ndarray, b: np.ndarray):
    """One solution of A x = b over a field F (or None), by Gaussian
    elimination with F's scalar arithmetic.  Meant for small systems."""
    A = [[int(v) for v in row] for row in np.asarray(A).tolist()]
    b = [int(v) for v in np.asarray(b).tolist()]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [A[i] + [b[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if M[i][c]), None)
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, v) for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][cols] for i in range(r, rows)):
        return None
    x = [0] * cols
    for i, c in enumerate(piv_cols):
        x[c] = M[i][cols]
    return x


def in_span_gf(F, vectors: list, target) -> bool:
    """Whether ``target`` lies in the F-span of ``vectors`` (small dims)."""
    if not any(int(t) for t in target):
        return True
    if not vectors:
        return False
    A = np.array(vectors, dtype=np.int64).T
    return solve_gf(F, A, np.asarray(target)) is not None
