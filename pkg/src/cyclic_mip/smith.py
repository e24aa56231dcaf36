"""Smith normal form over the integers, for abelian group invariants."""

from __future__ import annotations

import numpy as np


def smith_diagonal(M) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix (nonzero ones only)."""
    A = [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()] if np.size(M) else []
    if not A:
        return []
    rows, cols = len(A), len(A[0])
    out = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            piv = A[t][t]
            for i in range(t + 1, rows):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # divisibility: fold in any entry the pivot does not divide
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % piv]
                if not bad:
                    break
                i, _ = bad[0]
                A[t] = [a + b for a, b in zip(A[t], A[i])]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        out.append(abs(A[t][t]))
        t += 1
    return out


def abelian_invariants(relations) -> list[int]:
    """Orders of the cyclic factors of Z^n / (row span of ``relations``),
    finite factors only, in divisibility order."""
    return [d for d in smith_diagonal(relations) if d != 1]
