"""Point counts of the varieties V(f_r, h_r) and V(g_r, h_r) over GF(2^m).

    f_r = sum x_i y_i,   g_r = x_1^2 + y_1^2 + f_r,   h_r = sum x_i y_i (x_i + y_i)

Two independent methods: brute force over all q^(2r) points, and a
stratification through the map psi(x, y) = (x^2 y + x y^2, x y), where
counts for r pairs are an XOR-convolution of the one-pair table with the
(r-1)-pair table.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .finitefield import FieldSpec, field_for_order

BRUTE_BUDGET = 1 << 34

# |V(f_r,h_r)|, |V(g_r,h_r)| as published
TABLE1 = {
    (4, 3): (736, 352),
    (4, 4): (9856, 6784),
    (4, 5): (143872, 119296),
    (4, 6): (2197504, 2000896),
    (16, 3): (118336, 87616),
    (16, 4): (19588096, 18605056),
}


class BudgetExceeded(RuntimeError):
    pass


def _check_field(F: FieldSpec):
    if F.p != 2:
        raise ValueError("varieties are defined here over fields of characteristic 2")
    if F.q > 256:
        raise ValueError("point counting needs q <= 256")


def pair_tables(F: FieldSpec):
    """``H[x,y] = x^2 y + x y^2``, ``P[x,y] = x y``, ``S[x,y] = x^2 + y^2 + x y``."""
    _check_field(F)
    M = F.mul_table.astype(np.int64)
    x = np.arange(F.q)
    P = M
    H = M[M[x[:, None], x[:, None]], x[None, :]] ^ M[x[:, None], M[x[None, :], x[None, :]]]
    sq = M[x, x]
    S = sq[:, None] ^ sq[None, :] ^ M
    return H, P, S


def poly_values(F: FieldSpec, pts: np.ndarray, pair: str):
    """Values of (h_r, f_r) or (h_r, g_r) at the rows of ``pts`` (length 2r)."""
    H, P, S = pair_tables(F)
    pts = np.atleast_2d(pts)
    r = pts.shape[1] // 2
    h = np.zeros(pts.shape[0], dtype=np.int64)
    f = np.zeros(pts.shape[0], dtype=np.int64)
    for i in range(r):
        x, y = pts[:, 2 * i], pts[:, 2 * i + 1]
        h ^= H[x, y]
        f ^= (S if (pair == "gh" and i == 0) else P)[x, y]
    return h, f


def in_variety(F: FieldSpec, point, pair: str) -> bool:
    h, f = poly_values(F, np.asarray(point)[None, :], pair)
    return bool(h[0] == 0 and f[0] == 0)


def variety_points(F: FieldSpec, r: int, pair: str) -> set:
    total = F.q ** (2 * r)
    if total > 1 << 22:
        raise BudgetExceeded("too many points to list")
    idx = np.arange(total)
    pts = (idx[:, None] // F.q ** np.arange(2 * r - 1, -1, -1)[None, :]) % F.q
    h, f = poly_values(F, pts, pair)
    return {tuple(int(v) for v in p) for p in pts[(h == 0) & (f == 0)]}


def _brute_chunk(args):
    q, m, modulus, r, pair, start, stop = args
    F = FieldSpec(2, m, modulus)
    idx = np.arange(start, stop, dtype=np.int64)
    pts = (idx[:, None] // q ** np.arange(2 * r - 1, -1, -1, dtype=np.int64)[None, :]) % q
    h, f = poly_values(F, pts, pair)
    return int(np.count_nonzero((h == 0) & (f == 0)))


def brute_count(F: FieldSpec, r: int, pair: str, budget: int = BRUTE_BUDGET,
                workers: int = 1, chunk: int = 1 << 21) -> int:
    """Exact count by evaluating both polynomials at every point."""
    _check_field(F)
    if pair not in ("fh", "gh"):
        raise ValueError("pair must be 'fh' or 'gh'")
    total = F.q ** (2 * r)
    if total > budget:
        raise BudgetExceeded(f"q^(2r) = {total} exceeds the brute-force budget {budget}; use strat_count")
    jobs = [(F.q, F.m, F.modulus, r, pair, s, min(total, s + chunk)) for s in range(0, total, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            return sum(ex.map(_brute_chunk, jobs))
    return sum(_brute_chunk(j) for j in jobs)


# -- stratification -------------------------------------------------------------


def level1_scan(F: FieldSpec, which: str = "X") -> np.ndarray:
    """``T[a, b]`` = number of (x, y) with ``(x^2y+xy^2, xy) = (a, b)``
    (``which='X'``) or ``(x^2y+xy^2, x^2+y^2+xy) = (a, b)`` (``'Y'``)."""
    H, P, S = pair_tables(F)
    second = P if which == "X" else S
    T = np.zeros((F.q, F.q), dtype=np.int64)
    np.add.at(T, (H.ravel(), second.ravel()), 1)
    return T


def astar_members(F: FieldSpec) -> np.ndarray:
    """Mask of A*: pairs (a, b), a, b != 0, with ``b x^2 + a x + b^2`` having a root.

    With ``x = (a/b) u`` the equation becomes ``u^2 + u = b^3/a^2``, which is
    solvable iff that element has trace 0.
    """
    q = F.q
    mask = np.zeros((q, q), dtype=bool)
    for a in range(1, q):
        a2 = F.sqr(a)
        for b in range(1, q):
            mask[a, b] = F.trace(F.div(F.mul(F.sqr(b), b), a2)) == 0
    return mask


def level1_closed_form(F: FieldSpec) -> np.ndarray:
    """Fibre sizes of psi: 2q-1 over (0,0), 1 over (0,b != 0), 2 over A*, 0 else."""
    q = F.q
    T = np.zeros((q, q), dtype=np.int64)
    T[0, 0] = 2 * q - 1
    T[0, 1:] = 1
    T[astar_members(F)] = 2
    return T


def astar_count(F: FieldSpec) -> int:
    """|A*| by the formula q(q-3)/2 + 1, checked against a scan of psi's image."""
    _check_field(F)
    q = F.q
    formula = q * (q - 3) // 2 + 1
    scan = level1_scan(F, "X")
    img = scan > 0
    img[0, :] = False
    img[:, 0] = False
    scanned = int(img.sum())
    if scanned != formula:
        raise AssertionError(f"|A*|: formula {formula} but image scan {scanned}")
    return formula


def xor_convolve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``C[a, b] = sum_{c, d} A[c, d] B[a ^ c, b ^ d]``."""
    q = A.shape[0]
    x = np.arange(q)
    C = np.zeros_like(B)
    for c in range(q):
        for d in range(q):
            if A[c, d]:
                C += A[c, d] * B[np.ix_(x ^ c, x ^ d)]
    return C


def _dtype_for(q: int, r: int):
    return np.int64 if q ** (2 * r) < 1 << 62 else object


@dataclass
class StratTables:
    X1: np.ndarray
    Y1: np.ndarray
    X: list  # X[k] is the level-k table, k >= 1


def strat_tables(F: FieldSpec, r: int) -> StratTables:
    _check_field(F)
    X1 = level1_closed_form(F)
    if not np.array_equal(X1, level1_scan(F, "X")):
        raise AssertionError("closed-form fibre sizes of psi disagree with the scan")
    Y1 = level1_scan(F, "Y")
    dt = _dtype_for(F.q, r)
    X1, Y1 = X1.astype(dt), Y1.astype(dt)
    X = [None, X1]
    for _ in range(2, r + 1):
        X.append(xor_convolve(X1, X[-1]))
    return StratTables(X1, Y1, X)


def strat_count(F: FieldSpec, r: int, pair: str, tables: StratTables | None = None) -> int:
    """|V| read off the convolved tables at (0, 0)."""
    if pair not in ("fh", "gh"):
        raise ValueError("pair must be 'fh' or 'gh'")
    T = tables or strat_tables(F, r)
    if pair == "fh":
        return int(T.X[r][0, 0])
    if r == 1:
        return int(T.Y1[0, 0])
    return int(xor_convolve(T.Y1, T.X[r - 1])[0, 0])


def strat_count_y_split(F: FieldSpec, r: int, tables: StratTables | None = None) -> int:
    """|V(g_r,h_r)| by splitting on the first pair:
    ``|Y^1_00| |X^(r-1)_00| + sum over (a,b) != 0 of the X^(r-1) lookups``."""
    T = tables or strat_tables(F, r)
    if r == 1:
        return int(T.Y1[0, 0])
    H, P, S = pair_tables(F)
    Xr = T.X[r - 1]
    total = int(T.Y1[0, 0]) * int(Xr[0, 0])
    vals = Xr[H, S]
    vals = vals.copy()
    # points with (a, b) = (0, 0) are already counted
    vals[0, 0] = 0
    return total + int(vals.sum())


def closed_form_fh2(q: int) -> int:
    return 6 * q * q - 9 * q + 4


@dataclass
class Table1Row:
    q: int
    r: int
    fh: int
    gh: int
    expected: tuple
    brute: tuple | None = None

    @property
    def ok(self) -> bool:
        good = (self.fh, self.gh) == self.expected
        if self.brute is not None:
            good = good and self.brute == (self.fh, self.gh)
        return good


def table1(brute: bool = False, budget: int = 1 << 24, workers: int = 1) -> list[Table1Row]:
    rows = []
    for q, rs in ((4, (3, 4, 5, 6)), (16, (3, 4))):
        F = field_for_order(q)
        T = strat_tables(F, max(rs))
        for r in rs:
            fh, gh = strat_count(F, r, "fh", T), strat_count(F, r, "gh", T)
            b = None
            if brute and q ** (2 * r) <= budget:
                b = (brute_count(F, r, "fh", workers=workers), brute_count(F, r, "gh", workers=workers))
            rows.append(Table1Row(q, r, fh, gh, TABLE1[(q, r)], b))
    return rows


def format_table1(rows: list[Table1Row], csv: bool = False) -> str:
    if csv:
        out = ["q,r,V(f_r h_r),V(g_r h_r),expected_fh,expected_gh,ok"]
        out += [f"{x.q},{x.r},{x.fh},{x.gh},{x.expected[0]},{x.expected[1]},{int(x.ok)}" for x in rows]
        return "\n".join(out)
    head = f"{'|F|':>4} {'r':>3} {'|V(f_r,h_r)|':>14} {'|V(g_r,h_r)|':>14}  check"
    out = [head, "-" * len(head)]
    for x in rows:
        extra = "" if x.brute is None else " (brute ok)" if x.brute == (x.fh, x.gh) else f" (brute {x.brute})"
        out.append(f"{x.q:>4} {x.r:>3} {x.fh:>14} {x.gh:>14}  {'ok' if x.ok else 'MISMATCH'}{extra}")
    return "\n".join(out)


# -- linear bijections ----------------------------------------------------------


@dataclass
class BijectionVerdict:
    kind: str  # NoLinearBijection | NoBijectionExhaustive | Witness | Inconclusive
    fh: int
    gh: int
    bound: int | None = None  # upper bound on |V(g_2,h_2)| used in the r = 2 argument
    witness: np.ndarray | None = None

    def __str__(self):
        if self.kind == "NoLinearBijection":
            b = f" (bound {self.bound})" if self.bound is not None else ""
            return f"NoLinearBijection({self.fh} vs {self.gh}{b})"
        return f"{self.kind}({self.fh} vs {self.gh})"


def _apply_linear(F: FieldSpec, A: np.ndarray, pts: np.ndarray) -> np.ndarray:
    M = F.mul_table.astype(np.int64)
    out = np.zeros_like(pts)
    for j in range(A.shape[1]):
        out ^= M[pts[:, j][:, None], A[:, j][None, :]]
    return out


def bijection_verdict(F: FieldSpec, r: int, search_limit: int = 1 << 20) -> BijectionVerdict:
    fh, gh = strat_count(F, r, "fh"), strat_count(F, r, "gh")
    bound = 2 * F.q**2 + 2 * F.q - 3 if r == 2 else None
    if fh != gh:
        return BijectionVerdict("NoLinearBijection", fh, gh, bound)
    d = 2 * r
    if F.q ** (d * d) > search_limit:
        return BijectionVerdict("Inconclusive", fh, gh, bound)
    Vf = np.array(sorted(variety_points(F, r, "fh")))
    Vg = variety_points(F, r, "gh")
    from .quadform import _rref

    for idx in range(F.q ** (d * d)):
        A = ((idx // F.q ** np.arange(d * d)) % F.q).reshape(d, d)
        if len(_rref(F, A.tolist())[0]) < d:
            continue
        img = _apply_linear(F, A, Vf)
        if all(tuple(int(v) for v in p) in Vg for p in img):
            return BijectionVerdict("Witness", fh, gh, bound, A)
    return BijectionVerdict("NoBijectionExhaustive", fh, gh, bound)
