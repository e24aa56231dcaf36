"""Quadratic forms over finite fields of characteristic 2.

A form on F^d is stored as an upper-triangular coefficient matrix ``c`` with
``B(v) = sum_{i<=j} c[i][j] v_i v_j``.  Everything here is small (d <= 16),
so the linear algebra is plain Python over the scalar field operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .finitefield import FieldSpec


@dataclass(frozen=True)
class QuadraticForm:
    F: FieldSpec
    dim: int
    coeffs: tuple  # tuple of row tuples, upper triangular
    names: tuple = ()

    @classmethod
    def from_matrix(cls, F: FieldSpec, M, names=()) -> "QuadraticForm":
        M = [[int(x) for x in row] for row in np.asarray(M).tolist()]
        d = len(M)
        rows = tuple(tuple(M[i][j] if j >= i else 0 for j in range(d)) for i in range(d))
        return cls(F, d, rows, tuple(names))

    @classmethod
    def zero(cls, F: FieldSpec, d: int) -> "QuadraticForm":
        return cls.from_matrix(F, np.zeros((d, d), dtype=np.int64))

    def __call__(self, v) -> int:
        return self.evaluate(v)

    def evaluate(self, v) -> int:
        F = self.F
        v = [int(x) for x in v]
        s = 0
        for i in range(self.dim):
            if not v[i]:
                continue
            row = self.coeffs[i]
            acc = 0
            for j in range(i, self.dim):
                if row[j] and v[j]:
                    acc = F.add(acc, F.mul(row[j], v[j]))
            s = F.add(s, F.mul(acc, v[i]))
        return s

    def matrix(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64).reshape(self.dim, self.dim)

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.F == other.F and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.F, self.coeffs))

    def __str__(self):
        return format_form(self)


def polar(B: QuadraticForm) -> np.ndarray:
    """Matrix of ``C(v, w) = B(v+w) + B(v) + B(w)``."""
    if B.F.p != 2:
        raise ValueError("polar forms are only provided in characteristic 2")
    c = B.matrix()
    C = c + c.T
    np.fill_diagonal(C, 0)
    return C


def bilinear(F: FieldSpec, C, v, w) -> int:
    s = 0
    for i, vi in enumerate(v):
        if not vi:
            continue
        for j, wj in enumerate(w):
            if wj and C[i][j]:
                s = F.add(s, F.mul(F.mul(int(vi), int(C[i][j])), int(wj)))
    return s


def _vadd(F, v, w):
    return [F.add(a, b) for a, b in zip(v, w)]


def _vscale(F, s, v):
    return [F.mul(s, a) for a in v]


@dataclass
class SymplecticBasis:
    a: list
    b: list

    @property
    def n(self) -> int:
        return len(self.a)

    def vectors(self) -> list:
        out = []
        for x, y in zip(self.a, self.b):
            out += [x, y]
        return out


def check_symplectic(F: FieldSpec, C, S: SymplecticBasis) -> bool:
    for i in range(S.n):
        for j in range(S.n):
            if bilinear(F, C, S.a[i], S.b[j]) != (1 if i == j else 0):
                return False
            if bilinear(F, C, S.a[i], S.a[j]) or bilinear(F, C, S.b[i], S.b[j]):
                return False
    return True


def symplectic_basis(F: FieldSpec, C, basis=None) -> SymplecticBasis:
    """Hyperbolic-pair peeling; always continues with the first remaining
    vector, so the output is deterministic.

    ``basis`` restricts to the span of the given vectors (the form must be
    nondegenerate there); by default the standard basis is used.
    """
    C = np.asarray(C).tolist()
    d = len(C)
    W = [list(map(int, v)) for v in basis] if basis is not None else [[int(i == j) for j in range(d)] for i in range(d)]
    if len(W) % 2:
        raise ValueError("odd dimension: no symplectic basis")
    A, Bv = [], []
    while W:
        v = W[0]
        k = next((i for i in range(1, len(W)) if bilinear(F, C, v, W[i])), None)
        if k is None:
            raise ValueError("degenerate bilinear form")
        w = _vscale(F, F.inv(bilinear(F, C, v, W[k])), W[k])
        rest = []
        for i, u in enumerate(W):
            if i in (0, k):
                continue
            # u - C(u,w) v + C(u,v) w is orthogonal to v and w
            u2 = _vadd(F, u, _vscale(F, F.neg(bilinear(F, C, u, w)), v))
            u2 = _vadd(F, u2, _vscale(F, bilinear(F, C, u, v), w))
            rest.append(u2)
        A.append(v)
        Bv.append(w)
        W = rest
    return SymplecticBasis(A, Bv)


# -- small linear algebra over F ------------------------------------------------


def _rref(F: FieldSpec, M):
    M = [list(map(int, r)) for r in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if M[i][c]), None)
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M[:r], piv


def kernel(F: FieldSpec, M) -> list:
    """Basis of ``{v : M v = 0}``."""
    M = np.asarray(M).tolist()
    d = len(M[0]) if M else 0
    R, piv = _rref(F, M)
    free = [c for c in range(d) if c not in piv]
    out = []
    for f in free:
        v = [0] * d
        v[f] = 1
        for row, c in zip(R, piv):
            v[c] = F.neg(row[f])
        out.append(v)
    return out


def complete_basis(F: FieldSpec, vecs: list, d: int) -> list:
    """Standard basis vectors extending ``vecs`` to a basis of F^d."""
    cur = [list(v) for v in vecs]
    out = []
    for i in range(d):
        e = [int(i == j) for j in range(d)]
        if len(_rref(F, cur + [e])[0]) > len(cur):
            cur.append(e)
            out.append(e)
    return out


@dataclass
class RadicalSplit:
    radical: list  # basis of the radical of the polar form
    complement: list  # basis of a complement on which the polar form is nondegenerate
    zero_on_radical: bool  # whether B vanishes identically on the radical


def split_radical(B: QuadraticForm) -> RadicalSplit:
    F = B.F
    C = polar(B)
    rad = kernel(F, C)
    comp = complete_basis(F, rad, B.dim)
    # B restricted to the radical is additive and 2-semilinear, so it
    # vanishes there iff it vanishes on a basis
    zero = all(B(v) == 0 for v in rad)
    return RadicalSplit(rad, comp, zero)


@dataclass
class ArfResult:
    value: int
    class_bit: int
    radical_dim: int
    split: bool  # a radical was split off before computing
    defective: bool = False  # B does not vanish on the radical
    basis: SymplecticBasis | None = field(default=None, repr=False)


def arf(B: QuadraticForm, basis=None) -> ArfResult:
    """Arf invariant ``sum B(a_i) B(b_i)`` over a symplectic basis, and its
    class as the trace bit.  Singular forms are restricted to a complement
    of the polar radical first (reported through ``split``)."""
    F = B.F
    if F.p != 2:
        raise ValueError("Arf invariant needs characteristic 2")
    C = polar(B)
    sp = split_radical(B)
    if basis is None:
        basis = sp.complement
    S = symplectic_basis(F, C, basis)
    val = 0
    for a, b in zip(S.a, S.b):
        val = F.add(val, F.mul(B(a), B(b)))
    return ArfResult(val, F.trace(val), len(sp.radical), bool(sp.radical), not sp.zero_on_radical, S)


def similar_class_check(B: QuadraticForm, B2: QuadraticForm) -> bool:
    """Necessary condition for similarity: equal Arf classes."""
    if B.dim != B2.dim:
        raise ValueError("forms of different dimension")
    F = B.F
    return F.trace(F.add(arf(B).value, arf(B2).value)) == 0


def compose(B: QuadraticForm, A) -> QuadraticForm:
    """The form ``v -> B(A v)`` for a d x d matrix A over F."""
    F = B.F
    A = np.asarray(A).tolist()
    d = B.dim
    cols = [[int(A[i][j]) for i in range(d)] for j in range(d)]
    C = polar(B)
    M = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        M[i, i] = B(cols[i])
        for j in range(i + 1, d):
            M[i, j] = bilinear(F, C, cols[i], cols[j])
    return QuadraticForm.from_matrix(F, M, B.names)


def scale(B: QuadraticForm, s: int) -> QuadraticForm:
    F = B.F
    return QuadraticForm.from_matrix(F, [[F.mul(s, x) for x in row] for row in B.coeffs], B.names)


def random_invertible(F: FieldSpec, d: int, rng) -> np.ndarray:
    while True:
        A = rng.integers(0, F.q, size=(d, d))
        if len(_rref(F, A.tolist())[0]) == d:
            return A


# -- literals -------------------------------------------------------------------


def standard_names(pairs: int, start: int = 1) -> tuple:
    out = []
    for i in range(start, start + pairs):
        out += [f"x{i}", f"y{i}"]
    return tuple(out)


def hyperbolic_form(F: FieldSpec, pairs: int, gamma: int | None = None, start: int = 1) -> QuadraticForm:
    """``sum_{i<gamma} x_i y_i`` on ``pairs`` coordinate pairs."""
    gamma = pairs if gamma is None else gamma
    M = np.zeros((2 * pairs, 2 * pairs), dtype=np.int64)
    for i in range(gamma):
        M[2 * i, 2 * i + 1] = 1
    return QuadraticForm.from_matrix(F, M, standard_names(pairs, start))


def anisotropic_plus_hyperbolic(F: FieldSpec, pairs: int, gamma: int | None = None) -> QuadraticForm:
    """``x0^2 + y0^2 + x0 y0 + sum_{1<=i<gamma} x_i y_i`` on ``pairs`` pairs."""
    gamma = pairs if gamma is None else gamma
    M = np.zeros((2 * pairs, 2 * pairs), dtype=np.int64)
    M[0, 0] = M[1, 1] = M[0, 1] = 1
    for i in range(1, gamma):
        M[2 * i, 2 * i + 1] = 1
    return QuadraticForm.from_matrix(F, M, standard_names(pairs, 0))


_MONO = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?([a-z]\d+)(?:\^(\d+)|\s*\*\s*([a-z]\d+))?\s*$")


def _var_key(name):
    return (int(name[1:]), name[0] != "x", name[0])


def parse_form(F: FieldSpec, text: str, names=None) -> QuadraticForm:
    """Parse ``sum{x1*y1,x2*y2}``, ``x0^2+y0^2+x0*y0+sum{x1*y1}`` and the like.

    Coefficients are field elements written as integers (``3*x1*y1``).
    Variables default to the sorted list of names used.
    """
    body = re.sub(r"sum\{([^}]*)\}", lambda m: "+".join(p for p in m.group(1).split(",") if p.strip()), text)
    terms = [t for t in body.replace(" ", "").split("+") if t]
    parsed = []
    for t in terms:
        m = _MONO.match(t)
        if not m:
            raise ValueError(f"cannot parse form term {t!r}")
        coef = int(m.group(1) or 1)
        u = m.group(2)
        if m.group(3):
            if m.group(3) != "2":
                raise ValueError(f"only squares allowed, got {t!r}")
            w = u
        elif m.group(4):
            w = m.group(4)
        else:
            raise ValueError(f"linear term {t!r} in a quadratic form")
        parsed.append((coef, u, w))
    if names is None:
        names = sorted({v for _, u, w in parsed for v in (u, w)}, key=_var_key)
    pos = {n: i for i, n in enumerate(names)}
    M = np.zeros((len(names), len(names)), dtype=np.int64)
    for coef, u, w in parsed:
        i, j = sorted((pos[u], pos[w]))
        M[i, j] = F.add(int(M[i, j]), coef)
    return QuadraticForm.from_matrix(F, M, tuple(names))


def format_form(B: QuadraticForm) -> str:
    names = B.names or tuple(f"v{i}" for i in range(B.dim))
    parts = []
    for i in range(B.dim):
        for j in range(i, B.dim):
            c = B.coeffs[i][j]
            if not c:
                continue
            mono = f"{names[i]}^2" if i == j else f"{names[i]}*{names[j]}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) if parts else "0"
