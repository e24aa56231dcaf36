"""Modular group algebras FG of the class-2 groups, as dense coefficient
vectors indexed by group elements.

Two independent ways of working with ideals live here:

* the echelon route builds spanning sets of ideals (augmentation ideal,
  ``I(N)FG``, products, sums) and row-reduces them -- slow but assumption free;
* the Jennings route writes elements in the ordered-monomial basis
  ``prod (g_i - 1)^e_i`` attached to a polycyclic sequence adapted to the
  dimension subgroups.  Powers of the augmentation ideal and the ideals
  ``(z - 1)^b FG`` are then spanned by monomials, so membership is a mask test.

Tests compare the two on small groups.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct

import numpy as np

from .finitefield import FieldSpec
from .linalg import Echelon, reduce_planes
from .pgroup import (
    BoundExceeded,
    Group,
    Subgroup,
    agemo,
    center,
    closure,
    derived,
    jennings,
    omega,
)

ALGEBRA_BOUND = 1 << 12


# ---------------------------------------------------------------------------
# groups given by a multiplication table


class TableGroup:
    """A finite group given by its multiplication table (identity = 0).

    Offers the same interface as :class:`pgroup.Group` that the subgroup
    routines need, so quotients of the normal-form groups can be handled
    with the same code.
    """

    def __init__(self, table: np.ndarray, p: int, gens, name: str = ""):
        self.T = np.asarray(table)
        self.order = self.T.shape[0]
        self.p = p
        self.log_order = round(math.log(self.order, p)) if self.order > 1 else 0
        self._gens = [int(g) for g in gens if int(g) != 0]
        self._gens = list(dict.fromkeys(self._gens))
        self._inv = np.argmax(self.T == 0, axis=1).astype(np.int64)
        self.name = name

    def __repr__(self):
        return f"TableGroup({self.name or self.order})"

    @property
    def mul_table(self):
        return self.T

    def mul(self, x, y):
        out = self.T[x, y]
        return out.astype(np.int64) if isinstance(out, np.ndarray) else int(out)

    def inv(self, x):
        out = self._inv[x]
        return out if isinstance(out, np.ndarray) else int(out)

    def pow(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros_like(x)
        while k:
            if k & 1:
                out = self.T[out, x].astype(np.int64)
            k >>= 1
            if k:
                x = self.T[x, x].astype(np.int64)
        return out if out.ndim else int(out)

    def comm(self, x, y):
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def generators(self):
        return list(self._gens)

    def elements(self):
        return np.arange(self.order, dtype=np.int64)

    def _check_bound(self, bound=None):
        pass


def as_table_group(G: Group) -> TableGroup:
    if G.order > ALGEBRA_BOUND * 4:
        raise BoundExceeded(f"|G| = {G.order} too large for a multiplication table")
    return TableGroup(G.mul_table, G.p, G.generators(), name=str(G.spec))


def cayley_table(n: int, right_perms: dict) -> np.ndarray:
    """Multiplication table from the right multiplications by a generating
    set: column ``y*g`` is ``R_g`` applied to column ``y``."""
    dtype = np.int16 if n < 1 << 15 else np.int32
    T = np.empty((n, n), dtype=dtype)
    T[:, 0] = np.arange(n)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    front = [0]
    while front:
        nxt = []
        for y in front:
            col = T[:, y]
            for g, R in right_perms.items():
                yg = int(R[y])
                if not seen[yg]:
                    seen[yg] = True
                    T[:, yg] = R[col]
                    nxt.append(yg)
        front = nxt
    if not seen.all():
        raise ValueError("right multiplications do not generate the group")
    T.setflags(write=False)
    return T


def quotient_group(G, N: Subgroup):
    """``G/N`` for a normal subgroup N, with the projection as an index array."""
    xs = G.elements()
    nel = N.elements
    rep = xs.copy()
    for n in nel[1:]:
        np.minimum(rep, G.mul(xs, int(n)), out=rep)
    reps = np.unique(rep)
    proj = np.searchsorted(reps, rep)
    gens = sorted(set(int(proj[g]) for g in G.generators()) - {0})
    perms = {int(proj[g]): proj[G.mul(reps, g)] for g in G.generators()}
    T = cayley_table(len(reps), perms)
    Q = TableGroup(T, G.p, gens, name=f"{getattr(G, 'spec', G)}/N")
    return Q, proj


def image_subgroup(Q: TableGroup, proj: np.ndarray, H: Subgroup) -> Subgroup:
    gens = sorted(set(int(proj[g]) for g in H.elements))
    return closure(Q, gens)


# ---------------------------------------------------------------------------
# dense algebra arithmetic


def _accumulate(F: FieldSpec, idx: np.ndarray, coef: np.ndarray, n: int) -> np.ndarray:
    if F.p != 2:
        s = np.bincount(idx, weights=coef.astype(np.float64), minlength=n)
        return np.mod(s.astype(np.int64), F.p)
    out = np.zeros(n, dtype=np.int64)
    for b in range(F.m):
        plane = (coef >> b) & 1
        if plane.any():
            cnt = np.bincount(idx, weights=plane.astype(np.float64), minlength=n)
            out |= (cnt.astype(np.int64) & 1) << b
    return out


def alg_mul(G, F: FieldSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product in FG of two dense coefficient vectors."""
    n = G.order
    sx = np.flatnonzero(x)
    sy = np.flatnonzero(y)
    if sx.size == 0 or sy.size == 0:
        return np.zeros(n, dtype=np.int64)
    T = G.mul_table
    cy = y[sy].astype(np.int64)
    out = np.zeros(n, dtype=np.int64)
    step = max(1, (1 << 22) // sy.size)
    for s in range(0, sx.size, step):
        rows = sx[s : s + step]
        idx = T[np.ix_(rows, sy)].astype(np.int64).ravel()
        coef = F.mul(np.asarray(x[rows], dtype=np.int64)[:, None], cy[None, :])
        part = _accumulate(F, idx, np.asarray(coef, dtype=np.int64).ravel(), n)
        out = F.add(out, part) if F.p == 2 else np.mod(out + part, F.p)
    return out


def alg_pow(G, F: FieldSpec, x: np.ndarray, k: int) -> np.ndarray:
    # repeated right multiplication by a sparse base is cheaper than squaring
    # once the running power has become dense
    supp = int(np.count_nonzero(x))
    if k > 1 and supp * (k - 1) <= 4 * G.order:
        out = x
        for _ in range(k - 1):
            out = alg_mul(G, F, out, x)
        return out
    out = None
    base = x
    while k:
        if k & 1:
            out = base if out is None else alg_mul(G, F, out, base)
        k >>= 1
        if k:
            base = alg_mul(G, F, base, base)
    if out is None:
        out = np.zeros(G.order, dtype=np.int64)
        out[0] = 1
    return out


def alg_add(F: FieldSpec, x, y):
    return np.bitwise_xor(x, y) if F.p == 2 else np.mod(x + y, F.p)


def alg_sub(F: FieldSpec, x, y):
    return np.bitwise_xor(x, y) if F.p == 2 else np.mod(x - y, F.p)


def alg_scale(F: FieldSpec, s: int, x):
    return np.asarray(F.mul(np.asarray(x, dtype=np.int64), s), dtype=np.int64) if F.p == 2 else np.mod(s * x, F.p)


def right_mul_group(G, v: np.ndarray, g: int) -> np.ndarray:
    """``v * g`` for a (batch of) coefficient vectors."""
    v = np.asarray(v)
    out = np.zeros_like(v)
    out[..., G.mul_table[:, g].astype(np.int64)] = v
    return out


def left_mul_group(G, g: int, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    out = np.zeros_like(v)
    out[..., G.mul_table[g, :].astype(np.int64)] = v
    return out


def g_minus_1(G, g: int, p: int) -> np.ndarray:
    v = np.zeros(G.order, dtype=np.int64)
    if g != 0:
        v[g] = 1
        v[0] = p - 1
    return v


def augmentation(F: FieldSpec, x) -> int:
    if F.p == 2:
        return int(np.bitwise_xor.reduce(np.asarray(x, dtype=np.int64)))
    return int(np.sum(x) % F.p)


@dataclass
class AlgebraElement:
    """A coefficient vector in FG with operator sugar."""

    group: object
    field: FieldSpec
    coeffs: np.ndarray

    @classmethod
    def from_support(cls, G, F, support: dict):
        v = np.zeros(G.order, dtype=np.int64)
        for g, c in support.items():
            v[int(g)] = F.add(int(v[int(g)]), int(c))
        return cls(G, F, v)

    @classmethod
    def group_element(cls, G, F, g: int):
        return cls.from_support(G, F, {g: 1})

    @property
    def support(self) -> dict:
        return {int(g): int(self.coeffs[g]) for g in np.flatnonzero(self.coeffs)}

    def augmentation(self) -> int:
        return augmentation(self.field, self.coeffs)

    def __add__(self, other):
        return AlgebraElement(self.group, self.field, alg_add(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other):
        return AlgebraElement(self.group, self.field, alg_sub(self.field, self.coeffs, other.coeffs))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.group, self.field, alg_mul(self.group, self.field, self.coeffs, other.coeffs))
        return AlgebraElement(self.group, self.field, alg_scale(self.field, int(other), self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return AlgebraElement(self.group, self.field, alg_pow(self.group, self.field, self.coeffs, k))

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and np.array_equal(self.coeffs, other.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs.any()


# ---------------------------------------------------------------------------
# small-field matrix helpers


def apply_rational(F: FieldSpec, C: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``C @ M`` with C over F and M over the prime field."""
    C = np.atleast_2d(np.asarray(C, dtype=np.int64))
    M = np.asarray(M, dtype=np.int64)
    if C.shape[1] == 0 or M.shape[1] == 0:
        return np.zeros((C.shape[0], M.shape[1]), dtype=np.int64)
    if F.p != 2:
        return np.mod(C @ M, F.p)
    out = np.zeros((C.shape[0], M.shape[1]), dtype=np.int64)
    Mf = M.astype(np.float64)
    for b in range(F.m):
        plane = ((C >> b) & 1).astype(np.float64)
        if plane.any():
            out |= (np.rint(plane @ Mf).astype(np.int64) & 1) << b
    return out


def inverse_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    M = np.mod(np.asarray(M, dtype=np.int64), p)
    d = M.shape[0]
    A = np.concatenate([M, np.eye(d, dtype=np.int64)], axis=1)
    for c in range(d):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            raise ValueError("singular matrix")
        i = c + nz[0]
        A[[c, i]] = A[[i, c]]
        A[c] = (A[c] * pow(int(A[c, c]), p - 2, p)) % p
        col = A[:, c].copy()
        col[c] = 0
        A = np.mod(A - col[:, None] * A[c], p)
    return A[:, d:]


# ---------------------------------------------------------------------------
# Jennings monomial basis


class JenningsBasis:
    """Ordered-monomial coordinates for FG.

    ``seq`` is a sequence g_1..g_N with each g_i in D_w \\ D_(w+1) for its
    weight w, whose images in every layer D_w/D_(w+1) form a basis; if a
    central element ``z`` is given, its p-power images are placed in the
    sequence so that ``(z - 1)^b FG`` is a monomial subspace too.
    """

    def __init__(self, G, z: int | None = None):
        self.G = G
        p = self.p = G.p
        layers = [None]
        w = 1
        while True:
            D = jennings(G, w)
            layers.append(D)
            if D.order == 1:
                break
            w += 1
        self.depth = len(layers) - 1  # D_depth = 1
        zpows = []
        if z is not None:
            x = z
            while x != 0:
                zpows.append(x)
                x = G.pow(x, p)
        self.zpows = zpows
        seq, weights = [], []
        zslot = {}
        for w in range(1, self.depth):
            Dw, Dn = layers[w], layers[w + 1]
            if Dw.order == Dn.order:
                continue
            S = Dn
            for j, zj in enumerate(zpows):
                if Dw.mask[zj] and not Dn.mask[zj]:
                    zslot[j] = len(seq)
                    seq.append(zj)
                    weights.append(w)
                    S = closure(G, [zj], start=S)
            for g in Dw.elements:
                if S.order == Dw.order:
                    break
                if not S.mask[g]:
                    seq.append(int(g))
                    weights.append(w)
                    before = S.order
                    S = closure(G, [int(g)], start=S)
                    assert S.order == before * p
        self.seq = seq
        self.weights = np.array(weights, dtype=np.int64)
        self.N = len(seq)
        if p**self.N != G.order:
            raise AssertionError("Jennings sequence has the wrong length")
        if zpows and len(zslot) != len(zpows):
            raise AssertionError("central powers missing from the sequence")
        self.zslot = [zslot[j] for j in range(len(zpows))]
        # element index for every exponent vector, f_1 most significant
        P = np.zeros(1, dtype=np.int64)
        for g in seq:
            pw = np.array([G.pow(g, f) for f in range(p)], dtype=np.int64)
            P = np.asarray(G.mul(P[:, None], pw[None, :]), dtype=np.int64).ravel()
        if not np.array_equal(np.sort(P), np.arange(G.order)):
            raise AssertionError("ordered products of the sequence are not a bijection onto G")
        self.P = P
        self.Pinv = np.argsort(P)
        E = np.array(list(iproduct(range(p), repeat=self.N)), dtype=np.int64).reshape(-1, self.N)
        self.exps = E
        self.weight = E @ self.weights
        zexp = np.zeros(len(E), dtype=np.int64)
        for j, slot in enumerate(self.zslot):
            zexp += E[:, slot] * p**j
        self.zexp = zexp
        # coefficient of M^e in g^f is prod binom(f_i, e_i)
        B = np.array([[math.comb(f, e) % p for f in range(p)] for e in range(p)], dtype=np.int64)
        self._fwd = B
        self._bwd = inverse_mod_p(B, p)

    def _apply_axes(self, X: np.ndarray, M: np.ndarray, binary: bool) -> np.ndarray:
        k = X.shape[0]
        p, N = self.p, self.N
        X = X.reshape((k,) + (p,) * N)
        for ax in range(1, N + 1):
            if binary:
                # [[1,1],[0,1]] along this axis (its own inverse over GF(2))
                X = np.moveaxis(X, ax, -1)
                X = np.stack([X[..., 0] ^ X[..., 1], X[..., 1]], axis=-1)
                X = np.moveaxis(X, -1, ax)
            else:
                X = np.moveaxis(np.tensordot(X, M.T, axes=([ax], [0])), -1, ax) % p
        return X.reshape(k, p**N)

    def to_monomial(self, V: np.ndarray) -> np.ndarray:
        """Coordinates (rows of V over GF(p) or GF(2^m)) in the monomial basis."""
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        return self._apply_axes(V[:, self.P], self._fwd, self.p == 2)

    def from_monomial(self, C: np.ndarray) -> np.ndarray:
        C = np.atleast_2d(np.asarray(C, dtype=np.int64))
        X = self._apply_axes(C, self._bwd, self.p == 2)
        out = np.empty_like(X)
        out[:, self.P] = X
        return out

    def power_mask(self, s: int) -> np.ndarray:
        """Monomials spanning I^s."""
        return self.weight >= s

    def zpower_mask(self, b: int) -> np.ndarray:
        """Monomials spanning (z - 1)^b FG."""
        if not self.zpows and b > 0:
            raise ValueError("basis was built without a central element")
        return self.zexp >= b


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Common interface: ``dim``, ``contains``, ``reduce``, ``random_element``."""

    F: FieldSpec
    n: int

    def contains(self, V) -> np.ndarray:
        return ~np.any(self.reduce(V), axis=1)

    def __le__(self, other: "Subspace") -> bool:
        return bool(other.contains(self.basis_vectors()).all()) if self.dim else True


class EchelonSubspace(Subspace):
    """A GF(p)-rational subspace of FG, stored as an echelon basis."""

    def __init__(self, F: FieldSpec, E: Echelon):
        self.F = F
        self.E = E
        self.n = E.n

    @property
    def dim(self) -> int:
        return self.E.dim

    def reduce(self, V):
        if self.F.p == 2 and self.F.m > 1:
            return reduce_planes(self.E, V, self.F.m)
        return self.E.reduce(V)

    def basis_vectors(self) -> np.ndarray:
        return self.E.rows

    def random_element(self, rng) -> np.ndarray:
        if self.dim == 0:
            return np.zeros(self.n, dtype=np.int64)
        c = rng.integers(0, self.F.q, size=(1, self.dim))
        return apply_rational(self.F, c, self.E.rows)[0]

    def __add__(self, other: Subspace) -> "EchelonSubspace":
        E = self.E.copy()
        E.add(other.basis_vectors())
        return EchelonSubspace(self.F, E)


class MonomialSubspace(Subspace):
    """Span of a set of Jennings monomials."""

    def __init__(self, F: FieldSpec, jb: JenningsBasis, mask: np.ndarray):
        self.F = F
        self.jb = jb
        self.mask = np.asarray(mask, dtype=bool)
        self.n = jb.G.order

    @property
    def dim(self) -> int:
        return int(self.mask.sum())

    def reduce(self, V):
        C = self.jb.to_monomial(V)
        C[:, self.mask] = 0
        return self.jb.from_monomial(C)

    def contains(self, V) -> np.ndarray:
        C = self.jb.to_monomial(V)
        return ~np.any(C[:, ~self.mask], axis=1)

    def basis_vectors(self) -> np.ndarray:
        idx = np.flatnonzero(self.mask)
        C = np.zeros((len(idx), self.n), dtype=np.int64)
        C[np.arange(len(idx)), idx] = 1
        return self.jb.from_monomial(C)

    def random_element(self, rng) -> np.ndarray:
        C = np.zeros((1, self.n), dtype=np.int64)
        C[0, self.mask] = rng.integers(0, self.F.q, size=self.dim)
        return self.jb.from_monomial(C)[0]

    def __add__(self, other: Subspace) -> Subspace:
        if isinstance(other, MonomialSubspace) and other.jb is self.jb:
            return MonomialSubspace(self.F, self.jb, self.mask | other.mask)
        return EchelonSubspace(self.F, Echelon.span(self.F.p, self.n, self.basis_vectors())) + other


SubspaceBasis = EchelonSubspace


class Quotient:
    """``num / den`` with a chosen basis of representatives.

    ``coords(V)`` gives the coordinates (over F) of the classes of vectors
    V in ``num`` with respect to ``reps``.
    """

    def __init__(self, num: Subspace, den: Subspace, candidates=None, check: bool = True):
        if check and not den <= num:
            raise ValueError("denominator is not contained in numerator")
        self.num, self.den = num, den
        self.F = num.F
        F = self.F
        mono = (
            isinstance(num, MonomialSubspace)
            and isinstance(den, MonomialSubspace)
            and num.jb is den.jb
        )
        if mono:
            self.jb = num.jb
            self._cols = np.flatnonzero(num.mask & ~den.mask)
            self.dim = len(self._cols)
            self._std = self._mono_coords
        else:
            self.jb = None
            Eden = den.E if isinstance(den, EchelonSubspace) else Echelon.span(F.p, den.n, den.basis_vectors())
            self._den_E = Eden
            R = Eden.reduce(num.basis_vectors())
            Er = Echelon.span(F.p, num.n, R)
            self._cols = Er.pivots
            self.dim = Er.dim
            self._std = self._ech_coords
        std_reps = None
        if candidates is not None:
            cand = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
            keep, rows = [], Echelon(F.p, self.dim)
            C = np.mod(self._std(cand), F.p)
            for i in range(cand.shape[0]):
                if rows.dim == self.dim:
                    break
                before = rows.dim
                rows.add(C[i : i + 1])
                if rows.dim > before:
                    keep.append(i)
            if rows.dim < self.dim:
                raise ValueError("candidates do not span the quotient")
            self.reps = cand[keep]
            self._change = inverse_mod_p(C[keep], F.p)
        else:
            if mono:
                M = np.zeros((self.dim, num.n), dtype=np.int64)
                M[np.arange(self.dim), self._cols] = 1
                std_reps = self.jb.from_monomial(M)
            else:
                std_reps = Er.rows
            self.reps = std_reps
            self._change = None

    def _mono_coords(self, V):
        return self.jb.to_monomial(V)[:, self._cols]

    def _ech_coords(self, V):
        V = np.atleast_2d(np.asarray(V, dtype=np.int64))
        F = self.F
        if F.p == 2 and F.m > 1:
            R = reduce_planes(self._den_E, V, F.m)
        else:
            R = self._den_E.reduce(V)
        return R[:, self._cols]

    def coords(self, V) -> np.ndarray:
        c = self._std(np.atleast_2d(np.asarray(V, dtype=np.int64)))
        if self._change is not None:
            c = apply_rational(self.F, c, self._change)
        return c

    def lift(self, c) -> np.ndarray:
        """A representative vector for coordinates c."""
        return apply_rational(self.F, np.atleast_2d(c), self.reps)


def quotient_space(I: Subspace, J: Subspace, candidates=None) -> Quotient:
    return Quotient(I, J, candidates)


# ---------------------------------------------------------------------------
# ideal expressions


@dataclass(frozen=True)
class SubgroupName:
    kind: str  # Z, G', G, Omega, Agemo, D
    args: tuple = ()

    def __str__(self):
        if self.kind == "Omega":
            return f"Omega({self.args[0]},{self.args[1]})"
        if self.kind in ("Agemo", "D"):
            return f"{self.kind}({self.args[0]})"
        return self.kind


@dataclass(frozen=True)
class Aug:
    def __str__(self):
        return "I"


@dataclass(frozen=True)
class SubIdeal:
    """The two-sided ideal I(N)FG."""

    sub: SubgroupName

    def __str__(self):
        return f"I({self.sub})"


@dataclass(frozen=True)
class Whole:
    def __str__(self):
        return "FG"


@dataclass(frozen=True)
class Power:
    base: object
    k: int

    def __str__(self):
        return f"{_paren(self.base)}^{self.k}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __str__(self):
        return "*".join(_paren(f) for f in self.factors)


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)


def _paren(e):
    return f"({e})" if isinstance(e, (Sum, Product)) else str(e)


IdealExpr = object

_TOKEN = re.compile(r"\s*(Omega|Agemo|FG|G'|D|I|Z|G|\d+|[()^*+,])")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse ideal expression at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_ideal(text: str):
    """Parse ``I^3``, ``I(Z)*FG``, ``I(Omega(1,Z))*FG + I^4`` and similar.

    ``I(N)`` always denotes the two-sided ideal ``I(N)FG``; a trailing
    ``*FG`` is accepted and changes nothing.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise ValueError(f"expected {expected!r} in ideal expression {text!r}, got {t!r}")
        pos += 1
        return t

    def integer():
        t = take()
        if not t.isdigit():
            raise ValueError(f"expected an integer in {text!r}, got {t!r}")
        return int(t)

    def subgroup_name():
        t = take()
        if t in ("Z", "G'", "G"):
            return SubgroupName(t)
        if t == "Omega":
            take("(")
            k = integer()
            take(",")
            inner = subgroup_name()
            take(")")
            return SubgroupName("Omega", (k, inner))
        if t in ("Agemo", "D"):
            take("(")
            k = integer()
            take(")")
            return SubgroupName(t, (k,))
        raise ValueError(f"unknown subgroup name {t!r}")

    def atom():
        t = peek()
        if t == "(":
            take("(")
            e = expr()
            take(")")
            return e
        if t == "FG":
            take()
            return Whole()
        if t == "I":
            take()
            if peek() == "(":
                take("(")
                s = subgroup_name()
                take(")")
                return SubIdeal(s)
            return Aug()
        raise ValueError(f"unexpected token {t!r} in {text!r}")

    def factor():
        a = atom()
        while peek() == "^":
            take()
            a = Power(a, integer())
        return a

    def term():
        fs = [factor()]
        while peek() == "*":
            take()
            fs.append(factor())
        return fs[0] if len(fs) == 1 else Product(tuple(fs))

    def expr():
        ts = [term()]
        while peek() == "+":
            take()
            ts.append(term())
        return ts[0] if len(ts) == 1 else Sum(tuple(ts))

    e = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in ideal expression {text!r}")
    return e


def expand(e) -> list[tuple]:
    """Sum of products of atoms (each product a tuple of atoms)."""
    if isinstance(e, (Aug, SubIdeal, Whole)):
        return [(e,)]
    if isinstance(e, Sum):
        out = []
        for t in e.terms:
            out += expand(t)
        return out
    if isinstance(e, Power):
        if e.k < 1:
            raise ValueError("powers must be positive")
        return expand(Product((e.base,) * e.k))
    if isinstance(e, Product):
        out = [()]
        for f in e.factors:
            out = [a + b for a in out for b in expand(f)]
        return out
    raise TypeError(f"not an ideal expression: {e!r}")


class IdealEvaluator:
    """Evaluates ideal expressions in FG by the echelon route, caching
    products by their atom sequence."""

    def __init__(self, G, F: FieldSpec, bound: int = ALGEBRA_BOUND):
        if G.order > bound:
            raise BoundExceeded(f"|G| = {G.order} exceeds the algebra bound {bound}")
        self.G, self.F = G, F
        self.p = G.p
        self._cache = {}
        self._subgroups = {}

    def subgroup(self, name: SubgroupName) -> Subgroup:
        if name in self._subgroups:
            return self._subgroups[name]
        G = self.G
        k = name.kind
        if k == "Z":
            H = center(G)
        elif k == "G'":
            H = derived(G)
        elif k == "G":
            H = closure(G, G.generators())
        elif k == "Omega":
            H = omega(G, name.args[0], self.subgroup(name.args[1]))
        elif k == "Agemo":
            H = agemo(G, name.args[0])
        elif k == "D":
            H = jennings(G, name.args[0])
        else:
            raise ValueError(f"unresolvable subgroup {name}")
        if not H.gens:
            H = closure(G, H.elements)
        self._subgroups[name] = H
        return H

    def _atom_gens(self, atom):
        if isinstance(atom, Aug):
            return self.G.generators()
        return [g for g in self.subgroup(atom.sub).gens if g != 0]

    def _first(self, atom) -> Echelon:
        G, p, n = self.G, self.p, self.G.order
        if isinstance(atom, Whole):
            return Echelon.span(p, n, np.eye(n, dtype=np.int64))
        if isinstance(atom, Aug):
            V = np.zeros((n - 1, n), dtype=np.int64)
            V[np.arange(n - 1), np.arange(1, n)] = 1
            V[:, 0] = p - 1
            return Echelon.span(p, n, V)
        E = Echelon(p, n)
        xs = np.arange(n)
        for g in self._atom_gens(atom):
            # rows (g - 1) h = g h - h for all h in G
            V = np.zeros((n, n), dtype=np.int64)
            V[xs, G.mul_table[g, :].astype(np.int64)] += 1
            V[xs, xs] += p - 1
            E.add(np.mod(V, p))
        return E

    def _times(self, E: Echelon, atom) -> Echelon:
        if isinstance(atom, Whole):
            return E
        out = Echelon(self.p, self.G.order)
        R = E.rows
        for x in self._atom_gens(atom):
            out.add(np.mod(right_mul_group(self.G, R, x) - R, self.p))
        return out

    def product(self, atoms: tuple) -> Echelon:
        atoms = tuple(a for a in atoms if not isinstance(a, Whole)) or (Whole(),)
        if atoms in self._cache:
            return self._cache[atoms]
        if len(atoms) == 1:
            E = self._first(atoms[0])
        else:
            E = self._times(self.product(atoms[:-1]), atoms[-1])
        self._cache[atoms] = E
        return E

    def evaluate(self, e) -> EchelonSubspace:
        if isinstance(e, str):
            e = parse_ideal(e)
        terms = expand(e)
        E = self.product(terms[0]).copy()
        for t in terms[1:]:
            E.add(self.product(t).rows)
        return EchelonSubspace(self.F, E)


def evaluate_ideal(G, F: FieldSpec, e, bound: int = ALGEBRA_BOUND) -> EchelonSubspace:
    return IdealEvaluator(G, F, bound).evaluate(e)


def monomial_ideal(jb: JenningsBasis, F: FieldSpec, e) -> MonomialSubspace | None:
    """Jennings-route evaluation for sums of ``I^a`` and ``I(Z)^b`` terms,
    or None when the expression has another shape."""
    if isinstance(e, str):
        e = parse_ideal(e)
    mask = np.zeros(jb.G.order, dtype=bool)
    for t in expand(e):
        atoms = [a for a in t if not isinstance(a, Whole)]
        if not atoms:
            mask[:] = True
        elif all(isinstance(a, Aug) for a in atoms):
            mask |= jb.power_mask(len(atoms))
        elif all(isinstance(a, SubIdeal) and a.sub.kind == "Z" for a in atoms) and jb.zpows:
            mask |= jb.zpower_mask(len(atoms))
        else:
            return None
    return MonomialSubspace(F, jb, mask)


# ---------------------------------------------------------------------------
# restricted quotients and sparse random ideal elements


class SubQuotient:
    """The subspace of a quotient spanned by the classes of some vectors,
    with those (independent) vectors as basis."""

    def __init__(self, parent: Quotient, candidates):
        self.parent = parent
        self.F = parent.F
        self.den = parent.den
        cand = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
        p = self.F.p
        C = np.mod(parent.coords(cand), p) if cand.size else np.zeros((0, parent.dim), dtype=np.int64)
        keep, E = [], Echelon(p, parent.dim)
        for i in range(C.shape[0]):
            before = E.dim
            E.add(C[i : i + 1])
            if E.dim > before:
                keep.append(i)
        self.reps = cand[keep] if keep else np.zeros((0, parent.den.n), dtype=np.int64)
        self.dim = len(keep)
        self._cols = E.pivots
        if self.dim:
            self._inv = inverse_mod_p(C[keep][:, self._cols], p)
        self._span = E

    def coords(self, V) -> np.ndarray:
        c = self.parent.coords(V)
        if self.dim == 0:
            return np.zeros((c.shape[0], 0), dtype=np.int64)
        return apply_rational(self.F, c[:, self._cols], self._inv)

    def lift(self, c) -> np.ndarray:
        return apply_rational(self.F, np.atleast_2d(c), self.reps)


def _monomial_support(jb: JenningsBasis) -> np.ndarray:
    return np.prod(jb.exps + 1, axis=1)


def random_monomial_element(jb: JenningsBasis, F: FieldSpec, mask, rng, terms: int = 3, max_support: int = 64):
    """A random element of the span of ``mask`` built as a short sum of
    translated monomials with small support (cheap to raise to powers).

    Left and right translates of a monomial lie in the same ideal only when
    the span is an ideal; callers use this for ideal masks only.
    """
    G = jb.G
    idx = np.flatnonzero(np.asarray(mask) & (_monomial_support(jb) <= max_support))
    out = np.zeros(G.order, dtype=np.int64)
    if idx.size == 0:
        return out
    for _ in range(terms):
        C = np.zeros((1, G.order), dtype=np.int64)
        C[0, rng.choice(idx)] = 1
        v = jb.from_monomial(C)[0]
        v = left_mul_group(G, int(rng.integers(G.order)), v)
        v = right_mul_group(G, v, int(rng.integers(G.order)))
        s = int(rng.integers(1, F.q))
        out = alg_add(F, out, alg_scale(F, s, v))
    return out


def random_ideal_element(ev: IdealEvaluator, e, rng, terms: int = 3) -> np.ndarray:
    """A random sparse element of the ideal ``e``: sums of products
    ``u_0 (x_1 - 1) u_1 (x_2 - 1) ... u_k`` with the x_i generators of the
    atoms of one product term and the u_i random group elements."""
    if isinstance(e, str):
        e = parse_ideal(e)
    G, F = ev.G, ev.F
    prods = expand(e)
    out = np.zeros(G.order, dtype=np.int64)
    for _ in range(terms):
        atoms = prods[int(rng.integers(len(prods)))]
        v = np.zeros(G.order, dtype=np.int64)
        v[int(rng.integers(G.order))] = 1
        for a in atoms:
            if isinstance(a, Whole):
                continue
            gens = ev._atom_gens(a)
            if not gens:
                v[:] = 0
                break
            x = g_minus_1(G, int(gens[int(rng.integers(len(gens)))]), F.p)
            v = alg_mul(G, F, v, x)
            v = right_mul_group(G, v, int(rng.integers(G.order)))
        s = int(rng.integers(1, F.q))
        out = alg_add(F, out, alg_scale(F, s, v))
    return out


# ---------------------------------------------------------------------------
# power maps between quotients


def _rmul_rational(G, V: np.ndarray, X: np.ndarray, p: int) -> np.ndarray:
    """Rows of V times a GF(p)-rational algebra element X."""
    T = G.mul_table
    out = np.zeros_like(V)
    for h in np.flatnonzero(X):
        W = np.zeros_like(V)
        W[:, T[:, h].astype(np.int64)] = V
        out += int(X[h]) * W
    return out % p


def power_coefficients(G, p: int, reps: np.ndarray, k: int):
    """Expand ``(sum_i c_i X_i)^k`` for commuting scalars c_i.

    Returns ``(monos, V)``: exponent vectors (M x d) and the coefficient
    vectors (M x |G|, over GF(p)) of the monomials ``c^mu``; monomials whose
    coefficient vanishes are dropped.
    """
    reps = np.atleast_2d(np.asarray(reps, dtype=np.int64)) % p
    d = reps.shape[0]
    base = k + 1
    V = np.zeros((1, G.order), dtype=np.int64)
    V[0, 0] = 1
    keys = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        blocks, bkeys = [], []
        for i in range(d):
            blocks.append(_rmul_rational(G, V, reps[i], p))
            bkeys.append(keys + base**i)
        W = np.concatenate(blocks)
        K = np.concatenate(bkeys)
        order = np.argsort(K, kind="stable")
        K, W = K[order], W[order]
        starts = np.flatnonzero(np.r_[True, K[1:] != K[:-1]])
        V = np.add.reduceat(W, starts, axis=0) % p
        keys = K[starts]
        live = V.any(axis=1)
        V, keys = V[live], keys[live]
        if V.shape[0] == 0:
            break
    monos = (keys[:, None] // base ** np.arange(d)[None, :]) % base
    return monos.reshape(-1, d), V


def _power_table(F: FieldSpec, k: int) -> np.ndarray:
    t = np.zeros((F.q, k + 1), dtype=np.int64)
    for c in range(F.q):
        x = 1
        for e in range(k + 1):
            t[c, e] = x
            x = F.mul(x, c)
    return t


def _fmul(F: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if F.p != 2:
        return (a * b) % F.p
    return F.mul_table[a, b].astype(np.int64)


def points_from_index(F: FieldSpec, idx: np.ndarray, d: int) -> np.ndarray:
    """Coordinate vectors for point indices (first coordinate most significant)."""
    idx = np.asarray(idx, dtype=np.int64)
    return (idx[:, None] // F.q ** np.arange(d - 1, -1, -1)[None, :]) % F.q


def index_from_points(F: FieldSpec, pts: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(pts)
    d = pts.shape[1]
    return pts @ (F.q ** np.arange(d - 1, -1, -1))


class PowerMap:
    """``x -> x^k`` from a domain quotient to a codomain quotient, as a
    polynomial in the domain coordinates."""

    def __init__(self, G, F: FieldSpec, k: int, dom, cod: Quotient):
        if F.p == 2 and F.q > 256:
            raise ValueError("enumeration over GF(2^m) needs m <= 8")
        self.G, self.F, self.k = G, F, k
        self.dom, self.cod = dom, cod
        self.d = dom.dim
        self.monos, V = power_coefficients(G, F.p, dom.reps, k)
        self.coef = np.mod(cod.coords(V), F.p) if len(V) else np.zeros((0, cod.dim), dtype=np.int64)
        self._pw = _power_table(F, k)

    def values(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=np.int64))
        F = self.F
        if self.monos.shape[0] == 0:
            return np.zeros((pts.shape[0], self.cod.dim), dtype=np.int64)
        mon = np.ones((pts.shape[0], self.monos.shape[0]), dtype=np.int64)
        for i in range(self.d):
            mon = _fmul(F, mon, self._pw[pts[:, i]][:, self.monos[:, i]])
        return apply_rational(F, mon, self.coef)

    def direct(self, pts: np.ndarray, shifts=None) -> np.ndarray:
        """Codomain coordinates of ``(lift(c) + shift)^k`` computed by
        multiplying group-algebra elements."""
        pts = np.atleast_2d(np.asarray(pts, dtype=np.int64))
        out = []
        for j, c in enumerate(pts):
            x = self.dom.lift(c)[0]
            if shifts is not None:
                x = alg_add(self.F, x, shifts[j])
            out.append(self.cod.coords(alg_pow(self.G, self.F, x, self.k))[0])
        return np.array(out, dtype=np.int64).reshape(len(pts), self.cod.dim)


@dataclass
class KernelResult:
    points: np.ndarray  # kernel points (rows of domain coordinates)
    count: int
    total: int  # number of points evaluated
    zero_map: bool
    mode: str
    heuristic: bool
    dim_domain: int
    dim_codomain: int
    checks: dict


def _sample_points(F: FieldSpec, d: int, rng, n_random: int = 10_000) -> np.ndarray:
    scalars = list(range(1, min(F.q, 17)))
    pts = [np.zeros(d, dtype=np.int64)]
    for i in range(d):
        for s in scalars:
            v = np.zeros(d, dtype=np.int64)
            v[i] = s
            pts.append(v)
    for i in range(d):
        for j in range(i + 1, d):
            for s in scalars:
                for u in scalars:
                    v = np.zeros(d, dtype=np.int64)
                    v[i], v[j] = s, u
                    pts.append(v)
    P = np.array(pts).reshape(-1, d)
    R = rng.integers(0, F.q, size=(n_random, d))
    return np.unique(np.concatenate([P, R]), axis=0)


def run_power_map(pm: PowerMap, mode: str, shift_fn, shifts: int, seed: int,
                  direct_checks: int = 24, chunk: int = 1 << 15) -> KernelResult:
    F, d = pm.F, pm.d
    rng = np.random.default_rng(seed)
    checks = {}
    # dual route: polynomial evaluation against direct powering
    if d:
        P = rng.integers(0, F.q, size=(direct_checks, d))
        P[0] = 0
        eye = np.eye(d, dtype=np.int64)
        P = np.concatenate([P, eye])
        if not np.array_equal(pm.values(P), pm.direct(P)):
            raise AssertionError("power map: polynomial and direct evaluation disagree")
        checks["direct_agreement"] = len(P)
    # well-definedness under shifts by the denominator
    if shifts and shift_fn is not None:
        P = rng.integers(0, F.q, size=(shifts, max(d, 0)))
        S = [shift_fn(rng) for _ in range(shifts)]
        got = pm.direct(P, S) if d else pm.direct(np.zeros((shifts, 0), dtype=np.int64), S)
        want = pm.values(P) if d else np.zeros_like(got)
        if not np.array_equal(got, want):
            raise AssertionError("power map is not well defined on the given quotients")
        checks["shifts"] = shifts
    if mode == "enumerate":
        total = F.q**d
        if total > 1 << 24:
            raise BoundExceeded(f"{total} domain points exceed the enumeration budget 2^24")
        ker = []
        for s in range(0, total, chunk):
            idx = np.arange(s, min(total, s + chunk))
            vals = pm.values(points_from_index(F, idx, d))
            ker.append(idx[~vals.any(axis=1)])
        kidx = np.concatenate(ker) if ker else np.zeros(0, dtype=np.int64)
        pts = points_from_index(F, kidx, d)
        return KernelResult(pts, len(kidx), total, len(kidx) == total, mode, False, d, pm.cod.dim, checks)
    if mode == "sample":
        P = _sample_points(F, d, rng)
        vals = pm.values(P)
        z = ~vals.any(axis=1)
        return KernelResult(P[z], int(z.sum()), len(P), bool(z.all()), mode, True, d, pm.cod.dim, checks)
    raise ValueError(f"unknown mode {mode!r}")


class AlgebraContext:
    """Evaluators and the Jennings basis for one (G, F), built on demand."""

    def __init__(self, G, F: FieldSpec, bound: int = ALGEBRA_BOUND):
        self.G, self.F, self.bound = G, F, bound
        self._ev = None
        self._jb = None

    @property
    def evaluator(self) -> IdealEvaluator:
        if self._ev is None:
            self._ev = IdealEvaluator(self.G, self.F, self.bound)
        return self._ev

    @property
    def jennings(self) -> JenningsBasis:
        if self._jb is None:
            self._jb = JenningsBasis(self.G, z=getattr(self.G, "z", None))
        return self._jb

    def subspace(self, e) -> Subspace:
        if isinstance(e, str):
            e = parse_ideal(e)
        if self.G.order <= ENUM_JENNINGS:
            m = monomial_ideal(self.jennings, self.F, e)
            if m is not None:
                return m
        return self.evaluator.evaluate(e)

    def random_element(self, e, rng) -> np.ndarray:
        if isinstance(e, str):
            e = parse_ideal(e)
        sub = self.subspace(e)
        if isinstance(sub, MonomialSubspace):
            return random_monomial_element(self.jennings, self.F, sub.mask, rng)
        return random_ideal_element(self.evaluator, e, rng)


ENUM_JENNINGS = 1 << 16


def ideal_quotient(ctx: AlgebraContext, num, den, prefer_group_reps: bool = True):
    """Quotient of two ideal expressions, with representatives ``g - 1``
    where possible."""
    I, J = ctx.subspace(num), ctx.subspace(den)
    Q = Quotient(I, J)
    if not prefer_group_reps or Q.dim == 0:
        return Q
    G = ctx.G
    gens = list(G.generators())
    rest = [g for g in range(1, G.order) if g not in set(gens)]
    chosen = np.zeros((0, G.order), dtype=np.int64)
    ids = gens + rest
    for s in range(0, len(ids), 256):
        cand = np.array([g_minus_1(G, g, G.p) for g in ids[s : s + 256]])
        cand = cand[I.contains(cand)]
        sub = SubQuotient(Q, np.concatenate([chosen, cand]))
        chosen = sub.reps
        if sub.dim == Q.dim:
            return sub
    return Q


def power_map_kernel(G, F: FieldSpec, t: int, dom, cod, mode: str = "enumerate",
                     shifts: int = 100, seed: int = 0, workers: int = 1,
                     bound: int = ALGEBRA_BOUND) -> KernelResult:
    """Kernel of ``x -> x^(p^t)`` from ``dom[0]/dom[1]`` to ``cod[0]/cod[1]``.

    The quotients are given as pairs of ideal expressions (or text).  The map
    is expanded as a polynomial in the domain coordinates, checked against
    direct powering, checked for well-definedness by random shifts of the
    representatives, and then evaluated on every point (``enumerate``) or on
    structured and random points (``sample``, flagged heuristic).
    ``workers`` is accepted for interface stability; evaluation is vectorized
    in a single process.
    """
    if G.order > bound:
        raise BoundExceeded(f"|G| = {G.order} exceeds the algebra bound {bound}")
    ctx = AlgebraContext(G, F, bound)
    dnum, dden = (parse_ideal(x) if isinstance(x, str) else x for x in dom)
    cnum, cden = (parse_ideal(x) if isinstance(x, str) else x for x in cod)
    D = ideal_quotient(ctx, dnum, dden)
    C = ideal_quotient(ctx, cnum, cden, prefer_group_reps=False)
    pm = PowerMap(G, F, G.p**t, D, C)
    return run_power_map(pm, mode, lambda rng: ctx.random_element(dden, rng), shifts, seed)


# ---------------------------------------------------------------------------
# the maps x -> x^(p^t) on (I(Omega_t(G:Z))FG + I^2)/I^2


def omega_power_map(G, F: FieldSpec, t: int, bound: int = ENUM_JENNINGS):
    """The map ``(I(Omega_t(G:Z))FG + I^2)/I^2 -> I^(p^t)/I^(p^t+1)``,
    ``x -> x^(p^t)``, computed in ``F[G/D]`` with ``D = D_(p^t+1)(G)``.

    This is exact: ``I(D)FG`` lies in ``I^(p^t+1)``, so both quotients
    are unchanged by passing to ``G/D``.  Returns ``(PowerMap, shift_fn)``.
    """
    from .pgroup import center as _center

    k = G.p**t
    D = jennings(G, k + 1)
    Q, proj = quotient_group(G, D)
    if Q.order > bound:
        raise BoundExceeded(f"|G/D_(p^t+1)| = {Q.order} exceeds the algebra bound {bound}")
    jb = JenningsBasis(Q)
    I1 = MonomialSubspace(F, jb, jb.power_mask(1))
    I2 = MonomialSubspace(F, jb, jb.power_mask(2))
    Om = omega(G, t, _center(G))
    gens = [int(g) for g in (Om.gens or Om.elements)]
    cand = np.array([g_minus_1(Q, int(proj[g]), Q.p) for g in gens]).reshape(-1, Q.order)
    dom = SubQuotient(Quotient(I1, I2, check=False), cand)
    cod = Quotient(MonomialSubspace(F, jb, jb.power_mask(k)), MonomialSubspace(F, jb, jb.power_mask(k + 1)), check=False)
    pm = PowerMap(Q, F, k, dom, cod)
    mask2 = jb.power_mask(2)

    def shift_fn(rng):
        return random_monomial_element(jb, F, mask2, rng)

    return pm, shift_fn


def omega_power_kernel(G, F: FieldSpec, t: int, mode: str = "enumerate", shifts: int = 100,
                       seed: int = 0, bound: int = ENUM_JENNINGS) -> KernelResult:
    pm, shift_fn = omega_power_map(G, F, t, bound)
    return run_power_map(pm, mode, shift_fn, shifts, seed)


# ---------------------------------------------------------------------------
# the quadratic form attached to x -> x^(2^t) on I/I^2


def _quotient_setup(G, k: int):
    D = jennings(G, k + 1)
    Q, proj = quotient_group(G, D)
    return Q, proj, JenningsBasis(Q)


def lambda_form_setting(spec):
    """``t`` for the groups where the form is defined, else SpecError."""
    from .pgroup import SpecError

    if spec.prime != 2:
        raise SpecError("p = 2", "the quadratic form needs characteristic 2")
    if spec.form == "R":
        return spec.rparam
    if spec.qpairs or not spec.ells:
        raise SpecError("alpha = 0", "needs a Q-form group with only Q(l,l) factors")
    return spec.ells[0]


def lambda_quadratic_form(G: Group, F: FieldSpec, checks: int = 200, seed: int = 0, bound: int = ENUM_JENNINGS):
    """The form B with ``x^(2^t) = B(x)^(2^(t-1)) ([b_1,a_1]^(2^(t-1)) - 1)``
    modulo ``I^(2^t+1)`` for ``x = sum x_i (a_i - 1) + y_i (b_i - 1)``.

    Coordinates are ordered ``x_1, y_1, x_2, y_2, ...`` by factor (``x_0, y_0``
    for the R(n) factor of an R-form group).
    """
    from .quadform import QuadraticForm, standard_names

    spec = G.spec
    t = lambda_form_setting(spec)
    k = 2**t
    Q, proj, jb = _quotient_setup(G, k)
    if Q.order > bound:
        raise BoundExceeded(f"|G/D| = {Q.order} exceeds the algebra bound {bound}")
    gens = []
    for i in range(G.k):
        gens += [G.a(i), G.b(i)]
    cand = np.array([g_minus_1(Q, int(proj[g]), 2) for g in gens])
    I1 = MonomialSubspace(F, jb, jb.power_mask(1))
    I2 = MonomialSubspace(F, jb, jb.power_mask(2))
    dom = SubQuotient(Quotient(I1, I2, check=False), cand)
    if dom.dim != len(gens):
        raise AssertionError("generator classes are not independent in I/I^2")
    cod = Quotient(MonomialSubspace(F, jb, jb.power_mask(k)), MonomialSubspace(F, jb, jb.power_mask(k + 1)), check=False)
    pm = PowerMap(Q, F, k, dom, cod)
    z0 = G.pow(G.comm(G.b(0), G.a(0)), 2 ** (t - 1))
    w = np.mod(cod.coords(g_minus_1(Q, int(proj[z0]), 2))[0], 2)
    if not w.any():
        raise AssertionError("[b,a]^(2^(t-1)) - 1 vanishes modulo I^(2^t+1)")
    lam = np.zeros(len(pm.monos), dtype=np.int64)
    for j, row in enumerate(pm.coef):
        if not row.any():
            continue
        if not np.array_equal(row % 2, w):
            raise AssertionError("image of the power map is not one-dimensional")
        lam[j] = 1
    rng = np.random.default_rng(seed)
    d = dom.dim
    P = rng.integers(0, F.q, size=(min(checks, 32), d))
    if not np.array_equal(pm.values(P), pm.direct(P)):
        raise AssertionError("power map: polynomial and direct evaluation disagree")
    monos = pm.monos[lam == 1]
    pw = _power_table(F, k)

    def scalar(pts):
        pts = np.atleast_2d(pts)
        mon = np.ones((pts.shape[0], len(monos)), dtype=np.int64)
        for i in range(d):
            mon = _fmul(F, mon, pw[pts[:, i]][:, monos[:, i]])
        return np.bitwise_xor.reduce(mon, axis=1) if len(monos) else np.zeros(pts.shape[0], dtype=np.int64)

    def B(v):
        return F.root_2k(int(scalar(np.asarray(v))[0]), t - 1)

    M = np.zeros((d, d), dtype=np.int64)
    E = np.eye(d, dtype=np.int64)
    for i in range(d):
        M[i, i] = B(E[i])
    for i in range(d):
        for j in range(i + 1, d):
            M[i, j] = F.add(F.add(B(E[i] + E[j]), M[i, i]), M[j, j])
    names = standard_names(G.k, 0 if spec.form == "R" else 1)
    form = QuadraticForm.from_matrix(F, M, names)
    # the scalar really is B(x)^(2^(t-1)) for a quadratic form B
    P = rng.integers(0, F.q, size=(checks, d))
    vals = scalar(P)
    for x, v in zip(P, vals):
        if F.root_2k(int(v), t - 1) != form(x):
            raise AssertionError("power map coefficient is not the square-root image of a quadratic form")
    return form


def expected_lambda_form(spec, F: FieldSpec):
    from .quadform import anisotropic_plus_hyperbolic, hyperbolic_form

    t = lambda_form_setting(spec)
    k = len(spec.ells) + (1 if spec.form == "R" else 0)
    gamma = sum(1 for l in spec.ells if l == t) + (1 if spec.form == "R" else 0)
    if spec.form == "R":
        return anisotropic_plus_hyperbolic(F, k, gamma)
    return hyperbolic_form(F, k, gamma)


# ---------------------------------------------------------------------------
# x -> x^p on I/I^2 for odd p


@dataclass
class FrobeniusReport:
    ok: bool
    pairs: int
    exhaustive: bool
    additive_failures: int
    multiplicative_failures: int
    product_pairs: int


def _graded_power_map(G, F: FieldSpec, k: int):
    Q, proj, jb = _quotient_setup(G, k)
    gens = G.generators()
    cand = np.array([g_minus_1(Q, int(proj[g]), G.p) for g in gens])
    I1 = MonomialSubspace(F, jb, jb.power_mask(1))
    I2 = MonomialSubspace(F, jb, jb.power_mask(2))
    dom = SubQuotient(Quotient(I1, I2, check=False), cand)
    cod = Quotient(MonomialSubspace(F, jb, jb.power_mask(k)), MonomialSubspace(F, jb, jb.power_mask(k + 1)), check=False)
    return Q, jb, PowerMap(Q, F, k, dom, cod)


def frobenius_report(G, F: FieldSpec, max_pairs: int = 10_000, product_pairs: int = 2_000, seed: int = 0) -> FrobeniusReport:
    """Check that ``f: I/I^2 -> I^p/I^(p+1)``, ``x -> x^p`` is additive and
    multiplicative.  Products of classes in I/I^2 are computed in FG from
    representatives, so the multiplicative check compares ``(xy)^p`` with
    ``x^p y^p`` modulo ``I^(p+1)``."""
    p = G.p
    if p == 2:
        raise ValueError("the p-power map is not additive in characteristic 2")
    Q, jb, pm = _graded_power_map(G, F, p)
    d = pm.d
    total = F.q**d
    vals = pm.values(points_from_index(F, np.arange(total), d))
    rng = np.random.default_rng(seed)
    if total * total <= max_pairs:
        ii, jj = np.divmod(np.arange(total * total), total)
        exhaustive = True
    else:
        ii = rng.integers(0, total, size=max_pairs)
        jj = rng.integers(0, total, size=max_pairs)
        exhaustive = False
    X, Y = points_from_index(F, ii, d), points_from_index(F, jj, d)
    S = index_from_points(F, np.mod(X + Y, p))
    add_fail = int(np.any(vals[S] != np.mod(vals[ii] + vals[jj], p), axis=1).sum())
    # multiplicativity through representatives
    sel = np.arange(len(ii)) if len(ii) <= product_pairs else rng.choice(len(ii), product_pairs, replace=False)
    top = jb.power_mask(p + 1)
    mul_fail = 0
    cache = {}

    def lift(i):
        if i not in cache:
            cache[i] = pm.dom.lift(points_from_index(F, np.array([i]), d)[0])[0]
        return cache[i]

    for s in sel:
        x, y = lift(int(ii[s])), lift(int(jj[s]))
        lhs = alg_pow(Q, F, alg_mul(Q, F, x, y), p)
        rhs = alg_mul(Q, F, alg_pow(Q, F, x, p), alg_pow(Q, F, y, p))
        diff = jb.to_monomial(alg_sub(F, lhs, rhs))[0]
        if diff[~top].any():
            mul_fail += 1
    return FrobeniusReport(add_fail == 0 and mul_fail == 0, len(ii), exhaustive, add_fail, mul_fail, len(sel))


def frobenius_ringhom_check(G, F: FieldSpec, **kw) -> bool:
    return frobenius_report(G, F, **kw).ok


def square_additivity_witness(G, F: FieldSpec):
    """For p = 2: classes x, y in I/I^2 with ``(x+y)^2 != x^2 + y^2`` modulo
    I^3, found by exhaustive search (``None`` if squaring is additive)."""
    if G.p != 2:
        raise ValueError("characteristic 2 only")
    Q, jb, pm = _graded_power_map(G, F, 2)
    d = pm.d
    total = F.q**d
    pts = points_from_index(F, np.arange(total), d)
    vals = pm.values(pts)
    for i in range(total):
        S = index_from_points(F, pts[i] ^ pts)
        bad = np.flatnonzero(np.any(vals[S] != (vals[i] ^ vals), axis=1))
        if bad.size:
            x, y = pts[i], pts[bad[0]]
            # confirm by direct computation
            lhs = pm.direct(np.atleast_2d(x ^ y))[0]
            rhs = pm.direct(np.atleast_2d(x))[0] ^ pm.direct(np.atleast_2d(y))[0]
            assert not np.array_equal(lhs, rhs)
            return tuple(int(v) for v in x), tuple(int(v) for v in y)
    return None


# ---------------------------------------------------------------------------
# the map x -> x^(2^n) on I/(I^3 + I(Omega_(n-1)(G:Z))FG)


def lambda5_setting(spec):
    """``(n, r)`` for the groups ``Q(n,n)^r * trailing`` and
    ``R(n) * Q(n,n)^(r-1) * trailing`` (trailing factors Q(l,l), l < n)."""
    from .pgroup import SpecError

    if spec.prime != 2:
        raise SpecError("p = 2", "characteristic 2 only")
    if spec.form == "R":
        n = spec.rparam
        return n, 1 + sum(1 for l in spec.ells if l == n)
    if spec.qpairs or not spec.ells:
        raise SpecError("setting violated", "needs Q(n,n)^r * Q(l_2) * ... with l_2 < n")
    n = spec.ells[0]
    return n, sum(1 for l in spec.ells if l == n)


@dataclass
class Lambda5Result:
    n: int
    r: int
    kernel: set  # points (alpha_1, beta_1, ..., alpha_r, beta_r) of F^(2r)
    quad_dim: int
    checks: dict


class Lambda5:
    """The map and its supporting data for one (G, F)."""

    def __init__(self, G: Group, F: FieldSpec, bound: int = ALGEBRA_BOUND):
        if F.p != 2:
            raise ValueError("characteristic 2 only")
        if G.order > bound:
            raise BoundExceeded(f"|G| = {G.order} exceeds the algebra bound {bound}")
        self.G, self.F = G, F
        self.n, self.r = lambda5_setting(G.spec)
        n, r = self.n, self.r
        self.jb = jb = JenningsBasis(G, z=G.z)
        self.k = 2**n
        self.a_weight = 2**n + 2 ** (n - 1) + 1
        self.b_weight = 2 ** (n - 1) + 1
        self.Jmask = jb.power_mask(self.a_weight) | jb.zpower_mask(self.b_weight)
        self.codmask = jb.power_mask(self.k) & ~self.Jmask
        # domain: I / (I^3 + K), K = I(Omega_(n-1)(G:Z))FG
        ev = IdealEvaluator(G, F, bound)
        self.ev = ev
        K = ev.evaluate(f"I(Omega({n - 1},Z))")
        E = K.E.copy()
        E.add(MonomialSubspace(F, jb, jb.power_mask(3)).basis_vectors())
        self.K3 = EchelonSubspace(F, E)
        EK2 = K.E.copy()
        EK2.add(MonomialSubspace(F, jb, jb.power_mask(2)).basis_vectors())
        I1 = MonomialSubspace(F, jb, jb.power_mask(1))
        lin_parent = Quotient(I1, EchelonSubspace(F, EK2), check=False)
        self.A = [g_minus_1(G, G.a(i), 2) for i in range(r)]
        self.B = [g_minus_1(G, G.b(i), 2) for i in range(r)]
        lin = []
        for i in range(r):
            lin += [self.A[i], self.B[i]]
        self.lin = np.array(lin)
        sub = SubQuotient(lin_parent, self.lin)
        if sub.dim != 2 * r or lin_parent.dim != 2 * r:
            raise AssertionError("A_1, B_1, ..., A_r, B_r are not a basis of I/(I(Omega)FG + I^2)")
        parent = Quotient(I1, self.K3, check=False)
        gens = G.generators()
        quad = [alg_mul(G, F, g_minus_1(G, g, 2), g_minus_1(G, h, 2)) for g in gens for h in gens]
        full = SubQuotient(parent, np.concatenate([self.lin, np.array(quad)]))
        if full.dim != parent.dim:
            raise AssertionError("generator products do not span I^2 modulo I^3 + K")
        self.quad = full.reps[2 * r :]
        self.domain_dim = parent.dim

    def coords(self, V) -> np.ndarray:
        return self.jb.to_monomial(V)[:, self.codmask]

    def value(self, x: np.ndarray) -> np.ndarray:
        return self.coords(alg_pow(self.G, self.F, x, self.k))[0]

    def linear_element(self, point) -> np.ndarray:
        F = self.F
        x = np.zeros(self.G.order, dtype=np.int64)
        for i in range(self.r):
            x = alg_add(F, x, alg_scale(F, int(point[2 * i]), self.A[i]))
            x = alg_add(F, x, alg_scale(F, int(point[2 * i + 1]), self.B[i]))
        return x

    def element(self, point, lam) -> np.ndarray:
        F = self.F
        x = self.linear_element(point)
        for c, Qk in zip(lam, self.quad):
            if c:
                x = alg_add(F, x, alg_scale(F, int(c), Qk))
        return x

    def _bits(self, v: np.ndarray) -> np.ndarray:
        m = self.F.m
        return ((v[:, None] >> np.arange(m)[None, :]) & 1).ravel()

    def in_kernel_projection(self, point) -> bool:
        """Whether some lift of the linear class ``point`` lies in ker(Lambda).

        The map ``lambda -> Lambda(L + sum lambda_k Q_k) - Lambda(L)`` is
        additive (checked separately), so the reachable set is an affine
        GF(2)-subspace and the test is a span membership over GF(2)."""
        F = self.F
        L = self.linear_element(point)
        base = self.value(L)
        if not base.any():
            return True
        diffs = []
        for Qk in self.quad:
            for b in range(F.m):
                v = self.value(alg_add(F, L, alg_scale(F, 1 << b, Qk)))
                diffs.append(self._bits(v ^ base))
        E = Echelon.span(2, len(base) * F.m, np.array(diffs)) if diffs else Echelon(2, len(base) * F.m)
        return bool(E.contains(self._bits(base))[0])

    def check_additivity(self, rng, trials: int = 50) -> int:
        """Counts failures of additivity of ``lambda -> Lambda(L+Q(lambda)) - Lambda(L)``."""
        F, K = self.F, len(self.quad)
        fails = 0
        for _ in range(trials):
            pt = rng.integers(0, F.q, size=2 * self.r)
            l1 = rng.integers(0, F.q, size=K)
            l2 = rng.integers(0, F.q, size=K)
            base = self.value(self.linear_element(pt))
            v1 = self.value(self.element(pt, l1)) ^ base
            v2 = self.value(self.element(pt, l2)) ^ base
            v12 = self.value(self.element(pt, l1 ^ l2)) ^ base
            fails += int(not np.array_equal(v12, v1 ^ v2))
        return fails

    def kernel_projection_exhaustive(self, point) -> bool:
        """Same question as :meth:`in_kernel_projection` by trying every lift."""
        F, K = self.F, len(self.quad)
        for idx in range(F.q**K):
            lam = points_from_index(F, np.array([idx]), K)[0] if K else []
            if not self.value(self.element(point, lam)).any():
                return True
        return False

    # -- the coefficient system describing the kernel --------------------------

    def system_solution(self, point):
        """A solution (gamma, delta, epsilon) of the coefficient system for
        this linear class, or None."""
        from .linalg import solve_gf

        F, r = self.F, self.r
        al = [int(point[2 * i]) for i in range(r)]
        be = [int(point[2 * i + 1]) for i in range(r)]
        pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
        nvar = r * r + 2 * len(pairs)
        gidx = lambda i, j: i * r + j
        didx = {p: r * r + s for s, p in enumerate(pairs)}
        eidx = {p: r * r + len(pairs) + s for s, p in enumerate(pairs)}
        rows, rhs = [], []
        for i in range(r):
            row = [0] * nvar
            for j in range(r):
                row[gidx(i, j)] = F.add(row[gidx(i, j)], al[j])
                if j != i:
                    row[didx[tuple(sorted((i, j)))]] = F.add(row[didx[tuple(sorted((i, j)))]], be[j])
            rows.append(row)
            rhs.append(F.mul(al[i], be[i]))
            row = [0] * nvar
            for j in range(r):
                row[gidx(j, i)] = F.add(row[gidx(j, i)], be[j])
                if j != i:
                    row[eidx[tuple(sorted((i, j)))]] = F.add(row[eidx[tuple(sorted((i, j)))]], al[j])
            rows.append(row)
            rhs.append(F.mul(al[i], be[i]))
        sol = solve_gf(F, np.array(rows), np.array(rhs))
        if sol is None:
            return None
        gam = [[sol[gidx(i, j)] for j in range(r)] for i in range(r)]
        dlt = {p: sol[didx[p]] for p in pairs}
        eps = {p: sol[eidx[p]] for p in pairs}
        return gam, dlt, eps

    def extra_condition(self, point) -> bool:
        F, r = self.F, self.r
        s = 0
        for i in range(r):
            s = F.add(s, F.mul(int(point[2 * i]), int(point[2 * i + 1])))
        if self.G.spec.form == "R":
            s = F.add(s, F.add(F.sqr(int(point[0])), F.sqr(int(point[1]))))
        return s == 0

    def system_element(self, point, sol) -> np.ndarray:
        """``X = sum alpha A + beta B + gamma A_i B_j + delta A_i A_j + eps B_i B_j``."""
        F, G, r = self.F, self.G, self.r
        gam, dlt, eps = sol
        x = self.linear_element(point)

        def add(x, c, u, v):
            return alg_add(F, x, alg_scale(F, int(c), alg_mul(G, F, u, v))) if c else x

        for i in range(r):
            for j in range(r):
                x = add(x, gam[i][j], self.A[i], self.B[j])
        for (i, j), c in dlt.items():
            x = add(x, c, self.A[i], self.A[j])
        for (i, j), c in eps.items():
            x = add(x, c, self.B[i], self.B[j])
        return x

    # -- well-definedness sampling ------------------------------------------------

    def _random_I(self, rng) -> np.ndarray:
        x = rng.integers(0, self.F.q, size=self.G.order)
        x[0] = 0
        x[0] = augmentation(self.F, x)
        return x

    def _random_mask(self, rng, mask) -> np.ndarray:
        return MonomialSubspace(self.F, self.jb, mask).random_element(rng)

    def check_well_defined(self, rng, samples: int = 100) -> dict:
        """Failure counts for random shifts of the representatives of
        Lambda, of each step Psi_j, and of additivity of Psi_(j+1)."""
        F, G, jb, n = self.F, self.G, self.jb, self.n
        h = 2 ** (n - 1)
        out = {}
        fails = 0
        for _ in range(samples):
            x = self._random_I(rng)
            s = alg_add(F, self.K3.random_element(rng), self._random_mask(rng, jb.power_mask(3)))
            fails += int(not np.array_equal(self.value(alg_add(F, x, s)), self.value(x)))
        out["Lambda"] = fails

        def den(j):  # modulus of the codomain of Psi_j
            return jb.power_mask(2**j + h + 1) | jb.zpower_mask(2 ** (j - 1) + 1)

        def red(v, mask):
            c = jb.to_monomial(v)[0]
            c[mask] = 0
            return c

        for j in range(1, n + 1):
            fails = 0
            if j == 1:
                shift_mask = jb.power_mask(1 + h + 1) | jb.zpower_mask(1)
            else:
                shift_mask = jb.power_mask(2 ** (j - 1) + h + 1) | jb.zpower_mask(2 ** (j - 2) + 1)
            for _ in range(samples):
                y = self._random_I(rng)
                x = alg_pow(G, F, y, 2 ** (j - 1)) if j > 1 else y
                s = self._random_mask(rng, shift_mask)
                lhs = red(alg_pow(G, F, alg_add(F, x, s), 2), den(j))
                rhs = red(alg_pow(G, F, x, 2), den(j))
                fails += int(not np.array_equal(lhs, rhs))
            out[f"Psi_{j}"] = fails
            if j < n:
                fails = 0
                for _ in range(samples):
                    x = alg_pow(G, F, self._random_I(rng), 2**j)
                    y = alg_pow(G, F, self._random_I(rng), 2**j)
                    lhs = red(alg_pow(G, F, alg_add(F, x, y), 2), den(j + 1))
                    rhs = red(alg_add(F, alg_pow(G, F, x, 2), alg_pow(G, F, y, 2)), den(j + 1))
                    fails += int(not np.array_equal(lhs, rhs))
                out[f"Psi_{j + 1}_additive"] = fails
        return out


def lambda5_kernel(G: Group, F: FieldSpec, seed: int = 0, samples: int = 100,
                   verify: bool = True, bound: int = ALGEBRA_BOUND) -> Lambda5Result:
    """Projection to ``F^(2r)`` (basis A_1, B_1, ..., A_r, B_r) of the kernel
    of ``x -> x^(2^n)``, enumerated over all ``q^(2r)`` linear classes.

    With ``verify`` the additivity used by the span test, the
    well-definedness of the map and its steps, and the coefficient-system
    description of the kernel are all checked and reported in ``checks``.
    """
    lm = Lambda5(G, F, bound)
    r = lm.r
    total = F.q ** (2 * r)
    if total > 1 << 24:
        raise BoundExceeded(f"q^(2r) = {total} exceeds 2^24")
    rng = np.random.default_rng(seed)
    checks = {}
    if verify:
        checks["additivity_failures"] = lm.check_additivity(rng)
        if checks["additivity_failures"]:
            raise AssertionError("fibre map is not additive; span test invalid")
    pts = points_from_index(F, np.arange(total), 2 * r)
    ker = set()
    for pt in pts:
        if lm.in_kernel_projection(pt):
            ker.add(tuple(int(v) for v in pt))
    if verify:
        checks.update(lm.check_well_defined(rng, samples))
        sys_set, constructed_fail = set(), 0
        for pt in pts:
            sol = lm.system_solution(pt)
            if sol is not None and lm.extra_condition(pt):
                key = tuple(int(v) for v in pt)
                sys_set.add(key)
                if lm.value(lm.system_element(pt, sol)).any():
                    constructed_fail += 1
        checks["system_set_equal"] = sys_set == ker
        checks["system_elements_not_in_kernel"] = constructed_fail
        checks["system_set_size"] = len(sys_set)
    return Lambda5Result(lm.n, r, ker, len(lm.quad), checks)
