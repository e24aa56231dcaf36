"""Finite p-groups of class 2 with cyclic center, in Leong's normal forms.

A group is a central product of factors ``Q(n, r)`` (and, for p = 2,
optionally one ``R(n)`` in front).  Every element is stored in the collected
normal form

    a_1^e_1 b_1^f_1 ... a_k^e_k b_k^f_k z^c,

where ``z`` generates the (cyclic) center and ``0 <= e_i, f_i < p^rho_i``
with ``rho_i`` the log-order of the factor modulo its center.  Powers
``a_i^(p^rho_i)`` and ``b_i^(p^rho_i)`` and the commutators ``[b_i, a_i]``
are folded into the central coordinate.  Elements are addressed by a
mixed-radix integer index (the identity is 0) and all group operations are
vectorized over numpy index arrays.
"""

from __future__ import annotations

import ast
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .finitefield import is_prime
from .smith import abelian_invariants

ENUM_BOUND = 1 << 16


class SpecError(ValueError):
    """A parameter list violating the classification conditions."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"{condition}: {detail}" if detail else condition)


class BoundExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class GroupSpec:
    prime: int
    form: str  # "Q" or "R"
    qpairs: tuple[tuple[int, int], ...] = ()
    ells: tuple[int, ...] = ()
    rparam: int | None = None

    def __post_init__(self):
        qpairs = tuple(tuple(map(int, q)) for q in self.qpairs)
        ells = tuple(int(x) for x in self.ells)
        if self.form == "Q" and any(n == r for n, r in qpairs):
            # a pair (l, l) is a Q(l, l) factor and belongs to the ell list
            ells = tuple(sorted(ells + tuple(n for n, r in qpairs if n == r), reverse=True))
            qpairs = tuple((n, r) for n, r in qpairs if n != r)
        object.__setattr__(self, "qpairs", qpairs)
        object.__setattr__(self, "ells", ells)

    @property
    def alpha(self) -> int:
        return len(self.qpairs)

    @property
    def beta(self) -> int:
        return len(self.ells)

    def validate(self) -> "GroupSpec":
        p = self.prime
        if not is_prime(p):
            raise SpecError("prime", f"{p} is not prime")
        if any(x < 1 for x in self.ells):
            raise SpecError("ell >= 1", str(self.ells))
        if any(self.ells[i] < self.ells[i + 1] for i in range(self.beta - 1)):
            raise SpecError("ells non-increasing", str(self.ells))
        if self.form == "R":
            if p != 2:
                raise SpecError("R-form requires p = 2")
            if self.qpairs:
                raise SpecError("R-form has no Q(n,r) factors")
            n = self.rparam
            if n is None or n < 1:
                raise SpecError("n >= 1", str(n))
            if self.ells and self.ells[0] > n:
                raise SpecError("n >= ell_1", f"n={n}, ell_1={self.ells[0]}")
            return self
        if self.form != "Q":
            raise SpecError("form", f"unknown form {self.form!r}")
        if self.rparam is not None:
            raise SpecError("Q-form takes no rparam")
        if self.alpha + self.beta == 0:
            raise SpecError("alpha + beta > 0")
        ns = [n for n, _ in self.qpairs]
        rs = [r for _, r in self.qpairs]
        if any(ns[i] <= ns[i + 1] for i in range(self.alpha - 1)):
            raise SpecError("n_1 > ... > n_alpha", str(ns))
        if self.alpha:
            if self.ells and not ns[-1] > self.ells[0]:
                raise SpecError("n_alpha > ell_1", f"n_alpha={ns[-1]}, ell_1={self.ells[0]}")
            if not ns[-1] > rs[0]:
                raise SpecError("n_alpha > r_1", f"n_alpha={ns[-1]}, r_1={rs[0]}")
            if any(rs[i] <= rs[i + 1] for i in range(self.alpha - 1)) or rs[-1] < 0:
                raise SpecError("r_1 > ... > r_alpha >= 0", str(rs))
            ds = [n - r for n, r in self.qpairs]
            if any(ds[i] >= ds[i + 1] for i in range(self.alpha - 1)):
                raise SpecError("n_1 - r_1 < ... < n_alpha - r_alpha", str(ds))
            if p == 2 and not ds[0] > 1:
                raise SpecError("1 < n_1 - r_1 (p = 2)", str(ds[0]))
            for i in range(1, self.alpha):
                if rs[i - 1] == rs[i] + 1:
                    raise SpecError("r_(i-1) != r_i + 1", str(rs))
        return self

    def __str__(self):
        return format_spec(self)


def format_spec(spec: GroupSpec) -> str:
    ells = "[" + ",".join(map(str, spec.ells)) + "]"
    if spec.form == "R":
        return f"R p={spec.prime} n={spec.rparam} {ells}"
    pairs = "[" + ",".join(f"({n},{r})" for n, r in spec.qpairs) + "]"
    return f"Q p={spec.prime} {pairs} {ells}"


_Q_RE = re.compile(r"^\s*Q\s+p\s*=\s*(\d+)\s+(\[.*?\])\s*(\[.*?\])\s*$")
_R_RE = re.compile(r"^\s*R\s+p\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*(\[.*?\])\s*$")


def parse_spec(text: str) -> GroupSpec:
    """Parse ``Q p=2 [(2,2)] []`` / ``R p=2 n=2 [1]`` and validate."""
    m = _Q_RE.match(text)
    try:
        if m:
            pairs = ast.literal_eval(m.group(2))
            ells = ast.literal_eval(m.group(3))
            spec = GroupSpec(int(m.group(1)), "Q", tuple(tuple(x) for x in pairs), tuple(ells))
            return spec.validate()
        m = _R_RE.match(text)
        if m:
            ells = ast.literal_eval(m.group(3))
            spec = GroupSpec(int(m.group(1)), "R", (), tuple(ells), int(m.group(2)))
            return spec.validate()
    except (SyntaxError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise ValueError(f"malformed group spec {text!r}: {exc}") from None
    raise ValueError(f"malformed group spec {text!r}")


def Qspec(p, qpairs=(), ells=()) -> GroupSpec:
    return GroupSpec(p, "Q", tuple(qpairs), tuple(ells)).validate()


def Rspec(n, ells=()) -> GroupSpec:
    return GroupSpec(2, "R", (), tuple(ells), n).validate()


# ---------------------------------------------------------------------------
# closed formulas


@dataclass(frozen=True)
class StructureProfile:
    zeta: int
    delta: int
    exponent: int
    dG: int
    L: tuple[int, ...]
    mG: int
    epsilon: int


def _top_multiplicity(L):
    return Counter(L)[max(L)] if L else 0


def structure_formula(spec: GroupSpec) -> StructureProfile:
    """Invariants read off the parameters.

    ``L`` lists the positive entries only; a trailing ``r_alpha = 0`` is
    visible through the parity of ``dG`` instead.
    """
    p = spec.prime
    eps = 1 if p == 2 else 0
    if spec.form == "R":
        n = spec.rparam
        L = tuple(sorted((n,) + spec.ells, reverse=True))
        return StructureProfile(n, n, n + 1, 2 * (1 + spec.beta), L, 2 * _top_multiplicity(L), eps)
    rs = [r for _, r in spec.qpairs]
    ns = [n for n, _ in spec.qpairs]
    r1 = rs[0] if rs else 0
    l1 = spec.ells[0] if spec.ells else 0
    zeta = max(r1, (ns[-1] - rs[-1]) if rs else 0, l1)
    delta = max(r1, l1)
    if spec.alpha:
        exponent = ns[0]
    else:
        exponent = l1 + eps
    k = spec.alpha + spec.beta
    dG = 2 * k - 1 if (spec.alpha and rs[-1] == 0) else 2 * k
    L = tuple(sorted([r for r in rs if r > 0] + list(spec.ells), reverse=True))
    return StructureProfile(zeta, delta, exponent, dG, L, 2 * _top_multiplicity(L), eps)


INF = math.inf


@dataclass(frozen=True)
class NuProfile:
    mu: int
    nu: int
    nu_tilde: int
    i_t: int
    j_t: int


def nu_profile(spec: GroupSpec, t: int) -> NuProfile:
    """The exponents with ``G^(p^t) & Z = Z^(p^nu)`` and
    ``D_(p^t+1) & Z = Z^(p^nu_tilde)`` for a Q-form group.

    Values are saturated into ``[0, zeta]``; ``t = 0`` is accepted and gives
    ``nu = 0`` and ``nu_tilde`` for ``D_2 = Phi(G)``.
    """
    if spec.form != "Q":
        raise ValueError("nu_profile covers Q-form groups only")
    if t < 0:
        raise ValueError("t must be non-negative")
    sp = structure_formula(spec)
    zeta, delta, eps = sp.zeta, sp.delta, sp.epsilon
    rs = [r for _, r in spec.qpairs]
    ns = [n for n, _ in spec.qpairs]

    def i_of(s):
        return sum(1 for r in rs if r > s)

    def r_at(i):
        return INF if i == 0 else (rs[i - 1] if i <= len(rs) else 0)

    def n_at(i):
        return 0 if i == 0 else (ns[i - 1] if i <= len(ns) else zeta)

    def mu(s):
        i = i_of(s)
        return min(zeta + r_at(i) - n_at(i), zeta + s - n_at(i + 1))

    def sat(x):
        return int(max(0, min(zeta, x)))

    i_t = i_of(t)
    j_t = sum(1 for l in spec.ells if l > t)
    mu_t = mu(t)
    nu_t = 0 if t == 0 else min(mu_t, zeta + t - delta - eps)
    nu_tilde = min(mu(t + 1), zeta + t - delta)
    return NuProfile(sat(mu_t), sat(nu_t), sat(nu_tilde), i_t, j_t)


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class Factor:
    kind: str  # "Q" or "R"
    n: int
    r: int
    rho: int  # a, b exponents live in [0, p^rho)
    zeta: int  # log-order of the factor's center
    s_a: int  # a^(p^rho) = w^s_a, w the factor's central generator
    s_b: int
    s_c: int  # [a, b] = w^s_c

    @classmethod
    def q(cls, p, n, r):
        if 2 * r <= n:
            z = n - r
            return cls("Q", n, r, r, z, 1 % p**z, 0, p ** (n - 2 * r) % p**z)
        return cls("Q", n, r, r, r, p ** (2 * r - n), 0, 1)

    @classmethod
    def rn(cls, n):
        h = 2 ** (n - 1)
        return cls("R", n, n, n, n, h, h, 1)


@dataclass(frozen=True)
class GroupElement:
    exps: tuple[tuple[int, int], ...]
    central: int


class Group:
    """A group of the classified family, built from a validated spec."""

    def __init__(self, spec: GroupSpec):
        spec.validate()
        self.spec = spec
        p = self.p = spec.prime
        if spec.form == "R":
            factors = [Factor.rn(spec.rparam)]
        else:
            factors = [Factor.q(p, n, r) for n, r in spec.qpairs]
        factors += [Factor.q(p, l, l) for l in spec.ells]
        self.factors = factors
        self.k = len(factors)
        self.zeta = max(f.zeta for f in factors)
        self.zorder = p**self.zeta
        scale = [p ** (self.zeta - f.zeta) for f in factors]
        self.sig_a = np.array([f.s_a * s for f, s in zip(factors, scale)], dtype=np.int64)
        self.sig_b = np.array([f.s_b * s for f, s in zip(factors, scale)], dtype=np.int64)
        self.sig_c = np.array([f.s_c * s for f, s in zip(factors, scale)], dtype=np.int64)
        self.ranges = np.array([p**f.rho for f in factors], dtype=np.int64)
        radices = []
        for R in self.ranges:
            radices += [int(R), int(R)]
        radices.append(self.zorder)
        self.radices = np.array(radices, dtype=np.int64)
        places = np.ones(len(radices), dtype=np.int64)
        for i in range(len(radices) - 2, -1, -1):
            places[i] = places[i + 1] * radices[i + 1]
        self.places = places
        self.log_order = self.zeta + 2 * sum(f.rho for f in factors)
        self.order = p**self.log_order

    def __repr__(self):
        return f"Group({format_spec(self.spec)}, order={self.p}^{self.log_order})"

    # -- encoding -------------------------------------------------------------

    def decode(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.places) % self.radices

    def encode(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self.places

    def _normalize(self, e, f, c):
        """Fold arbitrary integer exponents into normal form, returning indices."""
        qa, e = np.divmod(e, self.ranges)
        qb, f = np.divmod(f, self.ranges)
        c = c + (qa * self.sig_a).sum(-1) + (qb * self.sig_b).sum(-1)
        c = np.mod(c, self.zorder)
        coords = np.empty(e.shape[:-1] + (2 * self.k + 1,), dtype=np.int64)
        coords[..., 0:-1:2] = e
        coords[..., 1:-1:2] = f
        coords[..., -1] = c
        return self.encode(coords)

    def _split(self, x):
        cx = self.decode(x)
        return cx[..., 0:-1:2], cx[..., 1:-1:2], cx[..., -1]

    def element(self, exps, central: int = 0) -> int:
        """Index of ``prod a_i^e_i b_i^f_i * z^central`` (exponents may be any ints)."""
        e = np.array([x for x, _ in exps], dtype=np.int64)
        f = np.array([y for _, y in exps], dtype=np.int64)
        return int(self._normalize(e, f, np.int64(central)))

    def normal_form(self, x) -> GroupElement:
        e, f, c = self._split(int(x))
        return GroupElement(tuple(zip(map(int, e), map(int, f))), int(c))

    # -- multiplication -------------------------------------------------------

    def mul(self, x, y):
        ex, fx, cx = self._split(x)
        ey, fy, cy = self._split(y)
        # b^f a^e' = a^e' b^f [b, a]^(f e'), and [b, a] = z^(-sig_c)
        c = cx + cy - (fx * ey * self.sig_c).sum(-1)
        out = self._normalize(ex + ey, fx + fy, c)
        return out if out.ndim else int(out)

    def inv(self, x):
        e, f, c = self._split(x)
        # (a^e b^f z^c)^-1 = z^-c b^-f a^-e = a^-e b^-f z^(-c - sig_c f e)
        out = self._normalize(-e, -f, -c - (f * e * self.sig_c).sum(-1))
        return out if out.ndim else int(out)

    def pow(self, x, k: int):
        if k < 0:
            x, k = self.inv(x), -k
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros_like(x)
        while k:
            if k & 1:
                out = self.mul(out, x)
            k >>= 1
            if k:
                x = self.mul(x, x)
        out = np.asarray(out)
        return out if out.ndim else int(out)

    def comm(self, x, y):
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    @property
    def identity(self) -> int:
        return 0

    def a(self, i: int) -> int:
        exps = [(0, 0)] * self.k
        exps[i] = (1, 0)
        return self.element(exps)

    def b(self, i: int) -> int:
        exps = [(0, 0)] * self.k
        exps[i] = (0, 1)
        return self.element(exps)

    @property
    def z(self) -> int:
        return self.element([(0, 0)] * self.k, 1)

    def generators(self) -> list[int]:
        """The nontrivial a_i, b_i, in factor order."""
        out = []
        for i in range(self.k):
            for g in (self.a(i), self.b(i)):
                if g != 0 and g not in out:
                    out.append(g)
        return out

    def elements(self) -> np.ndarray:
        self._check_bound()
        return np.arange(self.order, dtype=np.int64)

    def _check_bound(self, bound: int = ENUM_BOUND):
        if self.order > bound:
            raise BoundExceeded(f"|G| = {self.order} exceeds the enumeration bound {bound}")

    def element_log_orders(self, xs=None) -> np.ndarray:
        xs = self.elements() if xs is None else np.asarray(xs, dtype=np.int64)
        out = np.zeros(xs.shape, dtype=np.int64)
        cur = xs.copy()
        while True:
            live = cur != 0
            if not live.any():
                return out
            out[live] += 1
            cur = self.pow(cur, self.p)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``T[g, h] = index of g*h``; built in row blocks."""
        from .groupalgebra import cayley_table

        xs = self.elements()
        gens = self.generators() + [self.z]
        return cayley_table(self.order, {g: self.mul(xs, g) for g in gens})


def make_group(spec: GroupSpec) -> Group:
    return Group(spec)


def multiply(G: Group, g: GroupElement, h: GroupElement) -> GroupElement:
    return G.normal_form(G.mul(G.element(g.exps, g.central), G.element(h.exps, h.central)))


def power(G: Group, g: GroupElement, k: int) -> GroupElement:
    return G.normal_form(G.pow(G.element(g.exps, g.central), k))


# ---------------------------------------------------------------------------
# subgroups


@dataclass
class Subgroup:
    group: Group
    mask: np.ndarray
    gens: list[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    @property
    def log_order(self) -> int:
        return round(math.log(self.order, self.group.p))

    @property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.mask]))

    def __eq__(self, other):
        return isinstance(other, Subgroup) and np.array_equal(self.mask, other.mask)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.mask & other.mask)

    def __mul__(self, other: "Subgroup") -> "Subgroup":
        return closure(self.group, other.gens or other.elements, start=self)


def closure(G: Group, gens, start: Subgroup | None = None) -> Subgroup:
    """Subgroup generated by ``gens`` (and ``start``) by right-multiplication BFS."""
    G._check_bound()
    if start is None:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        used = []
    else:
        mask = start.mask.copy()
        used = list(start.gens) if start.gens else [int(x) for x in start.elements]
    for g in np.asarray(gens, dtype=np.int64).ravel():
        g = int(g)
        if mask[g]:
            continue
        used.append(g)
        front = np.unique(G.mul(np.flatnonzero(mask), g))
        front = front[~mask[front]]
        while front.size:
            mask[front] = True
            nxt = np.unique(np.concatenate([G.mul(front, s) for s in used]))
            front = nxt[~mask[nxt]]
    return Subgroup(G, mask, used)


def center(G: Group) -> Subgroup:
    xs = G.elements()
    ok = np.ones(G.order, dtype=bool)
    for s in G.generators():
        ok &= G.mul(xs, s) == G.mul(s, xs)
    if hasattr(G, "z"):
        return Subgroup(G, ok, [G.z])
    return closure(G, np.flatnonzero(ok))


def derived(G: Group) -> Subgroup:
    gens = G.generators()
    comms = [G.comm(x, y) for i, x in enumerate(gens) for y in gens[i + 1 :]]
    return closure(G, comms)


def agemo(G: Group, t: int, N: Subgroup | None = None) -> Subgroup:
    """``N^(p^t)``, the subgroup generated by p^t-th powers of elements of N."""
    xs = G.elements() if N is None else N.elements
    return closure(G, np.unique(G.pow(xs, G.p**t)))


def omega(G: Group, t: int, N: Subgroup) -> Subgroup:
    """``Omega_t(G : N) = <g : g^(p^t) in N>``."""
    xs = G.elements()
    return closure(G, xs[N.mask[G.pow(xs, G.p**t)]])


def _ceil_log(p: int, s: float) -> int:
    j = 0
    while p**j < s:
        j += 1
    return j


def jennings(G: Group, s: int) -> Subgroup:
    """``D_s(G) = G^(p^ceil(log_p s)) (G')^(p^ceil(log_p s/2))``."""
    if s < 1:
        raise ValueError("s >= 1")
    j1 = _ceil_log(G.p, s)
    j2 = _ceil_log(G.p, s / 2)
    A = agemo(G, j1)
    B = agemo(G, j2, derived(G))
    return closure(G, B.elements, start=A)


def frattini(G: Group) -> Subgroup:
    return jennings(G, 2)


def subgroup(G: Group, kind: str, *args) -> Subgroup:
    """Dispatch by name: center, derived, agemo t, omega t N, jennings s, frattini."""
    fns = {
        "center": center,
        "derived": derived,
        "agemo": agemo,
        "omega": omega,
        "jennings": jennings,
        "frattini": frattini,
    }
    if kind not in fns:
        raise ValueError(f"unknown subgroup kind {kind!r}")
    return fns[kind](G, *args)


# ---------------------------------------------------------------------------
# enumerated structure


def quotient_invariants_by_counts(G: Group, N: Subgroup) -> tuple[int, ...]:
    """Log-orders of the cyclic factors of an abelian ``G/N``, from the
    sizes of ``Omega_k(G/N)`` for k = 0, 1, ...
    """
    xs = G.elements()
    logs = [0]
    cur = xs
    k = 0
    total = G.log_order - N.log_order
    while logs[-1] < total:
        k += 1
        cur = G.pow(cur, G.p)
        cnt = int(N.mask[cur].sum()) // N.order
        logs.append(round(math.log(cnt, G.p)))
    # number of factors of exponent >= k is logs[k] - logs[k-1]
    ge = [logs[i] - logs[i - 1] for i in range(1, len(logs))] + [0]
    inv = []
    for k in range(1, len(ge)):
        inv += [k] * (ge[k - 1] - ge[k])
    return tuple(sorted(inv, reverse=True))


def quotient_invariants_snf(G: Group, Z: Subgroup) -> tuple[int, ...]:
    """Invariants of G/Z from the relation matrix on the images of the
    generators.  Requires the generator images to be independent
    (checked against |G/Z|)."""
    gens = G.generators()
    gens = [g for g in gens if not Z.mask[g]]
    orders = []
    for g in gens:
        k, x = 0, g
        while not Z.mask[x]:
            x = G.pow(x, G.p)
            k += 1
        orders.append(G.p**k)
    if math.prod(orders) != G.order // Z.order:
        raise ValueError("generator images are not independent in G/Z")
    rel = np.diag(orders) if orders else np.zeros((0, 0), dtype=np.int64)
    inv = abelian_invariants(rel)
    return tuple(sorted((round(math.log(d, G.p)) for d in inv if d > 1), reverse=True))


def L_from_invariants(inv) -> tuple[int, ...]:
    c = Counter(inv)
    if any(v % 2 for v in c.values()):
        raise ValueError(f"invariants {inv} are not paired")
    out = []
    for k, v in c.items():
        out += [k] * (v // 2)
    return tuple(sorted(out, reverse=True))


def structure_enumerated(G: Group) -> StructureProfile:
    Z = center(G)
    D = derived(G)
    exponent = int(G.element_log_orders().max())
    dG = G.log_order - frattini(G).log_order
    inv = quotient_invariants_by_counts(G, Z)
    L = L_from_invariants(inv)
    return StructureProfile(
        Z.log_order, D.log_order, exponent, dG, L, 2 * _top_multiplicity(L), 1 if G.p == 2 else 0
    )


def structure(G: Group, verify: bool = True) -> StructureProfile:
    """Closed-form profile, cross-checked by enumeration when |G| <= 2^16."""
    sp = structure_formula(G.spec)
    if verify and G.order <= ENUM_BOUND:
        en = structure_enumerated(G)
        if en != sp:
            raise AssertionError(f"structure mismatch for {G.spec}: formula {sp}, enumerated {en}")
    return sp
