"""Prime fields GF(p) and binary fields GF(2^m).

Elements are plain Python ints in ``[0, q)``.  For GF(p) an element is its
residue; for GF(2^m) bit ``k`` of the integer is the coefficient of ``x^k``.
Binary fields with ``q <= 2**16`` carry log/antilog tables, and those with
``q <= 256`` also a full multiplication table as a numpy array so that
enumeration-heavy code can work on whole arrays at once.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

# Default irreducible moduli, encoded as bit vectors (bit k <-> x^k).
DEFAULT_MODULI = {
    1: 0b10,  # x
    2: 0b111,  # x^2 + x + 1
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10000011,  # x^7 + x + 1
    8: 0b100011011,  # x^8 + x^4 + x^3 + x + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-vector polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod2(a: int, m: int) -> int:
    """Remainder of ``a`` modulo ``m`` in GF(2)[x]."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible_gf2(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = modulus.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(1 << d):
            if poly_mod2(modulus, (1 << d) | low) == 0:
                return False
    return True


class FieldSpec:
    """A finite field GF(p) or GF(2^m).

    Instances are immutable once built; the arithmetic methods accept ints,
    and ``mul``/``add``/``sqr`` also accept integer numpy arrays.
    """

    def __init__(self, p: int, m: int = 1, modulus: int | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("degree must be positive")
        if p != 2 and m != 1:
            raise ValueError("only GF(p) is supported for odd p (m must be 1)")
        self.p = p
        self.m = m
        self.q = p**m
        if p == 2:
            if modulus is None:
                if m not in DEFAULT_MODULI:
                    raise ValueError(f"no built-in modulus for GF(2^{m}); pass modulus=")
                modulus = DEFAULT_MODULI[m]
            if modulus.bit_length() - 1 != m:
                raise ValueError(f"modulus has degree {modulus.bit_length() - 1}, expected {m}")
            if not is_irreducible_gf2(modulus):
                raise ValueError(f"modulus {bin(modulus)} is reducible over GF(2)")
        elif modulus is not None:
            raise ValueError("modulus only applies to binary fields")
        self.modulus = modulus
        self._exp = self._log = None
        if p == 2 and self.q <= 1 << 16:
            self._build_log_tables()

    # -- construction helpers -------------------------------------------------

    def _build_log_tables(self):
        q = self.q
        if q == 2:
            self._exp = [1, 1]
            self._log = [0, 0]
            return
        # find a generator of the multiplicative group
        order = q - 1
        primes = [d for d in range(2, order + 1) if order % d == 0 and is_prime(d)]
        for g in range(2, q):
            if all(self._slow_pow(g, order // d) != 1 for d in primes):
                break
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, g)
        for k in range(order, 2 * order):
            exp[k] = exp[k - order]
        self._exp = exp
        self._log = log

    def _slow_mul(self, a: int, b: int) -> int:
        return poly_mod2(clmul(a, b), self.modulus)

    def _slow_pow(self, a: int, k: int) -> int:
        out = 1
        while k:
            if k & 1:
                out = self._slow_mul(out, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return out

    # -- identity -------------------------------------------------------------

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    @property
    def is_binary(self) -> bool:
        return self.p == 2

    def elements(self) -> list[int]:
        """All q elements in ascending order of their integer encoding."""
        return list(range(self.q))

    # -- arithmetic -----------------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        return (a + b) % self.p

    def neg(self, a):
        if self.p == 2:
            return a
        return (-a) % self.p

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            if self.p != 2:
                return (np.asarray(a, dtype=np.int64) * b) % self.p
            return self.mul_table[a, b]
        if self.p != 2:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def sqr(self, a):
        return self.mul(a, a)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p != 2:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, k: int = 1) -> int:
        """``a^(p^k)``."""
        for _ in range(k):
            a = self.pow(a, self.p)
        return a

    def sqrt(self, a: int) -> int:
        """Square root in characteristic 2, i.e. ``a^(2^(m-1))``."""
        if self.p != 2:
            raise ValueError("sqrt is only defined here for characteristic 2")
        return self.frobenius(a, self.m - 1)

    def root_2k(self, a: int, k: int) -> int:
        """Inverse of ``x -> x^(2^k)``."""
        for _ in range(k):
            a = self.sqrt(a)
        return a

    def trace(self, a: int) -> int:
        """Absolute trace ``a + a^2 + ... + a^(2^(m-1))``, returned as 0 or 1."""
        if self.p != 2:
            raise ValueError("trace is only provided for characteristic 2")
        t, x = 0, a
        for _ in range(self.m):
            t ^= x
            x = self.mul(x, x)
        assert t in (0, 1)
        return t

    # -- tables ---------------------------------------------------------------

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Full ``q x q`` multiplication table (q <= 256)."""
        if self.q > 256:
            raise ValueError("multiplication table only built for q <= 256")
        q = self.q
        if self.p != 2:
            r = np.arange(q, dtype=np.int64)
            return np.outer(r, r) % q
        t = np.zeros((q, q), dtype=np.uint8 if q <= 256 else np.uint16)
        for a in range(1, q):
            for b in range(a, q):
                t[a, b] = t[b, a] = self.mul(a, b)
        t.setflags(write=False)
        return t

    @cached_property
    def inv_table(self) -> np.ndarray:
        t = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            t[a] = self.inv(a)
        return t


def ff_make(p: int, m: int = 1, modulus: int | None = None) -> FieldSpec:
    return FieldSpec(p, m, modulus)


def field_for_order(q: int) -> FieldSpec:
    """GF(q) for q a prime or a power of two."""
    if q >= 2 and q & (q - 1) == 0:
        return FieldSpec(2, q.bit_length() - 1)
    return FieldSpec(q, 1)


def has_cube_root_of_unity(F: FieldSpec) -> bool:
    """Whether X^2 + X + 1 has a root in F (found by exhaustive search)."""
    return any(F.add(F.add(F.mul(x, x), x), 1) == 0 for x in F.elements())
