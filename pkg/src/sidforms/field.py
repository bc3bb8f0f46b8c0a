"""Exact arithmetic in finite fields F_q with q = p^e up to 2^20 elements.

Elements are encoded as integers in [0, q): the base-p digits of the
encoding are the coefficients of the representing polynomial, lowest
degree first.  For prime fields (e = 1) the encoding is the residue
itself.  Multiplication goes through discrete log/exp tables built from a
fixed primitive element, so all operations are table lookups after
construction.

The extension modulus is chosen deterministically: the lexicographically
least monic irreducible polynomial of degree e over F_p, comparing
coefficient tuples lowest degree first.  This keeps element encodings
reproducible across runs and machines.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math

import numpy as np

from .errors import DimensionMismatch, FieldTooLarge, NotPrime

MAX_FIELD_SIZE = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ------------------------------------------------------------------ F_p[x]

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    a = list(a)
    db, lead_inv = len(b) - 1, pow(b[-1], -1, p)
    quo = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - 1 - db
        f = a[-1] * lead_inv % p
        quo[shift] = f
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - f * bi) % p
        _poly_trim(a)
    return quo, a


def _poly_irreducible(poly, p):
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _poly_divmod(poly, divisor, p)[1]:
                return False
    return True


def _least_irreducible(p, e):
    # itertools.product yields coefficient tuples (c_0, ..., c_{e-1}) in
    # lexicographic order with c_0 most significant, which is exactly the
    # "compare lowest degree first" order.
    for coeffs in itertools.product(range(p), repeat=e):
        poly = list(coeffs) + [1]
        if _poly_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ------------------------------------------------------------------ field

class FieldSpec:
    """A finite field F_q, q = p^e, with log/exp multiplication tables.

    Immutable after construction; safe to share across threads.  Use
    :func:`make_field` instead of calling this directly so specs are
    cached and compared by identity.
    """

    def __init__(self, p: int, e: int, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if e < 1:
            raise FieldTooLarge(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > MAX_FIELD_SIZE:
            raise FieldTooLarge(f"q = {q} exceeds table bound {MAX_FIELD_SIZE}")
        self.p = p
        self.e = e
        self.q = q
        if modulus is not None:
            modulus = tuple(c % p for c in modulus)
            if e == 1:
                raise ValueError("modulus override only applies to extension fields")
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {e}")
            if not _poly_irreducible(list(modulus), p):
                raise ValueError("modulus is reducible")
            self.modulus = modulus
        else:
            self.modulus = _least_irreducible(p, e) if e > 1 else (0, 1)
        self._build_tables()
        self._trace_table = None

    def _encode(self, digits):
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def _decode(self, v):
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    def _raw_mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        prod = _poly_mul(self._decode(a), self._decode(b), self.p)
        _, rem = _poly_divmod(prod, list(self.modulus), self.p)
        rem += [0] * (self.e - len(rem))
        return self._encode(rem)

    def _build_tables(self):
        p, q = self.p, self.q
        # additive structure
        if self.e == 1:
            self._neg = np.array([(-a) % p for a in range(q)], dtype=np.int64)
        else:
            self._neg = np.array(
                [self._encode([(-d) % p for d in self._decode(a)]) for a in range(q)],
                dtype=np.int64,
            )
        # multiplicative structure via a primitive element
        factors = _prime_factors(q - 1)
        gen = None
        for g in range(1, q):
            if all(self._raw_pow(g, (q - 1) // f) != 1 for f in factors):
                gen = g
                break
        assert gen is not None
        exp = np.zeros(max(2 * (q - 1), 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._raw_mul(x, gen)
        if q > 2 and sorted(exp[: q - 1]) != list(range(1, q)):
            raise AssertionError("multiplicative group order check failed")
        exp[q - 1:] = exp[: len(exp) - (q - 1)]
        self.generator = gen
        self._exp = exp
        self._log = log
        self._inv = np.zeros(q, dtype=np.int64)
        if q > 1:
            nz = np.arange(1, q)
            self._inv[1:] = exp[(q - 1 - log[nz]) % (q - 1)]

    def _raw_pow(self, a, n):
        r = 1
        while n:
            if n & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            n >>= 1
        return r

    # -- scalar operations on encoded values ------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        pk, out = 1, 0
        for da, db in zip(self._decode(a), self._decode(b)):
            out += ((da + db) % self.p) * pk
            pk *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self._neg[b]))

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self._inv[a])

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n else 1
        return int(self._exp[(self._log[a] * n) % (self.q - 1)])

    def trace(self, a: int) -> int:
        """Trace into the prime field: a + a^p + ... + a^(p^(e-1))."""
        if self.e == 1:
            return a
        t, x = 0, a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.pow(x, self.p)
        assert t < self.p
        return t

    @property
    def trace_table(self) -> np.ndarray:
        if self._trace_table is None:
            self._trace_table = np.array(
                [self.trace(a) for a in range(self.q)], dtype=np.int64
            )
        return self._trace_table

    # -- vectorised operations on int64 arrays of encoded values ----------

    def mul_vec(self, c: int, arr: np.ndarray) -> np.ndarray:
        """Elementwise c * arr."""
        if c == 0:
            return np.zeros_like(arr)
        out = self._exp[self._log[arr] + self._log[c]]
        return np.where(arr == 0, 0, out)

    def add_vec(self, a, b) -> np.ndarray:
        """Elementwise a + b; either argument may be a scalar."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pk = 1
        for _ in range(self.e):
            out += ((a + b) % self.p) * pk
            a, b = a // self.p, b // self.p
            pk *= self.p
        return out

    def neg_vec(self, arr: np.ndarray) -> np.ndarray:
        return self._neg[arr]

    def elem(self, value: int) -> "FieldElem":
        return FieldElem(self, value % self.q if self.e == 1 else value)

    def elements(self):
        return [FieldElem(self, v) for v in range(self.q)]

    def reduce_int(self, value: int) -> int:
        """Map a (possibly negative) integer into the field.

        For e > 1 only the prime subfield is reachable this way, which is
        how coefficient files written with plain integers are interpreted.
        """
        r = value % self.p
        return r

    def __repr__(self):
        if self.e == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={list(self.modulus)})"


def _prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@functools.lru_cache(maxsize=None)
def make_field(p: int, e: int = 1, modulus: tuple | None = None) -> FieldSpec:
    """Construct (and cache) the field F_{p^e}."""
    return FieldSpec(p, e, modulus)


def field_from_order(q: int) -> FieldSpec:
    """F_q for a prime power q, factoring q as p^e."""
    if q < 2:
        raise NotPrime(f"q = {q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise NotPrime(f"q = {q} is not a prime power")
            return make_field(p, e)
    raise NotPrime(f"q = {q} is not a prime power")


class FieldElem:
    """A single field element; thin wrapper over the integer encoding."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        if not 0 <= value < field.q:
            raise ValueError(f"encoding {value} out of range for {field}")
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise DimensionMismatch("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p if self.field.e > 1 else other % self.field.q
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return FieldElem(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return FieldElem(self.field, self.field.sub(self.value, v))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        return FieldElem(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __pow__(self, n):
        return FieldElem(self.field, self.field.pow(self.value, n))

    def inv(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def trace(self):
        return FieldElem(self.field, self.field.trace(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __repr__(self):
        return f"F{self.field.q}({self.value})"


def trace(x: FieldElem) -> FieldElem:
    """Field trace into the prime subfield."""
    return x.trace()


def character(field: FieldSpec, r, x) -> complex:
    """Additive character value exp(-2*pi*i * Tr(sum r_j x_j) / p).

    ``r`` and ``x`` are equal-length vectors of encoded elements.
    """
    r = [v.value if isinstance(v, FieldElem) else v for v in r]
    x = [v.value if isinstance(v, FieldElem) else v for v in x]
    if len(r) != len(x):
        raise DimensionMismatch(f"length {len(r)} vs {len(x)}")
    t = 0
    for rj, xj in zip(r, x):
        t = (t + field.trace(field.mul(rj, xj))) % field.p
    return cmath.exp(-2j * math.pi * t / field.p)
