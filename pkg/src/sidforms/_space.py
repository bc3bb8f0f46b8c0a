"""Encodings and lookup tables for the point space F_q^n.

A point (x_0, ..., x_{n-1}) is encoded as the integer
sum_i x_i * q^(n-1-i) (first coordinate most significant), so files and
JSON values written in coordinate order match the encoding order.
"""

from __future__ import annotations

import numpy as np

from .field import FieldSpec


class VectorSpace:
    """F_q^n with cached digit/negation/scalar-multiplication tables."""

    def __init__(self, field: FieldSpec, n: int):
        self.field = field
        self.n = n
        self.size = field.q ** n
        self._digits = None
        self._neg = None
        self._mul_cache = {}

    # -- scalar encode/decode ---------------------------------------------

    def encode(self, coords) -> int:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        v = 0
        for c in coords:
            v = v * self.field.q + c
        return v

    def decode(self, enc: int):
        q = self.field.q
        out = [0] * self.n
        for i in range(self.n - 1, -1, -1):
            out[i] = enc % q
            enc //= q
        return tuple(out)

    # -- cached vectorised tables -----------------------------------------

    @property
    def digits(self) -> np.ndarray:
        """Shape (n, size): coordinate i of every encoding."""
        if self._digits is None:
            q = self.field.q
            idx = np.arange(self.size, dtype=np.int64)
            rows = []
            for i in range(self.n):
                rows.append(idx // q ** (self.n - 1 - i) % q)
            self._digits = np.array(rows, dtype=np.int64)
        return self._digits

    @property
    def neg_index(self) -> np.ndarray:
        """Encoding of -x for every encoding x."""
        if self._neg is None:
            q = self.field.q
            out = np.zeros(self.size, dtype=np.int64)
            for i in range(self.n):
                out = out * q + self.field.neg_vec(self.digits[i])
            self._neg = out
        return self._neg

    def scalar_mul_index(self, c: int) -> np.ndarray:
        """Encoding of c*x for every encoding x (componentwise field mul)."""
        c = c % self.field.q if self.field.e == 1 else c
        cached = self._mul_cache.get(c)
        if cached is None:
            q = self.field.q
            out = np.zeros(self.size, dtype=np.int64)
            for i in range(self.n):
                out = out * q + self.field.mul_vec(c, self.digits[i])
            self._mul_cache[c] = cached = out
        return cached

    def add_scalar_index(self, base: int) -> np.ndarray:
        """Encoding of base + x for every encoding x."""
        q = self.field.q
        bd = self.decode(base)
        out = np.zeros(self.size, dtype=np.int64)
        for i in range(self.n):
            out = out * q + self.field.add_vec(bd[i], self.digits[i])
        return out

    def trace_dot_with(self, enc: int) -> np.ndarray:
        """tr(<x, v>) mod p for every encoding x, with v = decode(enc)."""
        tr = self.field.trace_table
        vd = self.decode(enc)
        acc = np.zeros(self.size, dtype=np.int64)
        for i in range(self.n):
            acc += tr[self.field.mul_vec(vd[i], self.digits[i])]
        return acc % self.field.p

    def __repr__(self):
        return f"VectorSpace(q={self.field.q}, n={self.n})"


_SPACES: dict = {}


def space(field: FieldSpec, n: int) -> VectorSpace:
    key = (id(field), n)
    sp = _SPACES.get(key)
    if sp is None:
        sp = _SPACES[key] = VectorSpace(field, n)
    return sp
