"""Parameterisation of solution sets for streaming enumeration.

Solutions of a full-rank system over F_q^n are indexed by the free
columns of the RREF.  A pivot coordinate is a field sum of several free
contributions, so digits are packed in base 2^shift with shift wide
enough that accumulated digit sums never carry; membership masks and
weight tables are expanded to that packed index space, where digit
reduction mod q happens once, up front.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._space import VectorSpace
from .errors import BudgetExceeded

MAX_PACKED_SPACE = 1 << 25


def solution_matrix(field, rref_rows, pivots, k):
    """k x (k-m) matrix S over F_q whose column span is the kernel,
    parameterised by the free columns (identity block on them)."""
    m = len(rref_rows)
    free = [j for j in range(k) if j not in set(pivots)]
    S = [[0] * len(free) for _ in range(k)]
    for c, fc in enumerate(free):
        S[fc][c] = 1
        for r in range(m):
            S[pivots[r]][c] = field.neg(rref_rows[r][fc])
    return S, free


@dataclass
class KernelEnumerator:
    """Digit tables for streaming all q^{n(k-m)} solutions.

    contrib has shape (D, q, k): summing contrib[d, w_d, j] over digits d
    yields the packed point of solution coordinate j; expand_index maps
    packed points back to q-ary encodings in [0, q^n).
    """

    contrib: np.ndarray
    expand_index: np.ndarray
    space: VectorSpace

    def expand_mask(self, mask: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(mask[self.expand_index])

    def expand_weights(self, weights: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(
            np.asarray(weights, dtype=np.float64)[self.expand_index]
        )


def kernel_enumerator(field, rref_rows, pivots, k, sp: VectorSpace) -> KernelEnumerator:
    S, free = solution_matrix(field, rref_rows, pivots, k)
    n, q = sp.n, field.q
    nfree = len(free)
    max_digit = max(1, nfree * (q - 1))
    shift = max_digit.bit_length()
    if n * shift > 60 or (1 << (n * shift)) > MAX_PACKED_SPACE:
        raise BudgetExceeded("packed digit space too large for enumeration")
    D = nfree * n
    contrib = np.zeros((D, q, k), dtype=np.int64)
    for c in range(nfree):
        for j in range(k):
            coef = S[j][c]
            if coef == 0:
                continue
            scaled = np.array([field.mul(coef, w) for w in range(q)], dtype=np.int64)
            for i in range(n):
                contrib[c * n + i, :, j] = scaled << ((n - 1 - i) * shift)
    packed = np.arange(1 << (n * shift), dtype=np.int64)
    enc = np.zeros_like(packed)
    B = 1 << shift
    for i in range(n):
        digit = (packed >> ((n - 1 - i) * shift)) & (B - 1)
        enc = enc * q + digit % q
    return KernelEnumerator(contrib, enc, sp)


def equation_enumerator(field, coeffs, sp: VectorSpace):
    """Enumerator for a single equation restricted to its support.

    Returns (enumerator, support); tables have k = len(support) columns.
    """
    support = [j for j, v in enumerate(coeffs) if v]
    sub = [coeffs[j] for j in support]
    inv = field.inv(sub[0])
    row = tuple(field.mul(inv, v) for v in sub)
    return kernel_enumerator(field, [row], [0], len(sub), sp), support
