"""Exact linear algebra over F_q: canonical forms, induced equations,
minimal induced length, rank-reducing and good column sets.

Column indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import (
    BadIndex,
    EmptySystem,
    RankDeficient,
    TooManyColumns,
    TooManyCombinations,
)
from .field import FieldSpec

MAX_INDUCED_ROWS = 4
MAX_INDUCED_COMBINATIONS = 10 ** 6
MAX_GOODSET_COLUMNS = 20


def rref(field: FieldSpec, rows):
    """Reduced row echelon form. Returns (rows, rank, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], 0, []
    k = len(rows[0])
    piv = 0
    pivots = []
    for col in range(k):
        pr = next((r for r in range(piv, len(rows)) if rows[r][col]), None)
        if pr is None:
            continue
        rows[piv], rows[pr] = rows[pr], rows[piv]
        inv = field.inv(rows[piv][col])
        rows[piv] = [field.mul(inv, v) for v in rows[piv]]
        for r in range(len(rows)):
            if r != piv and rows[r][col]:
                f = rows[r][col]
                rows[r] = [
                    field.sub(a, field.mul(f, b)) for a, b in zip(rows[r], rows[piv])
                ]
        pivots.append(col)
        piv += 1
        if piv == len(rows):
            break
    return [tuple(r) for r in rows[:piv]], piv, pivots


def matrix_rank(field: FieldSpec, rows) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return rref(field, rows)[1]


@dataclass(frozen=True)
class InducedEquation:
    """A linear form in the row space, restricted to its support.

    Canonically scaled so the first nonzero coefficient is 1.
    """

    coeffs: tuple
    support: tuple
    length: int

    @staticmethod
    def from_vector(field: FieldSpec, vec) -> "InducedEquation":
        vec = tuple(vec)
        lead = next((v for v in vec if v), None)
        if lead is None:
            raise ValueError("zero vector induces no equation")
        inv = field.inv(lead)
        coeffs = tuple(field.mul(inv, v) for v in vec)
        support = tuple(j for j, v in enumerate(coeffs) if v)
        return InducedEquation(coeffs, support, len(support))

    @property
    def missing(self):
        """Variables with zero coefficient (complement of the support)."""
        return tuple(j for j in range(len(self.coeffs)) if j not in self.support)


class LinearSystem:
    """A full-rank m x k coefficient matrix over F_q.

    Construction validates full rank; use :func:`normalize` to build a
    system from an arbitrary raw matrix (dependent rows dropped).
    """

    def __init__(self, field: FieldSpec, rows):
        rows = [tuple(v % field.q if field.e == 1 else v for v in r) for r in rows]
        if not rows or all(not any(r) for r in rows):
            raise EmptySystem("all-zero coefficient matrix")
        self.field = field
        self.rows = tuple(rows)
        self.m = len(rows)
        self.k = len(rows[0])
        if any(len(r) != self.k for r in rows):
            raise BadIndex("ragged coefficient matrix")
        rr, rank, pivots = rref(field, rows)
        if rank != self.m:
            raise RankDeficient(f"rank {rank} < m = {self.m}; use normalize()")
        if self.m > self.k:
            raise RankDeficient(f"m = {self.m} rows exceed k = {self.k} columns")
        self.rref = rr
        self.rank = rank
        self.pivots = tuple(pivots)
        self._induced = None

    def canonical_key(self):
        """Row space fingerprint: (q, e, RREF rows)."""
        return (self.field.p, self.field.e, self.rref)

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def __repr__(self):
        return f"LinearSystem(q={self.field.q}, m={self.m}, k={self.k})"


def normalize(field: FieldSpec, raw_rows):
    """RREF a raw integer matrix, dropping linearly dependent rows.

    Returns (system, dropped) where dropped counts removed rows.
    Coefficients may be arbitrary integers; they are reduced into the
    field first (via the prime subfield when e > 1).
    """
    reduced = [[field.reduce_int(v) for v in r] for r in raw_rows]
    reduced = [r for r in reduced if any(r)]
    if not reduced:
        raise EmptySystem("all-zero coefficient matrix")
    rr, rank, _ = rref(field, reduced)
    system = LinearSystem(field, rr)
    return system, len(raw_rows) - rank


def induced_equations(system: LinearSystem):
    """All equations induced by the system: nonzero row combinations up to
    scalar, one canonical representative each."""
    if system._induced is not None:
        return system._induced
    m, q = system.m, system.field.q
    if m > MAX_INDUCED_ROWS:
        raise TooManyCombinations(f"m = {m} > {MAX_INDUCED_ROWS}")
    n_combos = (q ** m - 1) // (q - 1)
    if n_combos > MAX_INDUCED_COMBINATIONS:
        raise TooManyCombinations(f"{n_combos} projective combinations")
    field = system.field
    base = system.rref
    out = []
    seen = set()
    # projective representatives: first nonzero multiplier equals 1
    for lead in range(m):
        for tail in itertools.product(range(q), repeat=m - lead - 1):
            lam = (0,) * lead + (1,) + tail
            vec = [0] * system.k
            for l, row in zip(lam, base):
                if l:
                    for j, v in enumerate(row):
                        if v:
                            vec[j] = field.add(vec[j], field.mul(l, v))
            eq = InducedEquation.from_vector(field, vec)
            if eq.coeffs in seen:
                raise AssertionError("duplicate induced equation")
            seen.add(eq.coeffs)
            out.append(eq)
    out.sort(key=lambda e: (e.length, e.coeffs))
    system._induced = tuple(out)
    return system._induced


def min_induced_length(system: LinearSystem):
    """Minimal induced length s and the list of equations achieving it."""
    eqs = induced_equations(system)
    s = min(e.length for e in eqs)
    return s, [e for e in eqs if e.length == s]


def rank_reduction_amount(system: LinearSystem, cols) -> int:
    """Rank drop caused by deleting the given columns."""
    cols = set(cols)
    if any(not 0 <= c < system.k for c in cols):
        raise BadIndex(f"column set {sorted(cols)} not within 0..{system.k - 1}")
    keep = [j for j in range(system.k) if j not in cols]
    sub = [[r[j] for j in keep] for r in system.rows]
    return system.m - matrix_rank(system.field, sub)


@dataclass
class GoodSetReport:
    """Good column sets: B with |B| = s + t that are (t+1)-rank-reducing."""

    s: int
    good_sets: list
    maximal_good_sets: list
    rank_reduction: dict = dc_field(default_factory=dict)


def good_sets(system: LinearSystem) -> GoodSetReport:
    """Enumerate all 2^k column subsets and report the good ones.

    Verifies before returning that every subset of a good set with size
    >= s is good and that each good set lies in exactly one maximal good
    set.
    """
    k = system.k
    if k > MAX_GOODSET_COLUMNS:
        raise TooManyColumns(f"k = {k} > {MAX_GOODSET_COLUMNS}")
    s, _ = min_induced_length(system)
    good = []
    reductions = {}
    for bits in range(1 << k):
        B = tuple(j for j in range(k) if bits >> j & 1)
        drop = rank_reduction_amount(system, B)
        if drop >= 1 and len(B) == s + drop - 1:
            good.append(B)
            reductions[B] = drop
    good_set_lookup = set(good)
    maximal = [
        B
        for B in good
        if not any(B != C and set(B) <= set(C) for C in good)
    ]
    # closure under taking subsets of size >= s
    for B in good:
        for size in range(s, len(B)):
            for sub in itertools.combinations(B, size):
                if sub not in good_set_lookup:
                    raise AssertionError(f"subset {sub} of good {B} is not good")
    # unique maximal container
    for B in good:
        containers = [C for C in maximal if set(B) <= set(C)]
        if len(containers) != 1:
            raise AssertionError(f"good set {B} has {len(containers)} maximal containers")
    return GoodSetReport(s, good, maximal, reductions)


def zero_sum_pairing(field: FieldSpec, coeffs):
    """A partition of the nonzero coefficients into pairs, each summing to
    zero, or None if none exists.  Decided by exact matching search."""
    values = [v for v in coeffs if v]
    if len(values) % 2:
        return None

    def match(rest):
        if not rest:
            return []
        a, tail = rest[0], rest[1:]
        for i, b in enumerate(tail):
            if field.add(a, b) == 0:
                sub = match(tail[:i] + tail[i + 1:])
                if sub is not None:
                    return [(a, b)] + sub
        return None

    return match(values)


def is_translation_invariant(system: LinearSystem) -> bool:
    """True when every row's coefficients sum to zero (a linear condition,
    so checking a basis of the row space suffices)."""
    field = system.field
    for row in system.rref:
        acc = 0
        for v in row:
            acc = field.add(acc, v)
        if acc:
            return False
    return True


def is_degenerate(system: LinearSystem) -> bool:
    """True when the row space contains a vector a*(e_i - e_j), i.e. the
    system forces x_i = x_j.  Decided by rank tests, no enumeration."""
    field = system.field
    base = [list(r) for r in system.rref]
    for i in range(system.k):
        for j in range(i + 1, system.k):
            probe = [0] * system.k
            probe[i] = 1
            probe[j] = field.neg(1)
            if matrix_rank(field, base + [probe]) == system.m:
                return True
    return False


def structural_flags(system: LinearSystem) -> dict:
    return {
        "translation_invariant": is_translation_invariant(system),
        "degenerate": is_degenerate(system),
    }
