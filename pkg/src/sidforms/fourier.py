"""Discrete Fourier analysis on F_q^n.

Transform convention: fhat(r) = E_x f(x) * exp(-2*pi*i * Tr(r.x) / p),
inverse f(x) = sum_r fhat(r) * exp(+2*pi*i * Tr(r.x) / p).  For real f,
fhat(-r) = conj(fhat(r)).

tau of an equation with coefficients a_1..a_k is the nonzero-frequency
part of its solution density:

    tau_E(f) = sum_{r != 0} prod_i fhat(a_i * r),

so that Lambda_E(f) = (E f)^k + tau_E(f).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._enum import equation_enumerator
from ._space import VectorSpace, space
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    DimensionMismatch,
    HypothesisViolated,
    RetriesExhausted,
    TooLarge,
)
from .field import FieldSpec
from .linalg import LinearSystem, is_translation_invariant

MAX_TRANSFORM_SIZE = 10 ** 6
NAIVE_TRANSFORM_LIMIT = 4096
ROUNDTRIP_TOL = 1e-9
RANGE_TOL = 1e-9
SIGN_EPSILON = 2.0 ** -10
SIGN_RETRY_CAP = 256


def _axis_matrix(field: FieldSpec, sign: float) -> np.ndarray:
    """q x q matrix exp(sign * 2*pi*i * tr(r*x) / p)."""
    q, p = field.q, field.p
    tr = field.trace_table
    prod = np.array(
        [[field.mul(r, x) for x in range(q)] for r in range(q)], dtype=np.int64
    )
    return np.exp(sign * 2j * math.pi * tr[prod] / p)


def _dft_fast(values: np.ndarray, sp: VectorSpace, sign: float) -> np.ndarray:
    field = sp.field
    U = _axis_matrix(field, sign)
    arr = np.asarray(values, dtype=np.complex128).reshape((field.q,) * sp.n)
    for axis in range(sp.n):
        moved = np.moveaxis(arr, axis, -1)
        arr = np.moveaxis(moved @ U.T, -1, axis)
    return arr.reshape(-1)


def _dft_naive(values: np.ndarray, sp: VectorSpace, sign: float) -> np.ndarray:
    p = sp.field.p
    vals = np.asarray(values, dtype=np.complex128)
    omega = np.exp(sign * 2j * math.pi * np.arange(p) / p)
    out = np.empty(sp.size, dtype=np.complex128)
    for r in range(sp.size):
        out[r] = (omega[sp.trace_dot_with(r)] * vals).sum()
    return out


def dft(values, sp: VectorSpace) -> np.ndarray:
    """Normalised transform: coefficient at r is E_x f(x) e(-Tr(r.x)/p)."""
    if sp.size > MAX_TRANSFORM_SIZE:
        raise TooLarge(f"space size {sp.size} > {MAX_TRANSFORM_SIZE}")
    if sp.size < NAIVE_TRANSFORM_LIMIT:
        return _dft_naive(values, sp, -1.0) / sp.size
    return _dft_fast(values, sp, -1.0) / sp.size


def idft(coeffs, sp: VectorSpace) -> np.ndarray:
    """Inverse transform: f(x) = sum_r fhat(r) e(+Tr(r.x)/p)."""
    if sp.size < NAIVE_TRANSFORM_LIMIT:
        return _dft_naive(coeffs, sp, 1.0)
    return _dft_fast(coeffs, sp, 1.0)


class SpectralFunction:
    """A function f: F_q^n -> [0,1] stored with its Fourier coefficients."""

    def __init__(self, field: FieldSpec, n: int, values: np.ndarray,
                 coefficients: np.ndarray):
        self.field = field
        self.n = n
        self.space = space(field, n)
        self.values = np.asarray(values, dtype=np.float64)
        self.coefficients = np.asarray(coefficients, dtype=np.complex128)
        self._validate()

    def _validate(self):
        sp = self.space
        if self.values.shape != (sp.size,) or self.coefficients.shape != (sp.size,):
            raise DimensionMismatch("values/coefficients must have length q^n")
        if self.values.min() < -RANGE_TOL or self.values.max() > 1 + RANGE_TOL:
            raise ConsistencyError("values leave [0,1] beyond tolerance")
        sym = self.coefficients[sp.neg_index] - np.conj(self.coefficients)
        if np.abs(sym).max() > 1e-9:
            raise ConsistencyError("conjugate symmetry violated")
        back = idft(self.coefficients, sp)
        if np.abs(back - self.values).max() > ROUNDTRIP_TOL:
            raise ConsistencyError("inverse transform does not reproduce values")

    @classmethod
    def from_values(cls, field, n, values):
        sp = space(field, n)
        vals = np.asarray(values, dtype=np.float64)
        if vals.shape != (sp.size,):
            raise DimensionMismatch(f"expected {sp.size} values")
        return cls(field, n, vals, dft(vals, sp))

    @classmethod
    def from_coefficients(cls, field, n, coefficients):
        sp = space(field, n)
        vals = idft(np.asarray(coefficients, dtype=np.complex128), sp)
        if np.abs(vals.imag).max() > ROUNDTRIP_TOL:
            raise ConsistencyError("coefficients do not describe a real function")
        return cls(field, n, vals.real, coefficients)

    @property
    def mean(self) -> float:
        return self.coefficients[0].real

    def to_json(self) -> str:
        return json.dumps(
            {"q": self.field.q, "n": self.n, "values": self.values.tolist()}
        )

    @staticmethod
    def load(path, field=None):
        from .field import field_from_order

        with open(path) as fh:
            doc = json.load(fh)
        fld = field if field is not None else field_from_order(int(doc["q"]))
        if fld.q != int(doc["q"]):
            raise DimensionMismatch(f"function file is over F_{doc['q']}, not F_{fld.q}")
        return SpectralFunction.from_values(fld, int(doc["n"]), doc["values"])

    def __repr__(self):
        return f"SpectralFunction(q={self.field.q}, n={self.n}, mean={self.mean:.6g})"


def transform(field: FieldSpec, n: int, values) -> SpectralFunction:
    return SpectralFunction.from_values(field, n, values)


# ------------------------------------------------------------------- tau

def _tau_terms(eq_coeffs, coeffs: np.ndarray, sp: VectorSpace) -> np.ndarray:
    """prod_i fhat(a_i * r) for every r != 0 (array of length Q-1)."""
    support = [a for a in eq_coeffs if a]
    if not support:
        raise DimensionMismatch("equation has empty support")
    prod = np.ones(sp.size - 1, dtype=np.complex128)
    for a in support:
        prod *= coeffs[sp.scalar_mul_index(a)[1:]]
    return prod


def tau(eq_coeffs, f: SpectralFunction) -> complex:
    """Nonzero-frequency part of the equation's solution density."""
    return complex(_tau_terms(eq_coeffs, f.coefficients, f.space).sum())


def function_density(eq_coeffs, f: SpectralFunction) -> float:
    """Lambda_E(f): mean of prod_i f(x_i) over solutions of the equation."""
    en, support = equation_enumerator(f.field, list(eq_coeffs), f.space)
    total = f.space.size ** (len(support) - 1)
    if total > 10 ** 8:
        raise BudgetExceeded(f"solution space {total} too large to stream")
    return float(
        kernels.weighted_product_sum(en.contrib, en.expand_weights(f.values))
    ) / total


def twisted_identity(eq_coeffs, f: SpectralFunction):
    """Check Lambda_E(f) = (E f)^k + tau_E(f) to relative 1e-8.

    Returns (lhs, rhs); raises ConsistencyError when the identity fails.
    """
    support = [a for a in eq_coeffs if a]
    lhs = function_density(eq_coeffs, f)
    rhs = f.mean ** len(support) + tau(eq_coeffs, f).real
    if abs(lhs - rhs) > 1e-8 * max(1.0, abs(lhs)):
        raise ConsistencyError(f"twisted identity violated: {lhs} vs {rhs}")
    return lhs, rhs


@dataclass
class TauReport:
    """Per-equation tau values for the shortest induced equations, their
    sum, and peak-term diagnostics (xi: largest term modulus; zeta: sum of
    the terms attaining it)."""

    taus: list
    total: complex
    xi: float
    zeta: float


def _tau_report(equations, coeffs, sp) -> TauReport:
    taus = []
    xi = 0.0
    zeta = 0.0
    all_terms = []
    for eq in equations:
        terms = _tau_terms(eq.coeffs, coeffs, sp)
        all_terms.append(terms)
        taus.append(complex(terms.sum()))
    for terms in all_terms:
        mods = np.abs(terms)
        m = mods.max() if mods.size else 0.0
        xi = max(xi, m)
    for terms in all_terms:
        # peak membership up to float noise; exact for spectra whose term
        # moduli are separated (powers of two in the sign construction)
        peak = np.abs(terms) >= xi * (1.0 - 1e-9)
        zeta += terms[peak].real.sum()
    return TauReport(taus, complex(sum(taus)), float(xi), float(zeta))


def sum_tau_shortest(system: LinearSystem, f: SpectralFunction) -> TauReport:
    """Tau of each shortest induced equation of a 2 x k system with
    s = k-1, k odd >= 5, plus their sum and peak diagnostics."""
    from .counting import shortest_equation_systems

    if system.k < 5 or system.k % 2 == 0:
        raise HypothesisViolated("need odd k >= 5")
    if f.field is not system.field:
        raise DimensionMismatch("function and system over different fields")
    eqs = shortest_equation_systems(system)
    return _tau_report(eqs, f.coefficients, f.space)


# --------------------------------------------------- random-sign witnesses

def _witness_plan(system: LinearSystem):
    """Hypothesis data for the sparse random-sign construction: the ratio
    parameter b and a shortest equation scaled so its partner-free
    coefficient is 1."""
    from .classify import is_b_coincidental, sidorenko_single

    from .counting import shortest_equation_systems

    field = system.field
    if field.e != 1 or field.p == 2:
        raise HypothesisViolated("construction needs an odd prime field")
    if system.m != 2 or system.k != 5:
        raise HypothesisViolated("construction applies to 2 x 5 systems")
    if not is_translation_invariant(system):
        raise HypothesisViolated("system must be translation invariant")
    eqs = shortest_equation_systems(system)
    sid = [e for e in eqs if sidorenko_single(field, e.coeffs)]
    if len(sid) != 1:
        raise HypothesisViolated(f"need exactly one Sidorenko shortest equation, got {len(sid)}")
    nonzero = [v for v in sid[0].coeffs if v]
    bs = []
    for ref in nonzero:
        inv = field.inv(ref)
        scaled = sorted(field.mul(inv, v) for v in nonzero)
        if 1 in scaled and field.neg(1) in scaled:
            rest = list(scaled)
            rest.remove(1)
            rest.remove(field.neg(1))
            if len(rest) == 2 and field.add(rest[0], rest[1]) == 0 \
                    and rest[0] not in (1, field.neg(1)) and rest[0] not in bs:
                bs.append(rest[0])
    if not bs:
        raise HypothesisViolated("Sidorenko equation does not have shape {1,-1,b,-b}")
    for b in bs:
        for eq in eqs:
            if eq is sid[0]:
                continue
            coeffs = [v for v in eq.coeffs if v]
            if is_b_coincidental(field, coeffs, b):
                continue
            bset = {b, field.neg(b), field.inv(b), field.neg(field.inv(b))}
            for i, a in enumerate(coeffs):
                inv = field.inv(a)
                others = [field.mul(inv, c) for c in coeffs]
                if all(field.mul(a, field.inv(c)) not in bset for c in coeffs):
                    return b, others, eq
    raise HypothesisViolated("every non-Sidorenko shortest equation is b-coincidental")


def build_sign_witness(system: LinearSystem, seed: int = 0,
                       epsilon: float = SIGN_EPSILON,
                       max_retries: int = SIGN_RETRY_CAP) -> SpectralFunction:
    """Construct f: F_q -> [0,1] with E f = 1/2 whose shortest-equation
    tau sum is negative, by drawing random signs for a sparse spectrum.

    Retries fresh sign draws until the peak-term sum is negative (which
    forces the tau sum below half the negated peak modulus); raises
    RetriesExhausted past the cap.
    """
    field = system.field
    b, scaled_coeffs, _ = _witness_plan(system)
    sp = space(field, 1)
    q = field.q
    # sign classes: the +-v pairs among the scaled coefficients, minus +-1
    classes = []
    for v in scaled_coeffs:
        if v in (1, field.neg(1)):
            continue
        pair = frozenset((v, field.neg(v)))
        if pair not in classes:
            classes.append(pair)
    bset = {b, field.neg(b), field.inv(b), field.neg(field.inv(b))}
    if any(v in bset for pair in classes for v in pair):
        raise HypothesisViolated("scaled coefficients meet the excluded ratios")
    rng = random.Random(seed)
    for _ in range(max_retries):
        coeffs = np.zeros(q, dtype=np.complex128)
        coeffs[0] = 0.5
        coeffs[1] = coeffs[field.neg(1)] = 0.125
        for pair in classes:
            sign = 1.0 if rng.random() < 0.5 else -1.0
            for v in pair:
                coeffs[v] = sign * epsilon
        f = SpectralFunction.from_coefficients(field, 1, coeffs)
        report = sum_tau_shortest(system, f)
        if report.zeta < 0:
            for v in bset:
                if abs(coeffs[v]) != 0.0:
                    raise ConsistencyError("spectrum is nonzero at an excluded ratio")
            if f.mean != 0.5:
                raise ConsistencyError("mean drifted from 1/2")
            if report.total.real >= -report.xi / 2:
                raise ConsistencyError(
                    f"tau sum {report.total.real} not below -xi/2 = {-report.xi / 2}"
                )
            return f
    raise RetriesExhausted(f"no negative peak sum within {max_retries} sign draws")


def round_to_set(f: SpectralFunction, extra_dims: int, seed: int = 0):
    """Random set over F_q^(n+extra_dims): include (x, y) with
    probability f(x), independently.

    The induced shortest-equation densities of the set approximate those
    of f up to sampling noise and a vanishing degeneracy term (solutions
    with repeated coordinates).
    """
    from .counting import PointSet

    field = f.field
    n_total = f.n + extra_dims
    size = field.q ** n_total
    if size > MAX_TRANSFORM_SIZE:
        raise TooLarge(f"target space {size} > {MAX_TRANSFORM_SIZE}")
    block = field.q ** extra_dims
    probs = np.repeat(np.clip(f.values, 0.0, 1.0), block)
    rng = np.random.default_rng(seed)
    mask = (rng.random(size) < probs).astype(np.uint8)
    return PointSet.from_mask(field, n_total, mask)
