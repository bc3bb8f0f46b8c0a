"""Search for witness sets with negative Sidorenko or common deficit.

Exhaustive enumeration stays exact throughout; simulated annealing uses a
fast floating-point objective in the loop and re-verifies the final set
with an exact counting backend before emitting a Witness.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import kernels
from ._enum import kernel_enumerator
from ._space import space
from .counting import PointSet, deficits, solution_space_size
from .errors import BudgetExceeded, HypothesisViolated
from .fourier import dft
from .linalg import LinearSystem

EXHAUSTIVE_LIMIT = 1 << 26
FIXED_SIZE_LIMIT = 10 ** 7
ANNEAL_SPACE_LIMIT = 10 ** 4
KERNEL_EVAL_LIMIT = 1 << 18

OBJECTIVES = ("sidorenko", "common")


@dataclass
class SearchConfig:
    """What to optimise and how hard to try."""

    n: int
    objective: str = "sidorenko"
    strategy: str | tuple = "exhaustive"  # "exhaustive" | ("exhaustive_fixed", size) | ("anneal", steps)
    seed: int = 0
    restarts: int = 4
    t_start: float = 3e-3
    t_end: float = 1e-7
    initial: PointSet | None = None

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")

    def strategy_name(self):
        return self.strategy[0] if isinstance(self.strategy, tuple) else self.strategy

    def strategy_arg(self, default=None):
        if isinstance(self.strategy, tuple) and len(self.strategy) > 1:
            return self.strategy[1]
        return default


@dataclass
class Witness:
    """A set with its exactly recomputed deficit; negative deficit is a
    counterexample certificate."""

    points: PointSet
    deficit: Fraction
    evaluations: int
    trace: dict


def _exact_deficit(system, points, objective) -> Fraction:
    rep = deficits(system, points)
    return rep.sidorenko_deficit if objective == "sidorenko" else rep.common_deficit


# ---------------------------------------------------------------- exhaustive

def exhaustive_search(system: LinearSystem, cfg: SearchConfig) -> Witness:
    """Exact minimum-deficit set over all subsets (or all subsets of a
    fixed size).  Deterministic; ties go to the lexicographically least
    encoded set."""
    sp = space(system.field, cfg.n)
    Q = sp.size
    name = cfg.strategy_name()
    total = solution_space_size(system, cfg.n)
    if total > 10 ** 8:
        raise BudgetExceeded("solution space too large for exact evaluation")
    en = kernel_enumerator(system.field, system.rref, system.pivots, system.k, sp)
    k = system.k
    alpha_pow = [Fraction(sz, Q) ** k for sz in range(Q + 1)]
    bench_common = Fraction(1, 2 ** (k - 1))
    if name == "exhaustive":
        if 2 ** Q > EXHAUSTIVE_LIMIT:
            raise BudgetExceeded(f"2^{Q} subsets exceed {EXHAUSTIVE_LIMIT}")
        candidates = range(1 << Q)

        def decode(bits):
            return [e for e in range(Q) if bits >> e & 1]

    elif name == "exhaustive_fixed":
        size = cfg.strategy_arg()
        if size is None or not 0 <= size <= Q:
            raise ValueError("fixed-size strategy needs a size in [0, q^n]")
        if math.comb(Q, size) > FIXED_SIZE_LIMIT:
            raise BudgetExceeded(f"C({Q},{size}) subsets exceed {FIXED_SIZE_LIMIT}")
        candidates = combinations(range(Q), size)

        def decode(combo):
            return list(combo)

    else:
        raise ValueError(f"not an exhaustive strategy: {cfg.strategy!r}")

    best = None
    evals = 0
    mask = np.zeros(Q, dtype=np.uint8)
    for cand in candidates:
        encs = decode(cand)
        mask[:] = 0
        if encs:
            mask[encs] = 1
        count = int(kernels.count_members(en.contrib, en.expand_mask(mask)))
        lam = Fraction(count, total)
        if cfg.objective == "sidorenko":
            value = lam - alpha_pow[len(encs)]
        else:
            count_c = int(
                kernels.count_members(en.contrib, en.expand_mask(1 - mask)))
            value = lam + Fraction(count_c, total) - bench_common
        evals += 1
        key = tuple(encs)
        if best is None or value < best[0] or (value == best[0] and key < best[1]):
            best = (value, key)
    points = PointSet(system.field, cfg.n, encodings=best[1])
    exact = _exact_deficit(system, points, cfg.objective)
    if exact != best[0]:
        raise AssertionError("exhaustive objective disagrees with recount")
    return Witness(points, exact, evals, {"strategy": name, "enumerated": evals})


# ------------------------------------------------------------------- anneal

class _KernelObjective:
    """Exact counts per evaluation, exposed as floats for the anneal."""

    def __init__(self, system, sp, objective):
        self.en = kernel_enumerator(
            system.field, system.rref, system.pivots, system.k, sp
        )
        self.total = solution_space_size(system, sp.n)
        self.k = system.k
        self.Q = sp.size
        self.objective = objective
        self.bench = 2.0 ** (1 - system.k)

    def evaluate(self, mask, size):
        en = self.en
        lam = kernels.count_members(en.contrib, en.expand_mask(mask)) / self.total
        alpha = size / self.Q
        if self.objective == "sidorenko":
            return lam - alpha ** self.k
        lam_c = kernels.count_members(
            en.contrib, en.expand_mask(1 - mask)) / self.total
        return lam + lam_c - self.bench

    def resync(self, mask):
        pass


class _TauObjective:
    """Common-deficit objective through the shortest-equation spectrum,
    maintained incrementally under single point flips.

    Valid for 2 x k systems with s = k-1 and odd k: the complement
    identity turns the common deficit into
    alpha^k + (1-alpha)^k - 2^(1-k) + sum_i tau_i(indicator).
    """

    def __init__(self, system, sp):
        from .counting import shortest_equation_systems

        if system.k % 2 == 0:
            raise HypothesisViolated("tau objective needs odd k")
        eqs = shortest_equation_systems(system)
        self.k = system.k
        self.Q = sp.size
        self.sp = sp
        self.field = system.field
        self.mul_idx = [
            [sp.scalar_mul_index(a)[1:] for a in eq.coeffs if a] for eq in eqs
        ]
        self.omega = np.exp(-2j * math.pi * np.arange(self.field.p) / self.field.p)
        self.coeffs = None
        self.bench = 2.0 ** (1 - system.k)
        self._pending = None

    def resync(self, mask):
        self.coeffs = dft(mask.astype(np.float64), self.sp)
        self._pending = None

    def _column(self, x):
        return self.omega[self.sp.trace_dot_with(x)]

    def evaluate(self, mask, size):
        coeffs = self.coeffs
        if self._pending is not None:
            x, delta = self._pending
            coeffs = coeffs + (delta / self.Q) * self._column(x)
            self._staged = coeffs
        alpha = size / self.Q
        total = alpha ** self.k + (1 - alpha) ** self.k - self.bench
        for idx_list in self.mul_idx:
            prod = coeffs[idx_list[0]].copy()
            for idx in idx_list[1:]:
                prod *= coeffs[idx]
            total += prod.real.sum()
        return total

    def propose(self, x, delta):
        self._pending = (x, delta)

    def commit(self):
        self.coeffs = self._staged
        self._pending = None

    def reject(self):
        self._pending = None


def _pick_objective(system, sp, objective):
    if solution_space_size(system, sp.n) <= KERNEL_EVAL_LIMIT:
        return _KernelObjective(system, sp, objective)
    if objective == "common" and system.m == 2:
        try:
            return _TauObjective(system, sp)
        except HypothesisViolated:
            pass
    raise BudgetExceeded(
        "no per-step objective evaluator is affordable for this instance"
    )


def anneal_search(system: LinearSystem, cfg: SearchConfig) -> Witness:
    """Simulated annealing over single-point flips, seeded and
    reproducible.  The final witness is re-verified with an exact backend;
    the best set found is reported even when its deficit is nonnegative."""
    sp = space(system.field, cfg.n)
    Q = sp.size
    if Q > ANNEAL_SPACE_LIMIT:
        raise BudgetExceeded(f"q^n = {Q} > {ANNEAL_SPACE_LIMIT}")
    steps = cfg.strategy_arg(100_000)
    rng = random.Random(cfg.seed)
    objective = _pick_objective(system, sp, cfg.objective)
    incremental = isinstance(objective, _TauObjective)

    best_mask = None
    best_value = None
    evals = 0
    found_negative = False
    restarts_run = 0
    neg_trigger = -1e-12  # ratchets down if a float negative fails recount
    cooling = (cfg.t_end / cfg.t_start) ** (1.0 / steps) if steps > 0 else 1.0
    for restart in range(max(1, cfg.restarts)):
        restarts_run += 1
        if restart == 0 and cfg.initial is not None:
            mask = cfg.initial.mask().copy()
        else:
            mask = np.array(
                [1 if rng.random() < 0.5 else 0 for _ in range(Q)], dtype=np.uint8
            )
        size = int(mask.sum())
        objective.resync(mask)
        current = objective.evaluate(mask, size)
        evals += 1
        if best_value is None or current < best_value:
            best_value, best_mask = current, mask.copy()
        temp = cfg.t_start
        since_resync = 0
        for _ in range(steps):
            x = rng.randrange(Q)
            delta = -1 if mask[x] else 1
            if incremental:
                objective.propose(x, delta)
                mask[x] ^= 1
                cand = objective.evaluate(mask, size + delta)
                mask[x] ^= 1
            else:
                mask[x] ^= 1
                cand = objective.evaluate(mask, size + delta)
                mask[x] ^= 1
            evals += 1
            d = cand - current
            if d < 0 or rng.random() < math.exp(-d / temp):
                mask[x] ^= 1
                size += delta
                current = cand
                if incremental:
                    objective.commit()
                    since_resync += 1
                    if since_resync >= 4096:
                        objective.resync(mask)
                        since_resync = 0
                if current < best_value:
                    best_value = current
                    best_mask = mask.copy()
            elif incremental:
                objective.reject()
            temp *= cooling
            if best_value < neg_trigger:
                pts = PointSet.from_mask(system.field, cfg.n, best_mask)
                exact = _exact_deficit(system, pts, cfg.objective)
                if exact < 0:
                    found_negative = True
                    break
                neg_trigger = 2 * best_value  # require clear improvement first
        if found_negative:
            break
    points = PointSet.from_mask(system.field, cfg.n, best_mask)
    exact = _exact_deficit(system, points, cfg.objective)
    return Witness(
        points,
        exact,
        evals,
        {
            "strategy": "anneal",
            "steps_per_restart": steps,
            "restarts_run": restarts_run,
            "objective_estimate": float(best_value),
        },
    )


def run_search(system: LinearSystem, cfg: SearchConfig) -> Witness:
    if cfg.strategy_name() in ("exhaustive", "exhaustive_fixed"):
        return exhaustive_search(system, cfg)
    if cfg.strategy_name() == "anneal":
        return anneal_search(system, cfg)
    raise ValueError(f"unknown strategy {cfg.strategy!r}")
