"""Benchmark: compiled counting kernels against the pure-Python fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

Workloads mirror the hot paths: kernel-vector membership counting (the
per-evaluation cost of exhaustive/anneal search), brute-force tuple
scanning, and weighted solution sums (spectral identity checks).
"""

import random
import time

import numpy as np

from sidforms import _pykernels, make_field, normalize
from sidforms._enum import kernel_enumerator
from sidforms._space import space
from sidforms.counting import PointSet

try:
    from sidforms import _ckernels
except ImportError:
    _ckernels = None


def timed(fn, *args, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return result, best


def bench_count_members():
    field = make_field(5)
    system, _ = normalize(field, [[1, 0, -1, 2, -2], [0, 1, 2, -1, -2]])
    sp = space(field, 2)
    en = kernel_enumerator(field, system.rref, system.pivots, system.k, sp)
    rng = random.Random(0)
    mask = np.array([rng.random() < 0.5 for _ in range(sp.size)], dtype=np.uint8)
    emask = en.expand_mask(mask)
    return "count_members (15625 vectors x 5 coords)", [
        ("python", _pykernels.count_members, (en.contrib, emask)),
        ("cython", _ckernels.count_members if _ckernels else None,
         (en.contrib, emask)),
    ]


def bench_weighted():
    field = make_field(5)
    sp = space(field, 2)
    system, _ = normalize(field, [[1, 2, 3, 4, 1]])
    en = kernel_enumerator(field, system.rref, system.pivots, system.k, sp)
    rng = random.Random(1)
    weights = np.array([rng.random() for _ in range(sp.size)])
    ew = en.expand_weights(weights)
    return "weighted_product_sum (390625 vectors x 5 coords)", [
        ("python", _pykernels.weighted_product_sum, (en.contrib, ew)),
        ("cython", _ckernels.weighted_product_sum if _ckernels else None,
         (en.contrib, ew)),
    ]


def bench_bruteforce():
    field = make_field(5)
    system, _ = normalize(field, [[1, 0, -1, 2, -2], [0, 1, 2, -1, -2]])
    rng = random.Random(2)
    pts = PointSet(field, 2, encodings=[e for e in range(25) if rng.random() < 0.6])
    from sidforms.counting import _count_bruteforce
    import sidforms.kernels as kernels_mod

    def run(impl):
        original = kernels_mod.count_bruteforce
        kernels_mod.count_bruteforce = impl.count_bruteforce
        try:
            return _count_bruteforce(system, pts)[0]
        finally:
            kernels_mod.count_bruteforce = original

    return f"brute force ({len(pts)}^5 = {len(pts) ** 5} tuples)", [
        ("python", run, (_pykernels,)),
        ("cython", (lambda impl: run(impl)) if _ckernels else None, (_ckernels,)),
    ]


def main():
    if _ckernels is None:
        print("compiled extension not available; showing fallback timings only\n")
    for name, entries in (bench_count_members(), bench_weighted(),
                          bench_bruteforce()):
        print(name)
        base = None
        for label, fn, args in entries:
            if fn is None:
                continue
            result, dt = timed(fn, *args)
            speed = "" if base is None else f"  ({base / dt:.0f}x faster)"
            if base is None:
                base = dt
            print(f"  {label:7s} {dt * 1000:9.2f} ms  -> {result}{speed}")
        print()


if __name__ == "__main__":
    main()
