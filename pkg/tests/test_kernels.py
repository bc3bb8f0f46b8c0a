"""Backend parity: compiled kernels against the pure-Python fallback and
against naive direct enumeration."""

import itertools
import random

import numpy as np
import pytest

from sidforms import _pykernels, kernels, make_field
from sidforms._enum import kernel_enumerator
from sidforms._space import space
from sidforms.gen import random_system

try:
    from sidforms import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def naive_points(system, n):
    """All solutions as tuples of point encodings, by direct product scan."""
    field = system.field
    sp = space(field, n)
    out = []
    for cand in itertools.product(range(sp.size), repeat=system.k):
        coords = [sp.decode(e) for e in cand]
        ok = True
        for row in system.rows:
            for i in range(n):
                acc = 0
                for c, pt in zip(row, coords):
                    acc = field.add(acc, field.mul(c, pt[i]))
                if acc:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(cand)
    return out


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.__name__)
def test_count_members_matches_naive(impl):
    rng = random.Random(10)
    for _ in range(10):
        q = rng.choice([2, 3, 5])
        field = make_field(q)
        m = rng.randint(1, 2)
        k = rng.randint(m + 1, 4)
        n = rng.randint(1, 2)
        system = random_system(rng, field, m, k)
        sp = space(field, n)
        if sp.size ** k > 200_000:
            continue
        sols = naive_points(system, n)
        mask = np.array([rng.random() < 0.6 for _ in range(sp.size)], dtype=np.uint8)
        en = kernel_enumerator(field, system.rref, system.pivots, k, sp)
        got = impl.count_members(en.contrib, en.expand_mask(mask))
        want = sum(1 for cand in sols if all(mask[e] for e in cand))
        assert got == want


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.__name__)
def test_subset_and_histogram_match_naive(impl):
    rng = random.Random(11)
    field = make_field(3)
    system = random_system(rng, field, 2, 4)
    sp = space(field, 1)
    sols = naive_points(system, 1)
    mask = np.array([1, 0, 1], dtype=np.uint8)
    en = kernel_enumerator(field, system.rref, system.pivots, 4, sp)
    active = np.array([1, 0, 1, 0], dtype=np.uint8)
    got = impl.count_members_subset(en.contrib, en.expand_mask(mask), active)
    want = sum(1 for cand in sols if mask[cand[0]] and mask[cand[2]])
    assert got == want

    hist = np.zeros(1 << 4, dtype=np.int64)
    impl.pattern_histogram(en.contrib, en.expand_mask(mask), hist)
    want_hist = np.zeros(1 << 4, dtype=np.int64)
    for cand in sols:
        bits = sum(1 << j for j, e in enumerate(cand) if mask[e])
        want_hist[bits] += 1
    assert (hist == want_hist).all()


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.__name__)
def test_weighted_sum_matches_naive(impl):
    rng = random.Random(12)
    field = make_field(5)
    system = random_system(rng, field, 1, 3)
    sp = space(field, 1)
    weights = np.array([rng.random() for _ in range(5)])
    en = kernel_enumerator(field, system.rref, system.pivots, 3, sp)
    got = impl.weighted_product_sum(en.contrib, en.expand_weights(weights))
    want = sum(
        weights[a] * weights[b] * weights[c] for a, b, c in naive_points(system, 1)
    )
    assert abs(got - want) < 1e-9


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.__name__)
def test_bruteforce_kernel_parity(impl):
    from sidforms.counting import PointSet, count_solutions

    rng = random.Random(13)
    for _ in range(8):
        q = rng.choice([3, 5])
        field = make_field(q)
        system = random_system(rng, field, rng.randint(1, 2), rng.randint(3, 4))
        n = rng.randint(1, 2)
        sp = space(field, n)
        encs = [e for e in range(sp.size) if rng.random() < 0.5]
        pts = PointSet(field, n, encodings=encs)
        if len(pts) ** system.k > 100_000:
            continue
        a = count_solutions(system, pts, "bruteforce").count
        b = count_solutions(system, pts, "kernel").count
        assert a == b


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(_ckernels is None, reason="compiled extension unavailable")
def test_compiled_and_python_agree_directly():
    rng = random.Random(14)
    field = make_field(5)
    system = random_system(rng, field, 2, 5)
    sp = space(field, 2)
    en = kernel_enumerator(field, system.rref, system.pivots, 5, sp)
    mask = np.array([rng.random() < 0.5 for _ in range(sp.size)], dtype=np.uint8)
    emask = en.expand_mask(mask)
    assert _ckernels.count_members(en.contrib, emask) == \
        _pykernels.count_members(en.contrib, emask)
