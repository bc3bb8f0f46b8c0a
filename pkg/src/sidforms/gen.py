"""Random instance generators for property suites and experiments.

Everything is driven by a caller-supplied random.Random so suites are
reproducible from a single seed.
"""

from __future__ import annotations

import random

from .counting import PointSet
from .errors import EmptySystem, RankDeficient
from .field import FieldSpec
from .linalg import LinearSystem, is_degenerate, matrix_rank, normalize


def random_system(rng: random.Random, field: FieldSpec, m: int, k: int,
                  translation_invariant: bool = False) -> LinearSystem:
    """A random full-rank m x k system; resamples until the rank is m."""
    q = field.q
    while True:
        rows = []
        for _ in range(m):
            row = [rng.randrange(q) for _ in range(k)]
            if translation_invariant:
                # force the coefficient sum to zero via the last entry
                acc = 0
                for v in row[:-1]:
                    acc = field.add(acc, v)
                row[-1] = field.neg(acc)
            rows.append(row)
        try:
            sys_ = LinearSystem(field, rows)
        except (RankDeficient, EmptySystem):
            continue
        return sys_


def random_point_set(rng: random.Random, field: FieldSpec, n: int,
                     density: float = 0.5) -> PointSet:
    size = field.q ** n
    encs = [e for e in range(size) if rng.random() < density]
    return PointSet(field, n, encodings=encs)


def random_forest_template_system(rng: random.Random, field: FieldSpec,
                                  max_vars: int = 8):
    """A non-degenerate system built from an explicit forest template:
    random tuples of size >= 2, random all-nonzero form per edge.

    Returns (system, tuples, edges) where edges are (u, v, form).
    """
    q = field.q
    while True:
        tuple_size = rng.choice([2, 2, 3])
        r = rng.randint(2, max(2, max_vars // tuple_size))
        k = r * tuple_size
        if k > max_vars:
            continue
        tuples = [
            tuple(range(i * tuple_size, (i + 1) * tuple_size)) for i in range(r)
        ]
        # random forest on r vertices: attach each vertex to an earlier one
        # with probability keeping some components split
        edges = []
        for v in range(1, r):
            if r > 2 and rng.random() < 0.25:
                continue  # leave v isolated for now (new component root)
            u = rng.randrange(v)
            edges.append((u, v))
        if not edges:
            continue
        # occasionally double an edge (parallel edges are allowed)
        if rng.random() < 0.3:
            edges.append(rng.choice(edges))
        m = len(edges)
        if m > 4 or m >= k:
            continue
        rows = []
        forms = []
        for u, v in edges:
            form = [1 + rng.randrange(q - 1) for _ in range(tuple_size)]
            row = [0] * k
            for c, (a, b) in zip(form, zip(tuples[u], tuples[v])):
                row[a] = c
                row[b] = field.neg(c)
            rows.append(row)
            forms.append((u, v, tuple(form)))
        if matrix_rank(field, rows) != m:
            continue
        system, _ = normalize(field, rows)
        if system.m != m or is_degenerate(system):
            continue
        return system, tuples, forms
