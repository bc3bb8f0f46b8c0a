import random

import pytest

from sidforms import (
    LinearSystem,
    good_sets,
    induced_equations,
    make_field,
    min_induced_length,
    normalize,
    rank_reduction_amount,
    structural_flags,
)
from sidforms.errors import BadIndex, EmptySystem, RankDeficient
from sidforms.gen import random_system
from sidforms.linalg import zero_sum_pairing

F5 = make_field(5)
F3 = make_field(3)

MIXED_ROWS = [[1, 0, -1, 2, -2], [0, 1, 2, -1, -2]]


def mixed():
    return normalize(F5, MIXED_ROWS)[0]


def test_normalize_drops_dependent_rows():
    system, dropped = normalize(F5, [[1, 1, -2], [2, 2, -4]])
    assert system.m == 1
    assert system.rows == ((1, 1, 3),)
    assert dropped == 1


def test_normalize_keeps_full_rank():
    system, dropped = normalize(F5, MIXED_ROWS)
    assert system.m == 2 and dropped == 0
    assert system.rank == 2


def test_empty_system():
    with pytest.raises(EmptySystem):
        normalize(F5, [[0, 0], [0, 0]])


def test_rank_deficient_constructor():
    with pytest.raises(RankDeficient):
        LinearSystem(F5, [[1, 1, 3], [2, 2, 1]])


def test_induced_single_row():
    system, _ = normalize(F5, [[1, 1, -1, -1]])
    eqs = induced_equations(system)
    assert len(eqs) == 1
    assert eqs[0].coeffs == (1, 1, 4, 4)


def test_induced_projective_count():
    system = random_system(random.Random(3), F3, 2, 5)
    assert len(induced_equations(system)) == (9 - 1) // 2


def test_induced_contains_display_rows():
    eqs = {e.coeffs for e in induced_equations(mixed())}
    display = [
        [1, 0, -1, 2, -2],
        [0, 1, 2, -1, -2],
        [2, 1, 0, 3, -6],
        [1, 2, 3, 0, -6],
        [1, -1, -3, 3, 0],
    ]
    for row in display:
        reduced = [v % 5 for v in row]
        lead = next(v for v in reduced if v)
        inv = pow(lead, -1, 5)
        canon = tuple(v * inv % 5 for v in reduced)
        assert canon in eqs


def test_induced_closed_under_combination():
    rng = random.Random(4)
    for _ in range(20):
        system = random_system(rng, F3, 2, 5)
        eqs = induced_equations(system)
        coeff_set = {e.coeffs for e in eqs}
        a, b = rng.sample(eqs, 2)
        lam = rng.randrange(1, 3)
        combo = tuple(
            F3.add(x, F3.mul(lam, y)) for x, y in zip(a.coeffs, b.coeffs)
        )
        if any(combo):
            lead = next(v for v in combo if v)
            inv = F3.inv(lead)
            canon = tuple(F3.mul(inv, v) for v in combo)
            assert canon in coeff_set


def test_min_induced_length():
    s, shortest = min_induced_length(mixed())
    assert s == 4
    assert len(shortest) == 5
    missing = sorted(eq.missing[0] for eq in shortest)
    assert missing == [0, 1, 2, 3, 4]

    single, _ = normalize(F5, [[1, 1, -1, -1]])
    assert min_induced_length(single)[0] == 4

    degen, _ = normalize(F5, [[1, -1, 0], [1, 0, -1]])
    assert min_induced_length(degen)[0] == 2


def test_rank_reduction_amount():
    system = mixed()
    assert rank_reduction_amount(system, set()) == 0
    assert rank_reduction_amount(system, {0, 2, 3, 4}) == 1
    assert rank_reduction_amount(system, range(5)) == 2

    single, _ = normalize(F5, [[1, 1, -1, -1, 0]])
    assert rank_reduction_amount(single, {0, 1, 2, 3}) == 1
    with pytest.raises(BadIndex):
        rank_reduction_amount(single, {7})


def test_rank_reduction_full_set_is_m():
    rng = random.Random(5)
    for _ in range(20):
        system = random_system(rng, F3, rng.randint(1, 3), 5)
        assert rank_reduction_amount(system, range(5)) == system.m


def test_good_sets_single_row():
    system, _ = normalize(F5, [[1, 1, -1, -1, 0]])
    report = good_sets(system)
    assert report.s == 4
    assert report.good_sets == [(0, 1, 2, 3)]
    assert report.maximal_good_sets == [(0, 1, 2, 3)]
    assert report.rank_reduction[(0, 1, 2, 3)] == 1


def test_good_sets_small_sets_never_good():
    report = good_sets(mixed())
    for B in report.good_sets:
        assert len(B) >= report.s


def test_good_sets_disjoint_supports():
    system, _ = normalize(F5, [[1, -1, 0, 0], [0, 0, 1, -1]])
    report = good_sets(system)
    assert report.good_sets == [(0, 1), (2, 3)]
    assert sorted(report.maximal_good_sets) == [(0, 1), (2, 3)]


def test_structural_flags():
    assert structural_flags(mixed()) == {
        "translation_invariant": True,
        "degenerate": False,
    }
    quad, _ = normalize(F5, [[1, -1, 1, -1, 0], [1, 2, -1, 0, -2]])
    assert structural_flags(quad)["translation_invariant"] is True

    F7 = make_field(7)
    system, _ = normalize(F7, [[1, 1, -1, 2]])
    assert structural_flags(system)["translation_invariant"] is False

    chain, _ = normalize(F5, [[1, -1, 0], [0, 1, -1]])
    assert structural_flags(chain)["degenerate"] is True


def test_zero_sum_pairing():
    assert zero_sum_pairing(F5, (1, 4, 2, 3)) is not None
    assert zero_sum_pairing(F5, (1, 1, 1, 1)) is None
    assert zero_sum_pairing(F5, (1, 4, 2)) is None
    pairing = zero_sum_pairing(F5, (1, 4, 2, 3))
    for a, b in pairing:
        assert (a + b) % 5 == 0
