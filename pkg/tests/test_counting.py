import random
from fractions import Fraction

import pytest

from sidforms import (
    PointSet,
    complement_identity,
    count_solutions,
    deficits,
    inclusion_exclusion,
    load_point_set,
    make_field,
    normalize,
    partial_density,
    save_point_set,
)
from sidforms.errors import BudgetExceeded, DegenerateSystem, ParseError
from sidforms.gen import random_point_set, random_system

F5 = make_field(5)
F3 = make_field(3)

MIXED_ROWS = [[1, 0, -1, 2, -2], [0, 1, 2, -1, -2]]
WITNESS_POINTS = [(0, 0), (0, 3), (1, 2), (3, 0), (3, 3), (4, 0), (4, 1), (4, 2)]
# fixed by the independent pre-build brute-force run
WITNESS_COUNT = 48


def mixed():
    return normalize(F5, MIXED_ROWS)[0]


def test_full_space_count():
    system = mixed()
    full = PointSet.full(F5, 1)
    sc = count_solutions(system, full)
    assert sc.count == 5 ** (1 * (5 - 2)) == 125


def test_empty_set():
    system = mixed()
    assert count_solutions(system, PointSet(F5, 2)).count == 0


def test_witness_set_all_methods():
    system = mixed()
    pts = PointSet(F5, 2, WITNESS_POINTS)
    for method in ("bruteforce", "kernel", "fourier", "ntt"):
        sc = count_solutions(system, pts, method)
        assert sc.count == WITNESS_COUNT
        assert sc.total == 5 ** 6
        assert not sc.float_derived
    assert Fraction(WITNESS_COUNT) < Fraction(32768, 625)


def test_method_agreement_random():
    rng = random.Random(20)
    done = 0
    while done < 100:
        q = rng.choice([2, 3, 5])
        field = make_field(q)
        m = rng.randint(1, 2)
        k = rng.randint(m + 1, 5)
        n = rng.randint(1, 2)
        if q ** (n * (k - m)) > 10 ** 5 or q ** (n * m) > 10 ** 5:
            continue
        system = random_system(rng, field, m, k)
        pts = random_point_set(rng, field, n)
        if len(pts) ** k > 10 ** 5:
            continue
        counts = {
            method: count_solutions(system, pts, method).count
            for method in ("bruteforce", "kernel", "fourier", "ntt")
        }
        assert len(set(counts.values())) == 1, counts
        done += 1


def test_monotonicity():
    rng = random.Random(21)
    system = mixed()
    for _ in range(10):
        small = random_point_set(rng, F5, 1, density=0.4)
        extra = [e for e in range(5) if rng.random() < 0.5]
        big = PointSet(F5, 1, encodings=set(small.encodings) | set(extra))
        assert count_solutions(system, small).count <= count_solutions(system, big).count


def test_budget_errors():
    system = mixed()
    pts = PointSet.full(F5, 4)  # kernel would need 5^12 > 1e8 vectors
    with pytest.raises(BudgetExceeded):
        count_solutions(system, pts, "kernel")


def test_partial_density():
    system, _ = normalize(F3, [[1, 1, 1]])
    zero = PointSet(F3, 1, [(0,)])
    assert partial_density(system, zero, set()) == 1
    assert partial_density(system, zero, {0}) == Fraction(1, 3)
    full = PointSet.full(F3, 1)
    assert partial_density(system, full, range(3)) == 1


def test_deficits_exact_values():
    system, _ = normalize(F3, [[1, 1, 1]])
    pts = PointSet(F3, 1, [(1,), (2,)])
    rep = deficits(system, pts)
    assert rep.density == Fraction(2, 9)
    assert rep.sidorenko_deficit == Fraction(2, 9) - Fraction(8, 27)
    assert rep.sidorenko_deficit == Fraction(-2, 27)


def test_deficits_full_space_is_zero():
    rng = random.Random(22)
    for _ in range(5):
        system = random_system(rng, F3, 2, 4)
        from sidforms.linalg import is_degenerate

        if is_degenerate(system):
            continue
        rep = deficits(system, PointSet.full(F3, 1))
        assert rep.sidorenko_deficit == 0


def test_deficits_reject_degenerate():
    system, _ = normalize(F5, [[1, -1, 0], [0, 1, -1]])
    with pytest.raises(DegenerateSystem):
        deficits(system, PointSet.full(F5, 1))


def test_inclusion_exclusion_cases():
    system = mixed()
    full = PointSet.full(F5, 1)
    lhs, rhs = inclusion_exclusion(system, full)
    assert lhs == rhs == 1

    pts = PointSet(F5, 2, WITNESS_POINTS)
    lhs, rhs = inclusion_exclusion(system, pts)
    assert lhs == rhs == Fraction(WITNESS_COUNT, 5 ** 6)

    rng = random.Random(23)
    sys3, _ = normalize(F3, [[1, 1, 1]])
    for _ in range(20):
        pts = random_point_set(rng, F3, 1)
        lhs, rhs = inclusion_exclusion(sys3, pts)
        assert lhs == rhs


def test_complement_identity_trivial_and_random():
    system = mixed()
    full = PointSet.full(F5, 1)
    lhs, rhs = complement_identity(system, full)
    assert lhs == rhs == 1

    rng = random.Random(24)
    quad, _ = normalize(F5, [[1, -1, 1, -1, 0], [1, 2, -1, 0, -2]])
    for target in (system, quad):
        for _ in range(10):
            pts = random_point_set(rng, F5, 1)
            lhs, rhs = complement_identity(target, pts)
            assert lhs == rhs


def test_point_set_file_roundtrip(tmp_path):
    pts = PointSet(F5, 2, WITNESS_POINTS)
    path = tmp_path / "pts.txt"
    save_point_set(path, pts)
    back = load_point_set(path, F5, 2)
    assert back.encodings == pts.encodings


def test_point_set_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("0 0\n1\n")
    with pytest.raises(ParseError) as exc:
        load_point_set(path, F5, 2)
    assert exc.value.line == 2
    path.write_text("0 9\n")
    with pytest.raises(ParseError):
        load_point_set(path, F5, 2)
