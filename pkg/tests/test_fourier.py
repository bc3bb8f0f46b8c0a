import json
import math
import random

import numpy as np
import pytest

from sidforms import (
    SpectralFunction,
    build_sign_witness,
    make_field,
    normalize,
    round_to_set,
    sum_tau_shortest,
    tau,
    transform,
    twisted_identity,
)
from sidforms._space import space
from sidforms.errors import HypothesisViolated
from sidforms.fourier import _dft_fast, _dft_naive, function_density
from sidforms.knownsystems import mixed_25, ratio_gap_25_f11

F5 = make_field(5)
EPS = 2.0 ** -10


def rand_values(rng, size):
    return np.array([rng.random() for _ in range(size)])


def test_transform_constant():
    f = transform(F5, 1, [0.3] * 5)
    assert abs(f.coefficients[0] - 0.3) < 1e-12
    assert np.abs(f.coefficients[1:]).max() < 1e-12


def test_transform_indicator_of_origin():
    f = transform(F5, 1, [1, 0, 0, 0, 0])
    assert np.abs(f.coefficients - 0.2).max() < 1e-12


def test_roundtrip_random():
    rng = random.Random(30)
    for q, n in ((5, 1), (5, 2), (3, 2), (2, 3)):
        field = make_field(q)
        sp = space(field, n)
        vals = rand_values(rng, sp.size)
        f = SpectralFunction.from_values(field, n, vals)
        assert np.abs(f.values - vals).max() < 1e-9


def test_parseval():
    rng = random.Random(31)
    for q, n in ((5, 1), (5, 2), (3, 2)):
        field = make_field(q)
        sp = space(field, n)
        vals = rand_values(rng, sp.size)
        f = SpectralFunction.from_values(field, n, vals)
        lhs = (np.abs(f.coefficients) ** 2).sum()
        rhs = (vals ** 2).mean()
        assert abs(lhs - rhs) < 1e-9


def test_naive_and_fast_transforms_agree():
    rng = random.Random(32)
    for q, n in ((5, 2), (3, 3), (7, 1)):
        field = make_field(q)
        sp = space(field, n)
        vals = rand_values(rng, sp.size)
        a = _dft_naive(vals, sp, -1.0)
        b = _dft_fast(vals, sp, -1.0)
        assert np.abs(a - b).max() < 1e-9


def test_conjugate_symmetry():
    rng = random.Random(33)
    field = make_field(7)
    sp = space(field, 1)
    f = SpectralFunction.from_values(field, 1, rand_values(rng, 7))
    for r in range(7):
        assert abs(f.coefficients[(-r) % 7] - f.coefficients[r].conjugate()) < 1e-12


def test_tau_constant_half():
    f = transform(F5, 1, [0.5] * 5)
    assert abs(tau([1, 1, 4, 4], f)) < 1e-12


def test_tau_origin_indicator():
    f = transform(F5, 1, [1, 0, 0, 0, 0])
    assert abs(tau([1, 1, 4, 4], f) - 4 / 625) < 1e-12


def test_tau_degenerate_pair_nonnegative():
    rng = random.Random(34)
    for _ in range(10):
        f = SpectralFunction.from_values(F5, 1, rand_values(rng, 5))
        value = tau([1, 4], f)
        assert value.real >= -1e-12
        assert abs(value.imag) < 1e-9


def test_tau_real_for_real_functions():
    rng = random.Random(35)
    for _ in range(10):
        f = SpectralFunction.from_values(F5, 2, rand_values(rng, 25))
        value = tau([1, 2, 3, 4], f)
        assert abs(value.imag) < 1e-9


def test_twisted_identity_origin_indicator():
    f = transform(F5, 1, [1, 0, 0, 0, 0])
    lhs, rhs = twisted_identity([1, 1, 4, 4], f)
    assert abs(lhs - 1 / 125) < 1e-12
    assert abs(rhs - ((1 / 5) ** 4 + 4 / 625)) < 1e-12


def test_twisted_identity_constant():
    f = transform(F5, 1, [0.4] * 5)
    lhs, _ = twisted_identity([1, 2, 3], f)
    assert abs(lhs - 0.4 ** 3) < 1e-10


def test_twisted_identity_random_suite():
    rng = random.Random(36)
    for _ in range(50):
        n = rng.randint(1, 2)
        k = rng.randint(2, 5)
        coeffs = [1 + rng.randrange(4) for _ in range(k)]
        f = SpectralFunction.from_values(F5, n, rand_values(rng, 5 ** n))
        twisted_identity(coeffs, f)  # raises beyond tolerance


def test_sum_tau_shortest_constant_half():
    system = mixed_25()
    f = transform(F5, 1, [0.5] * 5)
    report = sum_tau_shortest(system, f)
    assert all(abs(t) < 1e-12 for t in report.taus)
    assert abs(report.total) < 1e-12


def test_sum_tau_matches_density_route():
    # tau_i == Lambda_i(f) - (E f)^4 for each shortest equation
    rng = random.Random(37)
    system = mixed_25()
    from sidforms.counting import shortest_equation_systems

    eqs = shortest_equation_systems(system)
    for _ in range(5):
        f = SpectralFunction.from_values(F5, 2, rand_values(rng, 25))
        report = sum_tau_shortest(system, f)
        for eq, t in zip(eqs, report.taus):
            lam = function_density(eq.coeffs, f)
            assert abs(t.real - (lam - f.mean ** 4)) < 1e-8


def test_sum_tau_hypothesis_check():
    ap, _ = normalize(F5, [[-1, 1, -1, 1], [-1, 3, 1, -3]])
    f = transform(F5, 1, [0.5] * 5)
    with pytest.raises(HypothesisViolated):
        sum_tau_shortest(ap, f)


def test_mixed_cauchy_schwarz_inequality():
    # |sum_h fhat(h) fhat(2h) fhat(3h) fhat(-6h)| <= sum_h |fhat(h)|^2 |fhat(2h)|^2
    rng = random.Random(38)
    for q in (5, 7):
        field = make_field(q)
        sp = space(field, 1)
        for _ in range(50):
            f = SpectralFunction.from_values(field, 1, rand_values(rng, q))
            c = f.coefficients
            i2 = sp.scalar_mul_index(2)
            i3 = sp.scalar_mul_index(3)
            i6 = sp.scalar_mul_index(field.neg(6 % q))
            cross = (c * c[i2] * c[i3] * c[i6])[1:].sum()
            bound = (np.abs(c) ** 2 * np.abs(c[i2]) ** 2)[1:].sum()
            assert abs(cross) <= bound + 1e-10


def test_sign_witness_construction():
    system = ratio_gap_25_f11()
    f = build_sign_witness(system, seed=1)
    assert f.mean == 0.5
    assert f.values.min() >= 0.0 and f.values.max() <= 1.0
    b = 2
    for v in (b, 11 - b, pow(b, -1, 11), 11 - pow(b, -1, 11)):
        assert f.coefficients[v] == 0
    report = sum_tau_shortest(system, f)
    assert report.total.real < 0
    assert report.zeta <= -report.xi
    assert report.xi >= EPS ** 3 / 8
    assert report.total.real < -report.xi / 2


def test_sign_witness_range_bound():
    # |f - 1/2| <= 2*(1/8) + 6*eps pointwise
    system = ratio_gap_25_f11()
    for seed in range(4):
        f = build_sign_witness(system, seed=seed)
        assert np.abs(f.values - 0.5).max() <= 0.25 + 6 * EPS + 1e-12


def test_sign_witness_determinism():
    system = ratio_gap_25_f11()
    a = build_sign_witness(system, seed=9)
    b = build_sign_witness(system, seed=9)
    assert np.array_equal(a.coefficients, b.coefficients)


def test_sign_witness_hypothesis_violations():
    quad = normalize(F5, [[1, -1, 1, -1, 0], [1, 2, -1, 0, -2]])[0]
    with pytest.raises(HypothesisViolated):
        build_sign_witness(quad, seed=0)  # three Sidorenko shortest equations
    even_field = make_field(2)
    sys2, _ = normalize(even_field, [[1, 1, 1, 1, 0], [0, 1, 1, 0, 1]])
    with pytest.raises(HypothesisViolated):
        build_sign_witness(sys2, seed=0)


def test_sign_witness_retry_cap():
    from sidforms.errors import RetriesExhausted

    with pytest.raises(RetriesExhausted):
        build_sign_witness(ratio_gap_25_f11(), seed=0, max_retries=0)


def test_round_to_set_extremes():
    f = transform(F5, 1, [1.0] * 5)
    assert len(round_to_set(f, 1, seed=0)) == 25
    g = transform(F5, 1, [0.0] * 5)
    assert len(round_to_set(g, 1, seed=0)) == 0


def test_round_to_set_binomial_size():
    f = transform(F5, 1, [0.5] * 5)
    A = round_to_set(f, 3, seed=123)
    mean = 5 ** 4 / 2
    sigma = math.sqrt(5 ** 4 * 0.25)
    assert abs(len(A) - mean) <= 4 * sigma


def test_round_to_set_determinism_and_projection():
    system = ratio_gap_25_f11()
    f = build_sign_witness(system, seed=2)
    A = round_to_set(f, 2, seed=7)
    B = round_to_set(f, 2, seed=7)
    assert A.encodings == B.encodings
    assert A.n == 3 and A.field.q == 11


def test_function_json_roundtrip(tmp_path):
    rng = random.Random(39)
    f = SpectralFunction.from_values(F5, 1, rand_values(rng, 5))
    path = tmp_path / "f.json"
    path.write_text(f.to_json())
    doc = json.loads(path.read_text())
    assert doc["q"] == 5 and doc["n"] == 1
    g = SpectralFunction.load(path)
    assert np.abs(f.values - g.values).max() < 1e-12
