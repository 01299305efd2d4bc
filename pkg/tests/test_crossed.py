import numpy as np
import pytest

from lplab.crossed import (CrossedCoefficients, check_mnp_isometry, verify_matrix_units,
                           verify_spatiality)
from lplab.groups import GroupError, make_cyclic, make_symmetric
from lplab.operators import crossed_operator
from lplab.pnorm import EstimatorConfig, exact_norm

CFG = EstimatorConfig(restarts=8, rel_tol=1e-9)


def random_coeffs(group, seed):
    rng = np.random.default_rng(seed)
    n = group.order
    return rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))


def test_units_trivial_group():
    report = verify_matrix_units(make_cyclic(1))
    assert report.passed
    assert report.details[0]["quadruples"] == 1


def test_units_z3_exhaustive():
    report = verify_matrix_units(make_cyclic(3))
    assert report.passed
    assert report.details[0]["quadruples"] == 81


def test_units_s3_exhaustive():
    report = verify_matrix_units(make_symmetric(3))
    assert report.passed
    assert report.details[0]["quadruples"] == 6 ** 4


def test_spatiality_small_groups():
    for group in (make_cyclic(2), make_cyclic(3)):
        report = verify_spatiality(group, CFG)
        assert report.passed


def test_spatiality_s3():
    report = verify_spatiality(make_symmetric(3), CFG)
    assert report.passed
    assert report.details[0]["units"] == 36


def test_mnp_identity_coefficients():
    z3 = make_cyclic(3)
    report = check_mnp_isometry(CrossedCoefficients(z3, np.eye(3)), 1.5, CFG)
    assert report.passed
    d = report.details[0]
    assert abs(d["norm_represented"] - 1.0) < 1e-9
    assert abs(d["norm_coefficients"] - 1.0) < 1e-9


def test_mnp_single_unit_coefficients():
    z3 = make_cyclic(3)
    c = np.zeros((3, 3))
    c[0, 2] = 1.0
    for p in (1.0, 1.5, 3.0):
        report = check_mnp_isometry(CrossedCoefficients(z3, c), p, CFG)
        assert report.passed
        assert abs(report.details[0]["norm_represented"] - 1.0) < 1e-9


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_mnp_random_z3(p):
    z3 = make_cyclic(3)
    for seed in range(5):
        coeffs = CrossedCoefficients(z3, random_coeffs(z3, seed))
        report = check_mnp_isometry(coeffs, p, CFG)
        assert report.passed
        assert report.worst_violation <= 1e-6


def test_mnp_p2_singular_values():
    s3 = make_symmetric(3)
    c = random_coeffs(s3, 7)
    rep = crossed_operator(s3, c)
    assert abs(exact_norm(rep, 2) - np.linalg.norm(c, 2)) < 1e-10


def test_crossed_homomorphism_sweep():
    for group in (make_cyclic(3), make_symmetric(3)):
        for seed in range(20):
            c1 = random_coeffs(group, seed)
            c2 = random_coeffs(group, seed + 1000)
            lhs = crossed_operator(group, c1 @ c2).entries
            rhs = crossed_operator(group, c1).entries @ crossed_operator(group, c2).entries
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_size_cap():
    big = make_cyclic(25)
    with pytest.raises(GroupError):
        verify_matrix_units(big)
    with pytest.raises(GroupError):
        check_mnp_isometry(CrossedCoefficients(big, np.eye(25)), 2.0, CFG)


def test_coefficient_validation():
    z3 = make_cyclic(3)
    with pytest.raises(ValueError):
        CrossedCoefficients(z3, np.eye(4))
    bad = np.eye(3)
    bad[0, 0] = np.inf
    with pytest.raises(ValueError):
        CrossedCoefficients(z3, bad)
