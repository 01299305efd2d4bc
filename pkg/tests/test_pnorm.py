import math

import numpy as np
import pytest

from lplab.algebra import GroupAlgebraElement
from lplab.groups import make_symmetric
from lplab.operators import regular_matrix
from lplab.pnorm import (EstimatorConfig, PNormError, ascent_ratios, bruteforce_pnorm,
                         conjugate_exponent, dual_vector, estimate_pnorm, exact_norm,
                         interpolation_upper, quick_norm_lower, vec_pnorm)


def unit_disc_matrix(dim, seed):
    rng = np.random.default_rng(seed)
    return np.sqrt(rng.uniform(size=(dim, dim))) * np.exp(2j * np.pi * rng.uniform(size=(dim, dim)))


def test_vec_pnorm_basis_vector():
    e1 = np.array([1.0, 0, 0], dtype=complex)
    for p in (1.0, 1.7, 2.0, 5.0, math.inf):
        assert vec_pnorm(e1, p) == 1.0


def test_vec_pnorm_examples():
    assert abs(vec_pnorm(np.array([1.0, 1.0]), 2) - math.sqrt(2)) < 1e-15
    assert vec_pnorm(np.array([3.0, 4.0]), 1) == 7.0
    assert vec_pnorm(np.array([3.0, 4.0]), math.inf) == 4.0


def test_vec_pnorm_rejects_small_p():
    with pytest.raises(PNormError):
        vec_pnorm(np.ones(2), 0.5)


def test_conjugate_exponent():
    assert conjugate_exponent(2.0) == 2.0
    assert conjugate_exponent(1.0) == math.inf
    assert abs(conjugate_exponent(3.0) - 1.5) < 1e-15
    assert abs(conjugate_exponent(1.2) - 6.0) < 1e-12


def test_dual_vector_p2_is_conjugate():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = dual_vector(x, 2.0)
    assert np.allclose(y, np.conj(x) / np.linalg.norm(x), atol=1e-15)


def test_dual_vector_basis():
    x = np.array([2j, 0.0], dtype=complex)
    y = dual_vector(x, 3.0)
    assert abs(y[0] - np.conj(2j) / 2) < 1e-15
    assert y[1] == 0.0


def test_dual_vector_norming_property():
    rng = np.random.default_rng(1)
    for p in (1.5, 3.0, 4.0):
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        y = dual_vector(x, p)
        assert abs(vec_pnorm(y, conjugate_exponent(p)) - 1.0) < 1e-12
        pairing = np.sum(x * y)
        assert abs(pairing - vec_pnorm(x, p)) < 1e-12
        assert abs(pairing.imag) < 1e-12


def test_dual_vector_rejects_zero_and_bad_p():
    with pytest.raises(PNormError):
        dual_vector(np.zeros(3, dtype=complex), 2.0)
    with pytest.raises(PNormError):
        dual_vector(np.ones(3), 1.0)


def test_exact_norm_identity():
    eye = np.eye(4, dtype=complex)
    for p in (1.0, 2.0, math.inf):
        assert abs(exact_norm(eye, p) - 1.0) < 1e-12


def test_exact_norm_all_ones():
    m = np.ones((2, 2), dtype=complex)
    for p in (1.0, 2.0, math.inf):
        assert abs(exact_norm(m, p) - 2.0) < 1e-12


def test_exact_norm_diagonal():
    m = np.diag([3.0, 1.0]).astype(complex)
    for p in (1.0, 2.0, math.inf):
        assert abs(exact_norm(m, p) - 3.0) < 1e-12


def test_exact_norm_rejects_other_p():
    with pytest.raises(PNormError):
        exact_norm(np.eye(2), 3.0)


def test_exact_norm_p2_against_svd_oracle():
    for seed in range(50):
        m = unit_disc_matrix(2 + seed % 5, seed)
        assert abs(exact_norm(m, 2) - np.linalg.norm(m, 2)) < 1e-9


def test_exact_norm_p2_convolution_and_permutation_matrices():
    s3 = make_symmetric(3)
    rng = np.random.default_rng(5)
    f = GroupAlgebraElement(s3, rng.uniform(-1, 1, 6) + 1j * rng.uniform(-1, 1, 6))
    m = regular_matrix(f).entries
    assert abs(exact_norm(m, 2) - np.linalg.norm(m, 2)) < 1e-9
    perm = np.eye(5)[[4, 0, 1, 2, 3]].astype(complex)
    assert abs(exact_norm(perm, 2) - 1.0) < 1e-12
    assert exact_norm(np.zeros((3, 3)), 2) == 0.0
    assert abs(exact_norm(np.array([[0, 1], [0, 0]], dtype=complex), 2) - 1.0) < 1e-12


def test_estimate_identity_any_p():
    eye = np.eye(5, dtype=complex)
    for p in (1.0, 1.5, 2.0, 3.0, 7.0):
        est = estimate_pnorm(eye, p)
        assert abs(est.lower - 1.0) < 1e-12
        assert est.lower <= est.upper + 1e-9


def test_estimate_all_ones_closed_form():
    m = np.ones((2, 2), dtype=complex)
    est = estimate_pnorm(m, 3.0)
    assert abs(est.lower - 2.0) < 1e-10
    assert abs(bruteforce_pnorm(m, 3.0, 32) - 2.0) < 1e-8


def test_estimate_matches_bruteforce():
    for seed, p in [(0, 2.5), (1, 1.5), (2, 4.0), (3, 1.2)]:
        m = unit_disc_matrix(3, seed)
        est = estimate_pnorm(m, p)
        oracle = bruteforce_pnorm(m, p, 48)
        assert abs(est.lower - oracle) <= 1e-4 * oracle


def test_estimate_rejects_bad_p():
    with pytest.raises(PNormError):
        estimate_pnorm(np.eye(2), 0.9)
    with pytest.raises(PNormError):
        estimate_pnorm(np.eye(2), math.inf)


def test_ascent_ratios_monotone():
    rng = np.random.default_rng(7)
    for seed in range(10):
        m = unit_disc_matrix(5, seed)
        x0 = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        for q in (2.5, 4.0):
            ratios, _, _ = ascent_ratios(m, q, x0, 200, 1e-10)
            for a, b in zip(ratios, ratios[1:]):
                assert b >= a - 1e-12 * max(a, 1.0)


def test_estimate_witness_validity():
    for seed, p in [(0, 3.0), (1, 1.5), (2, 2.0), (3, 1.0)]:
        m = unit_disc_matrix(4, seed)
        est = estimate_pnorm(m, p)
        ratio = vec_pnorm(m @ est.witness, p) / vec_pnorm(est.witness, p)
        assert abs(ratio - est.lower) <= 1e-10 * max(est.lower, 1e-300)


def test_estimate_lower_below_upper():
    for seed in range(10):
        m = unit_disc_matrix(3, seed)
        for p in (1.2, 2.5, 6.0):
            est = estimate_pnorm(m, p)
            assert est.lower <= est.upper + 1e-9


def test_permutation_invariance():
    rng = np.random.default_rng(11)
    m = unit_disc_matrix(4, 11)
    perm_rows = np.eye(4)[rng.permutation(4)]
    perm_cols = np.eye(4)[rng.permutation(4)]
    shuffled = perm_rows @ m @ perm_cols
    for p in (1.5, 3.0):
        a = estimate_pnorm(m, p).lower
        b = estimate_pnorm(shuffled, p).lower
        assert b >= a - 1e-8
        assert a >= b - 1e-8


def test_transpose_duality_oracle_backed():
    """||A||_p = ||A^T||_{p'} checked with both the estimator and the
    independent brute-force oracle on each side."""
    for seed, p in [(0, 3.0), (1, 4.0), (2, 1.5)]:
        m = unit_disc_matrix(3, seed)
        pp = conjugate_exponent(p)
        est_a = estimate_pnorm(m, p).lower
        est_b = estimate_pnorm(m.T, pp).lower
        assert abs(est_a - est_b) <= 1e-6 * max(est_a, 1.0)
        bf_a = bruteforce_pnorm(m, p, 48)
        bf_b = bruteforce_pnorm(m.T, pp, 48)
        assert abs(bf_a - bf_b) <= 1e-4 * max(bf_a, 1.0)
        assert abs(est_a - bf_a) <= 1e-4 * bf_a


def test_bruteforce_small_cases():
    assert abs(bruteforce_pnorm(np.eye(2, dtype=complex), 1.7, 32) - 1.0) < 1e-8
    assert abs(bruteforce_pnorm(np.diag([2.0, 1.0]).astype(complex), 4.0, 32) - 2.0) < 1e-8
    had = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex)
    assert abs(bruteforce_pnorm(had, 2.0, 48) - exact_norm(had, 2)) < 1e-6


def test_bruteforce_rejects_large_dim():
    with pytest.raises(PNormError):
        bruteforce_pnorm(np.eye(4, dtype=complex), 2.0)


def test_quick_lower_is_sane():
    m = unit_disc_matrix(4, 13)
    for p in (1.5, 3.0):
        quick = quick_norm_lower(m, p)
        full = estimate_pnorm(m, p).lower
        assert quick <= full * (1 + 1e-9)
        assert quick >= 0.5 * full


def test_estimator_config_validation():
    with pytest.raises(PNormError):
        EstimatorConfig(restarts=0)
    with pytest.raises(PNormError):
        EstimatorConfig(rel_tol=0.0)


def test_estimate_json_fields():
    est = estimate_pnorm(np.eye(2, dtype=complex), 3.0)
    doc = est.to_json()
    assert set(doc) == {"p", "lower", "upper", "converged", "restarts_used",
                        "iterations", "witness"}
    assert len(doc["witness"]) == 2


def test_interpolation_upper_examples():
    bound = interpolation_upper(np.eye(3, dtype=complex))
    for p in (1.0, 2.0, 5.0, math.inf):
        assert abs(bound(p) - 1.0) < 1e-12
    bound = interpolation_upper(np.ones((2, 2), dtype=complex))
    for p in (1.0, 1.5, 2.0, 4.0):
        assert abs(bound(p) - 2.0) < 1e-12
    bound = interpolation_upper(np.diag([3.0, 1.0]))
    assert abs(bound(2.5) - 3.0) < 1e-12


def test_interpolation_upper_matches_endpoints():
    m = unit_disc_matrix(3, 17)
    bound = interpolation_upper(m)
    assert abs(bound(1.0) - exact_norm(m, 1)) < 1e-12
    assert abs(bound(math.inf) - exact_norm(m, math.inf)) < 1e-12


def test_interpolation_upper_dominates_norm():
    for seed in range(5):
        m = unit_disc_matrix(3, seed)
        bound = interpolation_upper(m)
        for p in (1.2, 2.0, 3.0):
            assert estimate_pnorm(m, p).lower <= bound(p) + 1e-9


def test_zero_matrix_estimate():
    est = estimate_pnorm(np.zeros((3, 3), dtype=complex), 2.5)
    assert est.lower == 0.0
    assert est.upper == 0.0
