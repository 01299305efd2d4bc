import numpy as np
import pytest

from lplab.algebra import AlgebraError, GroupAlgebraElement, convolve, delta, embed_subgroup, l1_norm, sharp
from lplab.groups import GroupError, make_cyclic, make_symmetric, subgroup
from lplab.operators import (averaging_projection, coset_averaging_map, coset_block_structure,
                             coset_lift_map, crossed_matrix_unit, crossed_operator,
                             crossed_unit_int, matrix_to_csv, matrix_to_json,
                             quotient_compression, regular_matrix)
from lplab.pnorm import EstimatorConfig, estimate_pnorm, exact_norm

S3 = make_symmetric(3)
A3 = subgroup(S3, [0, 3, 4])
CFG = EstimatorConfig(restarts=8, rel_tol=1e-9)


def random_element(group, seed):
    rng = np.random.default_rng(seed)
    return GroupAlgebraElement(
        group, rng.uniform(-1, 1, group.order) + 1j * rng.uniform(-1, 1, group.order))


def test_regular_matrix_of_identity_delta():
    assert np.array_equal(regular_matrix(delta(S3, 0)).entries, np.eye(6, dtype=complex))


def test_regular_matrix_of_delta_is_translation_permutation():
    for s in S3.elements:
        m = regular_matrix(delta(S3, s)).entries
        expected = np.zeros((6, 6), dtype=complex)
        for t in S3.elements:
            expected[S3.mul(s, t), t] = 1.0
        assert np.array_equal(m, expected)


def test_regular_matrix_z2_pattern():
    z2 = make_cyclic(2)
    f = GroupAlgebraElement(z2, np.array([2.0 + 1j, -3.0], dtype=complex))
    assert np.array_equal(regular_matrix(f).entries,
                          np.array([[2 + 1j, -3], [-3, 2 + 1j]], dtype=complex))


def test_regular_matrix_multiplicative():
    f = random_element(S3, 0)
    g = random_element(S3, 1)
    lhs = regular_matrix(convolve(f, g)).entries
    rhs = regular_matrix(f).entries @ regular_matrix(g).entries
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_regular_matrix_sharp_is_transpose():
    f = random_element(S3, 2)
    assert np.array_equal(regular_matrix(sharp(f)).entries, regular_matrix(f).entries.T)


def test_regular_matrix_column_sums_give_l1():
    f = random_element(S3, 3)
    cols = np.sum(np.abs(regular_matrix(f).entries), axis=0)
    assert np.max(np.abs(cols - l1_norm(f))) < 1e-12


def test_averaging_projection_trivial():
    p = averaging_projection(subgroup(S3, [0]))
    assert np.array_equal(p.entries, np.eye(6, dtype=complex))


def test_averaging_projection_whole_group():
    p = averaging_projection(subgroup(S3, list(S3.elements)))
    assert np.allclose(p.entries, np.full((6, 6), 1 / 6), atol=0)


def test_averaging_projection_idempotent():
    p = averaging_projection(A3).entries
    # exact statement in integer arithmetic: B @ B == |N| B for B = |N| P
    b = np.rint(p.real * A3.order).astype(np.int64)
    assert np.array_equal(b @ b, A3.order * b)
    assert np.max(np.abs(p @ p - p)) < 1e-14


def test_averaging_projection_is_doubly_stochastic_norm_one():
    p = averaging_projection(A3)
    assert np.allclose(np.sum(p.entries.real, axis=0), 1.0, atol=1e-14)
    assert np.allclose(np.sum(p.entries.real, axis=1), 1.0, atol=1e-14)
    assert exact_norm(p, 1) == 1.0
    assert exact_norm(p, np.inf) == 1.0
    assert abs(exact_norm(p, 2) - 1.0) < 1e-12
    for q in (1.5, 3.0):
        assert abs(estimate_pnorm(p, q, CFG).lower - 1.0) < 1e-8


def test_averaging_projection_requires_normal():
    with pytest.raises(GroupError):
        averaging_projection(subgroup(S3, [0, S3.labels.index("102")]))


def test_quotient_compression_trivial_cases():
    f = random_element(S3, 4)
    m = quotient_compression(subgroup(S3, [0]), f)
    assert np.array_equal(m.entries, regular_matrix(f).entries)
    m_all = quotient_compression(subgroup(S3, list(S3.elements)), f)
    assert m_all.dim == 1
    assert abs(m_all.entries[0, 0] - np.sum(f.coeffs)) < 1e-14


def test_commuting_square():
    f = random_element(S3, 5)
    m_g = regular_matrix(f).entries
    m_q = quotient_compression(A3, f).entries
    avg = coset_averaging_map(A3)
    assert np.max(np.abs(m_q @ avg - avg @ m_g)) < 1e-14
    # lifted form on the parent space: lift . avg is the averaging projection
    lift = coset_lift_map(A3)
    p_n = averaging_projection(A3).entries
    assert np.max(np.abs(lift @ avg - p_n)) < 1e-15
    assert np.max(np.abs(lift @ m_q @ avg - p_n @ m_g)) < 1e-14


def test_coset_blocks_whole_group():
    h = subgroup(S3, list(S3.elements))
    f = random_element(S3, 6)
    report = coset_block_structure(h, f)
    assert report.num_blocks == 1
    assert report.identical


def test_coset_blocks_a3():
    f_h = random_element(A3.group, 7)
    report = coset_block_structure(A3, embed_subgroup(A3, f_h))
    assert report.num_blocks == 2
    assert report.block_size == 3
    assert report.off_block_max == 0.0
    assert report.block_mismatch_max == 0.0


def test_coset_blocks_trivial_subgroup():
    h = subgroup(S3, [0])
    f = GroupAlgebraElement(S3, (2.5 - 1j) * delta(S3, 0).coeffs)
    report = coset_block_structure(h, f)
    assert report.num_blocks == 6
    assert report.identical
    assert np.array_equal(report.subgroup_matrix.entries,
                          np.array([[2.5 - 1j]], dtype=complex))


def test_coset_blocks_rejects_unsupported():
    f = random_element(S3, 8)
    with pytest.raises(AlgebraError):
        coset_block_structure(A3, f)


def test_crossed_unit_diagonal_idempotent():
    z2 = make_cyclic(2)
    for x in z2.elements:
        u = crossed_unit_int(z2, x, x)
        assert np.array_equal(u @ u, u)
        assert np.array_equal(u, np.diag(np.diag(u)))


def test_crossed_unit_relations_z3():
    z3 = make_cyclic(3)
    units = {(x, y): crossed_unit_int(z3, x, y) for x in z3.elements for y in z3.elements}
    for x in z3.elements:
        for y in z3.elements:
            for z in z3.elements:
                assert np.array_equal(units[(x, y)] @ units[(y, z)], units[(x, z)])
                for w in z3.elements:
                    if z != y:
                        assert not np.any(units[(x, y)] @ units[(z, w)])


def test_crossed_unit_is_spatial():
    for x in S3.elements:
        for y in S3.elements:
            u = crossed_unit_int(S3, x, y)
            assert set(np.unique(u)) <= {0, 1}
            assert u.sum(axis=0).max() <= 1
            assert u.sum(axis=1).max() <= 1


def test_crossed_operator_identity_coefficients():
    z3 = make_cyclic(3)
    rep = crossed_operator(z3, np.eye(3))
    assert np.array_equal(rep.entries, np.eye(9, dtype=complex))


def test_crossed_operator_single_unit():
    z3 = make_cyclic(3)
    c = np.zeros((3, 3))
    c[1, 2] = 1.0
    rep = crossed_operator(z3, c)
    assert np.array_equal(rep.entries, crossed_matrix_unit(z3, 1, 2).entries)


def test_crossed_operator_p2_norm_matches_coefficients():
    z2 = make_cyclic(2)
    rng = np.random.default_rng(9)
    c = rng.uniform(-1, 1, (2, 2)) + 1j * rng.uniform(-1, 1, (2, 2))
    rep = crossed_operator(z2, c)
    assert abs(exact_norm(rep, 2) - np.linalg.norm(c, 2)) < 1e-10


def test_crossed_operator_homomorphism():
    z3 = make_cyclic(3)
    rng = np.random.default_rng(10)
    for _ in range(20):
        c1 = rng.uniform(-1, 1, (3, 3)) + 1j * rng.uniform(-1, 1, (3, 3))
        c2 = rng.uniform(-1, 1, (3, 3)) + 1j * rng.uniform(-1, 1, (3, 3))
        lhs = crossed_operator(z3, c1 @ c2).entries
        rhs = crossed_operator(z3, c1).entries @ crossed_operator(z3, c2).entries
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_matrix_serialization():
    f = random_element(S3, 11)
    m = regular_matrix(f)
    doc = matrix_to_json(m)
    assert doc["dim"] == 6
    assert doc["index_kind"] == "group-elements"
    assert len(doc["entries"]) == 36
    csv_text = matrix_to_csv(m)
    assert len(csv_text.strip().splitlines()) == 7  # header + 6 rows
