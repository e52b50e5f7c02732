"""Tests for the supervised subspace estimator.

Expected values come from hand-worked small cases, definition-level oracle
assembly in oracles.py, random-search lower bounds, and classical
equivalences (inverse-regression directions, Fisher discriminant).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sigp.errors import DimensionError, DomainError, RankError, SingularityError
from sigp.kernels import GramCache, KernelSpec
from sigp.sdr import (
    SdrBasis,
    SlicePlan,
    default_slices,
    default_zeta,
    estimate_basis,
    fit_sdr,
    make_slices,
    rank_bound,
    response_kernel,
    sdr_loglik,
    sdr_matrices_response_kernel,
    sdr_matrices_sliced,
    suggest_rank,
)


def rbf_cache(X, lengthscale=1.0):
    return GramCache(KernelSpec("rbf", lengthscale=lengthscale), X)


def clustered_data(rng, centers, per, std):
    """Stacked Gaussian clusters with labels 0..k-1, in label order."""
    X, y = [], []
    for k, c in enumerate(centers):
        X.append(np.asarray(c) + std * rng.standard_normal((per, len(c))))
        y.extend([float(k)] * per)
    return np.vstack(X), np.array(y)


def feature_scatter_matrices(K, labels):
    """Between-group and total feature scatters in coefficient coordinates.

    For score vectors z = K b, returns (between, total) with
    quotient(b) = Var of group means / Var of scores, assembled from group
    indicator vectors by definition.
    """
    n = K.shape[0]
    A = np.zeros((n, n))
    for lab in np.unique(labels):
        u = (labels == lab).astype(float)
        A += np.outer(u, u) / (n * u.sum())
    A -= np.ones((n, n)) / n**2
    between = K @ A @ K
    total = K @ oracles.centering(n) @ K / n
    return between, total


class TestMakeSlices:
    def test_three_points_three_slices(self):
        plan = make_slices([3.0, 1.0, 2.0], 3)
        assert list(plan.ordering) == [1, 2, 0]
        assert plan.sizes == (1, 1, 1)

    def test_uneven_sizes_put_extra_in_leading_slices(self):
        plan = make_slices(np.arange(10.0), 3)
        assert plan.sizes == (4, 3, 3)
        assert plan.boundaries == ((0, 4), (4, 7), (7, 10))

    def test_binary_labels_become_contiguous(self):
        plan = make_slices([1.0, -1.0, 1.0, -1.0], 2)
        assert list(plan.ordering) == [1, 3, 0, 2]
        assert plan.sizes == (2, 2)

    def test_stable_on_ties(self):
        plan = make_slices([2.0, 2.0, 1.0, 1.0], 2)
        assert list(plan.ordering) == [2, 3, 0, 1]

    def test_slice_count_bounds(self):
        with pytest.raises(DomainError):
            make_slices([1.0, 2.0, 3.0], 4)
        with pytest.raises(DomainError):
            make_slices([1.0, 2.0, 3.0], 1)

    def test_plan_validates_sizes(self):
        with pytest.raises(DimensionError):
            SlicePlan(ordering=np.arange(4), sizes=(2, 1))
        with pytest.raises(DomainError):
            SlicePlan(ordering=np.arange(2), sizes=(2, 0))

    @given(n=st.integers(2, 40), s_frac=st.floats(0.0, 1.0), seed=st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_slice_plan_properties(self, n, s_frac, seed):
        s = 2 + int(s_frac * (n - 2))
        y = np.random.default_rng(seed).standard_normal(n)
        plan = make_slices(y, s)
        assert sum(plan.sizes) == n
        assert max(plan.sizes) - min(plan.sizes) <= 1
        sorted_y = y[plan.ordering]
        assert np.all(np.diff(sorted_y) >= 0)


class TestSlicedMatrices:
    def test_single_slice_reduces_to_global_centering(self):
        rng = np.random.default_rng(0)
        cache = rbf_cache(rng.standard_normal((6, 2)))
        plan = SlicePlan(ordering=np.arange(6), sizes=(6,))
        zeta = 0.01
        M, N = sdr_matrices_sliced(cache, plan, zeta)
        np.testing.assert_allclose(M, N + 6 * zeta * cache.K, atol=1e-12)

    def test_identity_gram_hand_case(self):
        cache = GramCache(KernelSpec("linear"), np.eye(4))
        np.testing.assert_allclose(cache.K, np.eye(4), atol=0)
        plan = make_slices([0.0, 0.0, 1.0, 1.0], 2)
        zeta = 0.5
        M, N = sdr_matrices_sliced(cache, plan, zeta)
        block = np.zeros((4, 4))
        block[:2, :2] = oracles.centering(2)
        block[2:, 2:] = oracles.centering(2)
        np.testing.assert_allclose(M, block + 4 * zeta * np.eye(4), atol=1e-14)
        np.testing.assert_allclose(N, oracles.centering(4), atol=1e-14)

    def test_matches_scatter_oracle_with_unsorted_responses(self):
        rng = np.random.default_rng(1)
        cache = rbf_cache(rng.standard_normal((7, 3)))
        y = rng.standard_normal(7)
        plan = make_slices(y, 3)
        zeta = 0.02
        M, N = sdr_matrices_sliced(cache, plan, zeta)
        expect_M = (
            oracles.sliced_scatter_oracle(cache.K, plan.ordering, plan.sizes)
            + 7 * zeta * cache.K
        )
        np.testing.assert_allclose(M, expect_M, atol=1e-12)
        np.testing.assert_allclose(N, cache.K @ oracles.centering(7) @ cache.K, atol=1e-12)

    def test_equivariant_under_data_permutation(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((8, 2))
        y = rng.standard_normal(8)
        perm = rng.permutation(8)
        zeta = 0.03
        M, N = sdr_matrices_sliced(rbf_cache(X), make_slices(y, 4), zeta)
        Mp, Np = sdr_matrices_sliced(rbf_cache(X[perm]), make_slices(y[perm], 4), zeta)
        np.testing.assert_allclose(Mp, M[np.ix_(perm, perm)], atol=1e-12)
        np.testing.assert_allclose(Np, N[np.ix_(perm, perm)], atol=1e-12)

    def test_one_point_per_slice_leaves_only_ridge(self):
        rng = np.random.default_rng(3)
        cache = rbf_cache(rng.standard_normal((5, 2)))
        plan = make_slices(rng.standard_normal(5), 5)
        zeta = 0.1
        M, _ = sdr_matrices_sliced(cache, plan, zeta)
        np.testing.assert_allclose(M, 5 * zeta * cache.K, atol=1e-12)

    def test_rejects_nonpositive_zeta_and_bad_plan(self):
        rng = np.random.default_rng(4)
        cache = rbf_cache(rng.standard_normal((5, 2)))
        plan = make_slices(rng.standard_normal(5), 2)
        with pytest.raises(DomainError):
            sdr_matrices_sliced(cache, plan, 0.0)
        short = make_slices(rng.standard_normal(4), 2)
        with pytest.raises(DimensionError):
            sdr_matrices_sliced(cache, short, 0.1)


class TestResponseKernelMatrices:
    def test_zero_response_kernel_collapses_to_global_centering(self):
        rng = np.random.default_rng(5)
        cache = rbf_cache(rng.standard_normal((6, 2)))
        zeta = 0.01
        M, N = sdr_matrices_response_kernel(cache, np.zeros((6, 6)), zeta, 0.1)
        np.testing.assert_allclose(M, N + 6 * zeta * cache.K, atol=1e-12)

    def test_huge_zeta1_collapses_to_global_centering(self):
        rng = np.random.default_rng(6)
        cache = rbf_cache(rng.standard_normal((6, 2)))
        Ky = response_kernel(rng.standard_normal(6))
        zeta = 0.01
        M, N = sdr_matrices_response_kernel(cache, Ky, zeta, 1e12)
        np.testing.assert_allclose(M, N + 6 * zeta * cache.K, atol=1e-8)

    def test_matches_directly_assembled_expression(self):
        rng = np.random.default_rng(7)
        cache = rbf_cache(rng.standard_normal((8, 2)))
        n = 8
        y = rng.standard_normal(n)
        Ky = response_kernel(y)
        zeta, zeta1 = 0.02, 0.05
        M, N = sdr_matrices_response_kernel(cache, Ky, zeta, zeta1)
        G = oracles.centering(n)
        Kbar = G @ Ky @ G
        T = G - np.linalg.inv(Kbar + n * zeta1 * np.eye(n)) @ Kbar
        raw = cache.K @ T @ cache.K + n * zeta * cache.K
        np.testing.assert_allclose(M, 0.5 * (raw + raw.T), atol=1e-10)
        np.testing.assert_allclose(M, M.T, atol=1e-12)
        np.testing.assert_allclose(N, cache.K @ G @ cache.K, atol=1e-12)

    def test_rejects_bad_inputs(self):
        rng = np.random.default_rng(8)
        cache = rbf_cache(rng.standard_normal((5, 2)))
        with pytest.raises(DimensionError):
            sdr_matrices_response_kernel(cache, np.zeros((4, 4)), 0.1, 0.1)
        with pytest.raises(DomainError):
            sdr_matrices_response_kernel(cache, np.zeros((5, 5)), 0.1, 0.0)


class TestEstimateBasis:
    def test_diagonal_case_picks_largest_ratio_direction(self):
        N = np.diag([4.0, 2.0, 1.0])
        M = np.diag([2.0, 2.0, 1.0])
        basis = estimate_basis(M, N, 1)
        w = basis.W[:, 0] / np.linalg.norm(basis.W[:, 0])
        np.testing.assert_allclose(np.abs(w), [1.0, 0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(basis.tau, [0.5], atol=1e-12)

    def test_tau_can_go_negative_when_ratio_below_one(self):
        N = np.diag([3.0, 1.0])
        M = N + np.eye(2)
        basis = estimate_basis(M, N, 2)
        np.testing.assert_allclose(basis.tau, [1 - 4 / 3, 1 - 2 / 1], atol=1e-12)

    def test_basis_is_m_orthonormal(self):
        rng = np.random.default_rng(9)
        M = oracles.random_spd(rng, 6)
        N = oracles.random_spd(rng, 6)
        basis = estimate_basis(M, N, 3)
        np.testing.assert_allclose(basis.W.T @ M @ basis.W, np.eye(3), atol=1e-9)

    def test_beats_random_search_on_objective(self):
        rng = np.random.default_rng(10)
        X = rng.standard_normal((8, 2))
        y = rng.standard_normal(8)
        cache = rbf_cache(X)
        M, N = sdr_matrices_sliced(cache, make_slices(y, 3), default_zeta(cache))
        basis = estimate_basis(M, N, 2)
        best_random = oracles.det_quotient_random_search(M, N, 2, 1000, rng)
        assert oracles.det_quotient(basis.W, M, N) <= best_random + 1e-9

    def test_objective_equals_sum_of_log_ratios_at_optimum(self):
        rng = np.random.default_rng(11)
        X = rng.standard_normal((10, 2))
        y = rng.standard_normal(10)
        cache = rbf_cache(X)
        M, N = sdr_matrices_sliced(cache, make_slices(y, 4), default_zeta(cache))
        basis = estimate_basis(M, N, 3)
        g = sdr_loglik(basis.W, M, N)
        expect = -0.5 * cache.n * float(np.sum(np.log(1.0 - basis.tau)))
        np.testing.assert_allclose(g, expect, rtol=1e-8)

    def test_rank_error_reports_detected_rank(self):
        N = np.diag([3.0, 1.0, 0.0])
        M = N + np.eye(3)
        with pytest.raises(RankError) as info:
            estimate_basis(M, N, 3)
        assert info.value.detected_rank == 2

    def test_singular_m_raises_with_regularization_hint(self):
        N = np.eye(2)
        M = np.diag([1.0, 0.0])
        with pytest.raises(SingularityError):
            estimate_basis(M, N, 1)

    def test_dependent_columns_rejected_by_basis_container(self):
        W = np.ones((4, 2))
        with pytest.raises(RankError):
            SdrBasis(W=W, tau=np.array([0.5, 0.4]))


class TestSdrLoglik:
    def test_zero_when_matrices_coincide(self):
        rng = np.random.default_rng(12)
        M = oracles.random_spd(rng, 5)
        W = rng.standard_normal((5, 2))
        assert abs(sdr_loglik(W, M, M)) <= 1e-9

    def test_two_by_two_hand_determinants(self):
        M = np.array([[4.0, 1.0], [1.0, 3.0]])
        N = np.array([[2.0, 1.0], [1.0, 2.0]])
        e1 = np.array([[1.0], [0.0]])
        assert math.isclose(sdr_loglik(e1, M, N), -math.log(2.0), rel_tol=1e-12)
        full = np.eye(2)
        assert math.isclose(sdr_loglik(full, M, N), -math.log(11.0 / 3.0), rel_tol=1e-12)

    def test_invariant_under_right_multiplication(self):
        rng = np.random.default_rng(13)
        M = oracles.random_spd(rng, 7)
        N = oracles.random_spd(rng, 7)
        W = rng.standard_normal((7, 3))
        R = rng.standard_normal((3, 3)) + 3 * np.eye(3)
        a, b = sdr_loglik(W, M, N), sdr_loglik(W @ R, M, N)
        assert abs(a - b) <= 1e-8 * (1 + abs(a))

    def test_singular_projection_raises(self):
        with pytest.raises(SingularityError):
            sdr_loglik(np.array([[1.0], [0.0]]), np.diag([0.0, 1.0]), np.eye(2))


class TestClassicalEquivalences:
    def test_contains_inverse_regression_directions(self):
        # Coefficient directions only matter modulo K^{-1} 1, whose scores
        # are constant, so containment is measured after augmenting the
        # estimated span with that direction.
        rng = np.random.default_rng(14)
        X, y = clustered_data(rng, [(0, 0), (4, 0), (0, 4)], per=8, std=0.6)
        cache = rbf_cache(X, lengthscale=0.5)
        between, total = feature_scatter_matrices(cache.K, y)
        taus, B = oracles.sir_directions(between, total, tol=1e-6)
        assert B.shape[1] == 2
        np.testing.assert_allclose(taus, [1.0, 1.0], atol=1e-9)
        zeta = 1e-10 * np.trace(cache.K) / 24
        M, N = sdr_matrices_sliced(cache, make_slices(y, 3), zeta)
        W = estimate_basis(M, N, 2).W
        span = np.column_stack([W, np.linalg.solve(cache.K, np.ones(24))])
        P = span @ np.linalg.solve(span.T @ span, span.T)
        for j in range(B.shape[1]):
            b = B[:, j] / np.linalg.norm(B[:, j])
            assert np.linalg.norm(b - P @ b) <= 1e-6

    def test_binary_direction_maximizes_fisher_quotient(self):
        rng = np.random.default_rng(15)
        X, y = clustered_data(rng, [(-1.5, 0), (1.5, 0)], per=8, std=0.5)
        y = 2 * y - 1
        cache = rbf_cache(X, lengthscale=1.5)
        between, total = feature_scatter_matrices(cache.K, y)
        M, N = sdr_matrices_sliced(cache, make_slices(y, 2), 1e-8 * np.trace(cache.K) / 16)
        w = estimate_basis(M, N, 1).W[:, 0]
        ours = oracles.fisher_quotient(w, between, total)
        for _ in range(1000):
            v = rng.standard_normal(16)
            assert ours >= oracles.fisher_quotient(v, between, total) - 1e-9

    def test_objective_non_decreasing_while_ratios_exceed_one(self):
        rng = np.random.default_rng(16)
        X, y = clustered_data(rng, [(0, 0), (4, 0), (0, 4)], per=8, std=0.4)
        cache = rbf_cache(X, lengthscale=1.5)
        M, N = sdr_matrices_sliced(cache, make_slices(y, 3), default_zeta(cache))
        values = []
        for m in (1, 2):
            basis = estimate_basis(M, N, m)
            assert np.all(basis.tau > 0)
            values.append(sdr_loglik(basis.W, M, N))
        assert values[1] >= values[0] - 1e-9


class TestRankBound:
    def test_reference_value(self):
        assert abs(rank_bound(100, 0.05) - 0.004568) <= 1e-6
        assert math.isclose(
            rank_bound(100, 0.05), oracles.rank_bound_direct(100, 0.05), rel_tol=1e-15
        )

    def test_below_reciprocal_n_everywhere(self):
        for n in (1, 2, 5, 10, 100, 1000):
            for delta in (0.01, 0.05, 0.5, 0.99):
                assert rank_bound(n, delta) < 1.0 / n

    def test_single_point_formula(self):
        delta = 0.05
        expect = 1.0 - math.sqrt(8.0 * math.log(2.0 / delta))
        assert math.isclose(rank_bound(1, delta), expect, rel_tol=1e-15)

    def test_domain_validation(self):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(DomainError):
                rank_bound(100, bad)
        with pytest.raises(DomainError):
            rank_bound(0, 0.05)

    def test_suggest_rank_counts_values_above_bound(self):
        assert suggest_rank([0.5, 0.3, 0.001], 100, 0.05) == 2


class TestFitSdr:
    def test_sliced_defaults(self):
        rng = np.random.default_rng(17)
        X = rng.standard_normal((30, 3))
        y = rng.standard_normal(30)
        cache = rbf_cache(X)
        basis = fit_sdr(cache, y, 2)
        assert basis.method == "sliced"
        assert basis.W.shape == (30, 2)
        assert len(basis.slice_sizes) == 10
        assert math.isclose(basis.zeta, 1e-4 * np.trace(cache.K) / 30, rel_tol=1e-12)
        assert basis.tau.shape == (2,)

    def test_default_slice_count_rules(self):
        assert default_slices(2, 100) == 10
        assert default_slices(12, 100) == 14
        assert default_slices(2, 6) == 6
        assert default_slices(2, 100, n_classes=4) == 4

    def test_response_kernel_route(self):
        rng = np.random.default_rng(18)
        X = rng.standard_normal((20, 2))
        y = np.sin(X[:, 0])
        basis = fit_sdr(rbf_cache(X), y, 2, method="response_kernel")
        assert basis.method == "response_kernel"
        assert basis.slice_sizes is None
        assert basis.W.shape == (20, 2)

    def test_class_count_sets_slices(self):
        rng = np.random.default_rng(19)
        X, y = clustered_data(rng, [(-2, 0), (2, 0)], per=10, std=0.5)
        basis = fit_sdr(rbf_cache(X), y, 1, n_classes=2)
        assert basis.slice_sizes is not None and len(basis.slice_sizes) == 2

    def test_agrees_with_bare_estimator_when_gram_is_well_conditioned(self):
        # fit_sdr goes through the square-root-of-K parameterization; on a
        # well-conditioned Gram matrix it must match estimate_basis applied
        # to the assembled (M, N) pair: same taus, same column span.
        rng = np.random.default_rng(21)
        X = rng.standard_normal((15, 2))
        y = rng.standard_normal(15)
        cache = rbf_cache(X, lengthscale=0.7)
        zeta, m = 0.05, 2
        plan = make_slices(y, 3)
        M, N = sdr_matrices_sliced(cache, plan, zeta)
        direct = estimate_basis(M, N, m)
        routed = fit_sdr(cache, y, m, slices=3, zeta=zeta)
        assert np.allclose(routed.tau, direct.tau, atol=1e-9)
        q_direct = np.linalg.qr(direct.W)[0]
        q_routed = np.linalg.qr(routed.W)[0]
        gap = np.linalg.norm(q_direct @ q_direct.T - q_routed @ q_routed.T, 2)
        assert gap <= 1e-6

    def test_length_mismatch_and_unknown_method(self):
        rng = np.random.default_rng(20)
        cache = rbf_cache(rng.standard_normal((5, 2)))
        with pytest.raises(DimensionError):
            fit_sdr(cache, np.zeros(4), 1)
        with pytest.raises(DomainError):
            fit_sdr(cache, np.zeros(5), 1, method="mystery")
