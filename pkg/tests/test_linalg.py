import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from sigp.errors import DimensionError, DomainError, SingularityError
from sigp.linalg import (
    det_quotient_argmin,
    gen_eig_top,
    matrix_power,
    sym_eig,
    woodbury_inverse,
)


class TestSymEig:
    def test_identity(self):
        eig = sym_eig(np.eye(3))
        np.testing.assert_allclose(eig.values, np.ones(3))

    def test_diagonal(self):
        eig = sym_eig(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(eig.values, [3.0, 1.0])
        np.testing.assert_allclose(np.abs(eig.vectors), np.eye(2), atol=1e-14)
        # sign convention: dominant entry positive
        assert eig.vectors[0, 0] > 0 and eig.vectors[1, 1] > 0

    def test_reconstruction_random(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((5, 5))
        A = A + A.T
        eig = sym_eig(A)
        R = (eig.vectors * eig.values) @ eig.vectors.T
        assert np.linalg.norm(A - R) <= 1e-10 * np.linalg.norm(A)

    def test_descending_and_orthonormal(self):
        rng = np.random.default_rng(1)
        A = oracles.random_spd(rng, 7)
        eig = sym_eig(A)
        assert np.all(np.diff(eig.values) <= 1e-12)
        gram = eig.vectors.T @ eig.vectors
        assert np.linalg.norm(gram - np.eye(7)) <= 1e-10

    def test_sign_fix_deterministic(self):
        rng = np.random.default_rng(2)
        A = oracles.random_spd(rng, 6)
        e1, e2 = sym_eig(A), sym_eig(A.copy())
        np.testing.assert_array_equal(e1.vectors, e2.vectors)
        for j in range(6):
            i = np.argmax(np.abs(e1.vectors[:, j]))
            assert e1.vectors[i, j] > 0

    def test_rejects_nonsquare(self):
        with pytest.raises(DimensionError):
            sym_eig(np.ones((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(DimensionError):
            sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))

    @settings(deadline=None, max_examples=25)
    @given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=10_000))
    def test_reconstruction_property(self, n, seed):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((n, n))
        A = 0.5 * (A + A.T)
        eig = sym_eig(A)
        R = (eig.vectors * eig.values) @ eig.vectors.T
        assert np.linalg.norm(A - R) <= 1e-10 * max(np.linalg.norm(A), 1e-12)


class TestMatrixPower:
    def test_p1_identity_map(self):
        rng = np.random.default_rng(3)
        A = oracles.random_spd(rng, 4)
        np.testing.assert_allclose(matrix_power(A, 1.0), A, atol=1e-12)

    def test_identity_sqrt(self):
        np.testing.assert_allclose(matrix_power(np.eye(3), 0.5), np.eye(3), atol=1e-14)

    def test_diagonal_sqrt(self):
        np.testing.assert_allclose(
            matrix_power(np.diag([4.0, 1.0]), 0.5), np.diag([2.0, 1.0]), atol=1e-12
        )

    def test_p_out_of_range(self):
        for p in (0.25, 1.5, -1.0):
            with pytest.raises(DomainError):
                matrix_power(np.eye(2), p)

    def test_rejects_indefinite(self):
        with pytest.raises(DomainError):
            matrix_power(np.diag([1.0, -0.5]), 0.5)

    def test_clamps_tiny_negative(self):
        A = np.diag([1.0, -1e-12])
        R = matrix_power(A, 0.5)
        assert R[1, 1] == 0.0

    @settings(deadline=None, max_examples=25)
    @given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10_000))
    def test_sqrt_squares_back(self, n, seed):
        rng = np.random.default_rng(seed)
        A = oracles.random_spd(rng, n)
        R = matrix_power(A, 0.5)
        assert np.linalg.norm(R @ R - A) <= 1e-8 * max(np.linalg.norm(A), 1e-12)


class TestGenEigTop:
    def test_diagonal_case(self):
        basis = gen_eig_top(np.diag([2.0, 1.0]), np.eye(2), 1)
        np.testing.assert_allclose(basis.values, [2.0])
        w = basis.vectors[:, 0]
        assert abs(w[0]) > 1e3 * abs(w[1])

    def test_b_equals_a(self):
        rng = np.random.default_rng(4)
        A = oracles.random_spd(rng, 5)
        basis = gen_eig_top(A, A, 3)
        np.testing.assert_allclose(basis.values, np.ones(3), atol=1e-10)

    def test_residual_random(self):
        rng = np.random.default_rng(5)
        B = oracles.random_spd(rng, 6)
        A = oracles.random_spd(rng, 6)
        basis = gen_eig_top(B, A, 3)
        scale = np.linalg.norm(B) + np.linalg.norm(A)
        for i in range(3):
            w = basis.vectors[:, i]
            res = np.linalg.norm(B @ w - basis.values[i] * (A @ w))
            assert res <= 1e-8 * scale

    def test_a_orthonormal(self):
        rng = np.random.default_rng(6)
        B, A = oracles.random_spd(rng, 6), oracles.random_spd(rng, 6)
        basis = gen_eig_top(B, A, 4)
        G = basis.vectors.T @ A @ basis.vectors
        np.testing.assert_allclose(G, np.eye(4), atol=1e-9)

    def test_full_rank_matches_whitened_spectrum(self):
        rng = np.random.default_rng(7)
        B, A = oracles.random_spd(rng, 6), oracles.random_spd(rng, 6)
        basis = gen_eig_top(B, A, 6)
        eigA = np.linalg.eigh(A)
        Ais = (eigA.eigenvectors / np.sqrt(eigA.eigenvalues)) @ eigA.eigenvectors.T
        ref = np.linalg.eigvalsh(Ais @ B @ Ais)[::-1]
        np.testing.assert_allclose(basis.values, ref, atol=1e-8)

    def test_not_pd_raises(self):
        with pytest.raises(SingularityError):
            gen_eig_top(np.eye(2), np.diag([1.0, 0.0]), 1)

    def test_bad_m(self):
        with pytest.raises(DomainError):
            gen_eig_top(np.eye(2), np.eye(2), 3)


class TestDetQuotientArgmin:
    def test_diagonal_case(self):
        S = det_quotient_argmin(np.eye(2), np.diag([3.0, 1.0]), 1)
        w = S[:, 0]
        assert abs(w[0]) > 1e3 * abs(w[1])
        assert abs(oracles.det_quotient(S, np.eye(2), np.diag([3.0, 1.0])) - 1.0 / 3.0) < 1e-12

    def test_n_equals_m_objective_one(self):
        rng = np.random.default_rng(8)
        N = oracles.random_spd(rng, 4)
        S = det_quotient_argmin(N, N, 2)
        assert abs(oracles.det_quotient(S, N, N) - 1.0) < 1e-10

    def test_beats_random_search(self):
        rng = np.random.default_rng(9)
        M, N = oracles.random_spd(rng, 5), oracles.random_spd(rng, 5)
        S = det_quotient_argmin(M, N, 2)
        ours = oracles.det_quotient(S, M, N)
        best_random = oracles.det_quotient_random_search(M, N, 2, 1000, rng)
        assert ours <= best_random + 1e-9

    def test_objective_invariant_under_right_mult(self):
        rng = np.random.default_rng(10)
        M, N = oracles.random_spd(rng, 5), oracles.random_spd(rng, 5)
        S = det_quotient_argmin(M, N, 2)
        R = rng.standard_normal((2, 2)) + 2 * np.eye(2)
        v1 = oracles.det_quotient(S, M, N)
        v2 = oracles.det_quotient(S @ R, M, N)
        assert abs(v1 - v2) <= 1e-10 * abs(v1)

    def test_singular_m_raises(self):
        with pytest.raises(SingularityError):
            det_quotient_argmin(np.diag([1.0, 0.0]), np.eye(2), 1)


class TestWoodburyInverse:
    def test_zero_pi(self):
        op = woodbury_inverse(2.0, np.zeros((4, 2)), np.eye(2))
        v = np.arange(4.0)
        np.testing.assert_allclose(op.matvec(v), v / 2.0, atol=1e-14)

    def test_matches_dense_inverse(self):
        rng = np.random.default_rng(11)
        Pi = rng.standard_normal((20, 2))
        Sb = oracles.random_spd(rng, 2)
        op = woodbury_inverse(0.3, Pi, Sb)
        Vinv = oracles.dense_woodbury_target(0.3, Pi, Sb)
        v = rng.standard_normal(20)
        got, want = op.matvec(v), Vinv @ v
        assert np.linalg.norm(got - want) <= 1e-8 * np.linalg.norm(want)
        np.testing.assert_allclose(op.dense(), Vinv, atol=1e-8)

    def test_full_rank_identity_case(self):
        n = 5
        op = woodbury_inverse(0.5, np.eye(n), np.eye(n))
        np.testing.assert_allclose(op.dense(), np.eye(n) / 1.5, atol=1e-12)

    def test_composes_to_identity(self):
        rng = np.random.default_rng(12)
        for n in (10, 30, 50):
            Pi = rng.standard_normal((n, 3))
            Sb = oracles.random_spd(rng, 3)
            s2 = 0.1 + rng.random()
            V = Pi @ Sb @ Pi.T + s2 * np.eye(n)
            op = woodbury_inverse(s2, Pi, Sb)
            np.testing.assert_allclose(op.matmat(V), np.eye(n), atol=1e-8)

    def test_trace_and_logdet(self):
        rng = np.random.default_rng(13)
        Pi = rng.standard_normal((12, 2))
        Sb = oracles.random_spd(rng, 2)
        s2 = 0.7
        V = Pi @ Sb @ Pi.T + s2 * np.eye(12)
        op = woodbury_inverse(s2, Pi, Sb)
        assert abs(op.trace() - np.trace(np.linalg.inv(V))) < 1e-8
        sign, logdet = np.linalg.slogdet(V)
        assert sign > 0 and abs(op.logdet_v() - logdet) < 1e-8

    def test_nonpositive_sigma2(self):
        with pytest.raises(DomainError):
            woodbury_inverse(0.0, np.zeros((3, 1)), np.eye(1))

    def test_non_pd_sigma_beta(self):
        with pytest.raises(SingularityError):
            woodbury_inverse(1.0, np.ones((3, 2)), np.diag([1.0, 0.0]))
