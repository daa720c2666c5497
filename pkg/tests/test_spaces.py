import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudohyp.indefinite import gram_schmidt
from pseudohyp.spaces import (
    BaseCurvatureModel,
    BaseKind,
    ComplexPseudoHyperbolicSpace,
    ConfigurationError,
    DomainError,
    PseudoHyperbolicSpace,
    UnsupportedDirectionError,
    cayley_plane_model,
    cayley_structures,
    complex_hyperbolic_model,
    polarize_quartic,
    quaternionic_hyperbolic_model,
    real_hyperbolic_model,
)

seeds = st.integers(0, 2**32 - 1)


def orthonormal_pair(n, rng):
    Q, _ = np.linalg.qr(rng.normal(size=(n, 2)))
    return Q[:, 0], Q[:, 1]


class TestPseudoHyperbolicSpace:
    def test_ambient_signature(self):
        amb = PseudoHyperbolicSpace(7, 3).ambient
        assert (amb.dim, amb.index) == (8, 4)

    def test_contains_e0_but_not_twice(self):
        H = PseudoHyperbolicSpace(4, 1)
        e0 = np.eye(5)[0]
        assert H.contains(e0)
        assert not H.contains(2 * e0)

    def test_samples_on_quadric(self):
        H = PseudoHyperbolicSpace(6, 2)
        rng = np.random.default_rng(0)
        pts = [H.sample_point(rng) for _ in range(10_000)]
        assert all(H.contains(p) for p in pts)
        signs = np.sign(np.array(pts))
        assert (signs > 0).any(axis=0).all() and (signs < 0).any(axis=0).all()

    def test_sampling_deterministic(self):
        H = PseudoHyperbolicSpace(5, 1)
        np.testing.assert_array_equal(H.sample_point(42), H.sample_point(42))

    def test_scaled_quadric(self):
        H = PseudoHyperbolicSpace(8, 0, -0.25)
        p = H.sample_point(3)
        assert abs(H.ambient.inner(p, p) + 0.25) < 1e-12

    def test_tangent_basis_at_e0(self):
        H = PseudoHyperbolicSpace(3, 0)
        basis, signs = H.tangent_basis(np.eye(4)[0])
        np.testing.assert_array_equal(np.abs(basis).sum(axis=0), [0, 1, 1, 1])
        np.testing.assert_array_equal(signs, [1, 1, 1])

    def test_tangent_index_on_h15_7(self):
        H = PseudoHyperbolicSpace(15, 7)
        rng = np.random.default_rng(1)
        for _ in range(100):
            p = H.sample_point(rng)
            basis, signs = H.tangent_basis(p)
            assert int((signs < 0).sum()) == 7
            assert np.abs(basis @ H.ambient.gram @ p).max() < 1e-10

    def test_geodesic_endpoints(self, rng):
        H = PseudoHyperbolicSpace(4, 1)
        p = H.sample_point(rng)
        basis, signs = H.tangent_basis(p)
        timelike, spacelike = basis[0], basis[-1]
        np.testing.assert_allclose(H.geodesic(p, spacelike, 0.0), p)
        np.testing.assert_allclose(H.geodesic(p, timelike, 2 * math.pi), p, atol=1e-12)
        q = H.geodesic(p, spacelike, 1.0)
        assert abs(H.ambient.inner(q, q) + 1) < 1e-12 * max(1, np.abs(q).max() ** 2)

    def test_geodesic_null_direction(self):
        H = PseudoHyperbolicSpace(2, 1)
        p = np.array([1.0, 0.0, 0.0])
        with pytest.raises(UnsupportedDirectionError):
            H.geodesic(p, np.array([0.0, 1.0, 1.0]), 1.0)

    def test_constant_curvature_minus_one(self, rng):
        H = PseudoHyperbolicSpace(5, 2)
        p = H.sample_point(rng)
        basis, signs = H.tangent_basis(p)
        X, Y = basis[-1], basis[-2]
        assert H.curvature(X, Y, X, Y, p) == pytest.approx(-1.0, abs=1e-12)
        assert H.curvature(X, X, X, X, p) == 0.0
        for i in range(5):
            for j in range(i + 1, 5):
                assert H.sectional_curvature(basis[i], basis[j]) == pytest.approx(-1.0, abs=1e-12)

    def test_non_tangent_argument(self):
        H = PseudoHyperbolicSpace(2, 0)
        p = np.eye(3)[0]
        with pytest.raises(DomainError):
            H.curvature(p, np.eye(3)[1], np.eye(3)[1], np.eye(3)[2], p)

    @given(seeds)
    def test_curvature_symmetries(self, seed):
        r = np.random.default_rng(seed)
        H = PseudoHyperbolicSpace(5, 2)
        X, Y, Z, W = r.normal(size=(4, 6))
        R = H.curvature
        v = R(X, Y, Z, W)
        scale = 1 + abs(v)
        assert abs(v + R(Y, X, Z, W)) < 1e-10 * scale
        assert abs(v + R(X, Y, W, Z)) < 1e-10 * scale
        assert abs(v - R(Z, W, X, Y)) < 1e-10 * scale
        assert abs(v + R(Y, Z, X, W) + R(Z, X, Y, W)) < 1e-10 * scale


class TestComplexPseudoHyperbolicSpace:
    def test_tangent_orthogonal_to_z_and_iz(self, rng):
        C = ComplexPseudoHyperbolicSpace(3, 1)
        z = C.sample_point(rng)
        basis, signs = C.tangent_basis(z)
        assert basis.shape == (6, 8)
        assert int((signs < 0).sum()) == 2
        assert all(C.is_tangent(z, b) for b in basis)

    def test_holomorphic_curvature_minus_four(self, rng):
        C = ComplexPseudoHyperbolicSpace(2, 0)
        z = C.sample_point(rng)
        basis, _ = C.tangent_basis(z)
        U = basis[0]
        V = C.complex_structure @ U
        assert C.quartic(U, V) == pytest.approx(-4.0, abs=1e-12)
        assert C.curvature(U, V, U, V, z) == pytest.approx(-4.0, abs=1e-12)

    @given(seeds)
    def test_tensor_matches_quartic_by_polarization(self, seed):
        r = np.random.default_rng(seed)
        C = ComplexPseudoHyperbolicSpace(2, 1)
        X, Y, Z, W = r.normal(size=(4, 6))
        full = C.curvature(X, Y, Z, W)
        assert abs(full - polarize_quartic(C.quartic, X, Y, Z, W)) < 1e-9 * (1 + abs(full))

    @given(seeds)
    def test_curvature_symmetries(self, seed):
        r = np.random.default_rng(seed)
        C = ComplexPseudoHyperbolicSpace(2, 1)
        X, Y, Z, W = r.normal(size=(4, 6))
        R = C.curvature
        v = R(X, Y, Z, W)
        scale = 1 + abs(v)
        assert abs(v + R(Y, X, Z, W)) < 1e-10 * scale
        assert abs(v - R(Z, W, X, Y)) < 1e-10 * scale
        assert abs(v + R(Y, Z, X, W) + R(Z, X, Y, W)) < 1e-10 * scale


ALL_BASES = [
    ("real", real_hyperbolic_model(8), 1),
    ("complex", complex_hyperbolic_model(3), 2 * 3 - 1),
    ("quaternionic", quaternionic_hyperbolic_model(2), 4 * 2 - 3),
    ("cayley", cayley_plane_model(), 16 - 7),
]


class TestBaseModels:
    @pytest.mark.parametrize("name,model,_", ALL_BASES)
    def test_structures_valid(self, name, model, _):
        assert model.structure_residual() < 1e-10

    @pytest.mark.parametrize("name,model,_", ALL_BASES)
    def test_pinching(self, name, model, _):
        rng = np.random.default_rng(7)
        for _ in range(200):
            X, Y = orthonormal_pair(model.dim, rng)
            K = model.sectional(X, Y)
            assert -4 - 1e-12 <= K <= -1 + 1e-12

    @pytest.mark.parametrize("name,model,expected", ALL_BASES)
    def test_l_dimension(self, name, model, expected):
        rng = np.random.default_rng(11)
        for _ in range(10):
            X = rng.normal(size=model.dim)
            X /= np.linalg.norm(X)
            assert model.l_dimension(X) == expected

    def test_quaternionic_kernel_example(self):
        model = quaternionic_hyperbolic_model(2)
        X = np.eye(8)[0]
        assert model.l_dimension(X) == 5

    @pytest.mark.parametrize("name,model,_", ALL_BASES[1:])
    def test_complex_direction_gives_minus_four(self, name, model, _):
        X = np.eye(model.dim)[0]
        assert model.quartic(X, model.structures[0] @ X) == pytest.approx(-4.0)

    @pytest.mark.parametrize("name,model,_", ALL_BASES[1:])
    def test_direction_orthogonal_to_structures_gives_minus_one(self, name, model, _):
        X = np.eye(model.dim)[0]
        span = np.array([X] + [S @ X for S in model.structures])
        Y = np.linalg.svd(span)[2][-1]
        assert model.sectional(X, Y) == pytest.approx(-1.0)

    @pytest.mark.parametrize("name,model,_", ALL_BASES)
    def test_same_vector_gives_zero(self, name, model, _):
        X = np.ones(model.dim)
        assert model.quartic(X, X) == pytest.approx(0.0, abs=1e-12)

    def test_wrong_structure_count(self):
        with pytest.raises(ConfigurationError):
            BaseCurvatureModel(BaseKind.QUATERNIONIC_HYPERBOLIC, 4, (np.eye(4),))

    def test_tensor_polarizes_quartic(self, rng):
        model = quaternionic_hyperbolic_model(1)
        X, Y = orthonormal_pair(4, rng)
        assert model.tensor(X, Y, X, Y) == pytest.approx(model.quartic(X, Y))


class TestCayleyStructures:
    def test_squares_and_anticommutes(self):
        S = cayley_structures()
        assert len(S) == 7
        assert np.abs(S[0] @ S[0] + np.eye(16)).max() < 1e-14
        for a in range(7):
            assert np.abs(S[a] @ S[a].T - np.eye(16)).max() < 1e-14
            for b in range(a + 1, 7):
                assert np.abs(S[a] @ S[b] + S[b] @ S[a]).max() < 1e-12

    def test_orbit_of_unit_vector_independent(self, rng):
        X = rng.normal(size=16)
        X /= np.linalg.norm(X)
        vs = np.array([X] + [S @ X for S in cayley_structures()])
        assert np.linalg.det(vs @ vs.T) > 0.9

    def test_orthonormal_orbit_frame(self, rng):
        X = rng.normal(size=16)
        vs = np.array([X] + [S @ X for S in cayley_structures()])
        basis, signs = gram_schmidt(vs, np.eye(16))
        assert (signs > 0).all()
