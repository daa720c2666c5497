import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudohyp.clifford import (
    INEQUIVALENT,
    MAX_GENERATORS,
    CliffordAction,
    CliffordRelationError,
    CliffordSignature,
    SignatureRangeError,
    StructuralError,
    action_from_submersion,
    classify,
    decompose,
    existence_obstruction,
    find_intertwiner,
    irreducible_dimension,
    volume_action,
)
from pseudohyp.division import left_mult_operator, unit
from pseudohyp.spaces import ConfigurationError
from pseudohyp.submersions import ComplexHopf, OctonionicHopf, QuaternionicHopf, ThetaCircle


def quaternion_action(sign=1):
    """Cl_{0,3} on R^4 by left multiplication; volume element acts as -sign."""
    gens = [left_mult_operator(unit(4, a)) for a in (1, 2, 3)]
    gens[2] = sign * gens[2]
    return CliffordAction(tuple(gens))


def random_orthogonal(n, rng):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return Q


class TestClassify:
    @pytest.mark.parametrize("p,q,text", [
        (1, 8, "M(16,R) ⊕ M(16,R)"),
        (0, 7, "M(8,R) ⊕ M(8,R)"),
        (0, 3, "H ⊕ H"),
        (0, 0, "R"),
        (0, 1, "C"),
        (0, 2, "H"),
        (2, 0, "M(2,R)"),
    ])
    def test_known_algebras(self, p, q, text):
        assert str(classify(CliffordSignature(p, q))) == text

    @pytest.mark.parametrize("p,q", [(p, q) for p in range(13) for q in range(13) if p + q <= 12])
    def test_dimension_identity(self, p, q):
        cls = classify(CliffordSignature(p, q))
        assert cls.real_dim == 2 ** (p + q)

    @pytest.mark.parametrize("p,q", [(-1, 0), (13, 0), (6, 7)])
    def test_out_of_range(self, p, q):
        with pytest.raises(SignatureRangeError):
            CliffordSignature(p, q)

    def test_range_error_is_configuration_error(self):
        assert issubclass(SignatureRangeError, ConfigurationError)

    @pytest.mark.parametrize("q,d", [(1, 2), (3, 4), (7, 8), (0, 1), (8, 16)])
    def test_irreducible_dimension(self, q, d):
        assert irreducible_dimension(CliffordSignature(0, q)) == d

    def test_irreducible_dimension_needs_p_zero(self):
        with pytest.raises(SignatureRangeError):
            irreducible_dimension(CliffordSignature(1, 2))

    def test_max_generators(self):
        assert MAX_GENERATORS == 12


class TestCliffordAction:
    def test_rejects_non_skew(self):
        with pytest.raises(CliffordRelationError):
            CliffordAction((np.eye(2),))

    def test_rejects_commuting_generators(self):
        J = left_mult_operator(unit(2, 1))
        with pytest.raises(CliffordRelationError):
            CliffordAction((J, J))

    def test_rejects_empty(self):
        with pytest.raises(StructuralError):
            CliffordAction(())

    @pytest.mark.parametrize("model,s,n", [(QuaternionicHopf(2), 3, 8), (OctonionicHopf(), 7, 8),
                                           (ComplexHopf(2), 1, 4)], ids=["H", "O", "C"])
    def test_from_submersion(self, model, s, n, rng):
        a = action_from_submersion(model, model.sample_point(rng))
        assert (a.s, a.n) == (s, n)
        for g in a.generators:
            assert np.abs(g.T @ g - np.eye(n)).max() < 1e-9

    def test_indefinite_base_rejected(self, rng):
        m = ThetaCircle(2, 1)
        with pytest.raises(ConfigurationError):
            action_from_submersion(m, m.sample_point(rng))

    def test_products_associate(self, rng):
        a = action_from_submersion(OctonionicHopf(), OctonionicHopf().sample_point(rng))
        g = a.generators
        x = rng.normal(size=8)
        # e1 e2 e1 = e2 e1 e1 * (-1) = e2 in the abstract algebra
        assert np.abs(g[0] @ (g[1] @ (g[0] @ x)) - g[1] @ x).max() < 1e-8


class TestVolume:
    def test_quaternionic_plus_identity(self, rng):
        m = QuaternionicHopf(2)
        a = action_from_submersion(m, m.sample_point(rng))
        assert volume_action(a).sign == "+Id"
        assert volume_action(a.with_negated(2)).sign == "-Id"

    def test_mixed_sum_is_other(self):
        a = CliffordAction.direct_sum(quaternion_action(1), quaternion_action(-1))
        res = volume_action(a)
        assert res.sign == "other"
        assert (res.plus_dim, res.minus_dim) == (4, 4)

    def test_conjugation_invariant(self, rng):
        a = quaternion_action()
        Q = random_orthogonal(4, rng)
        assert volume_action(a).sign == volume_action(a.conjugate(Q)).sign
        assert abs(volume_action(a).residual - volume_action(a.conjugate(Q)).residual) < 1e-9

    def test_even_count_unsupported(self):
        a = CliffordAction(tuple(left_mult_operator(unit(4, k)) for k in (1, 2)))
        with pytest.raises(ConfigurationError):
            volume_action(a)


class TestDecompose:
    def test_quaternionic_two_summands(self, rng):
        m = QuaternionicHopf(2)
        a = action_from_submersion(m, m.sample_point(rng))
        parts = decompose(a)
        assert [B.shape[1] for B, _ in parts] == [4, 4]
        self.assert_invariant_orthogonal(a, parts)

    def test_octonionic_simple(self, rng):
        m = OctonionicHopf()
        parts = decompose(action_from_submersion(m, m.sample_point(rng)))
        assert len(parts) == 1 and parts[0][0].shape[1] == 8

    def test_single_structure_on_r4(self, rng):
        J = left_mult_operator(unit(4, 1))
        Q = random_orthogonal(4, rng)
        a = CliffordAction((Q @ J @ Q.T,))
        parts = decompose(a)
        assert [B.shape[1] for B, _ in parts] == [2, 2]
        self.assert_invariant_orthogonal(a, parts)

    def test_indivisible_dimension_cannot_carry_an_action(self):
        # Cl_{0,2} = H has 4-dim modules; two anticommuting structures on R^2 fail
        J = left_mult_operator(unit(2, 1))
        K = np.array([[1.0, 0.0], [0.0, -1.0]]) @ J
        with pytest.raises(CliffordRelationError):
            CliffordAction((J, K))

    @staticmethod
    def assert_invariant_orthogonal(action, parts):
        B = np.hstack([b for b, _ in parts])
        assert np.abs(B.T @ B - np.eye(action.n)).max() < 1e-8
        for b, _ in parts:
            P = b @ b.T
            for g in action.generators:
                assert np.abs(P @ g @ b - g @ b).max() < 1e-8


class TestIntertwiner:
    def test_identity_accepted(self):
        a = quaternion_action()
        L = find_intertwiner(a, a)
        assert np.abs(L @ L.T - np.eye(4)).max() < 1e-8

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=15)
    def test_conjugated_pair_recovered(self, seed):
        r = np.random.default_rng(seed)
        m = QuaternionicHopf(2)
        a = action_from_submersion(m, m.sample_point(r))
        b = a.conjugate(random_orthogonal(8, r))
        L = find_intertwiner(a, b, seed=r)
        for A, B in zip(a.generators, b.generators):
            assert np.abs(L @ A - B @ L).max() < 1e-8
        assert np.abs(L.T @ L - np.eye(8)).max() < 1e-8

    def test_opposite_volume_inequivalent(self):
        assert find_intertwiner(quaternion_action(1), quaternion_action(-1)) == INEQUIVALENT

    def test_shape_mismatch(self):
        a = quaternion_action()
        b = CliffordAction.direct_sum(a, a)
        with pytest.raises(ConfigurationError):
            find_intertwiner(a, b)

    def test_maps_summands_to_summands(self, rng):
        a = CliffordAction.direct_sum(quaternion_action(1), quaternion_action(-1))
        b = a.conjugate(random_orthogonal(8, rng))
        L = find_intertwiner(a, b)
        for (B1, s1) in decompose(a):
            image = L @ B1
            targets = [B2 for B2, s2 in decompose(b) if s2 == s1]
            P = sum(B2 @ B2.T for B2 in targets)
            assert np.abs(P @ image - image).max() < 1e-8


def expected_admissible(s, n, base, total):
    if total == "real":
        return ((s == 1 and ((base == "complex" and n % 2 == 0) or (base == "real" and n == 2)))
                or (s == 3 and ((base == "quaternionic" and n % 4 == 0) or (base == "real" and n == 4)))
                or (s == 7 and base == "real" and n == 8))
    return s == 2 and ((base == "quaternionic" and n % 4 == 0) or (base == "real" and n == 4))


class TestObstruction:
    @pytest.mark.parametrize("total,base", list(itertools.product(
        ["real", "complex"], ["real", "complex", "quaternionic", "cayley"])))
    def test_verdict_table(self, total, base):
        for s in range(1, 10):
            for n in range(1, 33):
                v = existence_obstruction(s, n, base, total)
                assert v.admissible == expected_admissible(s, n, base, total), (s, n, base, total)

    def test_cayley_contradiction(self):
        v = existence_obstruction(7, 16, "cayley")
        assert not v.admissible and "we get a contradiction" in v.reason

    def test_complex_fibres_over_real_base(self):
        v = existence_obstruction(6, 8, "real", "complex")
        assert not v.admissible and "homomorphism is impossible to exist" in v.reason

    @pytest.mark.parametrize("s", [2, 4, 5, 6, 8])
    def test_adams(self, s):
        v = existence_obstruction(s, 8, "any")
        assert not v.admissible and "Adams" in v.reason

    def test_any_base_admits_quaternionic_target(self):
        assert existence_obstruction(3, 8, "any").admissible

    def test_unknown_base(self):
        with pytest.raises(ConfigurationError):
            existence_obstruction(3, 8, "octonionic")

    def test_nonpositive_dimensions(self):
        assert not existence_obstruction(0, 8, "real").admissible
