"""Unit tests for matrix *-algebras, group actions and states."""

import numpy as np
import pytest

from src.algebra.actions import (
    GroupAction,
    conditional_expectation,
    fixed_point_algebra,
    galois_stabilizer,
    isotypic_decomposition,
    restrict_action,
)
from src.algebra.star_algebra import (
    MatrixStarAlgebra,
    build_algebra,
    centre,
    commutant,
    compress,
    direct_sum_algebra,
    full_matrix_algebra,
)
from src.algebra.states import StateFunctional, central_decompose_state
from src.core.errors import AlgebraError, StateError
from src.groups.characters import irrep_by_label
from src.groups.induction import regular_rep


@pytest.fixture
def diagonal3():
    return build_algebra([np.diag([1.0, 2.0, 3.0])], name="D3")


@pytest.fixture
def regular_action(s3):
    return GroupAction(regular_rep(s3))


class TestStarAlgebra:
    """Spans, closure, commutants and centres."""

    @pytest.mark.unit
    def test_full_matrix_algebra(self):
        M = full_matrix_algebra(3)
        assert M.dim == 9
        assert centre(M).dim == 1
        np.testing.assert_allclose(centre(M).projections[0], np.eye(3), atol=1e-12)

    @pytest.mark.unit
    def test_diagonal_algebra_centre(self, diagonal3):
        assert diagonal3.dim == 3
        assert diagonal3.closure_certificate.closed
        Z = centre(diagonal3)
        assert Z.dim == 3
        np.testing.assert_allclose(Z.projections[0], np.diag([1, 0, 0]), atol=1e-9)
        np.testing.assert_allclose(Z.projections.sum(axis=0), np.eye(3), atol=1e-9)

    @pytest.mark.unit
    def test_unitizing_non_unital_generators(self):
        A = build_algebra([np.diag([1.0, 0.0])])
        assert A.dim == 2
        assert A.contains(np.eye(2))

    @pytest.mark.unit
    def test_build_algebra_requires_generators(self):
        with pytest.raises(AlgebraError):
            build_algebra([])

    @pytest.mark.unit
    def test_bad_basis_shape(self):
        with pytest.raises(AlgebraError, match="shape"):
            MatrixStarAlgebra(np.zeros((2, 3)))

    @pytest.mark.unit
    def test_commutants(self, diagonal3):
        assert commutant(full_matrix_algebra(3)).dim == 1
        assert commutant(diagonal3).same_span(diagonal3)

    @pytest.mark.unit
    def test_direct_sum_and_compress(self):
        S = direct_sum_algebra([full_matrix_algebra(1), full_matrix_algebra(2)])
        assert S.dim == 5
        assert S.ambient_dim == 3
        assert centre(S).dim == 2
        Q = np.eye(3)[:, :2]
        assert compress(full_matrix_algebra(3), Q).dim == 4

    @pytest.mark.unit
    def test_membership(self, diagonal3, rng):
        assert diagonal3.contains(diagonal3.random_element(rng))
        assert not diagonal3.contains(np.ones((3, 3)))


class TestGroupActions:
    """Fixed points, averaging and Galois data."""

    @pytest.mark.unit
    def test_fixed_points_of_regular_action(self, s3, regular_action):
        F = full_matrix_algebra(6)
        assert fixed_point_algebra(F, regular_action).dim == 6
        assert fixed_point_algebra(F, regular_action, s3.subgroup("Z3")).dim == 12

    @pytest.mark.unit
    def test_conditional_expectation_idempotent(self, s3, regular_action, rng):
        x = full_matrix_algebra(6).random_element(rng)
        H = s3.subgroup("s")
        once = conditional_expectation(x, regular_action, H)
        twice = conditional_expectation(once, regular_action, H)
        np.testing.assert_allclose(once, twice, atol=1e-12)

    @pytest.mark.unit
    def test_average_of_stack_matches_single(self, regular_action, rng):
        xs = np.array([full_matrix_algebra(6).random_element(rng) for _ in range(2)])
        stacked = regular_action.average(xs)
        np.testing.assert_allclose(stacked[1], regular_action.average(xs[1]), atol=1e-12)

    @pytest.mark.unit
    @pytest.mark.parametrize("label,fixing,stabilizing", [("Z3", 3, 6), ("s", 2, 2)])
    def test_galois_stabilizer(self, s3, regular_action, label, fixing, stabilizing):
        H = s3.subgroup(label)
        A_H = fixed_point_algebra(full_matrix_algebra(6), regular_action, H)
        data = galois_stabilizer(regular_action, A_H)
        assert data.fixing.members == H.members
        assert data.fixing.order == fixing
        assert data.stabilizing.order == stabilizing

    @pytest.mark.unit
    def test_isotypic_decomposition(self, s3):
        parts = {c.label: c.multiplicity for c in isotypic_decomposition(regular_rep(s3))}
        assert parts == {"triv": 1, "sgn": 1, "std": 2}

    @pytest.mark.unit
    def test_conditional_expectation_onto_fixed_points(self, s3, regular_action, rng):
        F = full_matrix_algebra(6)
        H = s3.subgroup("Z3")
        A_d = fixed_point_algebra(F, regular_action, H)
        np.testing.assert_allclose(conditional_expectation(np.eye(6), regular_action, H), np.eye(6), atol=1e-12)
        y = F.random_element(rng)
        x = y @ y.conj().T
        image = conditional_expectation(x, regular_action, H)
        assert A_d.contains(image)
        assert np.linalg.eigvalsh((image + image.conj().T) / 2).min() > -1e-10
        assert np.trace(image) == pytest.approx(np.trace(x), abs=1e-10)
        a, b = A_d.random_element(rng), A_d.random_element(rng)
        np.testing.assert_allclose(conditional_expectation(a @ y @ b, regular_action, H),
                                   a @ conditional_expectation(y, regular_action, H) @ b, atol=1e-10)

    @pytest.mark.unit
    @pytest.mark.parametrize("label", ["Z3", "s", "whole"])
    def test_double_commutant_of_fixed_points(self, s3, regular_action, label):
        A_K = fixed_point_algebra(full_matrix_algebra(6), regular_action, s3.subgroup(label))
        assert A_K.same_span(commutant(commutant(A_K)))

    @pytest.mark.unit
    def test_double_commutant_of_generated_algebra(self, s3, regular_action):
        A = build_algebra(regular_action.unitaries[list(s3.generators)], name="L(S3)")
        assert A.dim == 6
        assert A.same_span(commutant(commutant(A)))

    @pytest.mark.unit
    @pytest.mark.parametrize("rep", ["regular", "restricted"])
    def test_isotypic_projections_resolve_identity(self, s3, rep):
        U = regular_rep(s3)
        if rep == "restricted":
            U = restrict_action(U, s3.subgroup("Z3"))
        projections = [c.projection for c in isotypic_decomposition(U)]
        np.testing.assert_allclose(sum(projections), np.eye(6), atol=1e-12)
        for i, P in enumerate(projections):
            np.testing.assert_allclose(P, P.conj().T, atol=1e-12)
            for j, Q in enumerate(projections):
                np.testing.assert_allclose(P @ Q, P if i == j else np.zeros((6, 6)), atol=1e-12)

    @pytest.mark.unit
    def test_subgroup_rep_cannot_act(self, s3):
        with pytest.raises(AlgebraError):
            GroupAction(irrep_by_label(s3.subgroup("Z3"), "chi0"))

    @pytest.mark.unit
    def test_dimension_mismatch(self, regular_action):
        with pytest.raises(AlgebraError, match="does not match"):
            fixed_point_algebra(full_matrix_algebra(2), regular_action)


class TestStates:
    """Density validation and central decomposition."""

    @pytest.mark.unit
    @pytest.mark.parametrize("density,match", [
        ([[1, 1], [0, 0]], "Hermitian"),
        ([[1, 0], [0, 1]], "trace"),
        ([[1.5, 0], [0, -0.5]], "negative"),
        ([[1, 0, 0]], "square"),
    ])
    def test_invalid_densities(self, density, match):
        with pytest.raises(StateError, match=match):
            StateFunctional(density)

    @pytest.mark.unit
    def test_vector_state(self):
        omega = StateFunctional.from_vector([1, 1j])
        assert omega.is_pure()
        assert omega(np.diag([1, -1])) == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(omega.expectations(np.array([np.eye(2), np.diag([1, 0])])), [1, 0.5])

    @pytest.mark.unit
    def test_zero_vector_rejected(self):
        with pytest.raises(StateError, match="zero"):
            StateFunctional.from_vector([0, 0])

    @pytest.mark.unit
    def test_maximally_mixed(self):
        omega = StateFunctional.maximally_mixed(4)
        assert not omega.is_pure()
        assert omega(np.eye(4)) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_central_decomposition_of_superposition(self):
        A = build_algebra([np.diag([1.0, 2.0])])
        decomposition = central_decompose_state(StateFunctional.from_vector([1, 1]), A)
        np.testing.assert_allclose(decomposition.weights, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(decomposition.components[0].density, np.diag([1, 0]), atol=1e-9)
        assert decomposition.reconstruction_residual < 1e-10
        assert decomposition.omitted == []

    @pytest.mark.unit
    def test_central_decomposition_omits_zero_weight(self):
        A = build_algebra([np.diag([1.0, 2.0])])
        decomposition = central_decompose_state(StateFunctional(np.diag([1.0, 0.0])), A)
        assert decomposition.support == [0]
        assert decomposition.omitted == [1]
