"""Unit tests for observables, couplings, instruments and c<->q channels."""

import numpy as np
import pytest

from src.algebra.states import StateFunctional
from src.core.errors import ChannelError, CouplingError, InstrumentError, ObservableError
from src.measurement.channels import (
    CQChannel,
    cq_channel,
    StateFamily,
    central_decompose_composite,
    qc_channel_compare,
    reachability_check,
    repeatable_family_check,
)
from src.measurement.coupling import (
    CompositeAlgebra,
    CouplingDynamics,
    canonical_coupling,
    iterate_dynamics,
    shift,
)
from src.measurement.instruments import (
    Instrument,
    measurement_scheme_check,
    pom_from_instrument,
    posterior_state,
    repeat_probability,
)
from src.measurement.observables import (
    GeneralizedObservable,
    Observable,
    functional_calculus,
    indicator,
    outcome_distribution,
    pom_from_observable,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


@pytest.fixture
def sigma_z():
    return Observable(np.diag([1.0, -1.0]), label="sigma_z")


@pytest.fixture
def tilted():
    """0.6|0> + 0.8|1>: p(-1) = 0.64, p(+1) = 0.36."""
    return StateFunctional.from_vector([0.6, 0.8], label="tilted")


@pytest.fixture
def plus():
    return StateFunctional.from_vector([1, 1], label="plus")


class TestObservable:
    """Spectral resolution and functional calculus."""

    @pytest.mark.unit
    def test_spectrum_sorted_ascending(self, sigma_z):
        assert sigma_z.spectrum.tolist() == [-1.0, 1.0]
        np.testing.assert_allclose(sigma_z.projections[0], np.diag([0, 1]), atol=1e-12)
        assert sigma_z.is_nondegenerate()

    @pytest.mark.unit
    def test_degenerate_spectrum_clusters(self):
        A = Observable(np.diag([2.0, 1.0, 1.0 + 1e-12]))
        assert A.m == 2
        assert A.multiplicities == [2, 1]
        assert max(A.residuals().values()) < 1e-10

    @pytest.mark.unit
    def test_not_self_adjoint(self):
        with pytest.raises(ObservableError, match="self-adjoint"):
            Observable([[0, 1], [0, 0]])

    @pytest.mark.unit
    def test_functional_calculus_forms(self, sigma_z):
        np.testing.assert_allclose(functional_calculus(sigma_z, lambda x: x ** 2), np.eye(2), atol=1e-12)
        np.testing.assert_allclose(functional_calculus(sigma_z, {1: 5, -1: 7}), np.diag([5, 7]), atol=1e-12)
        np.testing.assert_allclose(functional_calculus(sigma_z, [0, 1]), np.diag([1, 0]), atol=1e-12)

    @pytest.mark.unit
    @pytest.mark.parametrize("f", [
        lambda x: {1.0: 2.0}[x],
        {1.0: 2.0},
        [np.inf, 1.0],
        [1.0, 2.0, 3.0],
    ])
    def test_functional_calculus_undefined(self, sigma_z, f):
        with pytest.raises(ObservableError):
            functional_calculus(sigma_z, f)

    @pytest.mark.unit
    def test_outcome_lookup(self, sigma_z):
        assert sigma_z.index_of(1.0) == 1
        assert sigma_z.outcomes_for([1, -1, 1]) == [0, 1]
        with pytest.raises(ObservableError, match="spectral point"):
            sigma_z.index_of(0.5)

    @pytest.mark.unit
    def test_indicator(self, sigma_z):
        assert indicator(sigma_z, [1]).tolist() == [0.0, 1.0]
        with pytest.raises(ObservableError, match="out of range"):
            indicator(sigma_z, [2])

    @pytest.mark.unit
    def test_distribution(self, sigma_z, tilted):
        np.testing.assert_allclose(outcome_distribution(sigma_z, tilted), [0.64, 0.36])
        with pytest.raises(ObservableError):
            outcome_distribution(sigma_z, StateFunctional.maximally_mixed(3))

    @pytest.mark.unit
    def test_pom(self, sigma_z, tilted):
        pom = pom_from_observable(sigma_z)
        assert pom.is_projective()
        assert pom.outcomes == [-1.0, 1.0]
        np.testing.assert_allclose(pom.distribution(tilted), [0.64, 0.36])

    @pytest.mark.unit
    def test_unnormalized_pom_rejected(self):
        with pytest.raises(ObservableError, match="sum to the identity"):
            GeneralizedObservable([np.eye(2) / 2])


class TestCoupling:
    """Composite algebra and coupling dynamics."""

    @pytest.mark.unit
    def test_embed_pinch_inverse(self, rng):
        comp = CompositeAlgebra(2, 3)
        blocks = rng.normal(size=(3, 2, 2)) + 0j
        np.testing.assert_allclose(comp.pinch(comp.embed(blocks)), blocks)
        assert comp.dim == 12
        assert comp.star_algebra().dim == 12

    @pytest.mark.unit
    def test_wrong_block_shape(self):
        with pytest.raises(CouplingError):
            CompositeAlgebra(2, 2).embed(np.zeros((3, 2, 2)))

    @pytest.mark.unit
    def test_product_density(self):
        comp = CompositeAlgebra(2, 2)
        rho = comp.product_density(np.eye(2) / 2, [0.25, 0.75])
        decomposition = central_decompose_composite(comp, rho)
        np.testing.assert_allclose(decomposition.mu, [0.25, 0.75])
        np.testing.assert_allclose(decomposition.components[1].density, np.eye(2) / 2)
        assert decomposition.omitted == []

    @pytest.mark.unit
    def test_shift(self):
        S = shift(3)
        np.testing.assert_allclose(S @ np.array([1, 0, 0]), [0, 1, 0])

    @pytest.mark.unit
    def test_canonical_coupling_is_unital_cp(self, sigma_z):
        tau = canonical_coupling(sigma_z)
        assert tau.unitality_residual() < 1e-12
        assert tau.cp_residual() < 1e-12

    @pytest.mark.unit
    def test_non_unital_kraus_rejected(self, sigma_z):
        comp = CompositeAlgebra.for_observable(sigma_z)
        with pytest.raises(CouplingError, match="not unital"):
            CouplingDynamics.from_kraus(comp, [2 * np.eye(4)])

    @pytest.mark.unit
    def test_non_unitary_rejected(self, sigma_z):
        comp = CompositeAlgebra.for_observable(sigma_z)
        with pytest.raises(CouplingError, match="not unitary"):
            CouplingDynamics.from_unitary(comp, np.ones((4, 4)))

    @pytest.mark.unit
    def test_iterates_and_composition(self, sigma_z):
        tau = canonical_coupling(sigma_z)
        steps = iterate_dynamics(tau, 2)
        assert [len(t.stages) for t in steps] == [0, 1, 2]
        assert len(tau.then(tau).stages) == 2
        with pytest.raises(CouplingError):
            iterate_dynamics(tau, -1)

    @pytest.mark.unit
    def test_choi_size_guard(self):
        tau = CouplingDynamics.identity(CompositeAlgebra(3, 6))
        with pytest.raises(CouplingError, match="Choi"):
            tau.choi_matrix()


class TestInstrument:
    """Instruments, scheme checks and posteriors."""

    @pytest.mark.unit
    def test_canonical_scheme_realizes_observable(self, sigma_z, tilted):
        instr = Instrument(sigma_z, canonical_coupling(sigma_z))
        assert instr.probability([1], tilted) == pytest.approx(0.36)
        assert instr.probability([0, 1], tilted) == pytest.approx(1.0)
        np.testing.assert_allclose(instr.effects(), sigma_z.projections, atol=1e-12)
        check = measurement_scheme_check(sigma_z, canonical_coupling(sigma_z))
        assert check.passed
        assert check.factorization_residual < 1e-12

    @pytest.mark.unit
    def test_identity_coupling_fails_scheme(self, sigma_z):
        comp = CompositeAlgebra.for_observable(sigma_z)
        check = measurement_scheme_check(sigma_z, CouplingDynamics.identity(comp))
        assert not check.passed
        assert check.residual == pytest.approx(1.0)

    @pytest.mark.unit
    def test_measurement_destroys_coherence(self, sigma_z, plus):
        instr = Instrument(sigma_z, canonical_coupling(sigma_z))
        assert abs(plus(SIGMA_X)) == pytest.approx(1.0)
        assert abs(instr.J([0, 1], plus, SIGMA_X)) < 1e-12

    @pytest.mark.unit
    @pytest.mark.parametrize("mu0", [[0.5, 0.6], [1.0, 0.0, 0.0], [1.5, -0.5]])
    def test_invalid_pointer_measure(self, sigma_z, mu0):
        with pytest.raises(InstrumentError):
            Instrument(sigma_z, canonical_coupling(sigma_z), mu0)

    @pytest.mark.unit
    def test_posterior_is_eigenstate(self, sigma_z, tilted):
        instr = Instrument(sigma_z, canonical_coupling(sigma_z))
        post = posterior_state(instr, tilted, 1)
        np.testing.assert_allclose(post.density, np.diag([1, 0]), atol=1e-12)
        assert repeat_probability(instr, tilted, 1) == pytest.approx(1.0)

    @pytest.mark.unit
    def test_zero_probability_posterior(self, sigma_z):
        instr = Instrument(sigma_z, canonical_coupling(sigma_z))
        with pytest.raises(InstrumentError) as exc:
            posterior_state(instr, StateFunctional.from_vector([1, 0]), 0)
        assert exc.value.details["outcome"] == 0

    @pytest.mark.unit
    def test_pom_from_instrument(self, sigma_z):
        pom = pom_from_instrument(Instrument(sigma_z, canonical_coupling(sigma_z)))
        assert pom.is_projective()


class TestChannels:
    """c->q channels, preparation and repeatability."""

    @pytest.mark.unit
    def test_family_validation(self, sigma_z):
        with pytest.raises(ChannelError):
            StateFamily([])
        with pytest.raises(ChannelError, match="mixes"):
            StateFamily([StateFunctional.maximally_mixed(2), StateFunctional.maximally_mixed(3)])
        with pytest.raises(ChannelError):
            CQChannel(sigma_z, StateFamily([StateFunctional.maximally_mixed(2)]))

    @pytest.mark.unit
    def test_channel_and_dual(self, sigma_z):
        channel = cq_channel(sigma_z, StateFamily.eigenstates(sigma_z))
        np.testing.assert_allclose(channel.system_state([0.5, 0.5]), np.eye(2) / 2)
        values = channel.apply(channel.composite.unit())
        np.testing.assert_allclose(values, [1, 1])
        assert np.trace(channel.dual([0.3, 0.7])).real == pytest.approx(1.0)

    @pytest.mark.unit
    def test_decoherence_reaches_mixed_state(self, sigma_z, plus):
        steps = iterate_dynamics(canonical_coupling(sigma_z), 1)
        result = reachability_check(StateFunctional.maximally_mixed(2), plus, [1, 0], steps,
                                    StateFamily.eigenstates(sigma_z))
        np.testing.assert_allclose(result.distances, [1.0, 0.0], atol=1e-12)
        assert result.reached
        np.testing.assert_allclose(result.pointer_trajectory[1], [0.5, 0.5])

    @pytest.mark.unit
    def test_y_eigenstate_unreachable(self, sigma_z, plus):
        target = StateFunctional.from_vector([1, 1j])
        steps = iterate_dynamics(canonical_coupling(sigma_z), 3)
        result = reachability_check(target, plus, [1, 0], steps, StateFamily.eigenstates(sigma_z))
        assert not result.reached
        assert result.distances[-1] >= 1.0 - 1e-12

    @pytest.mark.unit
    def test_reachability_needs_dynamics(self, sigma_z, plus):
        with pytest.raises(ChannelError):
            reachability_check(plus, plus, [1, 0], [], StateFamily.eigenstates(sigma_z))

    @pytest.mark.unit
    def test_repeatable_family(self, sigma_z):
        eigen = repeatable_family_check(sigma_z, StateFamily.eigenstates(sigma_z))
        assert eigen.passed
        mixed = repeatable_family_check(sigma_z, StateFamily.maximally_mixed(sigma_z))
        assert not mixed.passed
        assert mixed.residual == pytest.approx(0.5)

    @pytest.mark.unit
    def test_qc_comparison(self, sigma_z):
        assert qc_channel_compare(sigma_z, StateFamily.eigenstates(sigma_z)) < 1e-12
        assert qc_channel_compare(sigma_z, StateFamily.maximally_mixed(sigma_z)) == pytest.approx(0.5)


class TestRandomObservables:
    """Canonical schemes on seeded random observables."""

    @pytest.mark.unit
    @pytest.mark.parametrize("n", range(2, 9))
    def test_canonical_scheme_any_dimension(self, rng, n):
        X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        A = Observable(X + X.conj().T)
        assert A.is_nondegenerate()
        tau = canonical_coupling(A)
        check = measurement_scheme_check(A, tau)
        assert check.residual < 1e-12
        instr = Instrument(A, tau)
        omega = StateFunctional.from_vector(rng.normal(size=n) + 1j * rng.normal(size=n))
        np.testing.assert_allclose([instr.probability([a], omega) for a in range(A.m)],
                                   outcome_distribution(A, omega), atol=1e-12)
        for a in range(A.m):
            assert repeat_probability(instr, omega, a) == pytest.approx(1.0, abs=1e-10)
