"""Observables, system-pointer couplings, instruments and c<->q channels."""

from .observables import Observable, functional_calculus, outcome_distribution, pom_from_observable
from .coupling import CompositeAlgebra, CouplingDynamics, canonical_coupling
from .instruments import Instrument, instrument, measurement_scheme_check, posterior_state, pom_from_instrument
from .channels import StateFamily, cq_channel, reachability_check, repeatable_family_check, qc_channel_compare

__all__ = [
    'Observable', 'functional_calculus', 'outcome_distribution', 'pom_from_observable',
    'CompositeAlgebra', 'CouplingDynamics', 'canonical_coupling',
    'Instrument', 'instrument', 'measurement_scheme_check', 'posterior_state', 'pom_from_instrument',
    'StateFamily', 'cq_channel', 'reachability_check', 'repeatable_family_check', 'qc_channel_compare',
]
