"""Central decomposition on the composite algebra, c<->q channels, preparation and repeatability."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..algebra.states import StateFunctional
from ..core.config import log, tolerance
from ..core.errors import ChannelError
from ..core.linalg import trace_norm
from .coupling import CompositeAlgebra, CouplingDynamics
from .observables import Observable


class StateFamily:
    """Outcome-indexed states (omega_a)."""

    def __init__(self, states: Sequence[StateFunctional]):
        states = list(states)
        if not states:
            raise ChannelError("State family is empty")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise ChannelError(f"State family mixes dimensions {sorted(dims)}")
        self.states = states

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, a: int) -> StateFunctional:
        return self.states[a]

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def densities(self) -> np.ndarray:
        return np.array([s.density for s in self.states])

    @classmethod
    def eigenstates(cls, A: Observable) -> "StateFamily":
        """E_a / Tr E_a for each outcome."""
        return cls([StateFunctional(E / np.trace(E).real, label=f"E{a}") for a, E in enumerate(A.projections)])

    @classmethod
    def maximally_mixed(cls, A: Observable) -> "StateFamily":
        return cls([StateFunctional.maximally_mixed(A.n) for _ in range(A.m)])


@dataclass(frozen=True)
class CompositeDecomposition:
    mu: np.ndarray
    components: Dict[int, StateFunctional]
    omitted: List[int] = field(default_factory=list)
    reconstruction_residual: float = 0.0


def central_decompose_composite(composite: CompositeAlgebra, density: np.ndarray,
                                tol: Optional[float] = None) -> CompositeDecomposition:
    """omega-hat = sum_a mu(a) omega_a (x) delta_a along the pointer-diagonal centre."""
    tol = tolerance('state', tol)
    blocks = composite.pinch(density)
    mu = np.einsum('aii->a', blocks).real
    components, omitted = {}, []
    for a in range(composite.m):
        if mu[a] > tol:
            components[a] = StateFunctional(blocks[a] / mu[a], label=f"omega_{a}")
        else:
            omitted.append(a)
    rebuilt = np.zeros_like(blocks)
    for a, state in components.items():
        rebuilt[a] = mu[a] * state.density
    residual = float(np.max(np.abs(rebuilt - blocks)))
    return CompositeDecomposition(mu, components, omitted, residual)


class CQChannel:
    """C(B-hat)(a) = omega_a(B-hat(a)); C*(rho) = sum_a rho(a) omega_a (x) delta_a."""

    def __init__(self, A: Observable, family: StateFamily):
        if len(family) != A.m:
            raise ChannelError(f"State family has {len(family)} states, observable has {A.m} outcomes",
                               details={"states": len(family), "outcomes": A.m})
        if family.dim != A.n:
            raise ChannelError(f"State family on C^{family.dim} does not fit observable on C^{A.n}")
        self.observable = A
        self.family = family
        self.composite = CompositeAlgebra.for_observable(A)

    def apply(self, blocks) -> np.ndarray:
        blocks = np.asarray(blocks, dtype=complex)
        return np.einsum('aij,aji->a', self.family.densities, blocks)

    def dual(self, rho) -> np.ndarray:
        """Composite density of C*(rho)."""
        rho = np.asarray(rho, dtype=float).ravel()
        if rho.size != self.observable.m:
            raise ChannelError(f"Expected {self.observable.m} weights, got {rho.size}")
        return self.composite.embed(rho[:, None, None] * self.family.densities)

    def system_state(self, rho) -> np.ndarray:
        """(iota* o C*)(rho) = sum_a rho(a) omega_a."""
        return np.tensordot(np.asarray(rho, dtype=float), self.family.densities, axes=1)


def cq_channel(A: Observable, family: StateFamily) -> CQChannel:
    return CQChannel(A, family)


@dataclass(frozen=True)
class ReachabilityResult:
    distances: List[float]
    pointer_trajectory: List[np.ndarray]
    reached: bool
    tol: float

    def to_dict(self) -> Dict:
        return {"distances": list(self.distances), "pointer_trajectory": list(self.pointer_trajectory),
                "reached": self.reached, "tolerance": self.tol}


def reachability_check(target: StateFunctional, initial: StateFunctional, mu0,
                       dynamics: Sequence[CouplingDynamics], family: StateFamily,
                       tol: Optional[float] = None) -> ReachabilityResult:
    """Distance from target to sum_a mu_t(a) omega_a along a dynamics sequence.

    mu_t is the pointer marginal of (initial (x) mu0) o tau-hat_t; the
    target counts as prepared iff the last distance is below tolerance.
    """
    tol = tolerance('reach', tol)
    if not dynamics:
        raise ChannelError("Reachability needs at least one dynamics step")
    composite = dynamics[0].composite
    if composite.observable is None:
        raise ChannelError("Dynamics must be built on an observable's composite algebra")
    channel = CQChannel(composite.observable, family)
    start = composite.product_density(initial.density, mu0)
    distances, trajectory = [], []
    for tau in dynamics:
        decomposition = central_decompose_composite(composite, tau.schrodinger(start))
        prepared = channel.system_state(decomposition.mu)
        distances.append(trace_norm(prepared - target.density))
        trajectory.append(decomposition.mu)
    reached = distances[-1] < tol
    if not reached:
        log(f"⚠️  Target {target.label} not reached: final distance {distances[-1]:.3e}")
    return ReachabilityResult(distances, trajectory, reached, tol)


@dataclass(frozen=True)
class RepeatabilityResult:
    matrix: np.ndarray             # R[a, b] = omega_a(E_b)
    per_outcome: List[bool]
    residual: float

    @property
    def passed(self) -> bool:
        return all(self.per_outcome)

    def to_dict(self) -> Dict:
        return {"passed": self.passed, "per_outcome": list(self.per_outcome),
                "residual": self.residual, "matrix": self.matrix}


def repeatable_family_check(A: Observable, family: StateFamily, tol: float = 1e-10) -> RepeatabilityResult:
    """omega_a(E_b) = delta_ab."""
    channel = CQChannel(A, family)
    R = np.einsum('aij,bji->ab', channel.family.densities, A.projections).real
    deviation = np.abs(R - np.eye(A.m))
    per_outcome = [bool(np.max(deviation[a]) <= tol) for a in range(A.m)]
    return RepeatabilityResult(R, per_outcome, float(deviation.max()))


def qc_channel_compare(A: Observable, family: StateFamily) -> float:
    """max |(iota o A)*(C*(delta_b))(a) - delta_ab| over the image of C*."""
    channel = CQChannel(A, family)
    worst = 0.0
    for b in range(A.m):
        weights = np.zeros(A.m)
        weights[b] = 1.0
        prepared = StateFunctional(channel.system_state(weights))
        readout = prepared.expectations(A.projections).real
        worst = max(worst, float(np.max(np.abs(readout - weights))))
    return worst
