"""Instruments induced by a coupling, scheme checks and posterior states."""

from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from ..algebra.states import StateFunctional
from ..core.errors import InstrumentError
from .coupling import CouplingDynamics
from .observables import GeneralizedObservable, Observable, indicator, outcome_distribution


def _pointer_measure(mu0, m: int, tol: float = 1e-10) -> np.ndarray:
    if mu0 is None:
        mu = np.zeros(m)
        mu[0] = 1.0
        return mu
    mu = np.asarray(mu0, dtype=float).ravel()
    if mu.size != m:
        raise InstrumentError(f"Pointer measure has {mu.size} weights, expected {m}")
    if np.any(mu < -tol) or abs(mu.sum() - 1.0) > tol:
        raise InstrumentError("Pointer measure is not a probability weight",
                              details={"weights": mu.tolist(), "sum": float(mu.sum())})
    return mu


class Instrument:
    """I(B-hat) = sum_a mu0(a) tau-hat(B-hat)(a) and J(Delta|omega)(B) = omega(I(B (x) chi_Delta))."""

    def __init__(self, observable: Observable, dynamics: CouplingDynamics, mu0=None):
        comp = dynamics.composite
        if comp.n != observable.n or comp.m != observable.m:
            raise InstrumentError(f"Dynamics on C^{comp.n} (x) C^{comp.m} does not fit observable "
                                  f"with n={observable.n}, m={observable.m}")
        self.observable = observable
        self.dynamics = dynamics
        self.mu0 = _pointer_measure(mu0, observable.m)

    @property
    def composite(self):
        return self.dynamics.composite

    def I(self, blocks) -> np.ndarray:  # noqa: E743
        evolved = self.dynamics.heisenberg(blocks)
        return np.tensordot(self.mu0, evolved, axes=1)

    def J(self, delta: Iterable[int], omega: StateFunctional, B: Optional[np.ndarray] = None) -> complex:
        B = np.eye(self.observable.n) if B is None else np.asarray(B, dtype=complex)
        chi = indicator(self.observable, delta)
        return omega(self.I(self.composite.tensor(B, chi)))

    def probability(self, delta: Iterable[int], omega: StateFunctional) -> float:
        return float(self.J(delta, omega).real)

    def evolved_density(self, omega: StateFunctional) -> np.ndarray:
        """(omega (x) mu0) o tau-hat as a composite density."""
        return self.dynamics.schrodinger(self.composite.product_density(omega.density, self.mu0))

    def operation(self, delta: Iterable[int], omega: StateFunctional) -> np.ndarray:
        """Unnormalized posterior density: Tr(operation B) = J(Delta|omega)(B)."""
        blocks = self.composite.pinch(self.evolved_density(omega))
        chi = indicator(self.observable, delta)
        return np.tensordot(chi, blocks, axes=1)

    def effects(self) -> np.ndarray:
        comp = self.composite
        eye = np.eye(comp.m)
        return np.array([self.I(comp.tensor(np.eye(comp.n), eye[a])) for a in range(comp.m)])


def instrument(A: Observable, dynamics: CouplingDynamics, mu0=None) -> Instrument:
    return Instrument(A, dynamics, mu0)


def pom_from_instrument(instr: Instrument) -> GeneralizedObservable:
    effects = instr.effects()
    return GeneralizedObservable((effects + effects.conj().transpose(0, 2, 1)) / 2,
                                 outcomes=instr.observable.spectrum.tolist())


@dataclass(frozen=True)
class SchemeCheck:
    passed: bool
    residual: float
    factorization_residual: float

    def to_dict(self) -> Dict:
        return {"passed": self.passed, "residual": self.residual,
                "factorization_residual": self.factorization_residual}


def measurement_scheme_check(A: Observable, dynamics: CouplingDynamics, mu0=None,
                             tol: float = 1e-10) -> SchemeCheck:
    """omega(E_a) = (omega (x) mu0)(tau-hat(1 (x) chi_a)) for every matrix unit omega and outcome a.

    Evaluating against all matrix units compares E_a with I(1 (x) chi_a)
    entrywise. The factorization residual runs the same comparison through
    the Schrodinger picture.
    """
    instr = Instrument(A, dynamics, mu0)
    comp = instr.composite
    residual = float(np.max(np.abs(instr.effects() - A.projections)))

    factorization = 0.0
    for i in range(A.n):
        for j in range(A.n):
            unit = np.zeros((A.n, A.n), dtype=complex)
            unit[i, j] = 1.0
            evolved = dynamics.schrodinger(comp.product_density(unit, instr.mu0))
            pointer = np.einsum('aii->a', comp.pinch(evolved))
            expected = A.projections[:, j, i]
            factorization = max(factorization, float(np.max(np.abs(pointer - expected))))
    return SchemeCheck(residual <= tol and factorization <= tol, residual, factorization)


def posterior_state(instr: Instrument, omega: StateFunctional, a: int, tol: float = 1e-12) -> StateFunctional:
    """J({a}|omega)(.) / J({a}|omega)(1)."""
    unnormalized = instr.operation([a], omega)
    p = float(np.trace(unnormalized).real)
    if p <= tol:
        raise InstrumentError(f"Outcome {a} has probability {p:.3e} in state {omega.label}",
                              details={"outcome": int(a), "probability": p})
    return StateFunctional(unnormalized / p, label=f"{omega.label}|{a}")


def repeat_probability(instr: Instrument, omega: StateFunctional, a: int) -> float:
    """Probability of a on the posterior after a."""
    post = posterior_state(instr, omega, a)
    return float(outcome_distribution(instr.observable, post)[a])
