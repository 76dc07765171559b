"""Observables with discrete spectrum, functional calculus and POMs."""

from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np

from ..algebra.states import StateFunctional
from ..core.config import tolerance
from ..core.errors import ObservableError
from ..core.linalg import cluster_values

OutcomeFunction = Union[Callable[[float], complex], Mapping[float, complex], Sequence[complex]]


class Observable:
    """A self-adjoint matrix with its spectral resolution.

    Eigenvalues closer than the spectral tolerance (relative) merge into one
    spectral point; spectral points are sorted ascending and
    ``projections[a]`` is the eigenprojection of ``spectrum[a]``.
    """

    def __init__(self, matrix, tol: Optional[float] = None, label: str = "A"):
        A = np.array(matrix, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ObservableError(f"Observable {label} must be a square matrix, got shape {A.shape}")
        scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
        herm = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
        if herm > 1e-10 * scale:
            raise ObservableError(f"Observable {label} is not self-adjoint (residual {herm:.3e})",
                                  details={"residual": herm})
        A = (A + A.conj().T) / 2
        evals, evecs = np.linalg.eigh(A)
        labels = cluster_values(evals, tolerance('spectral', tol))
        points, projections = [], []
        for c in range(int(labels.max()) + 1):
            vecs = evecs[:, labels == c]
            points.append(float(np.mean(evals[labels == c])))
            projections.append(vecs @ vecs.conj().T)
        order = np.argsort(points)
        self.matrix = A
        self.label = label
        self.spectrum = np.array(points)[order]
        self.projections = np.array(projections)[order]
        self.spectrum.setflags(write=False)
        self.projections.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def m(self) -> int:
        return int(self.spectrum.size)

    @property
    def multiplicities(self) -> List[int]:
        return [int(round(np.trace(E).real)) for E in self.projections]

    def is_nondegenerate(self) -> bool:
        return self.m == self.n

    def index_of(self, value: float, tol: float = 1e-6) -> int:
        distance = np.abs(self.spectrum - value)
        a = int(np.argmin(distance))
        if distance[a] > tol * max(1.0, abs(value)):
            raise ObservableError(f"{value} is not a spectral point of {self.label}",
                                  details={"spectrum": self.spectrum.tolist()})
        return a

    def outcomes_for(self, values: Iterable[float]) -> List[int]:
        return sorted({self.index_of(v) for v in values})

    def residuals(self) -> dict:
        E = self.projections
        eye = np.eye(self.n)
        products = np.einsum('aij,bjk->abik', E, E)
        expected = np.einsum('ab,aik->abik', np.eye(self.m), E)
        return {
            "resolution": float(np.max(np.abs(E.sum(axis=0) - eye))),
            "orthogonality": float(np.max(np.abs(products - expected))),
            "reconstruction": float(np.max(np.abs(np.tensordot(self.spectrum, E, axes=1) - self.matrix))),
        }

    def __repr__(self) -> str:
        return f"Observable({self.label}, n={self.n}, spectrum={np.round(self.spectrum, 9).tolist()})"


def _outcome_values(A: Observable, f: OutcomeFunction) -> np.ndarray:
    if callable(f):
        values = []
        for a in A.spectrum:
            try:
                values.append(complex(f(a)))
            except (ArithmeticError, ValueError, KeyError, TypeError) as e:
                raise ObservableError(f"Function is undefined at spectral point {a}: {e}",
                                      details={"point": float(a)}) from e
    elif isinstance(f, Mapping):
        lookup = {A.index_of(float(k)): v for k, v in f.items()}
        missing = [float(A.spectrum[a]) for a in range(A.m) if a not in lookup]
        if missing:
            raise ObservableError(f"Function is undefined at spectral points {missing}",
                                  details={"points": missing})
        values = [complex(lookup[a]) for a in range(A.m)]
    else:
        values = list(np.asarray(f, dtype=complex).ravel())
        if len(values) != A.m:
            raise ObservableError(f"Expected {A.m} outcome values, got {len(values)}")
    values = np.array(values)
    if not np.all(np.isfinite(values)):
        bad = [float(A.spectrum[i]) for i in np.flatnonzero(~np.isfinite(values))]
        raise ObservableError(f"Function is not finite at spectral points {bad}", details={"points": bad})
    return values


def functional_calculus(A: Observable, f: OutcomeFunction) -> np.ndarray:
    """f(A) = sum_a f(a) E_a."""
    return np.tensordot(_outcome_values(A, f), A.projections, axes=1)


def indicator(A: Observable, delta: Iterable[int]) -> np.ndarray:
    """chi_Delta on outcome indices."""
    chi = np.zeros(A.m)
    for a in delta:
        if not 0 <= int(a) < A.m:
            raise ObservableError(f"Outcome index {a} out of range 0..{A.m - 1}")
        chi[int(a)] = 1.0
    return chi


def outcome_distribution(A: Observable, omega: StateFunctional) -> np.ndarray:
    """p(a|omega) = omega(E_a)."""
    if omega.dim != A.n:
        raise ObservableError(f"State on C^{omega.dim} does not fit observable on C^{A.n}")
    return omega.expectations(A.projections).real


class GeneralizedObservable:
    """A POM: positive effects summing to the identity."""

    def __init__(self, effects, outcomes: Optional[Sequence] = None, tol: float = 1e-10):
        effects = np.asarray(effects, dtype=complex)
        if effects.ndim != 3 or effects.shape[1] != effects.shape[2]:
            raise ObservableError(f"Effects must have shape (k, n, n), got {effects.shape}")
        for i, e in enumerate(effects):
            if np.max(np.abs(e - e.conj().T)) > tol or np.min(np.linalg.eigvalsh((e + e.conj().T) / 2)) < -tol:
                raise ObservableError(f"Effect {i} is not positive", details={"effect": i})
        normalization = float(np.max(np.abs(effects.sum(axis=0) - np.eye(effects.shape[1]))))
        if normalization > tol:
            raise ObservableError(f"Effects do not sum to the identity (residual {normalization:.3e})",
                                  details={"residual": normalization})
        self.effects = effects
        self.outcomes = list(outcomes) if outcomes is not None else list(range(len(effects)))
        self.normalization_residual = normalization

    def distribution(self, omega: StateFunctional) -> np.ndarray:
        return omega.expectations(self.effects).real

    def is_projective(self, tol: float = 1e-10) -> bool:
        return all(np.max(np.abs(e @ e - e)) <= tol for e in self.effects)


def pom_from_observable(A: Observable) -> GeneralizedObservable:
    return GeneralizedObservable(A.projections, outcomes=A.spectrum.tolist())
