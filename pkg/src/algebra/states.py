"""States as density matrices, and central decompositions."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..core.config import log, tolerance
from ..core.errors import StateError
from .star_algebra import MatrixStarAlgebra, centre


class StateFunctional:
    """omega(a) = Tr(density a) for a positive unit-trace density."""

    def __init__(self, density, algebra: Optional[MatrixStarAlgebra] = None,
                 tol: Optional[float] = None, label: str = "omega"):
        rho = np.array(density, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise StateError(f"State {label}: density must be square, got shape {rho.shape}")
        tol = tolerance('state', tol)
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > tol * 10:
            raise StateError(f"State {label}: density is not Hermitian (residual {herm:.3e})")
        rho = (rho + rho.conj().T) / 2
        trace = float(np.trace(rho).real)
        if abs(trace - 1.0) > tol:
            raise StateError(f"State {label}: trace {trace:.12g} is not 1", details={"trace": trace})
        min_eig = float(np.min(np.linalg.eigvalsh(rho)))
        if min_eig < -tol:
            raise StateError(f"State {label}: density has negative eigenvalue {min_eig:.3e}",
                             details={"min_eigenvalue": min_eig})
        if algebra is not None and algebra.ambient_dim != rho.shape[0]:
            raise StateError(f"State {label} on C^{rho.shape[0]} does not fit algebra {algebra.name}")
        rho.setflags(write=False)
        self.density = rho
        self.algebra = algebra
        self.label = label

    @property
    def dim(self) -> int:
        return int(self.density.shape[0])

    def __call__(self, a) -> complex:
        return complex(np.trace(self.density @ np.asarray(a)))

    def expectations(self, elements: np.ndarray) -> np.ndarray:
        """omega on a stack of elements."""
        return np.einsum('ij,kji->k', self.density, np.asarray(elements))

    def on(self, algebra: MatrixStarAlgebra) -> "StateFunctional":
        return StateFunctional(self.density, algebra=algebra, label=self.label)

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(float(np.trace(self.density @ self.density).real) - 1.0) <= tol

    @classmethod
    def from_vector(cls, psi, algebra: Optional[MatrixStarAlgebra] = None, label: str = "omega") -> "StateFunctional":
        psi = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise StateError(f"State {label}: zero vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), algebra=algebra, label=label)

    @classmethod
    def maximally_mixed(cls, n: int, algebra: Optional[MatrixStarAlgebra] = None) -> "StateFunctional":
        return cls(np.eye(n) / n, algebra=algebra, label="mixed")

    def __repr__(self) -> str:
        return f"StateFunctional({self.label}, dim={self.dim})"


@dataclass(frozen=True)
class CentralDecomposition:
    projections: np.ndarray
    weights: np.ndarray
    components: List[StateFunctional]
    support: List[int]                     # indices of projections with positive weight
    omitted: List[int] = field(default_factory=list)
    reconstruction_residual: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "weights": self.weights,
            "support": list(self.support),
            "omitted": list(self.omitted),
            "reconstruction_residual": self.reconstruction_residual,
        }


def central_decompose_state(omega: StateFunctional, A: MatrixStarAlgebra,
                            tol: Optional[float] = None) -> CentralDecomposition:
    """omega = sum_i w_i omega_i over the minimal central projections z_i of A.

    w_i = omega(z_i), omega_i(a) = omega(z_i a z_i) / w_i. Zero-weight
    components are omitted and recorded.
    """
    tol = tolerance('state', tol)
    if omega.dim != A.ambient_dim:
        raise StateError(f"State on C^{omega.dim} does not fit algebra {A.name} on C^{A.ambient_dim}")
    projections = centre(A).projections
    rho = omega.density
    weights = np.array([np.trace(rho @ z).real for z in projections])
    components, support, omitted = [], [], []
    for i, z in enumerate(projections):
        if weights[i] <= tol:
            omitted.append(i)
            continue
        components.append(StateFunctional(z @ rho @ z / weights[i], algebra=A, label=f"{omega.label}_{i}"))
        support.append(i)
    if omitted:
        log(f"⚠️  Central decomposition on {A.name}: {len(omitted)} zero-weight component(s) omitted")

    direct = omega.expectations(A.basis)
    mixed = sum(weights[i] * c.expectations(A.basis) for i, c in zip(support, components))
    residual = float(np.max(np.abs(direct - mixed))) if A.dim else 0.0
    return CentralDecomposition(projections, weights, components, support, omitted, residual)
