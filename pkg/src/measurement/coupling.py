"""System-plus-pointer algebra and the coupling dynamics acting on it.

The composite space is C^n (x) C^m with index i*m + a (system i, pointer
a). Elements of the composite algebra are pointer-diagonal, stored as
blocks of shape (m, n, n) with block a the system operator B(a).
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.star_algebra import MatrixStarAlgebra
from ..core.errors import CouplingError
from .observables import Observable


class CompositeAlgebra:
    """C(Spec(A), M_n): system operators indexed by outcomes."""

    def __init__(self, n: int, m: int, observable: Optional[Observable] = None):
        if n < 1 or m < 1:
            raise CouplingError(f"Composite algebra needs positive sizes, got n={n}, m={m}")
        self.n = n
        self.m = m
        self.observable = observable

    @classmethod
    def for_observable(cls, A: Observable) -> "CompositeAlgebra":
        return cls(A.n, A.m, A)

    @property
    def dim(self) -> int:
        return self.m * self.n * self.n

    @property
    def ambient_dim(self) -> int:
        return self.n * self.m

    def embed(self, blocks) -> np.ndarray:
        """sum_a B(a) (x) |a><a|."""
        blocks = np.asarray(blocks, dtype=complex)
        if blocks.shape != (self.m, self.n, self.n):
            raise CouplingError(f"Composite element must have shape {(self.m, self.n, self.n)}, got {blocks.shape}")
        full = np.zeros((self.n, self.m, self.n, self.m), dtype=complex)
        idx = np.arange(self.m)
        full[:, idx, :, idx] = blocks
        return full.reshape(self.ambient_dim, self.ambient_dim)

    def pinch(self, X: np.ndarray) -> np.ndarray:
        """Diagonal pointer blocks of an operator on the composite space."""
        X = np.asarray(X, dtype=complex).reshape(self.n, self.m, self.n, self.m)
        return np.einsum('iaja->aij', X)

    def tensor(self, B: np.ndarray, f) -> np.ndarray:
        """B (x) f for a function f on outcomes."""
        f = np.asarray(f, dtype=complex).ravel()
        if f.size != self.m:
            raise CouplingError(f"Outcome function must have {self.m} values, got {f.size}")
        return f[:, None, None] * np.asarray(B, dtype=complex)[None]

    def unit(self) -> np.ndarray:
        return np.broadcast_to(np.eye(self.n, dtype=complex), (self.m, self.n, self.n)).copy()

    def product_density(self, rho: np.ndarray, mu) -> np.ndarray:
        """rho (x) diag(mu) on the composite space."""
        mu = np.asarray(mu, dtype=float).ravel()
        if mu.size != self.m:
            raise CouplingError(f"Pointer weights must have {self.m} entries, got {mu.size}")
        return np.kron(np.asarray(rho, dtype=complex), np.diag(mu))

    def star_algebra(self) -> MatrixStarAlgebra:
        """The composite algebra as a *-subalgebra of M_(nm), basis E_ij (x) |a><a|."""
        basis = []
        for a in range(self.m):
            for i in range(self.n):
                for j in range(self.n):
                    blocks = np.zeros((self.m, self.n, self.n), dtype=complex)
                    blocks[a, i, j] = 1.0
                    basis.append(self.embed(blocks))
        return MatrixStarAlgebra(np.array(basis), name="A_A", certify=False)


Stage = Tuple[np.ndarray, ...]


class CouplingDynamics:
    """A unital CP map tau-hat on the composite algebra.

    Each stage is a Kraus family on the composite space followed by the
    pinching onto the pointer diagonal. Stages run in time order in the
    Schrodinger picture, so the Heisenberg picture applies them in reverse.
    """

    def __init__(self, composite: CompositeAlgebra, stages: Sequence[Sequence[np.ndarray]] = (),
                 label: str = "tau", tol: float = 1e-10):
        N = composite.ambient_dim
        checked: List[Stage] = []
        for s, stage in enumerate(stages):
            kraus = tuple(np.asarray(K, dtype=complex) for K in stage)
            if not kraus:
                raise CouplingError(f"Stage {s} of {label} has no Kraus operators")
            for K in kraus:
                if K.shape != (N, N):
                    raise CouplingError(f"Kraus operator of shape {K.shape} in stage {s}, expected {(N, N)}")
            unital = float(np.max(np.abs(sum(K.conj().T @ K for K in kraus) - np.eye(N))))
            if unital > tol:
                raise CouplingError(f"Stage {s} of {label} is not unital (residual {unital:.3e})",
                                    details={"stage": s, "residual": unital})
            checked.append(kraus)
        self.composite = composite
        self.stages: Tuple[Stage, ...] = tuple(checked)
        self.label = label

    @classmethod
    def identity(cls, composite: CompositeAlgebra) -> "CouplingDynamics":
        return cls(composite, (), label="identity")

    @classmethod
    def from_unitary(cls, composite: CompositeAlgebra, U: np.ndarray, label: str = "unitary") -> "CouplingDynamics":
        U = np.asarray(U, dtype=complex)
        if U.shape != (composite.ambient_dim,) * 2:
            raise CouplingError(f"Unitary must have shape {(composite.ambient_dim,) * 2}, got {U.shape}")
        residual = float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
        if residual > 1e-10:
            raise CouplingError(f"Coupling matrix is not unitary (residual {residual:.3e})",
                                details={"residual": residual})
        return cls(composite, [(U,)], label=label)

    @classmethod
    def from_kraus(cls, composite: CompositeAlgebra, kraus: Sequence[np.ndarray], label: str = "cp") -> "CouplingDynamics":
        return cls(composite, [tuple(kraus)], label=label)

    def then(self, other: "CouplingDynamics") -> "CouplingDynamics":
        """Run self, then other."""
        if other.composite.ambient_dim != self.composite.ambient_dim:
            raise CouplingError("Cannot compose dynamics on different composite spaces")
        return CouplingDynamics(self.composite, self.stages + other.stages, label=f"{other.label}*{self.label}")

    def heisenberg(self, blocks) -> np.ndarray:
        """tau-hat(B-hat) as blocks."""
        comp = self.composite
        blocks = np.asarray(blocks, dtype=complex)
        for stage in reversed(self.stages):
            X = comp.embed(blocks)
            blocks = comp.pinch(sum(K.conj().T @ X @ K for K in stage))
        return blocks

    def schrodinger(self, density: np.ndarray) -> np.ndarray:
        """The composite density of omega-hat o tau-hat (pointer-diagonal)."""
        comp = self.composite
        rho = comp.embed(comp.pinch(density))
        for stage in self.stages:
            rho = comp.embed(comp.pinch(sum(K @ rho @ K.conj().T for K in stage)))
        return rho

    def choi_matrix(self, max_dim: int = 16) -> np.ndarray:
        """sum_ij E_ij (x) Phi(E_ij) for the Schrodinger map Phi on M_(nm)."""
        N = self.composite.ambient_dim
        if N > max_dim:
            raise CouplingError(f"Choi matrix requested for composite dimension {N} > {max_dim}")
        choi = np.zeros((N * N, N * N), dtype=complex)
        for i in range(N):
            for j in range(N):
                unit = np.zeros((N, N), dtype=complex)
                unit[i, j] = 1.0
                choi += np.kron(unit, self.schrodinger(unit))
        return choi

    def cp_residual(self) -> float:
        """max(0, -lambda_min) of the Choi matrix."""
        choi = self.choi_matrix()
        return max(0.0, -float(np.min(np.linalg.eigvalsh((choi + choi.conj().T) / 2))))

    def unitality_residual(self) -> float:
        comp = self.composite
        return float(np.max(np.abs(self.heisenberg(comp.unit()) - comp.unit())))

    def __repr__(self) -> str:
        return f"CouplingDynamics({self.label}, stages={len(self.stages)})"


def shift(m: int) -> np.ndarray:
    """S|b> = |b+1 mod m>."""
    return np.roll(np.eye(m), 1, axis=0)


def canonical_coupling(A: Observable) -> CouplingDynamics:
    """U = sum_a E_a (x) S^a, compressed to the pointer diagonal."""
    comp = CompositeAlgebra.for_observable(A)
    S = shift(A.m)
    U = sum(np.kron(E, np.linalg.matrix_power(S, a)) for a, E in enumerate(A.projections))
    return CouplingDynamics.from_unitary(comp, U, label="canonical")


def iterate_dynamics(tau: CouplingDynamics, steps: int) -> List[CouplingDynamics]:
    """[id, tau, tau^2, ..., tau^steps]."""
    if steps < 0:
        raise CouplingError(f"Number of steps must be non-negative, got {steps}")
    return [CouplingDynamics(tau.composite, tau.stages * t, label=f"{tau.label}^{t}") for t in range(steps + 1)]
