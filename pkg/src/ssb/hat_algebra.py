"""The equivariant algebra F-hat and the induced representation on H-hat.

F-hat consists of maps F: G -> F with F(hg) = tau_h(F(g)). Such a map is
fixed by its values on right-coset representatives x_c of H\\G, so F-hat
is realized block-diagonally on C^k (x) C^n, block c holding F(x_c). G acts
by right translation (g.F)(x) = F(xg).

H-hat consists of psi: G -> C^n with psi(gh) = V(h)^-1 psi(g), fixed by its
values on left-coset representatives y_c of G/H.
"""

from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Optional

import numpy as np

from ..algebra.actions import GroupAction
from ..algebra.star_algebra import MatrixStarAlgebra, direct_sum_algebra
from ..core.config import RUN_DEFAULTS, log, tolerance
from ..core.errors import AlgebraError, EquivarianceError
from ..groups.characters import UnitaryRep
from ..groups.induction import CosetSpace
from .field_system import FieldSystem


@dataclass(frozen=True)
class EquivariantAlgebra:
    base: FieldSystem
    cosets: CosetSpace               # right cosets H x_c
    algebra: MatrixStarAlgebra       # block-diagonal realization on C^(k n)
    action: GroupAction              # right translation

    @property
    def k(self) -> int:
        return len(self.cosets)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def blocks(self, element: np.ndarray) -> np.ndarray:
        """Values F(x_c) on the representatives, shape (k, n, n)."""
        n = self.base.n
        element = np.asarray(element)
        return np.array([element[c * n:(c + 1) * n, c * n:(c + 1) * n] for c in range(self.k)])

    def from_blocks(self, blocks) -> np.ndarray:
        n = self.base.n
        out = np.zeros((self.k * n, self.k * n), dtype=complex)
        for c, b in enumerate(blocks):
            out[c * n:(c + 1) * n, c * n:(c + 1) * n] = b
        return out

    def evaluate(self, element: np.ndarray, g: int) -> np.ndarray:
        """F(g) for g = h x_c, i.e. tau_h(F(x_c))."""
        G = self.base.G
        c = int(self.cosets.coset_of[g])
        h = G.mul(g, G.inv(self.cosets.representatives[c]))
        n = self.base.n
        V = self.base.V.matrices[h]
        return V @ element[c * n:(c + 1) * n, c * n:(c + 1) * n] @ V.conj().T

    def as_function(self, element: np.ndarray) -> np.ndarray:
        """All values F(g), shape (|G|, n, n)."""
        return np.array([self.evaluate(element, g) for g in range(self.base.G.order)])

    def equivariance_residual(self, element: np.ndarray) -> float:
        """max |F(hg) - tau_h(F(g))| over H x G."""
        G, V = self.base.G, self.base.V.matrices
        values = self.as_function(element)
        worst = 0.0
        for h in self.base.H.members:
            moved = V[h] @ values @ V[h].conj().T
            worst = max(worst, float(np.max(np.abs(values[G.mult_table[h]] - moved))))
        return worst

    def embed(self, a: np.ndarray) -> np.ndarray:
        """The constant map x -> a, for a in A_d; lands in F-hat^G."""
        return self.from_blocks([a] * self.k)

    def coset_projections(self) -> np.ndarray:
        """Block identities E_c, the minimal central projections of F-hat."""
        n = self.base.n
        return np.array([self.from_blocks([np.eye(n) if c == d else np.zeros((n, n)) for d in range(self.k)])
                         for c in range(self.k)])

    def __repr__(self) -> str:
        return f"EquivariantAlgebra({self.base.G.name}/{self.base.H.label}, dim={self.dim})"


def _translation_unitaries(fs: FieldSystem, cosets: CosetSpace) -> np.ndarray:
    """W(g) with block (c, c') = V(h') where x_c g = h' x_c'."""
    G, n, k = fs.G, fs.n, len(cosets)
    reps = cosets.representatives
    W = np.zeros((G.order, k * n, k * n), dtype=complex)
    for g in range(G.order):
        for c in range(k):
            target = cosets.act(g, c)
            h = G.mul(G.mul(reps[c], g), G.inv(reps[target]))
            W[g, c * n:(c + 1) * n, target * n:(target + 1) * n] = fs.V.matrices[h]
    return W


def build_hat_algebra(fs: FieldSystem) -> EquivariantAlgebra:
    cosets = fs.right_cosets
    algebra = direct_sum_algebra([fs.F] * len(cosets), name="F^")
    rep = UnitaryRep(fs.G, _translation_unitaries(fs, cosets), label="right-translation")
    log(f"✅ Hat algebra over {len(cosets)} coset(s): dim {algebra.dim}")
    return EquivariantAlgebra(fs, cosets, algebra, GroupAction(rep))


class InducedSpace:
    """H-hat realized on left-coset representatives: C^(k n), block c = psi(y_c)."""

    def __init__(self, fs: FieldSystem):
        self.base = fs
        self.cosets = fs.left_cosets
        self.k = len(self.cosets)
        self.dim = self.k * fs.n

    def _split(self, g: int):
        """g = y_c h, returns (c, h)."""
        G = self.base.G
        c = int(self.cosets.coset_of[g])
        return c, G.mul(G.inv(self.cosets.representatives[c]), g)

    def extend(self, vector: np.ndarray) -> np.ndarray:
        """psi(g) for every g, shape (|G|, n); psi(y_c h) = V(h)* psi(y_c)."""
        n = self.base.n
        vector = np.asarray(vector, dtype=complex).reshape(self.k, n)
        V = self.base.V.matrices
        values = np.empty((self.base.G.order, n), dtype=complex)
        for g in range(self.base.G.order):
            c, h = self._split(g)
            values[g] = V[h].conj().T @ vector[c]
        return values

    def section(self, values: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
        """Coset vector of a full function psi: G -> C^n, checking psi(gh) = V(h)* psi(g)."""
        tol = tolerance('rep', tol)
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.base.G.order, self.base.n):
            raise EquivarianceError(f"Expected values of shape {(self.base.G.order, self.base.n)}, got {values.shape}")
        V = self.base.V.matrices
        for g in range(self.base.G.order):
            c, h = self._split(g)
            expected = V[h].conj().T @ values[self.cosets.representatives[c]]
            residual = float(np.max(np.abs(values[g] - expected)))
            if residual > tol * max(1.0, float(np.max(np.abs(values)))):
                raise EquivarianceError(
                    f"Vector is not H-equivariant on coset {c} (element {g}, residual {residual:.3e})",
                    coset=c, details={"element": g, "residual": residual})
        return values[list(self.cosets.representatives)].reshape(-1)

    def inner(self, phi: np.ndarray, psi: np.ndarray) -> complex:
        """Counting-measure sum over cosets."""
        return complex(np.vdot(phi, psi))


class InducedRepresentation(NamedTuple):
    space: InducedSpace
    pi_hat: Callable[[np.ndarray], np.ndarray]
    U_hat: UnitaryRep
    pi_bar: Callable[[np.ndarray], np.ndarray]


def induced_rep(fs: FieldSystem, hat: Optional[EquivariantAlgebra] = None) -> InducedRepresentation:
    """(H-hat, pi-hat, U-hat, pi-bar) on left-coset blocks.

    (pi-hat(F)psi)(g) = F(g^-1) psi(g), (U-hat(g)psi)(g1) = psi(g^-1 g1),
    (pi-bar(F)psi)(g) = tau_{g^-1}(F) psi(g).
    """
    hat = hat or build_hat_algebra(fs)
    space = InducedSpace(fs)
    G, n, k = fs.G, fs.n, space.k
    V = fs.V.matrices
    reps = space.cosets.representatives

    U = np.zeros((G.order, k * n, k * n), dtype=complex)
    for g in range(G.order):
        for c in range(k):
            c2, h = space._split(G.mul(G.inv(g), reps[c]))
            U[g, c * n:(c + 1) * n, c2 * n:(c2 + 1) * n] = V[h].conj().T
    U_hat = UnitaryRep(G, U, label="U^")

    def pi_bar(F: np.ndarray) -> np.ndarray:
        F = np.asarray(F, dtype=complex)
        out = np.zeros((k * n, k * n), dtype=complex)
        for c, y in enumerate(reps):
            out[c * n:(c + 1) * n, c * n:(c + 1) * n] = V[y].conj().T @ F @ V[y]
        return out

    def pi_hat(element: np.ndarray) -> np.ndarray:
        element = np.asarray(element, dtype=complex)
        if element.shape != (hat.k * n, hat.k * n):
            raise AlgebraError(f"Hat-algebra element must have shape {(hat.k * n,) * 2}, got {element.shape}")
        out = np.zeros((k * n, k * n), dtype=complex)
        for c, y in enumerate(reps):
            out[c * n:(c + 1) * n, c * n:(c + 1) * n] = hat.evaluate(element, G.inv(y))
        return out

    return InducedRepresentation(space, pi_hat, U_hat, pi_bar)


def compatibility_residual(ind: InducedRepresentation, hat: EquivariantAlgebra,
                           element: np.ndarray, vector: np.ndarray) -> float:
    """Coset-realized pi-hat against the pointwise formula F(g^-1) psi(g) on all of G."""
    space = ind.space
    G = space.base.G
    full = space.extend(vector)
    pointwise = np.array([hat.evaluate(element, G.inv(g)) @ full[g] for g in range(G.order)])
    realized = space.extend(ind.pi_hat(element) @ np.asarray(vector, dtype=complex))
    return float(np.max(np.abs(pointwise - realized)))


def covariance_residuals(ind: InducedRepresentation, hat: EquivariantAlgebra,
                         samples: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, float]:
    """Seeded checks of the covariant pair and of the crossed-product relations.

    covariance:     pi-bar(tau_g F) = U(g) pi-bar(F) U(g)*
    translation:    U(g) pi-hat(F^) U(g)* = pi-hat(g.F^)
    unitary_rep:    U(g) U(g') = U(gg')
    compatibility:  pi-hat agrees with the pointwise formula on equivariant vectors
    """
    fs = ind.space.base
    samples = samples or RUN_DEFAULTS['covariance_samples']
    rng = np.random.default_rng(RUN_DEFAULTS['seed'] if seed is None else seed)
    U = ind.U_hat.matrices
    V = fs.V.matrices
    cov = trans = compat = 0.0
    for i in range(samples):
        F = fs.F.random_element(rng)
        for g in range(fs.G.order):
            lhs = ind.pi_bar(V[g] @ F @ V[g].conj().T)
            rhs = U[g] @ ind.pi_bar(F) @ U[g].conj().T
            cov = max(cov, float(np.max(np.abs(lhs - rhs))))
        if i < 8:
            element = hat.algebra.random_element(rng)
            vector = rng.normal(size=ind.space.dim) + 1j * rng.normal(size=ind.space.dim)
            compat = max(compat, compatibility_residual(ind, hat, element, vector))
            for g in range(fs.G.order):
                moved = hat.action.apply(g, element)
                lhs = U[g] @ ind.pi_hat(element) @ U[g].conj().T
                trans = max(trans, float(np.max(np.abs(lhs - ind.pi_hat(moved)))))
    return {
        "covariance": cov,
        "translation": trans,
        "unitary_rep": ind.U_hat.homomorphism_residual(),
        "compatibility": compat,
    }
