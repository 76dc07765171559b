"""The finite field system: F = M(V) with its G-action, A = F^G and A_d = F^H."""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..algebra.actions import GroupAction, conditional_expectation, conjugation_average, fixed_point_algebra
from ..algebra.star_algebra import MatrixStarAlgebra, full_matrix_algebra
from ..core.config import log, tolerance
from ..core.errors import ConsistencyError, RepresentationError, SectorError
from ..groups.characters import UnitaryRep
from ..groups.group import FiniteGroup, Subgroup
from ..groups.induction import CosetSpace, coset_space, regular_rep


@dataclass(frozen=True)
class FieldSystem:
    G: FiniteGroup
    H: Subgroup
    V: UnitaryRep
    F: MatrixStarAlgebra
    action: GroupAction
    A: MatrixStarAlgebra
    A_d: MatrixStarAlgebra
    right_cosets: CosetSpace        # H\G, the centre points of the hat algebra
    left_cosets: CosetSpace         # G/H, the fibres of the induced space
    expectation_residual: float

    @property
    def n(self) -> int:
        return self.V.dim

    @property
    def index(self) -> int:
        return self.H.index

    def m_G(self, x: np.ndarray) -> np.ndarray:
        return conditional_expectation(x, self.action)

    def m_H(self, x: np.ndarray) -> np.ndarray:
        return conditional_expectation(x, self.action, self.H)

    def m_GH(self, a: np.ndarray) -> np.ndarray:
        """Average of tau_y(a) over left-coset representatives y of G/H (a in A_d)."""
        return _coset_average(self.V, self.left_cosets, a)

    def dimensions(self) -> Dict[str, int]:
        return {"F": self.F.dim, "A": self.A.dim, "A_d": self.A_d.dim, "V": self.n}

    def __repr__(self) -> str:
        return f"FieldSystem({self.G.name}, {self.H.label}, V={self.V.label})"


def build_field_system(G: FiniteGroup, H: Subgroup, V: Optional[UnitaryRep] = None,
                       tol: Optional[float] = None) -> FieldSystem:
    """Populate F, A, A_d for H <= G acting through V (left regular by default).

    Checks A <= A_d <= F and m_G = m_{G/H} o m_H on a basis of F.
    """
    if not isinstance(H, Subgroup) or H.parent is not G:
        raise SectorError(f"{getattr(H, 'label', H)!r} is not a subgroup of {G.name}")
    V = V if V is not None else regular_rep(G)
    if V.structure is not G:
        raise RepresentationError(f"Representation {V.label} is not a representation of {G.name}")
    if not V.is_faithful():
        log(f"⚠️  Representation {V.label} of {G.name} is not faithful; SSB detection may degrade")

    state_tol = tolerance('state', None)
    action = GroupAction(V)
    F = full_matrix_algebra(V.dim, name="F")
    A = fixed_point_algebra(F, action, name="A", tol=tol)
    A_d = fixed_point_algebra(F, action, H, name="A_d", tol=tol)
    if not (A_d.contains_algebra(A, tol) and F.contains_algebra(A_d, tol)):
        raise ConsistencyError(f"Fixed-point algebras of {G.name} and {H.label} are not nested")

    left = coset_space(G, H, side="left")
    direct = conditional_expectation(F.basis, action)
    composed = _coset_average(V, left, conditional_expectation(F.basis, action, H))
    residual = float(np.max(np.abs(direct - composed)))
    if residual > state_tol:
        raise ConsistencyError(f"m_G differs from m_G/H o m_H by {residual:.3e}",
                               details={"residual": residual})

    log(f"✅ Field system {G.name} ⊇ {H.label}: dim F={F.dim}, A={A.dim}, A_d={A_d.dim}")
    return FieldSystem(G, H, V, F, action, A, A_d,
                       right_cosets=coset_space(G, H, side="right"),
                       left_cosets=left,
                       expectation_residual=residual)


def _coset_average(V: UnitaryRep, cosets: CosetSpace, a) -> np.ndarray:
    return conjugation_average(V.matrices[list(cosets.representatives)], a)
