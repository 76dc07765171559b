"""Group actions on matrix algebras: fixed points, averaging, isotypic parts, Galois data."""

from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np

from ..core.config import tolerance
from ..core.errors import AlgebraError, ConsistencyError
from ..core.linalg import span_basis
from ..groups.characters import UnitaryRep, irreps
from ..groups.group import FiniteGroup, Subgroup
from .star_algebra import MatrixStarAlgebra

GroupLike = Union[FiniteGroup, Subgroup, None]


def conjugation_average(unitaries: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """(1/|U|) sum_k U_k x U_k* for one matrix (n, n) or a stack (j, n, n)."""
    xs = np.asarray(xs, dtype=complex)
    total = np.zeros_like(xs)
    for U in unitaries:
        total += U @ xs @ U.conj().T
    return total / len(unitaries)


class GroupAction:
    """tau_g(x) = U(g) x U(g)* for a unitary representation U of G."""

    def __init__(self, rep: UnitaryRep):
        if isinstance(rep.group, Subgroup):
            raise AlgebraError("A GroupAction is defined by a representation of the full group")
        self.rep = rep
        self.group: FiniteGroup = rep.structure
        self.unitaries = rep.matrices

    @property
    def ambient_dim(self) -> int:
        return self.rep.dim

    def members(self, K: GroupLike = None) -> List[int]:
        """Parent-group indices of K (the whole group when K is None)."""
        if K is None or K is self.group:
            return list(range(self.group.order))
        if isinstance(K, Subgroup):
            if K.parent is not self.group:
                raise AlgebraError(f"{K.label} is not a subgroup of {self.group.name}")
            return list(K.members)
        raise AlgebraError(f"Cannot act with {K!r}")

    def apply(self, g: int, x: np.ndarray) -> np.ndarray:
        U = self.unitaries[g]
        return U @ x @ U.conj().T

    def apply_many(self, g: int, xs: np.ndarray) -> np.ndarray:
        U = self.unitaries[g]
        return U @ xs @ U.conj().T

    def average(self, xs: np.ndarray, K: GroupLike = None) -> np.ndarray:
        """(1/|K|) sum_k tau_k(x), for one matrix or a stack."""
        return conjugation_average(self.unitaries[self.members(K)], xs)


def fixed_point_algebra(A: MatrixStarAlgebra, act: GroupAction, K: GroupLike = None,
                        name: Optional[str] = None, tol: Optional[float] = None) -> MatrixStarAlgebra:
    """{a in A : tau_k(a) = a for k in K}, the range of the K-average on A."""
    tol = tolerance('algebra', tol)
    if act.ambient_dim != A.ambient_dim:
        raise AlgebraError(f"Action on C^{act.ambient_dim} does not match algebra on C^{A.ambient_dim}")
    averaged = act.average(A.basis, K)
    label = name or f"{A.name}^{getattr(K, 'label', act.group.name) if K is not None else act.group.name}"
    return MatrixStarAlgebra(span_basis(averaged, tol), name=label, tol=tol)


def conditional_expectation(a: np.ndarray, act: GroupAction, K: GroupLike = None) -> np.ndarray:
    """m_K(a) = (1/|K|) sum_k tau_k(a)."""
    return act.average(np.asarray(a, dtype=complex), K)


class IsotypicComponent(NamedTuple):
    label: str
    projection: np.ndarray
    multiplicity: int
    irrep_dim: int


def isotypic_projection(U: UnitaryRep, irrep: UnitaryRep) -> np.ndarray:
    """P = (dim/|K|) sum_k conj(chi(k)) U(k)."""
    chi = irrep.element_character
    return (irrep.dim / U.structure.order) * np.tensordot(np.conj(chi), U.matrices, axes=1)


def isotypic_decomposition(U: UnitaryRep, seed: Optional[int] = None,
                           tol: Optional[float] = None) -> List[IsotypicComponent]:
    """Components with non-zero multiplicity, in character-table order."""
    tol = tolerance('rounding', tol)
    components = []
    for irrep in irreps(U.group, seed=seed):
        P = isotypic_projection(U, irrep)
        raw = np.trace(P).real / irrep.dim
        m = int(round(raw))
        if abs(raw - m) > tol:
            raise ConsistencyError(f"Non-integer multiplicity {raw:.6g} of {irrep.label} in {U.label}",
                                   details={"value": raw})
        if m > 0:
            components.append(IsotypicComponent(irrep.label, P, m, irrep.dim))
    return components


def restrict_action(U: UnitaryRep, K: Subgroup) -> UnitaryRep:
    return UnitaryRep(K, U.matrices[list(K.members)], label=f"{U.label}|{K.label}", validate=False)


class GaloisData(NamedTuple):
    fixing: Subgroup
    stabilizing: Subgroup


def galois_stabilizer(act: GroupAction, B: MatrixStarAlgebra, tol: Optional[float] = None) -> GaloisData:
    """Elements fixing B pointwise, and elements mapping B onto itself."""
    tol = tolerance('algebra', tol)
    fixing, stabilizing = [], []
    for g in range(act.group.order):
        moved = act.apply_many(g, B.basis)
        if np.max(np.abs(moved - B.basis)) <= tol * 100:
            fixing.append(g)
        if all(B.contains(m, tol) for m in moved):
            stabilizing.append(g)
    return GaloisData(Subgroup(act.group, fixing, label=f"Fix({B.name})"),
                      Subgroup(act.group, stabilizing, label=f"Stab({B.name})"))


def action_from_matrices(G: FiniteGroup, matrices: Sequence[np.ndarray], label: str = "U") -> GroupAction:
    return GroupAction(UnitaryRep(G, matrices, label=label))
