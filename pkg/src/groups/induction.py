"""Restriction, Mackey induction, branching and coset machinery."""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag, null_space

from ..core.config import tolerance
from ..core.errors import ConsistencyError, RepresentationError
from .characters import UnitaryRep, character_table, irreps, regular_matrices
from .group import FiniteGroup, Subgroup, as_group


def _round_multiplicity(value: complex, what: str, tol: Optional[float] = None) -> int:
    tol = tolerance('rounding', tol)
    m = int(round(value.real))
    residual = abs(value - m)
    if residual > tol or m < 0:
        raise ConsistencyError(f"Non-integer multiplicity for {what}: {value:.6g}",
                               details={"value": [value.real, value.imag], "residual": residual})
    return m


def _subgroup_of(rep: UnitaryRep) -> Subgroup:
    if not isinstance(rep.group, Subgroup):
        raise RepresentationError(f"Representation {rep.label} is not defined on a subgroup")
    return rep.group


def direct_sum(reps: Sequence[UnitaryRep], label: Optional[str] = None) -> UnitaryRep:
    if not reps:
        raise RepresentationError("Direct sum of an empty list of representations")
    order = reps[0].structure.order
    mats = [block_diag(*[r.matrices[g] for r in reps]) for g in range(order)]
    return UnitaryRep(reps[0].group, mats, label=label or "+".join(r.label for r in reps), validate=False)


def regular_rep(group) -> UnitaryRep:
    return UnitaryRep(group, regular_matrices(as_group(group)), label="regular", validate=False)


class Restriction(NamedTuple):
    rep: UnitaryRep
    multiplicities: Dict[str, int]


def decompose(rep: UnitaryRep, seed: Optional[int] = None) -> Dict[str, int]:
    """Irrep multiplicities of a (possibly reducible) representation."""
    G = rep.structure
    table = character_table(G, seed=seed)
    chi = rep.character
    return {label: _round_multiplicity(table.inner(chi, row), f"{label} in {rep.label}")
            for label, row in zip(table.labels, table.values)}


def restrict(gamma: UnitaryRep, H: Subgroup, seed: Optional[int] = None) -> Restriction:
    """gamma restricted to H, with its decomposition into H-irreps."""
    if H.parent is not gamma.structure:
        raise RepresentationError(f"{H.label} is not a subgroup of {gamma.structure.name}")
    rep = UnitaryRep(H, gamma.matrices[list(H.members)], label=f"{gamma.label}|{H.label}", validate=False)
    return Restriction(rep=rep, multiplicities=decompose(rep, seed=seed))


def _left_cosets(G: FiniteGroup, H: Subgroup) -> Tuple[List[int], np.ndarray]:
    coset_of = np.full(G.order, -1, dtype=np.intp)
    reps: List[int] = []
    members = np.array(H.members)
    for g in range(G.order):
        if coset_of[g] < 0:
            coset_of[G.mult_table[g, members]] = len(reps)
            reps.append(g)
    return reps, coset_of


def induce(eta: UnitaryRep, G: Optional[FiniteGroup] = None) -> UnitaryRep:
    """Ind_H^G eta on left cosets t_i H: block (i, j) = eta(t_i^-1 g t_j) when that lies in H."""
    H = _subgroup_of(eta)
    G = G or H.parent
    reps, _ = _left_cosets(G, H)
    k, d = len(reps), eta.dim
    mats = np.zeros((G.order, k * d, k * d), dtype=complex)
    for g in range(G.order):
        for i, ti in enumerate(reps):
            left = G.mult_table[G.inverse[ti], g]
            for j, tj in enumerate(reps):
                x = int(G.mult_table[left, tj])
                if x in H:
                    mats[g, i * d:(i + 1) * d, j * d:(j + 1) * d] = eta.matrices[H.local_index[x]]
    return UnitaryRep(G, mats, label=f"Ind({eta.label})")


def induced_character(eta: UnitaryRep, G: Optional[FiniteGroup] = None) -> np.ndarray:
    """Per-class values (1/|H|) sum over x with x g x^-1 in H of chi_eta(x g x^-1)."""
    H = _subgroup_of(eta)
    G = G or H.parent
    chi = eta.element_character
    values = []
    for cls in G.conjugacy_classes:
        g = cls[0]
        total = 0j
        for x in range(G.order):
            y = G.conjugate(x, g)
            if y in H:
                total += chi[H.local_index[y]]
        values.append(total / H.order)
    return np.array(values)


def branching_multiplicity(eta: UnitaryRep, gamma: UnitaryRep) -> int:
    """dim Hom_H(eta, gamma|H) = (1/|H|) sum_h chi_gamma(h) conj(chi_eta(h))."""
    H = _subgroup_of(eta)
    chi_gamma = gamma.element_character[list(H.members)]
    value = np.sum(chi_gamma * np.conj(eta.element_character)) / H.order
    return _round_multiplicity(value, f"({eta.label}, {gamma.label})")


@dataclass(frozen=True)
class BranchingTable:
    group: FiniteGroup
    subgroup: Subgroup
    subgroup_labels: List[str]
    group_labels: List[str]
    multiplicities: np.ndarray     # [eta, gamma]

    def m(self, eta_label: str, gamma_label: str) -> int:
        return int(self.multiplicities[self.subgroup_labels.index(eta_label),
                                       self.group_labels.index(gamma_label)])

    def fiber(self, eta_label: str) -> List[str]:
        row = self.multiplicities[self.subgroup_labels.index(eta_label)]
        return [g for g, m in zip(self.group_labels, row) if m > 0]

    def pairs(self) -> List[Tuple[str, str]]:
        return [(e, g) for i, e in enumerate(self.subgroup_labels)
                for j, g in enumerate(self.group_labels) if self.multiplicities[i, j] > 0]

    def to_dict(self) -> Dict:
        return {
            "group": self.group.name,
            "subgroup": self.subgroup.label,
            "rows": list(self.subgroup_labels),
            "columns": list(self.group_labels),
            "multiplicities": self.multiplicities.astype(int).tolist(),
        }


def branching_table(G: FiniteGroup, H: Subgroup, seed: Optional[int] = None) -> BranchingTable:
    etas = irreps(H, seed=seed)
    gammas = irreps(G, seed=seed)
    m = np.array([[branching_multiplicity(e, g) for g in gammas] for e in etas], dtype=int)
    dims_eta = np.array([e.dim for e in etas])
    dims_gamma = np.array([g.dim for g in gammas])
    if not np.array_equal(dims_eta @ m, dims_gamma):
        raise ConsistencyError(f"Branching table for {H.label} <= {G.name} violates sum m*dim(eta) = dim(gamma)")
    m.setflags(write=False)
    return BranchingTable(G, H, [e.label for e in etas], [g.label for g in gammas], m)


class FrobeniusPair(NamedTuple):
    m_restrict: int
    m_induce: int


def frobenius_check(eta: UnitaryRep, gamma: UnitaryRep) -> FrobeniusPair:
    """(dim Hom_H(eta, gamma|H), dim Hom_G(Ind eta, gamma)), computed independently."""
    G = gamma.structure
    m_restrict = branching_multiplicity(eta, gamma)
    table = character_table(G)
    m_induce = _round_multiplicity(table.inner(induced_character(eta, G), gamma.character),
                                   f"Ind({eta.label}) in {gamma.label}")
    return FrobeniusPair(m_restrict, m_induce)


@dataclass(frozen=True)
class Extension:
    gamma: UnitaryRep
    gamma_multiplicities: Dict[str, int]
    complement: Dict[str, int]
    complement_dim: int


def _multiplicity_vector(eta: UnitaryRep, H: Subgroup) -> np.ndarray:
    table = character_table(H)
    return np.array([_round_multiplicity(table.inner(eta.character, row), f"{lab} in {eta.label}")
                     for lab, row in zip(table.labels, table.values)])


def extend_rep_minimal(eta: UnitaryRep, G: Optional[FiniteGroup] = None) -> Extension:
    """Smallest G-representation whose restriction to H contains eta.

    Branch and bound over G-multiplicity vectors c with B c >= a (a the
    H-multiplicities of eta, B the branching table). Ties in total
    dimension go to the lexicographically smallest multiset of irrep
    indices. The induced representation bounds the search.
    """
    H = _subgroup_of(eta)
    G = G or H.parent
    table = branching_table(G, H)
    B = table.multiplicities
    a = _multiplicity_vector(eta, H)
    gammas = irreps(G)
    dims = [g.dim for g in gammas]
    bound = H.index * eta.dim

    best: List = [None]

    def key(c):
        return (sum(ci * d for ci, d in zip(c, dims)), [j for j, ci in enumerate(c) for _ in range(ci)])

    def search(j: int, partial: List[int], used: int):
        if best[0] is not None and used > key(best[0])[0]:
            return
        if j == len(dims):
            if np.all(B @ np.array(partial) >= a) and (best[0] is None or key(partial) < key(best[0])):
                best[0] = list(partial)
            return
        for cj in range((bound - used) // dims[j] + 1):
            partial.append(cj)
            search(j + 1, partial, used + cj * dims[j])
            partial.pop()

    search(0, [], 0)
    c = best[0]
    chosen = [gammas[j] for j, cj in enumerate(c) for _ in range(cj)]
    gamma = direct_sum(chosen, label="+".join(g.label for g in chosen))
    complement_vec = B @ np.array(c) - a
    h_labels = table.subgroup_labels
    h_dims = [e.dim for e in irreps(H)]
    return Extension(
        gamma=gamma,
        gamma_multiplicities={gammas[j].label: int(cj) for j, cj in enumerate(c) if cj},
        complement={h_labels[i]: int(v) for i, v in enumerate(complement_vec) if v},
        complement_dim=int(np.dot(complement_vec, h_dims)),
    )


@dataclass(frozen=True)
class CosetSpace:
    """Left (gH) or right (Hg) cosets with the translation action.

    ``translation_action[g, c]`` is the coset reached from coset c by
    g: left multiplication for left cosets (a left action), right
    multiplication Hx -> Hxg for right cosets (a right action).
    """

    group: FiniteGroup
    subgroup: Subgroup
    side: str
    representatives: Tuple[int, ...]
    coset_of: np.ndarray
    translation_action: np.ndarray

    def __len__(self) -> int:
        return len(self.representatives)

    def members(self, c: int) -> List[int]:
        return [int(g) for g in np.flatnonzero(self.coset_of == c)]

    def act(self, g: int, c: int) -> int:
        return int(self.translation_action[g, c])

    def is_transitive(self) -> bool:
        return len(set(int(x) for x in self.translation_action[:, 0])) == len(self)

    def to_dict(self) -> Dict:
        return {
            "side": self.side,
            "representatives": list(self.representatives),
            "cosets": [self.members(c) for c in range(len(self))],
        }


def coset_space(G: FiniteGroup, H: Subgroup, side: str = "right") -> CosetSpace:
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    members = np.array(H.members)
    coset_of = np.full(G.order, -1, dtype=np.intp)
    reps: List[int] = []
    for g in range(G.order):
        if coset_of[g] < 0:
            coset = G.mult_table[g, members] if side == "left" else G.mult_table[members, g]
            coset_of[coset] = len(reps)
            reps.append(g)
    reps_arr = np.array(reps)
    if side == "left":
        action = coset_of[G.mult_table[:, reps_arr]]
    else:
        action = coset_of[G.mult_table[reps_arr, :]].T
    coset_of.setflags(write=False)
    action.setflags(write=False)
    return CosetSpace(G, H, side, tuple(reps), coset_of, action)


class NormalizerQuotient(NamedTuple):
    normalizer: Subgroup
    quotient_order: int


def normalizer_quotient(G: FiniteGroup, H: Subgroup) -> NormalizerQuotient:
    members = [g for g in range(G.order) if H.conjugate(g).members == H.members]
    N = Subgroup(G, members, label=f"N({H.label})")
    return NormalizerQuotient(N, N.order // H.order)


class CommaObject(NamedTuple):
    gamma: UnitaryRep
    hom_dim: int


def comma_fiber(eta: UnitaryRep, G: Optional[FiniteGroup] = None) -> List[CommaObject]:
    """Pairs (gamma, dim Hom_H(eta, gamma|H)) with a non-zero hom space."""
    H = _subgroup_of(eta)
    G = G or H.parent
    fiber = []
    for gamma in irreps(G):
        m = branching_multiplicity(eta, gamma)
        if m > 0:
            fiber.append(CommaObject(gamma, m))
    return fiber


def intertwiners(rho1: UnitaryRep, rho2: UnitaryRep, tol: Optional[float] = None) -> np.ndarray:
    """Basis (k, d2, d1) of Hom(rho1, rho2): T with rho2(g) T = T rho1(g)."""
    if rho1.structure is not rho2.structure:
        raise RepresentationError("Intertwiners need representations of the same group")
    d1, d2 = rho1.dim, rho2.dim
    blocks = []
    for g in rho1.structure.generators or (0,):
        # row-major vec: vec(A T) = (A kron I) vec T, vec(T B) = (I kron B^T) vec T
        blocks.append(np.kron(rho2.matrices[g], np.eye(d1)) - np.kron(np.eye(d2), rho1.matrices[g].T))
    kernel = null_space(np.vstack(blocks), rcond=tolerance('rep', tol))
    return kernel.T.reshape(-1, d2, d1)
