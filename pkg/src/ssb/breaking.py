"""Spontaneous breaking as movement of centre points, and phase diagrams."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..algebra.actions import GroupAction, GroupLike
from ..algebra.star_algebra import MatrixStarAlgebra, centre
from ..core.config import tolerance
from ..core.errors import ConsistencyError
from ..groups.group import Subgroup


@dataclass(frozen=True)
class SymmetryStatus:
    broken: bool
    group: str
    num_points: int
    permutations: Dict[int, Tuple[int, ...]]      # element -> image of each centre point
    moved: List[int] = field(default_factory=list)
    orbits: List[List[int]] = field(default_factory=list)
    residual: float = 0.0

    @property
    def status(self) -> str:
        return "broken" if self.broken else "unbroken"

    def to_dict(self) -> Dict:
        return {
            "status": self.status,
            "group": self.group,
            "centre_points": self.num_points,
            "moved_points": list(self.moved),
            "orbits": [list(o) for o in self.orbits],
            "permutations": {str(g): list(p) for g, p in self.permutations.items()},
            "residual": self.residual,
        }


def _point_permutations(A: MatrixStarAlgebra, act: GroupAction, members: List[int],
                        tol: float) -> Tuple[np.ndarray, Dict[int, Tuple[int, ...]], float]:
    projections = centre(A).projections
    m = len(projections)
    flat = projections.reshape(m, -1)
    perms: Dict[int, Tuple[int, ...]] = {}
    worst = 0.0
    for g in members:
        moved = act.apply_many(g, projections).reshape(m, -1)
        distance = np.max(np.abs(moved[:, None, :] - flat[None, :, :]), axis=2)
        image = np.argmin(distance, axis=1)
        residual = float(np.max(distance[np.arange(m), image]))
        if residual > tol * 1e3 or len(set(image.tolist())) != m:
            raise ConsistencyError(f"Element {g} does not permute the central projections of {A.name}",
                                   details={"element": g, "residual": residual})
        worst = max(worst, residual)
        perms[g] = tuple(int(i) for i in image)
    return projections, perms, worst


def _orbits(perms: Dict[int, Tuple[int, ...]], m: int) -> List[List[int]]:
    rows, cols = [], []
    for image in perms.values():
        rows.extend(range(m))
        cols.extend(image)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(m, m))
    _, labels = connected_components(graph, directed=False)
    orbits: Dict[int, List[int]] = {}
    for point, label in enumerate(labels):
        orbits.setdefault(int(label), []).append(point)
    return sorted(orbits.values(), key=lambda o: o[0])


def symmetry_status(A: MatrixStarAlgebra, act: GroupAction, K: GroupLike = None,
                    tol: Optional[float] = None) -> SymmetryStatus:
    """Unbroken iff every k in K fixes each minimal central projection of A."""
    tol = tolerance('algebra', tol)
    members = act.members(K)
    projections, perms, residual = _point_permutations(A, act, members, tol)
    m = len(projections)
    moved = sorted({p for image in perms.values() for p in range(m) if image[p] != p})
    label = K.label if isinstance(K, Subgroup) else act.group.name
    return SymmetryStatus(broken=bool(moved), group=label, num_points=m, permutations=perms,
                          moved=moved, orbits=_orbits(perms, m), residual=residual)


@dataclass(frozen=True)
class PhaseComponent:
    points: List[int]
    stabilizer: Subgroup

    @property
    def broken(self) -> bool:
        return len(self.points) > 1

    def to_dict(self) -> Dict:
        return {
            "points": list(self.points),
            "status": "broken" if self.broken else "unbroken",
            "stabilizer": list(self.stabilizer.members),
            "stabilizer_order": self.stabilizer.order,
        }


def phase_diagram(A: MatrixStarAlgebra, act: GroupAction, K: GroupLike = None,
                  tol: Optional[float] = None) -> List[PhaseComponent]:
    """K-orbits on the centre spectrum of A; each orbit is one ergodic component.

    A component carries the stabilizer of its first point, the subgroup
    left unbroken in that pure phase.
    """
    status = symmetry_status(A, act, K, tol)
    components = []
    for orbit in status.orbits:
        point = orbit[0]
        fixing = [g for g, image in status.permutations.items() if image[point] == point]
        components.append(PhaseComponent(orbit, Subgroup(act.group, fixing, label=f"Stab({point})")))
    return components
