"""Built-in groups with named subgroups and exact irreps."""

import re
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ..core.errors import GroupLoadError
from .group import (FiniteGroup, group_from_matrices, group_from_permutations,
                    images_from_generators, subgroup_generated_by)

Perm = Tuple[int, ...]

# the three ways to split {0,1,2,3} into two pairs
_PAIR_PARTITIONS = (
    frozenset({frozenset({0, 1}), frozenset({2, 3})}),
    frozenset({frozenset({0, 2}), frozenset({1, 3})}),
    frozenset({frozenset({0, 3}), frozenset({1, 2})}),
)


def _perm_matrix(p: Perm) -> np.ndarray:
    m = np.zeros((len(p), len(p)))
    m[list(p), range(len(p))] = 1.0
    return m


def _sign(p: Perm) -> int:
    sign, seen = 1, set()
    for start in range(len(p)):
        if start in seen:
            continue
        length, i = 0, start
        while i not in seen:
            seen.add(i)
            i = p[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _sum_zero(p: Perm) -> np.ndarray:
    """Permutation action restricted to the vectors with zero coordinate sum."""
    Q = null_space(np.ones((1, len(p))))
    return Q.T @ _perm_matrix(p) @ Q


def _partition_perm(p: Perm) -> Perm:
    images = []
    for part in _PAIR_PARTITIONS:
        moved = frozenset(frozenset(p[i] for i in pair) for pair in part)
        images.append(_PAIR_PARTITIONS.index(moved))
    return tuple(images)


def _cycle_power(p: Perm) -> int:
    """j with p = c^j for the 3-cycle c = (1, 2, 0)."""
    powers = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    return powers.index(p)


def _element_irreps(group: FiniteGroup, builders: Sequence[Tuple[str, Callable]]):
    for label, build in builders:
        mats = np.array([np.atleast_2d(build(p)) for p in group.elements_data], dtype=complex)
        group.supplied_irreps.append((label, mats))


def _generator_irreps(group: FiniteGroup, images: Sequence[Tuple[str, Sequence]]):
    for label, gen_images in images:
        mapping = {g: np.atleast_2d(np.asarray(m, dtype=complex)) for g, m in zip(group.generators, gen_images)}
        group.supplied_irreps.append((label, images_from_generators(group, mapping)))


def _index(group: FiniteGroup, element) -> int:
    return group.elements_data.index(tuple(element))


def _name_subgroups(group: FiniteGroup, named: Dict[str, List[Perm]]):
    for label, gens in named.items():
        sub = subgroup_generated_by(group, [_index(group, g) for g in gens], label=label)
        group.subgroups[label] = sub.members


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupLoadError(f"Cyclic group order must be positive, got {n}")
    if n == 1:
        return FiniteGroup([[0]], name="Z1")
    group = group_from_permutations([tuple((i + 1) % n for i in range(n))], name=f"Z{n}")
    root = np.exp(2j * np.pi / n)
    _generator_irreps(group, [(f"chi{k}", [root ** k]) for k in range(n)])
    g = group.generators[0]
    for d in range(2, n):
        if n % d == 0:
            power = 0
            for _ in range(n // d):
                power = group.mul(power, g)
            group.subgroups[f"Z{d}"] = subgroup_generated_by(group, [power]).members
    return group


def symmetric3() -> FiniteGroup:
    r, s = (1, 2, 0), (1, 0, 2)
    group = group_from_permutations([r, s], name="S3")
    _element_irreps(group, [("triv", lambda p: 1.0), ("sgn", _sign), ("std", _sum_zero)])
    _name_subgroups(group, {"Z3": [r], "s": [s]})
    return group


def symmetric4() -> FiniteGroup:
    group = group_from_permutations([(1, 2, 3, 0), (1, 0, 2, 3)], name="S4")
    _element_irreps(group, [
        ("triv", lambda p: 1.0),
        ("sgn", _sign),
        ("E", lambda p: _sum_zero(_partition_perm(p))),
        ("T1", _sum_zero),
        ("T2", lambda p: _sign(p) * _sum_zero(p)),
    ])
    _name_subgroups(group, {
        "A4": [(1, 2, 0, 3), (1, 0, 3, 2)],
        "V4": [(1, 0, 3, 2), (2, 3, 0, 1)],
        "D4": [(1, 2, 3, 0), (0, 3, 2, 1)],
        "S3": [(1, 2, 0, 3), (1, 0, 2, 3)],
    })
    return group


def alternating4() -> FiniteGroup:
    group = group_from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)], name="A4")
    omega = np.exp(2j * np.pi / 3)
    _element_irreps(group, [
        ("A", lambda p: 1.0),
        ("E1", lambda p: omega ** _cycle_power(_partition_perm(p))),
        ("E2", lambda p: omega ** (2 * _cycle_power(_partition_perm(p)))),
        ("T", _sum_zero),
    ])
    _name_subgroups(group, {"V4": [(1, 0, 3, 2), (2, 3, 0, 1)], "Z3": [(1, 2, 0, 3)]})
    return group


def dihedral4() -> FiniteGroup:
    r, s = (1, 2, 3, 0), (0, 3, 2, 1)
    group = group_from_permutations([r, s], name="D4")
    _generator_irreps(group, [
        ("A1", [1, 1]), ("A2", [1, -1]), ("B1", [-1, 1]), ("B2", [-1, -1]),
        ("E", [[[0, -1], [1, 0]], [[1, 0], [0, -1]]]),
    ])
    _name_subgroups(group, {"Z4": [r], "Z2": [(2, 3, 0, 1)], "V4": [(2, 3, 0, 1), s]})
    return group


def quaternion8() -> FiniteGroup:
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    group = group_from_matrices([qi, qj], name="Q8")
    _generator_irreps(group, [
        ("A1", [1, 1]), ("A2", [1, -1]), ("B1", [-1, 1]), ("B2", [-1, -1]),
        ("E", [qi, qj]),
    ])
    i_idx = group.generators[0]
    group.subgroups["Z4"] = subgroup_generated_by(group, [i_idx]).members
    group.subgroups["Z2"] = subgroup_generated_by(group, [group.mul(i_idx, i_idx)]).members
    return group


_BUILDERS = {
    "S3": symmetric3,
    "S4": symmetric4,
    "A4": alternating4,
    "D4": dihedral4,
    "Q8": quaternion8,
}


@lru_cache(maxsize=None)
def catalog_group(name: str) -> FiniteGroup:
    """Built-in group by name: S3, S4, A4, D4, Q8, Z<n> or Z_<n>."""
    key = name.strip()
    if key in _BUILDERS:
        return _BUILDERS[key]()
    match = re.fullmatch(r"Z_?(\d+)", key)
    if match:
        return cyclic(int(match.group(1)))
    raise GroupLoadError(f"Unknown catalog group '{name}'",
                         details={"available": sorted(_BUILDERS) + ["Z<n>"]})


def catalog_names() -> List[str]:
    return sorted(_BUILDERS) + ["Z2", "Z3", "Z4"]
