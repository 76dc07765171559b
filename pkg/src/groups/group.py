"""Finite groups given by multiplication tables, and their subgroups."""

from collections import deque
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import log
from ..core.errors import GroupLoadError


def _validate_table(table: np.ndarray) -> np.ndarray:
    """Check the group axioms, return the inverse map."""
    n = table.shape[0]
    if table.ndim != 2 or table.shape != (n, n):
        raise GroupLoadError(f"Multiplication table must be square, got shape {table.shape}")
    if n == 0:
        raise GroupLoadError("Group must have at least one element")
    if table.min() < 0 or table.max() >= n:
        raise GroupLoadError(f"Table entries must lie in 0..{n - 1}")

    idx = np.arange(n)
    if not (np.array_equal(table[0], idx) and np.array_equal(table[:, 0], idx)):
        bad = int(np.flatnonzero((table[0] != idx) | (table[:, 0] != idx))[0])
        raise GroupLoadError(f"Element 0 is not a two-sided identity (fails at element {bad})",
                             details={"element": bad})

    # (a b) c == a (b c) for every triple
    left = table[table[:, :, None], idx[None, None, :]]
    right = table[idx[:, None, None], table[None, :, :]]
    bad = np.argwhere(left != right)
    if bad.size:
        a, b, c = (int(x) for x in bad[0])
        raise GroupLoadError(f"Associativity fails for ({a},{b},{c}): ({a}{b}){c} != {a}({b}{c})",
                             triple=(a, b, c))

    inverse = np.full(n, -1, dtype=np.intp)
    for g in range(n):
        right_inv = np.flatnonzero(table[g] == 0)
        if right_inv.size != 1 or table[right_inv[0], g] != 0:
            raise GroupLoadError(f"Element {g} has no two-sided inverse", details={"element": g})
        inverse[g] = right_inv[0]

    for g in range(n):
        if np.unique(table[g]).size != n:
            raise GroupLoadError(f"Row {g} of the table is not a permutation", details={"element": g})
    return inverse


class FiniteGroup:
    """A finite group on the index set 0..order-1 with identity 0.

    ``mult_table[g, h]`` is the index of the product ``g h``. Conjugacy
    classes are ordered by their smallest element, so the identity class
    comes first.
    """

    def __init__(self, mult_table, name: str = "G",
                 generators: Optional[Sequence[int]] = None,
                 element_labels: Optional[Sequence[str]] = None):
        table = np.asarray(mult_table, dtype=np.intp)
        self.inverse = _validate_table(table)
        self.mult_table = table
        self.mult_table.setflags(write=False)
        self.inverse.setflags(write=False)
        self.order = int(table.shape[0])
        self.identity = 0
        self.name = name
        self.element_labels = list(element_labels) if element_labels is not None else None
        self.subgroups: Dict[str, Tuple[int, ...]] = {}
        # (label, per-element matrices) supplied by a catalog or a group spec
        self.supplied_irreps: List[Tuple[str, np.ndarray]] = []

        self.conjugacy_classes, self.class_of = self._conjugacy_classes()
        self.generators = tuple(int(g) for g in generators) if generators else self._greedy_generators()

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, g: int, h: int) -> int:
        return int(self.mult_table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def conjugate(self, x: int, g: int) -> int:
        """x g x^-1"""
        return int(self.mult_table[self.mult_table[x, g], self.inverse[x]])

    def _conjugacy_classes(self) -> Tuple[Tuple[Tuple[int, ...], ...], np.ndarray]:
        n = self.order
        class_of = np.full(n, -1, dtype=np.intp)
        classes = []
        xs = np.arange(n)
        for g in range(n):
            if class_of[g] >= 0:
                continue
            orbit = np.unique(self.mult_table[self.mult_table[xs, g], self.inverse[xs]])
            class_of[orbit] = len(classes)
            classes.append(tuple(int(x) for x in orbit))
        class_of.setflags(write=False)
        return tuple(classes), class_of

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.conjugacy_classes])

    @property
    def num_classes(self) -> int:
        return len(self.conjugacy_classes)

    def _greedy_generators(self) -> Tuple[int, ...]:
        gens: List[int] = []
        covered = {0}
        for g in range(1, self.order):
            if g not in covered:
                gens.append(g)
                covered = set(_closure(self, gens))
        return tuple(gens)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mult_table[x, g])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult_table, self.mult_table.T))

    def label(self, g: int) -> str:
        return self.element_labels[g] if self.element_labels else str(g)

    def subgroup(self, label: str) -> "Subgroup":
        """Resolve a named subgroup (including 'trivial' and 'whole')."""
        if label in self.subgroups:
            return Subgroup(self, self.subgroups[label], label=label)
        if label == "trivial":
            return Subgroup(self, [0], label="trivial")
        if label in ("whole", self.name):
            return Subgroup(self, range(self.order), label=self.name)
        raise GroupLoadError(f"Unknown subgroup label '{label}' for group {self.name}",
                             details={"available": sorted(self.subgroups) + ["trivial", "whole"]})

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order), label=self.name)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _closure(group: FiniteGroup, gens: Iterable[int]) -> List[int]:
    members = {0}
    frontier = deque([0])
    gens = list(gens)
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = int(group.mult_table[x, g])
            if y not in members:
                members.add(y)
                frontier.append(y)
    return sorted(members)


class Subgroup:
    """A subgroup H of a parent FiniteGroup, with its own local structure.

    ``structure`` is the subgroup as a FiniteGroup on local indices
    0..|H|-1, ordered like ``members`` (so local 0 is the identity).
    """

    def __init__(self, parent: FiniteGroup, members: Iterable[int], label: Optional[str] = None):
        members = tuple(sorted({int(m) for m in members}))
        if not members or members[0] != 0:
            raise GroupLoadError(f"Subgroup {label or members} does not contain the identity")
        if members[-1] >= parent.order:
            raise GroupLoadError(f"Subgroup {label or members} has elements outside the group")
        lookup = np.full(parent.order, -1, dtype=np.intp)
        lookup[list(members)] = np.arange(len(members))
        m = np.array(members)
        products = parent.mult_table[np.ix_(m, m)]
        if np.any(lookup[products] < 0):
            i, j = np.argwhere(lookup[products] < 0)[0]
            raise GroupLoadError(
                f"Subgroup {label or members} is not closed: {m[i]}*{m[j]} = {products[i, j]}",
                triple=(m[i], m[j], products[i, j]),
            )
        if np.any(lookup[parent.inverse[m]] < 0):
            raise GroupLoadError(f"Subgroup {label or members} is not closed under inverses")

        self.parent = parent
        self.members = members
        self.label = label or f"<{','.join(map(str, members))}>"
        self.local_index = {g: i for i, g in enumerate(members)}
        self._lookup = lookup
        self.structure = FiniteGroup(lookup[products], name=self.label)

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, g) -> bool:
        return 0 <= int(g) < self.parent.order and self._lookup[int(g)] >= 0

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup({self.label} <= {self.parent.name}, order={self.order})"

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def conjugate(self, x: int) -> "Subgroup":
        """x H x^-1"""
        return Subgroup(self.parent, (self.parent.conjugate(x, h) for h in self.members),
                        label=f"{self.label}^{x}")

    def is_normal(self) -> bool:
        return all(self.conjugate(x).members == self.members for x in self.parent.elements)


def as_group(group) -> FiniteGroup:
    """The FiniteGroup underlying a FiniteGroup or Subgroup."""
    return group.structure if isinstance(group, Subgroup) else group


def subgroup_generated_by(group: FiniteGroup, generators: Iterable[int], label: Optional[str] = None) -> Subgroup:
    return Subgroup(group, _closure(group, generators), label=label)


def group_from_generators(generators: Sequence, compose: Callable, key: Callable[..., Hashable],
                          identity, name: str, max_order: int = 5000) -> FiniteGroup:
    """Close a set of generators (permutations or matrices) into a FiniteGroup.

    Elements are discovered breadth first from the identity, so index 0 is
    the identity and generator images appear early. ``compose(a, b)`` must
    return the product ``a b``.
    """
    elements = [identity]
    index = {key(identity): 0}
    frontier = deque([identity])
    while frontier:
        x = frontier.popleft()
        for g in generators:
            y = compose(g, x)
            k = key(y)
            if k not in index:
                if len(elements) >= max_order:
                    raise GroupLoadError(f"Generators of {name} produce more than {max_order} elements")
                index[k] = len(elements)
                elements.append(y)
                frontier.append(y)
    n = len(elements)
    table = np.empty((n, n), dtype=np.intp)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[key(compose(a, b))]
    gen_idx = [index[key(g)] for g in generators]
    group = FiniteGroup(table, name=name, generators=[g for g in gen_idx if g != 0] or None)
    group.elements_data = elements
    return group


def group_from_permutations(generators: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Permutation group; the product (g h)[i] = g[h[i]]."""
    gens = [tuple(int(i) for i in g) for g in generators]
    if not gens:
        raise GroupLoadError("At least one generator permutation is required")
    degree = len(gens[0])
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise GroupLoadError(f"Not a permutation of 0..{degree - 1}: {list(g)}")
    return group_from_generators(
        gens,
        compose=lambda a, b: tuple(a[i] for i in b),
        key=lambda p: p,
        identity=tuple(range(degree)),
        name=name,
    )


def group_from_matrices(generators: Sequence[np.ndarray], name: str = "G", decimals: int = 8) -> FiniteGroup:
    """Matrix group closed under multiplication; elements keyed by rounded entries."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    dim = gens[0].shape[0]

    def key(m):
        r = np.round(m, decimals) + 0.0
        return tuple(np.concatenate([r.real.ravel(), r.imag.ravel()]))

    return group_from_generators(gens, compose=lambda a, b: a @ b, key=key,
                                 identity=np.eye(dim, dtype=complex), name=name)


def images_from_generators(group: FiniteGroup, generator_images: Dict[int, np.ndarray]) -> np.ndarray:
    """Extend generator images to every element by breadth-first products.

    The result is a homomorphism only if the images satisfy the group's
    relations; callers validate it.
    """
    dim = next(iter(generator_images.values())).shape[0]
    mats = np.zeros((group.order, dim, dim), dtype=complex)
    seen = np.zeros(group.order, dtype=bool)
    mats[0] = np.eye(dim)
    seen[0] = True
    frontier = deque([0])
    while frontier:
        x = frontier.popleft()
        for g, image in generator_images.items():
            y = int(group.mult_table[g, x])
            if not seen[y]:
                mats[y] = image @ mats[x]
                seen[y] = True
                frontier.append(y)
    if not seen.all():
        raise GroupLoadError(f"Generator images do not reach every element of {group.name}")
    return mats


def load_group(spec: dict) -> FiniteGroup:
    """Build a validated FiniteGroup from a group-spec document.

    Accepted keys: name, order, and one of mult_table or generators
    (permutations). Optional: subgroups (label -> member indices or
    {"generators": [...]}) and irreps (label, dim, matrices per element as
    [re, im] pairs).
    """
    if not isinstance(spec, dict):
        raise GroupLoadError("Group spec must be a JSON object")
    name = str(spec.get("name", "G"))

    if "mult_table" in spec:
        try:
            table = np.asarray(spec["mult_table"], dtype=np.intp)
        except (TypeError, ValueError) as e:
            raise GroupLoadError(f"Malformed multiplication table: {e}") from e
        group = FiniteGroup(table, name=name)
    elif "generators" in spec:
        group = group_from_permutations(spec["generators"], name=name)
    else:
        raise GroupLoadError("Group spec needs either 'mult_table' or 'generators'")

    if "order" in spec and int(spec["order"]) != group.order:
        raise GroupLoadError(f"Order mismatch: spec says {spec['order']}, table has {group.order}",
                             details={"declared": int(spec["order"]), "actual": group.order})

    for label, members in (spec.get("subgroups") or {}).items():
        if isinstance(members, dict):
            sub = subgroup_generated_by(group, members.get("generators", []), label=label)
        else:
            sub = Subgroup(group, members, label=label)
        group.subgroups[label] = sub.members

    for entry in spec.get("irreps") or []:
        mats = _decode_matrices(entry.get("matrices"), name=entry.get("label", "?"))
        if mats.shape[0] != group.order:
            raise GroupLoadError(f"Irrep {entry.get('label')} has {mats.shape[0]} matrices, expected {group.order}")
        if "dim" in entry and int(entry["dim"]) != mats.shape[1]:
            raise GroupLoadError(f"Irrep {entry.get('label')} declares dim {entry['dim']}, matrices are {mats.shape[1]}")
        group.supplied_irreps.append((str(entry.get("label", f"irrep{len(group.supplied_irreps)}")), mats))

    log(f"✅ Loaded group {name}: order {group.order}, {group.num_classes} classes")
    return group


def _decode_matrices(raw, name: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise GroupLoadError(f"Malformed matrices for irrep {name}: {e}") from e
    if arr.ndim == 4 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 3:
        return arr.astype(complex)
    raise GroupLoadError(f"Irrep {name}: matrices must be per-element [[ [re,im] ]] arrays")
