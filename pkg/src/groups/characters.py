"""Character tables (Burnside class-sum method) and explicit unitary irreps."""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.config import RUN_DEFAULTS, log, tolerance
from ..core.errors import CharacterTableError, RepresentationError
from ..core.linalg import cluster_sizes, cluster_values, random_hermitian
from .group import FiniteGroup, Subgroup, as_group


class UnitaryRep:
    """A unitary matrix representation of a finite group or subgroup.

    ``matrices[g]`` is the image of element ``g`` (local indices for a
    Subgroup). Validation checks the homomorphism and unitarity residuals
    against the representation tolerance.
    """

    def __init__(self, group, matrices, label: str = "rep", validate: bool = True,
                 tol: Optional[float] = None):
        self.group = group
        mats = np.array(matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise RepresentationError(f"Representation {label}: expected (order, d, d) matrices, got {mats.shape}")
        if mats.shape[0] != self.structure.order:
            raise RepresentationError(
                f"Representation {label}: {mats.shape[0]} matrices for a group of order {self.structure.order}")
        mats.setflags(write=False)
        self.matrices = mats
        self.dim = int(mats.shape[1])
        self.label = label
        if validate:
            self.validate(tol)

    @property
    def structure(self) -> FiniteGroup:
        return as_group(self.group)

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    @property
    def element_character(self) -> np.ndarray:
        return np.einsum('gii->g', self.matrices)

    @property
    def character(self) -> np.ndarray:
        """Character per conjugacy class (value at the class's smallest element)."""
        reps = [c[0] for c in self.structure.conjugacy_classes]
        return self.element_character[reps]

    def homomorphism_residual(self) -> float:
        G = self.structure
        prod = np.einsum('gij,hjk->ghik', self.matrices, self.matrices)
        return float(np.max(np.abs(prod - self.matrices[G.mult_table])))

    def unitarity_residual(self) -> float:
        eye = np.eye(self.dim)
        gram = np.einsum('gij,gkj->gik', self.matrices, self.matrices.conj())
        return float(np.max(np.abs(gram - eye)))

    def class_function_residual(self) -> float:
        chi = self.element_character
        return float(max(np.max(np.abs(chi[list(c)] - chi[c[0]]))
                         for c in self.structure.conjugacy_classes))

    def validate(self, tol: Optional[float] = None):
        tol = tolerance('rep', tol)
        hom = self.homomorphism_residual()
        if hom > tol:
            raise RepresentationError(f"Representation {self.label} is not a homomorphism (residual {hom:.3e})",
                                      details={"homomorphism_residual": hom})
        uni = self.unitarity_residual()
        if uni > tol:
            raise RepresentationError(f"Representation {self.label} is not unitary (residual {uni:.3e})",
                                      details={"unitarity_residual": uni})

    def is_faithful(self, tol: Optional[float] = None) -> bool:
        tol = tolerance('rep', tol)
        eye = np.eye(self.dim)
        return all(np.max(np.abs(self.matrices[g] - eye)) > tol for g in range(1, self.structure.order))

    def __repr__(self) -> str:
        return f"UnitaryRep({self.label}, dim={self.dim}, group={self.structure.name})"


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    values: np.ndarray          # rows = irreducible characters, columns = classes
    labels: List[str]
    dims: List[int] = field(default_factory=list)

    @property
    def class_sizes(self) -> np.ndarray:
        return self.group.class_sizes

    def inner(self, chi1, chi2) -> complex:
        """<chi1, chi2> = (1/|G|) sum_classes |C| chi1 conj(chi2)"""
        return complex(np.sum(self.class_sizes * np.asarray(chi1) * np.conj(chi2)) / self.group.order)

    def orthogonality_residual(self) -> float:
        gram = (self.values * self.class_sizes) @ self.values.conj().T / self.group.order
        return float(np.max(np.abs(gram - np.eye(len(self.labels)))))

    def row(self, label: str) -> np.ndarray:
        return self.values[self.labels.index(label)]

    def to_dict(self) -> Dict:
        return {
            "group": self.group.name,
            "class_sizes": [int(s) for s in self.class_sizes],
            "labels": list(self.labels),
            "dims": list(self.dims),
            "values": self.values,
        }


def _class_constants(G: FiniteGroup) -> np.ndarray:
    """M[r, s, t] = #{(x, y) in C_r x C_s : x y = z_t}, z_t the class representative."""
    k = G.num_classes
    reps = np.array([c[0] for c in G.conjugacy_classes])
    M = np.zeros((k, k, k))
    for r, cls in enumerate(G.conjugacy_classes):
        products = G.mult_table[list(cls), :]
        for t, z in enumerate(reps):
            per_y = np.sum(products == z, axis=0)
            M[r, :, t] = np.bincount(G.class_of, weights=per_y, minlength=k)
    return M


def _canonical_key(dim: int, row: np.ndarray):
    return (dim, [(-round(float(v.real), 6) + 0.0, -round(float(v.imag), 6) + 0.0) for v in row])


def _burnside_table(G: FiniteGroup, seed: int, tol: float) -> np.ndarray:
    k = G.num_classes
    if k == 1:
        return np.ones((1, 1), dtype=complex)
    M = _class_constants(G)
    sizes = G.class_sizes
    residual = np.inf
    for attempt in range(RUN_DEFAULTS['max_retries']):
        rng = np.random.default_rng(seed + attempt)
        combo = np.tensordot(rng.normal(size=k), M, axes=1)
        evals, evecs = np.linalg.eig(combo)
        labels = cluster_values(evals, 1e-6)
        if max(cluster_sizes(labels)) > 1:
            log(f"⚠️  Degenerate class-sum spectrum for {G.name} (attempt {attempt + 1}), reseeding")
            continue
        rows = []
        for j in range(k):
            omega = evecs[:, j] / evecs[0, j]
            deg = np.sqrt(G.order / np.sum(np.abs(omega) ** 2 / sizes))
            rows.append(np.round(deg) * omega / sizes)
        table = np.array(rows)
        gram = (table * sizes) @ table.conj().T / G.order
        residual = float(np.max(np.abs(gram - np.eye(k))))
        if residual <= tol:
            return table
        log(f"⚠️  Character table residual {residual:.3e} for {G.name} (attempt {attempt + 1})")
    raise CharacterTableError(f"Class-sum eigenvector clustering failed for {G.name}",
                              details={"residual": residual})


@lru_cache(maxsize=128)
def _character_table_cached(G: FiniteGroup, seed: int, tol: float) -> CharacterTable:
    raw = _burnside_table(G, seed, tol)
    dims = [int(round(r[0].real)) for r in raw]
    order = sorted(range(len(dims)), key=lambda i: _canonical_key(dims[i], raw[i]))
    values = raw[order]
    dims = [dims[i] for i in order]
    labels = _match_labels(G, values)
    values.setflags(write=False)
    return CharacterTable(group=G, values=values, labels=labels, dims=dims)


def _match_labels(G: FiniteGroup, values: np.ndarray) -> List[str]:
    labels = [f"chi{i}" for i in range(len(values))]
    reps = [c[0] for c in G.conjugacy_classes]
    for name, mats in G.supplied_irreps:
        chi = np.einsum('gii->g', mats)[reps]
        hits = np.flatnonzero(np.max(np.abs(values - chi), axis=1) < 1e-6)
        if hits.size == 1:
            labels[hits[0]] = name
    return labels


def character_table(group, seed: Optional[int] = None, tol: Optional[float] = None) -> CharacterTable:
    """Irreducible characters of a group, one row per conjugacy class.

    Rows are sorted by dimension and then by character values, so the
    trivial character is always row 0.
    """
    G = as_group(group)
    seed = RUN_DEFAULTS['seed'] if seed is None else int(seed)
    return _character_table_cached(G, seed, tolerance('rep', tol))


def regular_matrices(G: FiniteGroup) -> np.ndarray:
    """Left regular representation L(g) e_h = e_{gh}."""
    n = G.order
    mats = np.zeros((n, n, n))
    cols = np.arange(n)
    for g in range(n):
        mats[g, G.mult_table[g], cols] = 1.0
    return mats


def _split_isotypic(G: FiniteGroup, chi_elements: np.ndarray, dim: int, seed: int, tol: float) -> np.ndarray:
    """One irreducible block inside the chi-isotypic part of the regular representation."""
    L = regular_matrices(G).astype(complex)
    P = (dim / G.order) * np.tensordot(np.conj(chi_elements), L, axes=1)
    evals, evecs = np.linalg.eigh((P + P.conj().T) / 2)
    Q = evecs[:, evals > 0.5]
    if Q.shape[1] != dim * dim:
        raise RepresentationError(f"Isotypic component has rank {Q.shape[1]}, expected {dim * dim}")
    for attempt in range(RUN_DEFAULTS['max_retries']):
        rng = np.random.default_rng(seed + attempt)
        X = random_hermitian(G.order, rng)
        twirled = np.einsum('gij,jk,glk->il', L, X, L.conj()) / G.order
        Y = Q.conj().T @ twirled @ Q
        w, v = np.linalg.eigh((Y + Y.conj().T) / 2)
        labels = cluster_values(w, 1e-7)
        if cluster_sizes(labels) == [dim] * dim:
            W = Q @ v[:, labels == 0]
            mats = np.einsum('ai,gab,bj->gij', W.conj(), L, W)
            return mats
        log(f"⚠️  Irrep block splitting degenerate for {G.name} (attempt {attempt + 1}), reseeding")
    raise RepresentationError(f"Could not split an irreducible block of dimension {dim} for {G.name}")


@lru_cache(maxsize=128)
def _irreps_cached(G: FiniteGroup, seed: int, tol: float) -> tuple:
    table = _character_table_cached(G, seed, tol)
    supplied = {name: mats for name, mats in G.supplied_irreps}
    reps = []
    for i, label in enumerate(table.labels):
        dim = table.dims[i]
        chi_elements = table.values[i][G.class_of]
        if label in supplied:
            mats = supplied[label]
        elif dim == 1:
            mats = chi_elements.reshape(-1, 1, 1)
        else:
            mats = _split_isotypic(G, chi_elements, dim, seed, tol)
        rep = UnitaryRep(G, mats, label=label, tol=tol)
        if np.max(np.abs(rep.element_character - chi_elements)) > 1e-6:
            raise RepresentationError(f"Irrep {label} of {G.name} does not match its character row")
        reps.append(rep)
    if sum(r.dim ** 2 for r in reps) != G.order:
        raise RepresentationError(f"Irrep dimensions of {G.name} do not satisfy sum d^2 = |G|")
    return tuple(reps)


def irreps(group, seed: Optional[int] = None, tol: Optional[float] = None) -> List[UnitaryRep]:
    """Explicit unitary irreps, in character-table order.

    Supplied (catalog or group-spec) matrices are used when present,
    otherwise blocks are split out of the regular representation. For a
    Subgroup the matrices are indexed by local element index and the
    returned reps reference the Subgroup itself.
    """
    G = as_group(group)
    seed = RUN_DEFAULTS['seed'] if seed is None else int(seed)
    cached = _irreps_cached(G, seed, tolerance('rep', tol))
    if group is G:
        return list(cached)
    return [UnitaryRep(group, r.matrices, label=r.label, validate=False) for r in cached]


def irrep_by_label(group, label: str, seed: Optional[int] = None) -> UnitaryRep:
    for rep in irreps(group, seed=seed):
        if rep.label == label:
            return rep
    raise RepresentationError(f"No irrep labelled '{label}' for {as_group(group).name}",
                              details={"available": [r.label for r in irreps(group, seed=seed)]})
