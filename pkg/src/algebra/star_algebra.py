"""Finite-dimensional *-algebras of matrices: spans, closure, commutants, centres."""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from ..core.config import RUN_DEFAULTS, log, tolerance
from ..core.errors import AlgebraError, CentreError
from ..core.linalg import cluster_sizes, cluster_values, hermitian_kernel, project_onto, span_basis


@dataclass(frozen=True)
class ClosureCertificate:
    closed: bool
    residual: float
    checks: int


class MatrixStarAlgebra:
    """A unital *-subalgebra of M_n given by a trace-orthonormal basis.

    ``generators`` (optional) is a smaller set generating the algebra; the
    commutant and centre routines use it when available.
    """

    def __init__(self, basis, generators=None, name: str = "A",
                 certify: bool = True, seed: Optional[int] = None, tol: Optional[float] = None):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise AlgebraError(f"Algebra {name}: basis must have shape (k, n, n), got {basis.shape}")
        self.basis = basis
        self.basis.setflags(write=False)
        self.ambient_dim = int(basis.shape[1])
        self.generators = None if generators is None else np.asarray(generators, dtype=complex)
        self.name = name
        self.closure_certificate = (self._certify(seed, tol) if certify
                                    else ClosureCertificate(True, 0.0, 0))

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def spanning_set(self) -> np.ndarray:
        """Generators if known, else the basis."""
        return self.generators if self.generators is not None else self.basis

    def project(self, x) -> np.ndarray:
        return project_onto(self.basis, x)[1]

    def coefficients(self, x) -> np.ndarray:
        return project_onto(self.basis, x)[0]

    def membership_residual(self, x) -> float:
        return project_onto(self.basis, x)[2]

    def contains(self, x, tol: Optional[float] = None) -> bool:
        x = np.asarray(x, dtype=complex)
        scale = max(1.0, float(np.linalg.norm(x)))
        return self.membership_residual(x) <= tolerance('algebra', tol) * scale * 10

    def contains_algebra(self, other: "MatrixStarAlgebra", tol: Optional[float] = None) -> bool:
        return all(self.contains(b, tol) for b in other.basis)

    def same_span(self, other: "MatrixStarAlgebra", tol: Optional[float] = None) -> bool:
        return self.dim == other.dim and self.contains_algebra(other, tol)

    def element(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=complex), self.basis, axes=1)

    def random_element(self, rng: np.random.Generator, hermitian: bool = False) -> np.ndarray:
        coeffs = rng.normal(size=self.dim) + 1j * rng.normal(size=self.dim)
        x = self.element(coeffs)
        return (x + x.conj().T) / 2 if hermitian else x

    def _certify(self, seed: Optional[int], tol: Optional[float]) -> ClosureCertificate:
        """Products and adjoints of sampled elements (and generators) stay in the span."""
        tol = tolerance('algebra', tol)
        rng = np.random.default_rng(RUN_DEFAULTS['seed'] if seed is None else seed)
        samples = [self.random_element(rng) for _ in range(3)]
        if self.generators is not None:
            samples.extend(self.generators[:8])
        worst = self.membership_residual(np.eye(self.ambient_dim))
        checks = 1
        for a in samples:
            na = max(1.0, float(np.linalg.norm(a)))
            worst = max(worst, self.membership_residual(a.conj().T) / na)
            for b in samples[:3]:
                nb = max(1.0, float(np.linalg.norm(b)))
                worst = max(worst, self.membership_residual(a @ b) / (na * nb))
                checks += 1
        return ClosureCertificate(closed=worst <= tol * 100, residual=float(worst), checks=checks)

    def __repr__(self) -> str:
        return f"MatrixStarAlgebra({self.name}, dim={self.dim}, ambient={self.ambient_dim})"


def full_matrix_algebra(n: int, name: Optional[str] = None) -> MatrixStarAlgebra:
    """M_n with matrix units as basis, generated by a diagonal and the cyclic shift."""
    units = np.zeros((n * n, n, n), dtype=complex)
    units[np.arange(n * n), np.repeat(np.arange(n), n), np.tile(np.arange(n), n)] = 1.0
    shift = np.roll(np.eye(n), 1, axis=0)
    gens = np.array([np.diag(np.arange(n, dtype=float)), shift], dtype=complex)
    return MatrixStarAlgebra(units, generators=gens, name=name or f"M{n}", certify=False)


def build_algebra(generators: Sequence, name: str = "A", tol: Optional[float] = None) -> MatrixStarAlgebra:
    """Smallest unital *-algebra containing the generators."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise AlgebraError("build_algebra needs at least one generator")
    n = gens[0].shape[0]
    for g in gens:
        if g.shape != (n, n):
            raise AlgebraError(f"Generator shape {g.shape} does not match {(n, n)}")
    tol = tolerance('algebra', tol)
    letters = gens + [g.conj().T for g in gens]

    basis = span_basis(letters, tol)
    while True:
        products = [b @ s for b in basis for s in letters] + list(basis)
        grown = span_basis(products, tol)
        if grown.shape[0] == basis.shape[0]:
            break
        basis = grown

    eye = np.eye(n)
    if project_onto(basis, eye)[2] > tol * np.sqrt(n):
        log(f"⚠️  Generators of {name} do not contain the identity; unitizing")
        basis = span_basis(list(basis) + [eye], tol)
    return MatrixStarAlgebra(basis, generators=np.array(gens), name=name, tol=tol)


def commutant(S: MatrixStarAlgebra, tol: Optional[float] = None, name: Optional[str] = None) -> MatrixStarAlgebra:
    """{x : [x, s] = 0 for all s in S}, the kernel of the stacked commutator map."""
    tol = tolerance('algebra', tol)
    n = S.ambient_dim
    spanning = S.spanning_set
    spanning = np.concatenate([spanning, spanning.conj().transpose(0, 2, 1)])
    gram = np.zeros((n * n, n * n), dtype=complex)
    for s in spanning:
        C = np.kron(s, np.eye(n)) - np.kron(np.eye(n), s.T)
        gram += C.conj().T @ C
    kernel = hermitian_kernel(gram, tol)
    basis = kernel.T.reshape(-1, n, n)
    return MatrixStarAlgebra(basis, name=name or f"{S.name}'", tol=tol)


@dataclass(frozen=True)
class Centre:
    algebra: MatrixStarAlgebra
    projections: np.ndarray     # (m, n, n) minimal central projections

    @property
    def dim(self) -> int:
        return self.algebra.dim


def _central_basis(A: MatrixStarAlgebra, tol: float) -> np.ndarray:
    """Basis of A ∩ A': coefficient vectors c with [sum c_j b_j, s] = 0 for s spanning A."""
    spanning = list(A.spanning_set)
    if A.generators is not None:
        spanning += [s.conj().T for s in A.generators if not np.allclose(s, s.conj().T)]
    k = A.dim
    # gram[i, j] = sum_s <[b_i, s], [b_j, s]>, via ad_s* ad_s applied to the basis
    applied = np.zeros_like(A.basis)
    for s in spanning:
        comm = A.basis @ s - s @ A.basis
        s_adj = s.conj().T
        applied += comm @ s_adj - s_adj @ comm
    gram = A.basis.reshape(k, -1).conj() @ applied.reshape(k, -1).T
    gram = (gram + gram.conj().T) / 2
    coeffs = hermitian_kernel(gram, tol)
    return np.tensordot(coeffs.T, A.basis, axes=1)


def _minimal_projections(hermitian_basis: np.ndarray, expected: int, seed: int, name: str) -> np.ndarray:
    n = hermitian_basis.shape[-1]
    if expected == 1:
        return np.eye(n, dtype=complex)[None]
    for attempt in range(RUN_DEFAULTS['max_retries']):
        rng = np.random.default_rng(seed + attempt)
        X = np.tensordot(rng.normal(size=hermitian_basis.shape[0]), hermitian_basis, axes=1)
        evals, evecs = np.linalg.eigh((X + X.conj().T) / 2)
        labels = cluster_values(evals, 1e-6)
        if len(cluster_sizes(labels)) == expected:
            projections = []
            for c in range(expected):
                v = evecs[:, labels == c]
                projections.append(v @ v.conj().T)
            projections.sort(key=lambda p: tuple(-np.round(np.diag(p).real, 6)))
            return np.array(projections)
        log(f"⚠️  Central element of {name} has {len(cluster_sizes(labels))} clusters, "
            f"expected {expected} (attempt {attempt + 1})")
    raise CentreError(f"Could not resolve minimal central projections of {name}",
                      details={"expected": expected, "found": len(cluster_sizes(labels))})


@lru_cache(maxsize=64)
def _centre_cached(A: MatrixStarAlgebra, seed: int, tol: float) -> Centre:
    central = _central_basis(A, tol)
    hermitian = np.concatenate([(central + central.conj().transpose(0, 2, 1)) / 2,
                                (central - central.conj().transpose(0, 2, 1)) / 2j])
    Z = MatrixStarAlgebra(span_basis(central, tol), name=f"Z({A.name})", certify=False)
    projections = _minimal_projections(_hermitian_span(hermitian, tol), Z.dim, seed, A.name)
    worst = max(max(A.membership_residual(p) for p in projections),
                max(float(np.max(np.abs(p @ s - s @ p))) for p in projections for s in A.spanning_set[:16]))
    if worst > tol * 1e3:
        raise CentreError(f"Central projections of {A.name} leave the centre (residual {worst:.3e})",
                          details={"residual": worst})
    projections.setflags(write=False)
    return Centre(Z, projections)


def _hermitian_span(hermitian: np.ndarray, tol: float) -> np.ndarray:
    """Hermitian elements spanning the same space (real combinations suffice)."""
    flat = np.concatenate([hermitian.real.reshape(len(hermitian), -1),
                           hermitian.imag.reshape(len(hermitian), -1)], axis=1)
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    half = hermitian.shape[1] * hermitian.shape[2]
    vecs = vh[:rank, :half] + 1j * vh[:rank, half:]
    return vecs.reshape(rank, hermitian.shape[1], hermitian.shape[2])


def centre(A: MatrixStarAlgebra, seed: Optional[int] = None, tol: Optional[float] = None) -> Centre:
    """Z = A ∩ A' with its minimal central projections.

    Projections come from one generic self-adjoint central element; their
    number must equal dim Z or the clustering is retried with a new seed.
    """
    seed = RUN_DEFAULTS['seed'] if seed is None else int(seed)
    return _centre_cached(A, seed, tolerance('algebra', tol))


def direct_sum_algebra(algebras: Sequence[MatrixStarAlgebra], name: str = "sum") -> MatrixStarAlgebra:
    """Block-diagonal direct sum of algebras."""
    dims = [a.ambient_dim for a in algebras]
    total = sum(dims)
    basis: List[np.ndarray] = []
    gens: List[np.ndarray] = []
    offset = 0
    for alg, d in zip(algebras, dims):
        def place(x, offset=offset, d=d):
            m = np.zeros((total, total), dtype=complex)
            m[offset:offset + d, offset:offset + d] = x
            return m
        basis.extend(place(b) for b in alg.basis)
        gens.extend(place(g) for g in alg.spanning_set)
        gens.append(place(np.eye(d)))
        offset += d
    return MatrixStarAlgebra(np.array(basis), generators=np.array(gens), name=name, certify=False)


def compress(A: MatrixStarAlgebra, Q: np.ndarray, name: Optional[str] = None,
             tol: Optional[float] = None) -> MatrixStarAlgebra:
    """Q* A Q for an isometry Q whose range reduces A (Q Q* in A')."""
    tol = tolerance('algebra', tol)
    compressed = np.einsum('ai,kab,bj->kij', Q.conj(), A.basis, Q)
    gens = None
    if A.generators is not None:
        gens = np.einsum('ai,kab,bj->kij', Q.conj(), A.generators, Q)
    return MatrixStarAlgebra(span_basis(compressed, tol), generators=gens,
                             name=name or f"{A.name}|Q", tol=tol)


def block_embed(blocks: Sequence[np.ndarray]) -> np.ndarray:
    return block_diag(*blocks)
