"""Shared numerics: clustering, spans, kernels and norms."""

from typing import Iterable, List, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist


def cluster_values(values, tol: float) -> np.ndarray:
    """Label approximately equal (complex) values with cluster indices.

    Values closer than ``tol * max(1, max|v|)`` are connected and each
    connected component becomes one cluster. Labels are ordered by first
    appearance so the output is deterministic.
    """
    values = np.asarray(values, dtype=complex).ravel()
    if values.size == 0:
        return np.zeros(0, dtype=int)
    points = np.column_stack([values.real, values.imag])
    scale = max(1.0, float(np.max(np.abs(values))))
    adjacency = cdist(points, points) < tol * scale
    _, raw = connected_components(adjacency, directed=False)
    relabel = {}
    labels = np.empty(values.size, dtype=int)
    for i, r in enumerate(raw):
        if r not in relabel:
            relabel[r] = len(relabel)
        labels[i] = relabel[r]
    return labels


def cluster_sizes(labels: np.ndarray) -> List[int]:
    return [int(np.sum(labels == c)) for c in range(int(labels.max()) + 1)] if labels.size else []


def span_basis(matrices, tol: float) -> np.ndarray:
    """Trace-orthonormal basis (k, n, n) of the linear span of ``matrices``."""
    mats = np.asarray(matrices, dtype=complex)
    if mats.ndim == 2:
        mats = mats[None]
    n = mats.shape[-1]
    if mats.shape[0] == 0:
        return np.zeros((0, n, n), dtype=complex)
    vectors = mats.reshape(mats.shape[0], -1)
    _, s, vh = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] <= tol:
        return np.zeros((0, n, n), dtype=complex)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vh[:rank].reshape(rank, n, n)


def project_onto(basis: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """Orthogonal projection of ``x`` onto the span of a trace-orthonormal basis.

    Returns (coefficients, projection, residual norm).
    """
    x = np.asarray(x, dtype=complex)
    if basis.shape[0] == 0:
        return np.zeros(0, dtype=complex), np.zeros_like(x), float(np.linalg.norm(x))
    flat = basis.reshape(basis.shape[0], -1)
    coeffs = flat.conj() @ x.ravel()
    proj = (coeffs @ flat).reshape(x.shape)
    return coeffs, proj, float(np.linalg.norm(x - proj))


def hermitian_kernel(gram: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal kernel vectors (columns) of a positive semidefinite Gram matrix.

    The cutoff ``tol * max(1, lambda_max)`` applies to Gram eigenvalues, i.e.
    to squared singular values of the underlying linear map.
    """
    evals, evecs = np.linalg.eigh(gram)
    cutoff = tol * max(1.0, float(evals[-1]) if evals.size else 1.0)
    return evecs[:, evals < cutoff]


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def trace_norm(x: np.ndarray) -> float:
    """Schatten-1 norm."""
    x = np.asarray(x, dtype=complex)
    if np.allclose(x, x.conj().T, atol=1e-14):
        return float(np.sum(np.abs(np.linalg.eigvalsh((x + x.conj().T) / 2))))
    return float(np.sum(np.linalg.svd(x, compute_uv=False)))


def max_residual(pairs: Iterable[Tuple[np.ndarray, np.ndarray]]) -> float:
    worst = 0.0
    for a, b in pairs:
        worst = max(worst, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(a) else 0.0)
    return worst
