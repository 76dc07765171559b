"""Degenerate vacua, the sectors over them, and Goldstone-type witnesses."""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..algebra.states import StateFunctional
from ..core.config import tolerance
from ..core.linalg import span_basis
from ..groups.group import Subgroup
from .field_system import FieldSystem
from .sectors import SectorChannel, sector_spectrum


def vacuum_density(fs: FieldSystem) -> np.ndarray:
    """H-twirl of the vector state of e_0."""
    U = fs.V.matrices[list(fs.H.members)]
    omega = U[:, :, 0]
    return np.einsum('ha,hb->ab', omega, omega.conj()) / len(U)


@dataclass(frozen=True)
class Vacuum:
    coset: int
    representative: int
    state: StateFunctional
    stabilizer: Subgroup            # x^-1 H x, unbroken at this vacuum

    def to_dict(self) -> Dict:
        return {
            "coset": self.coset,
            "representative": self.representative,
            "stabilizer": list(self.stabilizer.members),
        }


def degenerate_vacua(fs: FieldSystem) -> List[Vacuum]:
    """One vacuum omega_0 o tau_x per right coset Hx."""
    rho = vacuum_density(fs)
    vacua = []
    for c, x in enumerate(fs.right_cosets.representatives):
        Vx = fs.V.matrices[x]
        state = StateFunctional(Vx.conj().T @ rho @ Vx, algebra=fs.A_d, label=f"vacuum_{c}")
        stabilizer = fs.H.conjugate(fs.G.inv(x))
        vacua.append(Vacuum(c, int(x), state, Subgroup(fs.G, stabilizer.members, label=f"Stab({c})")))
    return vacua


def excited_sectors(fs: FieldSystem) -> Dict[int, List[Tuple[str, str]]]:
    """Fibre pairs (eta, gamma) over each vacuum."""
    spectrum = sector_spectrum(fs)
    return {c: list(spectrum.pairs) for c in spectrum.cosets}


@dataclass(frozen=True)
class WitnessReport:
    psi_sensitivity: np.ndarray         # [basis element, fibre pair]
    vacuum_sensitivity: np.ndarray      # [basis element]
    pairs: List[Tuple[str, str]]
    tol: float

    @property
    def psi_detects(self) -> bool:
        return bool(self.psi_sensitivity.size and self.psi_sensitivity.max() > self.tol)

    @property
    def vacuum_detects(self) -> bool:
        return bool(self.vacuum_sensitivity.size and self.vacuum_sensitivity.max() > self.tol)

    @property
    def detected(self) -> bool:
        return self.psi_detects or self.vacuum_detects

    def sensitive_pairs(self) -> List[Tuple[str, str]]:
        if not self.psi_sensitivity.size:
            return []
        best = self.psi_sensitivity.max(axis=0)
        return [p for p, s in zip(self.pairs, best) if s > self.tol]

    def to_dict(self) -> Dict:
        return {
            "elements": int(self.vacuum_sensitivity.size),
            "psi_sensitivity": {f"{e},{g}": float(s) for (e, g), s in
                                zip(self.pairs, self.psi_sensitivity.max(axis=0) if self.psi_sensitivity.size
                                    else [0.0] * len(self.pairs))},
            "vacuum_sensitivity": float(self.vacuum_sensitivity.max()) if self.vacuum_sensitivity.size else 0.0,
            "sensitive_pairs": [list(p) for p in self.sensitive_pairs()],
            "psi_detects": self.psi_detects,
            "vacuum_detects": self.vacuum_detects,
            "detected": self.detected,
        }


def _spread(values: np.ndarray) -> float:
    return float(np.max(np.abs(values[:, None] - values[None, :]))) if values.size else 0.0


def goldstone_witnesses(fs: FieldSystem, channel: Optional[SectorChannel] = None,
                        tol: Optional[float] = None) -> WitnessReport:
    """Coset sensitivity of elements of A_d orthogonal to A.

    For each basis element b of A_d (-) A: the spread of Psi(b) across
    cosets at every fibre pair, and the spread of the vacuum expectations
    omega_0(tau_x(b)). For abelian G under the regular representation each
    P^{eta,gamma} is V(G)-invariant, so only the vacuum spread can be
    non-zero there.
    """
    tol = tolerance('algebra', tol)
    channel = channel or SectorChannel(fs)
    spectrum = channel.spectrum
    complement = fs.A_d.basis - np.array([fs.A.project(b) for b in fs.A_d.basis])
    basis = span_basis(complement, tol) if len(complement) else complement

    rho = vacuum_density(fs)
    moved = np.array([fs.V.matrices[x].conj().T @ rho @ fs.V.matrices[x]
                      for x in fs.right_cosets.representatives])
    vacuum = np.array([_spread(np.einsum('cij,ji->c', moved, b)) for b in basis])

    k = len(spectrum.cosets)
    table = np.zeros((len(basis), len(spectrum.pairs)))
    for i, b in enumerate(basis):
        values = channel.values(b).reshape(k, len(spectrum.pairs))
        table[i] = [_spread(values[:, j]) for j in range(len(spectrum.pairs))]
    return WitnessReport(table, vacuum, list(spectrum.pairs), tol * 1e3)
