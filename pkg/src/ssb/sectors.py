"""Sector spectrum H\\G x {(eta, gamma)}, fibres, the channel Psi and its readout."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np

from ..algebra.actions import isotypic_projection
from ..algebra.star_algebra import centre, compress, direct_sum_algebra
from ..algebra.states import StateFunctional
from ..core.config import log, tolerance
from ..core.errors import ChannelError, SectorError
from ..groups.characters import UnitaryRep, irreps
from ..groups.induction import BranchingTable, branching_table
from .field_system import FieldSystem

Point = Tuple[int, str, str]            # (right coset, eta label, gamma label)
PSI_MODES = ("vacuum", "tracial")


def _isometry(P: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    evals, evecs = np.linalg.eigh((P + P.conj().T) / 2)
    return evecs[:, evals > 0.5] if evals.size and evals[-1] > tol else evecs[:, :0]


def _restricted(fs: FieldSystem) -> UnitaryRep:
    return UnitaryRep(fs.H, fs.V.matrices[list(fs.H.members)], label=f"{fs.V.label}|{fs.H.label}", validate=False)


@dataclass(frozen=True)
class SectorSpectrum:
    base: FieldSystem
    table: BranchingTable
    cosets: List[int]                               # right-coset indices
    pairs: List[Tuple[str, str]]                    # (eta, gamma) present in V
    gluing: Dict[str, List[str]]                    # gamma -> etas sharing it
    absent_pairs: List[Tuple[str, str]] = field(default_factory=list)
    fibered_centre_dim: int = 0

    @property
    def points(self) -> List[Point]:
        return [(c, eta, gamma) for c in self.cosets for eta, gamma in self.pairs]

    @property
    def expected_centre_dim(self) -> int:
        return len(self.cosets) * len(self.pairs)

    def fiber(self, eta: str) -> List[str]:
        return [g for e, g in self.pairs if e == eta]

    def to_dict(self) -> Dict:
        return {
            "cosets": [self.base.right_cosets.members(c) for c in self.cosets],
            "fiber_pairs": [list(p) for p in self.pairs],
            "points": len(self.points),
            "gluing": {g: list(etas) for g, etas in self.gluing.items()},
            "absent_pairs": [list(p) for p in self.absent_pairs],
            "fibered_centre_dim": self.fibered_centre_dim,
            "expected_centre_dim": self.expected_centre_dim,
        }


class SectorProjections:
    """Isotypic projections P_eta (under H) and P_gamma (under G) of V, and their products."""

    def __init__(self, fs: FieldSystem):
        self.base = fs
        restricted = _restricted(fs)
        self.eta = {e.label: isotypic_projection(restricted, e) for e in irreps(fs.H)}
        self.gamma = {g.label: isotypic_projection(fs.V, g) for g in irreps(fs.G)}

    def joint(self, eta: str, gamma: str) -> np.ndarray:
        return self.eta[eta] @ self.gamma[gamma]

    def rank(self, eta: str, gamma: str) -> int:
        return int(round(np.trace(self.joint(eta, gamma)).real))


def _fibered_centre_dim(fs: FieldSystem, proj: SectorProjections, etas: Sequence[str]) -> int:
    """dim Z of the functions H\\G -> (+)_eta A|P_eta."""
    pieces = []
    for eta in etas:
        Q = _isometry(proj.eta[eta])
        if Q.shape[1]:
            pieces.append(compress(fs.A, Q, name=f"A|{eta}"))
    fibered = direct_sum_algebra(pieces * len(fs.right_cosets), name="A-fibered")
    return centre(fibered).dim


def sector_spectrum(fs: FieldSystem, tol: Optional[float] = None) -> SectorSpectrum:
    table = branching_table(fs.G, fs.H)
    proj = SectorProjections(fs)
    pairs, absent = [], []
    for eta, gamma in table.pairs():
        (pairs if proj.rank(eta, gamma) > 0 else absent).append((eta, gamma))
    if absent:
        log(f"⚠️  {len(absent)} branching pair(s) do not occur in {fs.V.label}; "
            f"use the regular representation to populate every sector")
    gluing: Dict[str, List[str]] = {}
    for eta, gamma in pairs:
        gluing.setdefault(gamma, []).append(eta)
    etas = sorted({e for e, _ in pairs}, key=table.subgroup_labels.index)
    spectrum = SectorSpectrum(fs, table, list(range(len(fs.right_cosets))), pairs, gluing, absent,
                              fibered_centre_dim=_fibered_centre_dim(fs, proj, etas))
    if spectrum.fibered_centre_dim != spectrum.expected_centre_dim:
        log(f"⚠️  Fibered centre has dimension {spectrum.fibered_centre_dim}, "
            f"expected {spectrum.expected_centre_dim}")
    return spectrum


@dataclass(frozen=True)
class SectorFiber:
    eta: str
    by_branching: Set[str]
    by_centre: Set[str]

    @property
    def agree(self) -> bool:
        return self.by_branching == self.by_centre

    def to_dict(self) -> Dict:
        return {"eta": self.eta, "by_branching": sorted(self.by_branching),
                "by_centre": sorted(self.by_centre), "agree": self.agree}


def sector_fiber(fs: FieldSystem, eta: str) -> SectorFiber:
    """{gamma : m(eta, gamma) >= 1}, and the labels of the central projections of A|P_eta."""
    table = branching_table(fs.G, fs.H)
    if eta not in table.subgroup_labels:
        raise SectorError(f"'{eta}' is not an irrep of {fs.H.label}",
                          details={"available": list(table.subgroup_labels)})
    proj = SectorProjections(fs)
    Q = _isometry(proj.eta[eta])
    if Q.shape[1] == 0:
        raise SectorError(f"{eta} does not occur in {fs.V.label} restricted to {fs.H.label}",
                          details={"eta": eta})
    restricted = compress(fs.A, Q, name=f"A|{eta}")
    labels = set()
    for z in centre(restricted).projections:
        lifted = Q @ z @ Q.conj().T
        overlaps = {g: float(np.trace(P @ lifted).real) for g, P in proj.gamma.items()}
        labels.add(max(overlaps, key=overlaps.get))
    return SectorFiber(eta, set(table.fiber(eta)), labels)


class SectorChannel:
    """The c->q channel Psi: A_d -> functions on the sector spectrum.

    Psi(B)(c, eta, gamma) = Tr(rho_{eta,gamma} tau_{x_c}(B)), with rho the
    sector state at the identity coset. ``vacuum`` takes rho as the H-twirl
    of the vacuum vector compressed to P^{eta,gamma}; ``tracial`` takes the
    normalized projection itself.
    """

    def __init__(self, fs: FieldSystem, spectrum: Optional[SectorSpectrum] = None, mode: str = "vacuum"):
        if mode not in PSI_MODES:
            raise ChannelError(f"Unknown sector-state mode '{mode}'", details={"available": list(PSI_MODES)})
        self.base = fs
        self.spectrum = spectrum or sector_spectrum(fs)
        self.mode = mode
        self.projections = SectorProjections(fs)

    @cached_property
    def sector_states(self) -> Dict[Tuple[str, str], np.ndarray]:
        fs = self.base
        U = fs.V.matrices[list(fs.H.members)]
        states = {}
        for eta, gamma in self.spectrum.pairs:
            P = self.projections.joint(eta, gamma)
            xi = P[:, 0] if self.mode == "vacuum" else None
            if xi is not None and np.linalg.norm(xi) > 1e-10:
                xi = xi / np.linalg.norm(xi)
                rho = np.einsum('hab,b,c,hdc->ad', U, xi, xi.conj(), U.conj()) / len(U)
            else:
                if self.mode == "vacuum":
                    log(f"⚠️  Vacuum vector has no component in sector ({eta}, {gamma}); using the tracial state")
                rho = P / np.trace(P).real
            states[(eta, gamma)] = rho
        return states

    def point_density(self, point: Point) -> np.ndarray:
        """V(x_c)* rho V(x_c), the density of the sector state at a spectrum point."""
        c, eta, gamma = point
        x = self.base.right_cosets.representatives[c]
        Vx = self.base.V.matrices[x]
        return Vx.conj().T @ self.sector_states[(eta, gamma)] @ Vx

    @cached_property
    def densities(self) -> np.ndarray:
        return np.array([self.point_density(p) for p in self.spectrum.points])

    def values(self, B: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
        """Psi(B) on every spectrum point, in ``spectrum.points`` order."""
        B = np.asarray(B, dtype=complex)
        if B.shape != (self.base.n, self.base.n):
            raise ChannelError(f"Expected a {self.base.n}x{self.base.n} matrix, got {B.shape}")
        if not self.base.A_d.contains(B, tol):
            raise ChannelError("Argument of Psi lies outside A_d",
                               details={"residual": self.base.A_d.membership_residual(B)})
        return np.einsum('pij,ji->p', self.densities, B)

    def weights(self, mu: Union[Mapping[Point, float], Sequence[float]], tol: float = 1e-10) -> np.ndarray:
        points = self.spectrum.points
        if isinstance(mu, Mapping):
            known = set(points)
            unknown = [p for p in mu if tuple(p) not in known]
            if unknown:
                raise ChannelError(f"Weights given on points outside the spectrum: {unknown[:3]}")
            given = {tuple(p): float(v) for p, v in mu.items()}
            w = np.array([given.get(p, 0.0) for p in points])
        else:
            w = np.asarray(mu, dtype=float)
            if w.shape != (len(points),):
                raise ChannelError(f"Expected {len(points)} weights, got shape {w.shape}")
        if np.any(w < -tol):
            raise ChannelError("Weights must be non-negative", details={"min": float(w.min())})
        if abs(w.sum() - 1.0) > tol:
            raise ChannelError(f"Weights sum to {w.sum():.12g}, not 1", details={"sum": float(w.sum())})
        self._check_gluing(w, tol)
        return w

    def _check_gluing(self, w: np.ndarray, tol: float):
        index = {p: i for i, p in enumerate(self.spectrum.points)}
        for gamma, etas in self.spectrum.gluing.items():
            for c in self.spectrum.cosets:
                values = [w[index[(c, eta, gamma)]] for eta in etas]
                if max(values) - min(values) > tol:
                    raise ChannelError(f"Weights violate the gluing constraint for {gamma} on coset {c}",
                                       details={"gamma": gamma, "coset": c, "etas": list(etas),
                                                "values": values})

    def dual(self, mu, tol: float = 1e-10) -> StateFunctional:
        """Psi*(mu) = sum_p mu(p) omega_p as a state on A_d."""
        w = self.weights(mu, tol)
        rho = np.tensordot(w, self.densities, axes=1)
        return StateFunctional(rho, algebra=self.base.A_d, label="Psi*(mu)")


def psi_channel(fs: FieldSystem, B: np.ndarray, mode: str = "vacuum") -> Dict[Point, complex]:
    channel = SectorChannel(fs, mode=mode)
    return dict(zip(channel.spectrum.points, channel.values(B)))


def psi_dual(fs: FieldSystem, mu, mode: str = "vacuum") -> StateFunctional:
    return SectorChannel(fs, mode=mode).dual(mu)


@dataclass(frozen=True)
class Readout:
    marginal: np.ndarray                        # minimum-norm weight per right coset
    sector_marginals: Dict[str, np.ndarray]     # gamma -> weight per right coset
    sector_weights: Dict[str, float]            # gamma -> total weight
    identifiable_sectors: List[str]
    glued_weights: Dict[Tuple[int, str], float]
    rank: int
    unknowns: int
    residual: float
    marginal_identifiable: bool

    @property
    def full_rank(self) -> bool:
        return self.rank == self.unknowns

    @property
    def affine_solution_set(self) -> bool:
        return not self.full_rank

    @property
    def identified_marginal(self) -> np.ndarray:
        """Coset weights carried by the identifiable sectors; exact for exact data."""
        total = np.zeros(len(self.marginal))
        for gamma in self.identifiable_sectors:
            total = total + self.sector_marginals[gamma]
        return total

    @property
    def identified_mass(self) -> float:
        return float(sum(self.sector_weights[g] for g in self.identifiable_sectors))

    @property
    def conditional_marginal(self) -> Optional[np.ndarray]:
        """H\\G-marginal of mu conditioned on the identifiable sectors, or None."""
        mass = self.identified_mass
        return self.identified_marginal / mass if mass > 1e-12 else None

    def to_dict(self) -> Dict:
        conditional = self.conditional_marginal
        return {
            "marginal": self.marginal,
            "sector_weights": dict(self.sector_weights),
            "identifiable_sectors": list(self.identifiable_sectors),
            "identified_marginal": self.identified_marginal,
            "conditional_marginal": conditional,
            "rank": self.rank,
            "unknowns": self.unknowns,
            "full_rank": self.full_rank,
            "affine_solution_set": self.affine_solution_set,
            "marginal_identifiable": self.marginal_identifiable,
            "residual": self.residual,
        }


def _in_row_space(rows: np.ndarray, row_space: np.ndarray, tol: float = 1e-8) -> bool:
    projected = rows @ row_space.T @ row_space
    return bool(np.max(np.abs(projected - rows), initial=0.0) <= tol)


def order_parameter_readout(channel: SectorChannel, state: StateFunctional,
                            tol: Optional[float] = None) -> Readout:
    """Recover the H\\G-marginal of mu from Psi*(mu).

    Unknowns are the glued weights nu(c, gamma); the equations are
    state(b) = sum nu(c, gamma) sum_eta Psi(b)(c, eta, gamma) over a basis
    b of A_d, plus normalization. The data only determine functionals of
    nu in the row space of that system, so identifiability is decided per
    sector gamma. The total weight of every sector is always determined.
    The coset profile of gamma is determined only when its k glued point
    states are linearly independent on A_d. One-dimensional gamma have
    G-invariant sector states, and for non-normal H states on A_d only see
    double cosets, so neither is ever resolved. Tracial mode resolves nothing.
    """
    tol = tolerance('algebra', tol)
    spectrum = channel.spectrum
    basis = channel.base.A_d.basis
    unknowns = [(c, gamma) for c in spectrum.cosets for gamma in spectrum.gluing]
    index = {p: i for i, p in enumerate(spectrum.points)}
    values = np.einsum('pij,kji->kp', channel.densities, basis)
    counts = np.array([len(spectrum.gluing[gamma]) for _, gamma in unknowns], dtype=float)

    M = np.zeros((len(basis) + 1, len(unknowns)), dtype=complex)
    for j, (c, gamma) in enumerate(unknowns):
        for eta in spectrum.gluing[gamma]:
            M[:-1, j] += values[:, index[(c, eta, gamma)]]
    M[-1] = counts
    rhs = np.append(state.expectations(basis), 1.0)

    system = np.vstack([M.real, M.imag])
    target = np.concatenate([rhs.real, rhs.imag])
    nu, _, rank, _ = np.linalg.lstsq(system, target, rcond=tol)
    residual = float(np.linalg.norm(system @ nu - target))
    _, _, vh = np.linalg.svd(system, full_matrices=False)
    row_space = vh[:int(rank)]

    k = len(spectrum.cosets)
    marginal_rows = np.zeros((k, len(unknowns)))
    sector_rows = {gamma: np.zeros((k, len(unknowns))) for gamma in spectrum.gluing}
    for j, (c, gamma) in enumerate(unknowns):
        marginal_rows[c, j] = counts[j]
        sector_rows[gamma][c, j] = counts[j]
    identifiable = [g for g, rows in sector_rows.items() if _in_row_space(rows, row_space)]
    if len(identifiable) < len(sector_rows):
        log(f"Coset profile not determined for sector(s) "
            f"{[g for g in sector_rows if g not in identifiable]}; marginal is the minimum-norm estimate")
    return Readout(
        marginal=marginal_rows @ nu,
        sector_marginals={g: rows @ nu for g, rows in sector_rows.items()},
        sector_weights={g: float(rows.sum(axis=0) @ nu) for g, rows in sector_rows.items()},
        identifiable_sectors=identifiable,
        glued_weights={u: float(v) for u, v in zip(unknowns, nu)},
        rank=int(rank),
        unknowns=len(unknowns),
        residual=residual,
        marginal_identifiable=_in_row_space(marginal_rows, row_space),
    )


@dataclass(frozen=True)
class ChannelCheck:
    invariance_spread: float                 # max over a basis of A of the spread of Psi(a) across cosets
    identifiable_sectors: List[str]
    round_trip_error: Optional[float]        # None when no sector is identifiable

    def passed(self, tol: float = 1e-8) -> bool:
        return self.invariance_spread <= tol and (self.round_trip_error is None or self.round_trip_error <= tol)

    def to_dict(self) -> Dict:
        return {"invariance_spread": self.invariance_spread,
                "identifiable_sectors": list(self.identifiable_sectors),
                "round_trip_error": self.round_trip_error}


def check_channel(channel: SectorChannel) -> ChannelCheck:
    """Coset independence of Psi on A, and the readout of a unit mass glued on each coset."""
    spectrum = channel.spectrum
    k, p = len(spectrum.cosets), len(spectrum.pairs)
    spread = 0.0
    for a in channel.base.A.basis:
        by_coset = channel.values(a).reshape(k, p)
        spread = max(spread, float(np.max(np.abs(by_coset - by_coset[0]), initial=0.0)))
    identifiable: List[str] = []
    error: Optional[float] = None
    for c in spectrum.cosets:
        mu = {(c, eta, gamma): 1.0 / p for eta, gamma in spectrum.pairs}
        readout = order_parameter_readout(channel, channel.dual(mu))
        identifiable = readout.identifiable_sectors
        conditional = readout.conditional_marginal
        if conditional is None:
            continue
        delta = np.zeros(k)
        delta[c] = 1.0
        err = float(np.max(np.abs(conditional - delta)))
        error = err if error is None else max(error, err)
    return ChannelCheck(spread, identifiable, error)
