"""Command-line runs: sector analyses and measurement scenarios."""

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.states import StateFunctional
from ..core.config import RUN_DEFAULTS, TOLERANCES, get_tool_info, log
from ..core.errors import ScenarioError, SectorLabError
from ..core.i18n import I18n
from ..groups.catalog import catalog_group
from ..groups.characters import irrep_by_label
from ..groups.group import FiniteGroup, load_group
from ..groups.induction import direct_sum
from ..measurement.channels import StateFamily, reachability_check, repeatable_family_check, qc_channel_compare
from ..measurement.coupling import CompositeAlgebra, CouplingDynamics, canonical_coupling, iterate_dynamics
from ..measurement.instruments import Instrument, measurement_scheme_check, posterior_state
from ..measurement.observables import Observable, outcome_distribution
from ..ssb.breaking import phase_diagram, symmetry_status
from ..ssb.field_system import build_field_system
from ..ssb.hat_algebra import build_hat_algebra, covariance_residuals, induced_rep
from ..ssb.relations import verify_relations
from ..ssb.sectors import PSI_MODES, SectorChannel, check_channel, sector_fiber, sector_spectrum
from ..ssb.vacua import degenerate_vacua, goldstone_witnesses
from .report import FORMATS, emit_report

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: Optional[str] = None
    subgroup: Optional[str] = None
    rep: str = "regular"
    scenario: Optional[str] = None
    tolerance: Optional[float] = None
    seed: int = RUN_DEFAULTS['seed']
    out: Optional[str] = None
    format: str = RUN_DEFAULTS['format']
    language: str = RUN_DEFAULTS['language']
    psi_mode: str = "vacuum"

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise ScenarioError(f"Tolerance must be positive, got {self.tolerance}")
        if not 0 <= self.seed < 2 ** 64:
            raise ScenarioError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.format not in FORMATS:
            raise ScenarioError(f"Unknown report format '{self.format}'", details={"available": list(FORMATS)})

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            group=getattr(args, "group", None),
            subgroup=getattr(args, "subgroup", None),
            rep=getattr(args, "rep", "regular"),
            scenario=getattr(args, "scenario", None),
            tolerance=args.tolerance,
            seed=args.seed,
            out=args.out,
            format=args.format,
            language=args.language,
            psi_mode=getattr(args, "psi_mode", "vacuum"),
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sectors", description="Superselection sectors of broken symmetries "
                                                                  "and measurement schemes on finite models")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None, help="algebra/representation tolerance override")
    common.add_argument("--seed", type=int, default=RUN_DEFAULTS['seed'])
    common.add_argument("--out", default=None, help="report path (stdout when omitted)")
    common.add_argument("--format", default=RUN_DEFAULTS['format'], choices=FORMATS)
    common.add_argument("--language", default=RUN_DEFAULTS['language'], help="catalog for text reports")

    sub = parser.add_subparsers(dest="command", required=True)
    analyze = sub.add_parser("analyze", parents=[common], help="sector analysis of H <= G")
    analyze.add_argument("--group", required=True, help="group-spec JSON path or catalog:<name>")
    analyze.add_argument("--subgroup", required=True, help="subgroup label, 'trivial' or 'whole'")
    analyze.add_argument("--rep", default="regular", help="'regular' or sum:<irrep>,<irrep>,...")
    analyze.add_argument("--psi-mode", dest="psi_mode", default="vacuum", choices=PSI_MODES)

    measure = sub.add_parser("measure", parents=[common], help="measurement scenario")
    measure.add_argument("--scenario", required=True, help="scenario JSON path")
    return parser


@contextmanager
def run_settings(config: RunConfig) -> Iterator[None]:
    """Apply the seed and tolerance override for the duration of a run."""
    saved_tol = dict(TOLERANCES)
    saved_seed = RUN_DEFAULTS['seed']
    RUN_DEFAULTS['seed'] = config.seed
    if config.tolerance is not None:
        TOLERANCES['algebra'] = config.tolerance
        TOLERANCES['rep'] = config.tolerance
    try:
        yield
    finally:
        TOLERANCES.clear()
        TOLERANCES.update(saved_tol)
        RUN_DEFAULTS['seed'] = saved_seed


def _read_json(path: str, what: str) -> Any:
    if not path or not os.path.exists(path):
        raise ScenarioError(f"{what} file not found: {path}", details={"path": path})
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Invalid JSON in {what} file {path}: {e}", details={"path": path}) from e


def resolve_group(source: str) -> FiniteGroup:
    if source.startswith("catalog:"):
        return catalog_group(source.split(":", 1)[1])
    return load_group(_read_json(source, "group spec"))


def resolve_rep(G: FiniteGroup, choice: str):
    if choice in (None, "", "regular"):
        return None
    if choice.startswith("sum:"):
        labels = [s.strip() for s in choice[4:].split(",") if s.strip()]
        if not labels:
            raise ScenarioError("Empty irrep list in --rep sum:")
        return direct_sum([irrep_by_label(G, label) for label in labels])
    raise ScenarioError(f"Unknown representation choice '{choice}'", details={"available": ["regular", "sum:<labels>"]})


def run_sector_analysis(config: RunConfig) -> Tuple[Dict, int]:
    G = resolve_group(config.group)
    H = G.subgroup(config.subgroup)
    fs = build_field_system(G, H, resolve_rep(G, config.rep))
    hat = build_hat_algebra(fs)
    ind = induced_rep(fs, hat)
    spectrum = sector_spectrum(fs)
    channel = SectorChannel(fs, spectrum, mode=config.psi_mode)

    residuals = covariance_residuals(ind, hat)
    relations = verify_relations(fs, hat)
    fibers = [sector_fiber(fs, eta) for eta in dict.fromkeys(e for e, _ in spectrum.pairs)]
    witnesses = goldstone_witnesses(fs, channel) if not H.is_whole() else None
    channel_check = check_channel(channel)

    failures: List[str] = []
    if not relations["passed"]:
        failures.extend(f"relations.{k}" for k, v in relations.items() if isinstance(v, dict) and not v["passed"])
    failures.extend(f"fiber.{f.eta}" for f in fibers if not f.agree)
    if spectrum.fibered_centre_dim != spectrum.expected_centre_dim:
        failures.append("spectrum.fibered_centre_dim")
    limits = {"covariance": 1e-10, "translation": 1e-10, "unitary_rep": 1e-12, "compatibility": 1e-12}
    failures.extend(f"covariance.{k}" for k, limit in limits.items() if residuals[k] > limit)
    if channel_check.invariance_spread > 1e-12:
        failures.append("channel.invariance")
    if channel_check.round_trip_error is not None and channel_check.round_trip_error > 1e-8:
        failures.append("channel.round_trip")

    report = {
        "tool": get_tool_info(),
        "command": "analyze",
        "seed": config.seed,
        "group": {"name": G.name, "order": G.order, "subgroup": H.label, "subgroup_order": H.order,
                  "index": H.index, "normal": H.is_normal(), "rep": fs.V.label},
        "dimensions": {**fs.dimensions(), "F_hat": hat.dim, "H_hat": ind.space.dim},
        "branching": spectrum.table,
        "spectrum": spectrum,
        "fibers": fibers,
        "symmetry": {
            G.name: symmetry_status(hat.algebra, hat.action),
            H.label: symmetry_status(hat.algebra, hat.action, H),
        },
        "phase_diagram": {
            G.name: phase_diagram(hat.algebra, hat.action),
            H.label: phase_diagram(hat.algebra, hat.action, H),
        },
        "vacua": degenerate_vacua(fs),
        "witnesses": witnesses,
        "channel": channel_check,
        "covariance": residuals,
        "relations": relations,
        "verification": {"passed": not failures, "failures": failures},
    }
    return report, EXIT_OK if not failures else EXIT_VERIFICATION_FAILED


def decode_matrix(raw, what: str) -> np.ndarray:
    """Real nested lists, or [re, im] pairs."""
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"Malformed matrix for {what}: {e}") from e
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise ScenarioError(f"{what} must be a square matrix of numbers or [re, im] pairs")


def _state(raw, n: int, what: str) -> StateFunctional:
    if isinstance(raw, dict) and "vector" in raw:
        vec = np.asarray(raw["vector"], dtype=float)
        psi = vec[:, 0] + 1j * vec[:, 1] if vec.ndim == 2 else vec.astype(complex)
        state = StateFunctional.from_vector(psi, label=what)
    elif isinstance(raw, str) and raw == "maximally_mixed":
        state = StateFunctional.maximally_mixed(n)
    else:
        state = StateFunctional(decode_matrix(raw, what), label=what)
    if state.dim != n:
        raise ScenarioError(f"{what} lives on C^{state.dim}, observable on C^{n}")
    return state


def _coupling(raw, A: Observable) -> CouplingDynamics:
    composite = CompositeAlgebra.for_observable(A)
    if raw in (None, "canonical"):
        return canonical_coupling(A)
    if raw == "identity":
        return CouplingDynamics.identity(composite)
    if isinstance(raw, dict) and "unitary" in raw:
        return CouplingDynamics.from_unitary(composite, decode_matrix(raw["unitary"], "coupling unitary"))
    if isinstance(raw, dict) and "cp_kraus" in raw:
        return CouplingDynamics.from_kraus(composite, [decode_matrix(k, "Kraus operator") for k in raw["cp_kraus"]])
    raise ScenarioError(f"Unknown coupling {raw!r}", details={"available": ["canonical", "identity", "unitary", "cp_kraus"]})


def _family(raw, A: Observable) -> StateFamily:
    if raw in (None, "eigenstates"):
        return StateFamily.eigenstates(A)
    if raw == "maximally_mixed":
        return StateFamily.maximally_mixed(A)
    return StateFamily([_state(r, A.n, f"family[{i}]") for i, r in enumerate(raw)])


def run_measurement_scenario(config: RunConfig) -> Tuple[Dict, int]:
    doc = _read_json(config.scenario, "scenario")
    if not isinstance(doc, dict) or "observable" not in doc:
        raise ScenarioError("Scenario must be a JSON object with an 'observable'")
    A = Observable(decode_matrix(doc["observable"], "observable"))
    omega = _state(doc.get("initial_state", "maximally_mixed"), A.n, "initial_state")
    dynamics = _coupling(doc.get("coupling"), A)
    mu0 = doc.get("pointer_measure")
    instr = Instrument(A, dynamics, mu0)
    queries = doc.get("queries") or {}

    scheme = measurement_scheme_check(A, dynamics, instr.mu0)
    normalization = abs(instr.probability(range(A.m), omega) - 1.0)
    report: Dict[str, Any] = {
        "tool": get_tool_info(),
        "command": "measure",
        "scenario": doc.get("name", os.path.basename(config.scenario)),
        "spectrum": A.spectrum,
        "distribution": outcome_distribution(A, omega),
        "scheme_check": scheme,
        "normalization_residual": normalization,
        "instrument": [],
        "posteriors": [],
    }
    for values in queries.get("outcome_sets", []):
        delta = A.outcomes_for(values)
        report["instrument"].append({"outcomes": [float(A.spectrum[a]) for a in delta],
                                     "probability": instr.probability(delta, omega)})
    for value in queries.get("posteriors", []):
        a = A.index_of(value)
        post = posterior_state(instr, omega, a)
        report["posteriors"].append({"outcome": float(A.spectrum[a]), "density": post.density,
                                     "repeat_probability": outcome_distribution(A, post)[a]})
    if "family" in queries or "reachability" in queries:
        family = _family((queries.get("reachability") or {}).get("family", queries.get("family")), A)
        report["repeatability"] = repeatable_family_check(A, family)
        report["qc_discrepancy"] = qc_channel_compare(A, family)
        reach = queries.get("reachability")
        if reach:
            target = _state(reach["target"], A.n, "target")
            steps = int(reach.get("steps", 1))
            report["reachability"] = reachability_check(target, omega, instr.mu0,
                                                        iterate_dynamics(dynamics, steps), family)

    failures = []
    if not scheme.passed:
        failures.append("scheme_check")
    if normalization > 1e-10:
        failures.append("normalization")
    report["verification"] = {"passed": not failures, "failures": failures}
    return report, EXIT_OK if not failures else EXIT_VERIFICATION_FAILED


class SectorsCLI:
    """Dispatch a parsed command to its runner and write the report."""

    def __init__(self, i18n: I18n):
        self.i18n = i18n
        self.handlers: Dict[str, Callable[[RunConfig], Tuple[Dict, int]]] = {
            "analyze": run_sector_analysis,
            "measure": run_measurement_scenario,
        }

    def handle(self, config: RunConfig) -> int:
        handler = self.handlers.get(config.command)
        if handler is None:
            log(f"❌ {self.i18n.get('run.unknown_command', command=config.command)}")
            return EXIT_INPUT_ERROR
        log(self.i18n.get('run.starting'))
        try:
            with run_settings(config):
                report, status = handler(config)
        except SectorLabError as e:
            log(f"❌ {self.i18n.get('run.input_error')}: {e.message}")
            if e.details:
                log(f"   {json.dumps(e.to_dict()['details'], sort_keys=True, default=str)}")
            return EXIT_INPUT_ERROR
        except (OSError, ValueError) as e:
            log(f"❌ {self.i18n.get('run.input_error')}: {e}")
            return EXIT_INPUT_ERROR

        self.write(emit_report(report, config.format, self.i18n), config.out)
        if status == EXIT_VERIFICATION_FAILED:
            log(f"❌ {self.i18n.get('run.verification_failed')}: {', '.join(report['verification']['failures'])}")
        log(self.i18n.get('run.finished', status=status))
        return status

    @staticmethod
    def write(payload: bytes, out: Optional[str]):
        if out:
            with open(out, 'wb') as f:
                f.write(payload)
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else EXIT_OK
    try:
        config = RunConfig.from_args(args)
    except ScenarioError as e:
        log(f"❌ {e.message}")
        return EXIT_INPUT_ERROR
    return SectorsCLI(I18n(config.language)).handle(config)
