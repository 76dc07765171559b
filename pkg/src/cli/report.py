"""Report serialization: deterministic JSON and i18n text tables."""

import json
import math
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.i18n import I18n

FORMATS = ("json", "text")


def _float(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"Report value {x!r} is not finite")
    value = float('%.12e' % x)
    return 0.0 if value == 0 else value


def normalize_results(obj: Any) -> Any:
    """Plain JSON types: numpy to lists, complex to [re, im], floats rounded to %.12e precision."""
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): normalize_results(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize_results(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return normalize_results(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (set, frozenset)):
        return sorted(normalize_results(v) for v in obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return normalize_results(obj.to_dict())
    raise TypeError(f"Cannot serialize {type(obj).__name__} in a report")


def emit_report(results: Dict, fmt: str = "json", i18n: Optional[I18n] = None) -> bytes:
    """Serialize a run's results; identical results give identical bytes."""
    if fmt not in FORMATS:
        raise ValueError(f"Unknown report format '{fmt}'")
    normalized = normalize_results(results or {})
    if fmt == "json":
        return (json.dumps(normalized, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    return ReportRenderer(i18n or I18n()).render(normalized).encode("utf-8")


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, float) for v in value):
        re, im = value
        return f"{re:.6g}" if abs(im) < 1e-12 else f"{re:.6g}{im:+.6g}i"
    return str(value)


class ReportRenderer:
    """Human-readable rendering of a normalized report."""

    def __init__(self, i18n: I18n):
        self.i18n = i18n

    def render(self, report: Dict) -> str:
        command = report.get("command")
        if command == "analyze":
            content = self._render_analysis(report)
        elif command == "measure":
            content = self._render_measurement(report)
        else:
            content = [self.i18n.get('report.title_generic'), "", self.i18n.get('report.empty')]
            content.extend(self._key_values(report))
        return "\n".join(content) + "\n"

    def _key_values(self, section: Dict, indent: str = "- ") -> List[str]:
        return [f"{indent}{key}: {_fmt(value)}" for key, value in sorted(section.items())
                if not isinstance(value, (dict, list))]

    def _status(self, passed: bool) -> str:
        return self.i18n.get('report.pass') if passed else self.i18n.get('report.fail')

    def _render_analysis(self, report: Dict) -> List[str]:
        group = report.get("group", {})
        content = [self.i18n.get('report.title_analysis', group=group.get("name", "?"),
                                 subgroup=group.get("subgroup", "?")), ""]

        content.append(self.i18n.get('report.dimensions_header'))
        content.extend(self._key_values(report.get("dimensions", {})))
        content.append("")

        branching = report.get("branching")
        if branching:
            content.append(self.i18n.get('report.branching_header'))
            columns = branching["columns"]
            width = max([len(c) for c in columns] + [len(r) for r in branching["rows"]] + [3])
            content.append(" " * (width + 1) + " ".join(c.rjust(width) for c in columns))
            for row, values in zip(branching["rows"], branching["multiplicities"]):
                content.append(row.rjust(width) + " " + " ".join(str(v).rjust(width) for v in values))
            content.append("")

        spectrum = report.get("spectrum")
        if spectrum:
            content.append(self.i18n.get('report.spectrum_header', points=spectrum["points"]))
            for c, members in enumerate(spectrum["cosets"]):
                content.append(f"- {self.i18n.get('report.coset')} {c}: {members}")
            for eta, gamma in spectrum["fiber_pairs"]:
                content.append(f"- ({eta}, {gamma})")
            for gamma, etas in sorted(spectrum["gluing"].items()):
                content.append(f"- {self.i18n.get('report.gluing')} {gamma}: {', '.join(etas)}")
            content.append("")

        for key, status in sorted(report.get("symmetry", {}).items()):
            content.append(self.i18n.get('report.symmetry_line', group=key,
                                         status=self.i18n.get(f"report.{status['status']}"),
                                         orbits=status["orbits"]))
        if report.get("symmetry"):
            content.append("")

        witnesses = report.get("witnesses")
        if witnesses:
            content.append(self.i18n.get('report.witness_header'))
            for pair, value in sorted(witnesses["psi_sensitivity"].items()):
                content.append(f"- ({pair}): {_fmt(value)}")
            content.append(f"- {self.i18n.get('report.vacuum_sensitivity')}: {_fmt(witnesses['vacuum_sensitivity'])}")
            content.append("")

        channel = report.get("channel")
        if channel:
            content.append(self.i18n.get('report.channel_header'))
            content.append(f"- {self.i18n.get('report.invariance_spread')}: {_fmt(channel['invariance_spread'])}")
            content.append(f"- {self.i18n.get('report.identifiable_sectors')}: "
                           f"{', '.join(channel['identifiable_sectors']) or '-'}")
            if channel["round_trip_error"] is not None:
                content.append(f"- {self.i18n.get('report.round_trip_error')}: {_fmt(channel['round_trip_error'])}")
            content.append("")

        relations = report.get("relations")
        if relations:
            content.append(self.i18n.get('report.relations_header'))
            for name, entry in sorted(relations.items()):
                if isinstance(entry, dict):
                    content.append(f"- {name}: {self._status(entry['passed'])}")
            content.append("")
        content.extend(self._verification(report))
        return content

    def _render_measurement(self, report: Dict) -> List[str]:
        content = [self.i18n.get('report.title_measurement', name=report.get("scenario", "?")), ""]
        if "spectrum" in report:
            content.append(self.i18n.get('report.distribution_header'))
            for value, p in zip(report["spectrum"], report.get("distribution", [])):
                content.append(f"- {_fmt(value)}: {_fmt(p)}")
            content.append("")
        scheme = report.get("scheme_check")
        if scheme:
            content.append(self.i18n.get('report.scheme_line', status=self._status(scheme["passed"]),
                                         residual=_fmt(scheme["residual"])))
            content.append("")
        for query in report.get("instrument", []):
            content.append(f"- J({query['outcomes']}): {_fmt(query['probability'])}")
        reach = report.get("reachability")
        if reach:
            content.append(self.i18n.get('report.reachability_header'))
            for t, d in enumerate(reach["distances"]):
                content.append(f"- t={t}: {_fmt(d)}")
            content.append(f"- {self._status(reach['reached'])}")
            content.append("")
        content.extend(self._verification(report))
        return content

    def _verification(self, report: Dict) -> List[str]:
        verification = report.get("verification")
        if not verification:
            return []
        lines = [self.i18n.get('report.verification_line', status=self._status(verification["passed"]))]
        lines.extend(f"- {failure}" for failure in verification.get("failures", []))
        return lines
