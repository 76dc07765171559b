"""Command-line surface: run configuration, dispatch and reports."""

from .runner import RunConfig, SectorsCLI, build_parser, run_sector_analysis, run_measurement_scenario, main
from .report import emit_report, normalize_results, ReportRenderer

__all__ = [
    'RunConfig', 'SectorsCLI', 'build_parser', 'run_sector_analysis', 'run_measurement_scenario', 'main',
    'emit_report', 'normalize_results', 'ReportRenderer',
]
