#!/usr/bin/env python3
"""
SSB Sectors - superselection sectors of broken finite symmetries
Sector analyses of H <= G on finite field systems, and measurement schemes for observables with discrete spectrum.

Usage instructions:
1. Sector analysis: python sectors.py analyze --group catalog:S3 --subgroup Z3
2. Measurement scenario: python sectors.py measure --scenario samples/qubit_canonical.json
3. Reports go to stdout, or to --out <path>; diagnostics go to stderr
4. Tolerances and defaults: SSB_TOL_*, SSB_SEED, SSB_REPORT_FORMAT, SSB_LANGUAGE
"""

import os
import sys

# Add src directory to Python path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src import I18n, RUN_DEFAULTS, TOLERANCES, initialize_libraries, main as run


def log(message: str):
    """Log to stderr - stdout carries the report"""
    if os.getenv('SSB_QUIET', 'false').lower() == 'true':
        return
    print(f"[SSB-SECTORS] {message}", file=sys.stderr, flush=True)


def main(argv=None) -> int:
    """Check the numerical stack, then hand over to the CLI runner."""
    i18n = I18n(RUN_DEFAULTS['language'])

    log(i18n.get('libraries.checking'))
    numpy_available, scipy_available, versions = initialize_libraries()
    if not (numpy_available and scipy_available):
        log(f"❌ {i18n.get('libraries.missing')}")
        return 1

    log(f"🎲 {i18n.get('environment.seed')}: {RUN_DEFAULTS['seed']}")
    log(f"📏 {i18n.get('environment.tolerances')}: "
        + ", ".join(f"{k}={v:g}" for k, v in sorted(TOLERANCES.items())))
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
