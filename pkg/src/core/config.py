"""Configuration module for ssb-sectors."""

import os
import sys
from typing import Dict, Optional, Tuple


def log(message: str):
    """Log to stderr - reports on stdout/files stay clean"""
    if os.getenv('SSB_QUIET', 'false').lower() == 'true':
        return
    print(f"[SSB-SECTORS] {message}", file=sys.stderr, flush=True)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        log(f"⚠️  Ignoring non-numeric {name}={raw!r}, using {default}")
        return default
    if value <= 0:
        log(f"⚠️  Ignoring non-positive {name}={raw!r}, using {default}")
        return default
    return value


# Numerical tolerances
TOLERANCES = {
    'rep': _env_float('SSB_TOL_REP', 1e-9),
    'rounding': _env_float('SSB_TOL_ROUNDING', 1e-6),
    'algebra': _env_float('SSB_TOL_ALGEBRA', 1e-9),
    'state': _env_float('SSB_TOL_STATE', 1e-10),
    'spectral': _env_float('SSB_TOL_SPECTRAL', 1e-9),
    'reach': _env_float('SSB_TOL_REACH', 1e-8),
}

# Run defaults shared by the library and the CLI
RUN_DEFAULTS = {
    'seed': int(os.getenv('SSB_SEED', 20240601)),
    'format': os.getenv('SSB_REPORT_FORMAT', 'json'),
    'language': os.getenv('SSB_LANGUAGE', os.getenv('LANG', 'en_US')).split('.')[0] or 'en_US',
    'max_retries': 3,
    'covariance_samples': 100,
}


def tolerance(name: str, override: Optional[float] = None) -> float:
    """Resolve a tolerance, preferring an explicit override."""
    if override is not None:
        return float(override)
    return TOLERANCES[name]


def initialize_libraries() -> Tuple[bool, bool, Dict[str, str]]:
    """
    Check the numerical stack and return its status.

    Returns:
        Tuple of (numpy_available, scipy_available, versions)
    """
    numpy_available = False
    scipy_available = False
    versions: Dict[str, str] = {}

    try:
        import numpy
        numpy_available = True
        versions['numpy'] = numpy.__version__
        log(f"✅ numpy {numpy.__version__} loaded")
    except ImportError as e:
        log(f"❌ Could not import numpy: {e}")

    try:
        import scipy
        scipy_available = True
        versions['scipy'] = scipy.__version__
        log(f"✅ scipy {scipy.__version__} loaded")
    except ImportError as e:
        log(f"❌ Could not import scipy: {e}")

    return numpy_available, scipy_available, versions


def get_tool_info() -> dict:
    """Get tool information embedded in reports."""
    return {
        "name": os.getenv("SSB_TOOL_NAME", "ssb-sectors"),
        "version": os.getenv("SSB_TOOL_VERSION", "1.0.0")
    }
