"""ssb-sectors - superselection sectors of broken finite symmetries and measurement schemes."""

from .core import I18n, TOLERANCES, RUN_DEFAULTS, initialize_libraries, SectorLabError
from .groups import catalog_group, load_group
from .ssb import build_field_system, sector_spectrum
from .measurement import Observable, canonical_coupling
from .cli import SectorsCLI, RunConfig, build_parser, main

__all__ = [
    'I18n', 'TOLERANCES', 'RUN_DEFAULTS', 'initialize_libraries', 'SectorLabError',
    'catalog_group', 'load_group',
    'build_field_system', 'sector_spectrum',
    'Observable', 'canonical_coupling',
    'SectorsCLI', 'RunConfig', 'build_parser', 'main',
]

__version__ = "1.0.0"
