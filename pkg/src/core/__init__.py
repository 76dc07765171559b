"""Core module for ssb-sectors: configuration, errors, i18n and shared linear algebra."""

from .i18n import I18n
from .config import TOLERANCES, RUN_DEFAULTS, tolerance, initialize_libraries, get_tool_info, log
from .errors import (
    SectorLabError, GroupLoadError, RepresentationError, CharacterTableError, ConsistencyError,
    AlgebraError, CentreError, StateError, EquivarianceError, SectorError, ChannelError,
    ObservableError, CouplingError, InstrumentError, ScenarioError,
)

__all__ = [
    'I18n', 'TOLERANCES', 'RUN_DEFAULTS', 'tolerance', 'initialize_libraries', 'get_tool_info', 'log',
    'SectorLabError', 'GroupLoadError', 'RepresentationError', 'CharacterTableError', 'ConsistencyError',
    'AlgebraError', 'CentreError', 'StateError', 'EquivarianceError', 'SectorError', 'ChannelError',
    'ObservableError', 'CouplingError', 'InstrumentError', 'ScenarioError',
]
