"""Error hierarchy for ssb-sectors.

Every error renders to the same result payload the CLI prints, so callers
can treat failures uniformly: ``{"success": False, "error", "type", "details"}``.
"""

from typing import Any, Dict, Optional


class SectorLabError(Exception):
    """Base class for all library errors."""

    error_type = "error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "success": False,
            "error": self.message,
            "type": self.error_type,
            "details": self.details,
        }


class GroupLoadError(SectorLabError):
    """Invalid group or subgroup data."""

    error_type = "group_load_error"

    def __init__(self, message: str, triple=None, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        if triple is not None:
            details["triple"] = [int(x) for x in triple]
        super().__init__(message, details)
        self.triple = tuple(int(x) for x in triple) if triple is not None else None


class RepresentationError(SectorLabError):
    error_type = "representation_error"


class CharacterTableError(RepresentationError):
    error_type = "character_table_error"


class ConsistencyError(SectorLabError):
    """Non-integer multiplicity or similar internal inconsistency."""

    error_type = "consistency_error"


class AlgebraError(SectorLabError):
    error_type = "algebra_error"


class CentreError(AlgebraError):
    error_type = "centre_error"


class StateError(SectorLabError):
    error_type = "state_error"


class EquivarianceError(SectorLabError):
    error_type = "equivariance_error"

    def __init__(self, message: str, coset: Optional[int] = None, details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        if coset is not None:
            details["coset"] = int(coset)
        super().__init__(message, details)
        self.coset = coset


class SectorError(SectorLabError):
    error_type = "sector_error"


class ChannelError(SectorLabError):
    error_type = "channel_error"


class ObservableError(SectorLabError):
    error_type = "observable_error"


class CouplingError(SectorLabError):
    error_type = "coupling_error"


class InstrumentError(SectorLabError):
    error_type = "instrument_error"


class ScenarioError(SectorLabError):
    """Malformed input document or command-line configuration."""

    error_type = "scenario_error"
