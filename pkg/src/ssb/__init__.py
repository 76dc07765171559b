"""Broken symmetries: field systems, equivariant algebras, sectors and vacua."""

from .field_system import FieldSystem, build_field_system
from .hat_algebra import build_hat_algebra, induced_rep, covariance_residuals
from .breaking import symmetry_status, phase_diagram
from .sectors import (sector_spectrum, sector_fiber, SectorChannel, psi_channel, psi_dual, order_parameter_readout,
                      check_channel)
from .vacua import degenerate_vacua, excited_sectors, goldstone_witnesses
from .relations import verify_relations

__all__ = [
    'FieldSystem', 'build_field_system',
    'build_hat_algebra', 'induced_rep', 'covariance_residuals',
    'symmetry_status', 'phase_diagram',
    'sector_spectrum', 'sector_fiber', 'SectorChannel', 'psi_channel', 'psi_dual', 'order_parameter_readout',
    'check_channel',
    'degenerate_vacua', 'excited_sectors', 'goldstone_witnesses',
    'verify_relations',
]
