"""
Commands module - Import all subcommand functions
"""

from .run_config import RunConfig
from .series_commands import (
    run_kronecker_command,
    run_reconstruct_command,
    run_criterion_command,
    run_dfinite_command,
)
from .geometry_commands import (
    run_capacity_command,
    run_iota_check_command,
    run_contour_bound_command,
    run_symcheck_command,
)

# Subcommand name -> function
COMMANDS = {
    'kronecker': run_kronecker_command,
    'reconstruct': run_reconstruct_command,
    'criterion': run_criterion_command,
    'capacity': run_capacity_command,
    'contour-bound': run_contour_bound_command,
    'iota-check': run_iota_check_command,
    'dfinite': run_dfinite_command,
    'symcheck': run_symcheck_command,
}

__all__ = [
    'RunConfig',
    'COMMANDS',
    'run_kronecker_command',
    'run_reconstruct_command',
    'run_criterion_command',
    'run_dfinite_command',
    'run_capacity_command',
    'run_iota_check_command',
    'run_contour_bound_command',
    'run_symcheck_command',
]
