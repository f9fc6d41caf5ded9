"""Exact genus-0 complex and real Gromov-Witten potentials via WDVV-type equations."""

from __future__ import annotations

from .series import (OutOfRangeError, Rational, Ring, Series, SeriesError,
                     StructuralError, format_rational, to_rational)
from .target import ModelError, TargetModel, builtin, load_model, p2, p3
from .potentials import (COMPLEX, REAL, IncompleteTableError, InvariantKey, InvariantTable,
                         assemble_omega, assemble_phi, assemble_phi_phi, extract_invariant)
from .wdvv import (ConsistencyReport, InconsistencyError, SolveReport, cross_consistency,
                   cwdvv_residual, m03_residual, m12_residual, residual_sweep,
                   solve_complex, solve_complex_p2, solve_real, solve_real_p2)

__all__ = [
    "OutOfRangeError",
    "Rational",
    "Ring",
    "Series",
    "SeriesError",
    "StructuralError",
    "format_rational",
    "to_rational",
    "ModelError",
    "TargetModel",
    "builtin",
    "load_model",
    "p2",
    "p3",
    "COMPLEX",
    "REAL",
    "IncompleteTableError",
    "InvariantKey",
    "InvariantTable",
    "assemble_omega",
    "assemble_phi",
    "assemble_phi_phi",
    "extract_invariant",
    "ConsistencyReport",
    "InconsistencyError",
    "SolveReport",
    "cross_consistency",
    "cwdvv_residual",
    "m03_residual",
    "m12_residual",
    "residual_sweep",
    "solve_complex",
    "solve_complex_p2",
    "solve_real",
    "solve_real_p2",
]

__version__ = "0.1.0"
