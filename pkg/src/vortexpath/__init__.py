"""Continuation solver for generalized vortex equations on the flat torus.

Submodules: ``geometry`` (grid, spectral calculus, Green solve), ``bundle``
(theta-function background section), ``equation`` (parameter families,
residual, Jacobian), ``estimates`` (hypothesis flags and runtime monitors),
``solver`` (Newton and path continuation), ``stability`` (exact Chern-character
arithmetic) and ``cli``.
"""

from .bundle import LineBundleData, make_background
from .equation import Family, VortexParams, make_params, residual
from .errors import (
    AdmissibilityError,
    ConfigurationError,
    ConsistencyError,
    ConvergenceError,
    DenominatorError,
    GridMismatch,
    PathFailure,
    VortexError,
)
from .estimates import EstimateReport, HypothesisFlags, assess, check_hypotheses
from .geometry import ScalarField, SurfaceGrid, make_grid
from .report import emit_report
from .solver import PathSpec, SolverState, continue_path, newton_solve, roundtrip, uniqueness_roundtrip
from .stability import VortexBundleSpec, gieseker_verdict

__version__ = "0.1.0"
