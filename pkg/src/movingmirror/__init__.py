"""Nonperturbative photon emission from an oscillating perfect mirror.

Sideband amplitudes of TM-polarized vacuum fluctuations scattered by a plane
mirror oscillating at frequency Omega0, the angular emission rate they imply,
and the motion-induced shift of the grazing-wave resonance.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BranchPointError,
    DegenerateDriveError,
    MovingMirrorError,
    NoPeakError,
    NonrelativisticWarning,
    SingularSystemError,
)
from .kernel import (  # noqa: E402
    ChannelParams,
    LineshapeParams,
    Regime,
    Wavenumber,
    h_aux,
    kx_branch,
    lineshape,
    lineshape_integral,
    lineshape_square_integral,
)
from .sidebands import (  # noqa: E402
    SidebandSolution,
    SidebandSystem,
    advanced_coefficients,
    build_system,
    closed_form_solution,
    perturbative_solution,
    solve,
    solve_dense_oracle,
    solve_tridiagonal,
)
from .emission import (  # noqa: E402
    EmissionQuery,
    EmissionSample,
    Method,
    ModeContext,
    kx_smalldelta_approx,
    number_average,
    rate,
    rate_direct,
    rate_from_number,
)
from .resonance import (  # noqa: E402
    ResonanceResult,
    delta_s_analytic,
    delta_s_closed_form,
    delta_s_numeric,
    shift_vs_angle_sweep,
)
from .sweeps import Grid, SweepResult, SweepSpec, convergence_report, default_spec, run_sweep  # noqa: E402
