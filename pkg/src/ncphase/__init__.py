"""Gaussian states cooling under noncommutative phase-space dynamics."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateCoefficientsError,
    GridResolutionError,
    InvalidArgumentError,
    InvalidStateError,
    NCPhaseError,
    NoRealGaugeError,
    NumericalDegeneracyError,
    TruncationError,
    UnsupportedStateError,
)
from .gaussian_core import (  # noqa: E402
    GaussianState,
    check_bona_fide,
    make_initial_state,
    reduce_to_mode,
    symplectic_form,
    thermal_state,
    wigner_eval,
)
from .metrics import (  # noqa: E402
    FidelitySeries,
    WitnessReport,
    fidelity,
    fidelity_series,
    nonmarkov_witness,
    numerical_derivative,
)
from .nc_dynamics import (  # noqa: E402
    DerivedCoeffs,
    Gauge,
    NCParams,
    Propagator,
    coefficients,
    evolve_unitary,
    params_from_b0,
    params_from_theta_zeta,
    propagator,
    solve_gauge,
)
from .thermal_channel import (  # noqa: E402
    ChannelParams,
    CMScaling,
    TrajectoryConfig,
    TrajectoryPoint,
    composed_trajectory,
    diffuse,
    diffuse_trajectory,
)
