"""Laser attenuation in a slab with a Gaussian random absorption coefficient.

The package simulates a collimated beam entering a 1-D slab whose
absorption coefficient fluctuates in space as a stationary Gaussian
random field, evaluates the closed-form ensemble-averaged attenuation
law (Beer's decay times a boost factor), and verifies it against a
Monte Carlo ensemble of exact per-path solutions.

Modules
-------
grf
    Correlation kernels, grid covariances, Cholesky path sampling and
    the stochastic path integral.
attenuation
    Deterministic Beer / Beer-Lambert / depth-varying baselines.
medium
    The fluctuating absorption coefficient, its moments and the
    mean-free-path series.
averaged
    Error-function closed forms for the averaged intensity, the drift
    ODE residual and the quadrature cumulant exponent.
montecarlo
    Exact pathwise solutions, reproducible parallel ensembles and the
    lognormal quadrature oracle.
cli
    The `slabatten` batch experiment runner (CSV curves plus report).
"""

from .attenuation import MediumSpec, beer, beer_lambert, beer_variable
from .averaged import (
    AveragedLaw,
    ExponentConvention,
    averaged_intensity,
    averaged_intensity_bl,
    boost_factor,
    cumulant_series_exponent,
    inner_w,
    ode_residual,
    outer_y,
    theta,
)
from .errors import (
    DegenerateStep,
    DivergentSeries,
    FactorizationFailure,
    FluctuationWarning,
    NegativeDepth,
    OutOfDomain,
    ReliabilityWarning,
    SlabModelError,
    UnsupportedKernel,
    UnsupportedOrder,
)
from .grf import (
    CorrelationKernel,
    FieldPath,
    FieldSampler,
    Grid,
    covariance_matrix,
    sample_path,
    stochastic_integral,
)
from .medium import (
    MfpSeries,
    StochasticMedium,
    abs_moment,
    absorption_at,
    mfp_mc_estimate,
    mfp_series,
)
from .montecarlo import (
    EnsembleStats,
    default_depths,
    lognormal_oracle,
    path_intensity,
    path_intensity_em,
    run_ensemble,
)
from .quadrature import ordered_double_integral, square_double_integral

__version__ = "0.1.0"

__all__ = [
    "AveragedLaw",
    "CorrelationKernel",
    "DegenerateStep",
    "DivergentSeries",
    "EnsembleStats",
    "ExponentConvention",
    "FactorizationFailure",
    "FieldPath",
    "FieldSampler",
    "FluctuationWarning",
    "Grid",
    "MediumSpec",
    "MfpSeries",
    "NegativeDepth",
    "OutOfDomain",
    "ReliabilityWarning",
    "SlabModelError",
    "StochasticMedium",
    "UnsupportedKernel",
    "UnsupportedOrder",
    "abs_moment",
    "absorption_at",
    "averaged_intensity",
    "averaged_intensity_bl",
    "beer",
    "beer_lambert",
    "beer_variable",
    "boost_factor",
    "covariance_matrix",
    "cumulant_series_exponent",
    "default_depths",
    "inner_w",
    "lognormal_oracle",
    "mfp_mc_estimate",
    "mfp_series",
    "ode_residual",
    "ordered_double_integral",
    "outer_y",
    "path_intensity",
    "path_intensity_em",
    "run_ensemble",
    "sample_path",
    "square_double_integral",
    "stochastic_integral",
    "theta",
    "__version__",
]
