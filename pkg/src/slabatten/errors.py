"""Exception and warning types shared across the package."""


class SlabModelError(Exception):
    """Base class for model-specific failures."""


class NegativeDepth(SlabModelError):
    """Depth argument lies in front of the slab entry plane z = 0."""


class OutOfDomain(SlabModelError):
    """Position outside the sampled slab interval [0, L]."""


class FactorizationFailure(SlabModelError):
    """Covariance Cholesky failed even at maximum diagonal jitter.

    Signals an invalid or severely ill-conditioned kernel/grid pair
    (in practice: shape exponents above 2, where the correlation family
    is no longer positive semidefinite).
    """


class DivergentSeries(SlabModelError):
    """Mean-free-path binomial series does not converge (R >= 1)."""


class UnsupportedKernel(SlabModelError):
    """Closed-form evaluation requires the squared-exponential kernel."""


class UnsupportedOrder(SlabModelError):
    """Cumulant order beyond 2, where a Gaussian field contributes nothing."""


class DegenerateStep(SlabModelError):
    """Finite-difference step too small for the floating-point budget."""


class FluctuationWarning(UserWarning):
    """Fluctuation magnitude outside the small-perturbation regime."""


class ReliabilityWarning(UserWarning):
    """Ensemble mean estimate may be unreliable (heavy-tailed weights)."""
