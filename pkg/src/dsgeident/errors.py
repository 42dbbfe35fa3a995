"""Exception hierarchy shared across the toolkit.

Every domain error derives from :class:`ToolkitError` so callers (the CLI,
the KL optimizers, the SMC sampler) can distinguish model-domain failures
from genuine bugs and translate them into infinite objective values or
nonzero exit codes.
"""


class ToolkitError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidParamsError(ToolkitError, ValueError):
    """Parameter vector violates a documented invariant."""


class CalibrationInconsistentError(ToolkitError, ValueError):
    """Steady-state calibration objects do not satisfy their identities."""


class SingularPencilError(ToolkitError):
    """The matrix pencil (gamma0, gamma1) is singular beyond tolerance."""


class NoStableSolutionError(ToolkitError):
    """Too many unstable roots: no stable solution exists.

    Carries the :class:`~dsgeident.lre.Determinacy` diagnostics on the
    ``determinacy`` attribute when available.
    """

    def __init__(self, message, determinacy=None):
        super().__init__(message)
        self.determinacy = determinacy


class MissingProjectionError(ToolkitError):
    """Indeterminate solution used without a sunspot projection matrix."""


class NonPSDCovarianceError(ToolkitError, ValueError):
    """Covariance matrix is not symmetric positive semidefinite."""


class SingularDenominatorError(ToolkitError, ZeroDivisionError):
    """A closed-form denominator vanishes; the message names it."""


class NoConvergenceError(ToolkitError):
    """Fixed-point iteration failed to converge within the cap."""


class NearSingularResolventError(ToolkitError):
    """(I - theta1 e^{-i omega}) is numerically singular at some omega."""


class GridMismatchError(ToolkitError, ValueError):
    """Two spectral grids do not share identical frequencies."""


class SingularSpectrumError(ToolkitError):
    """A spectral density matrix is too ill-conditioned to invert."""


class BandRestrictedError(ToolkitError, ValueError):
    """Operation requires a full-band grid but got a band-restricted one."""


class ParseError(ToolkitError, ValueError):
    """A data file failed to parse; the message names row and column."""


class MissingColumnError(ToolkitError, KeyError):
    """A required column is absent from a data file."""


class LyapunovFailureError(ToolkitError):
    """The discrete Lyapunov equation for the initial state failed."""


class NonFiniteLikelihoodError(ToolkitError):
    """Likelihood evaluated to a non-finite value."""


class DegenerateParticlesError(ToolkitError):
    """Effective sample size collapsed below the survivable floor."""


class PriorSupportEmptyError(ToolkitError):
    """No prior draw satisfied the support restrictions."""


class NotConvergedError(ToolkitError):
    """Posterior summary requested before the tempering schedule finished."""


class NoFeasiblePointError(ToolkitError):
    """No candidate satisfied the optimization constraints."""


class AllStartsFailedError(ToolkitError):
    """Every multi-start optimization attempt failed."""


class BoundaryRootWarning(UserWarning):
    """A generalized eigenvalue lies within 1e-6 of the unit circle."""
