"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid synthesis or benchmark configuration."""


class SpectralError(RuntimeError):
    """A spectral-domain operation could not be carried out."""


class UnwrapError(RuntimeError):
    """Phase unwrapping failed for the requested method."""


class RootFindError(RuntimeError):
    """Polynomial factorization failed or did not converge.

    Carries the best scaled residual reached, when one is available.
    """

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class EstimationError(RuntimeError):
    """Wavelet estimation failed for every trace in the gather."""
