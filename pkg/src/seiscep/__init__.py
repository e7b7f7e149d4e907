"""seiscep: spectral phase unwrapping and homomorphic wavelet estimation.

Synthetic rotated/shifted wavelets, four phase unwrappers over a common
contract, polynomial root finding for the factorization route, complex
cepstra, log-spectral-averaging wavelet estimation, and a benchmark CLI.
"""

from .errors import (
    ConfigError,
    EstimationError,
    RootFindError,
    SpectralError,
    UnwrapError,
)
from .rootfind import RootSet, eval_residuals, expand_roots, factor_polynomial
from .spectral import (
    Cepstrum,
    PhaseCurve,
    Spectrum,
    amplitude_mask,
    cepstrum,
    dft,
    idft,
    inverse_cepstrum,
    log_spectrum,
    principal_value,
    rewrap,
    wrapped_phase,
)
from .synth import (
    SynthConfig,
    Trace,
    add_noise,
    circular_convolve,
    convolve,
    gen_reflectivity,
    ricker,
    rotate_phase,
    time_shift,
)
from .unwrap import (
    METHODS,
    LinearPhaseFit,
    UnwrapInput,
    UnwrapReport,
    fit_band,
    fit_linear_phase,
    prepare_input,
    run_method,
    unwrap_curve,
    unwrap_factor,
    unwrap_integrate,
    unwrap_jump,
    unwrap_wplane,
)
from .waveletest import (
    Gather,
    WaveletEstimate,
    correlation_at_best_lag,
    estimate_wavelet,
    log_spectral_average,
    synthetic_gather,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "SpectralError",
    "UnwrapError",
    "RootFindError",
    "EstimationError",
    "Trace",
    "SynthConfig",
    "ricker",
    "rotate_phase",
    "time_shift",
    "gen_reflectivity",
    "convolve",
    "circular_convolve",
    "add_noise",
    "Spectrum",
    "PhaseCurve",
    "Cepstrum",
    "dft",
    "idft",
    "amplitude_mask",
    "principal_value",
    "wrapped_phase",
    "log_spectrum",
    "cepstrum",
    "inverse_cepstrum",
    "rewrap",
    "RootSet",
    "factor_polynomial",
    "eval_residuals",
    "expand_roots",
    "METHODS",
    "UnwrapInput",
    "LinearPhaseFit",
    "UnwrapReport",
    "prepare_input",
    "unwrap_jump",
    "unwrap_wplane",
    "unwrap_integrate",
    "unwrap_factor",
    "unwrap_curve",
    "fit_band",
    "fit_linear_phase",
    "run_method",
    "Gather",
    "WaveletEstimate",
    "synthetic_gather",
    "log_spectral_average",
    "estimate_wavelet",
    "correlation_at_best_lag",
    "__version__",
]
