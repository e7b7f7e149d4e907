"""Wavelet estimation by log-spectral averaging over a trace gather.

Each trace is modeled as the same wavelet filtered by a different white
spike series. In the log spectrum the wavelet term is common to every
trace while the spike terms average toward a constant, so the arithmetic
mean of the per-trace log amplitudes and residual phases isolates the
wavelet. The per-trace linear phase (spike-pattern delay) is fitted and
removed before averaging; without that step the means would smear.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import unwrap
from .errors import ConfigError, EstimationError, UnwrapError
from .spectral import DEFAULT_FLOOR_REL, TWO_PI
from .synth import Trace, add_noise, circular_convolve, gen_reflectivity, ricker


@dataclass(frozen=True, eq=False)
class Gather:
    """A bundle of traces sharing one sampling grid.

    traces is a tuple of Trace objects with identical length and dt
    (t_start may differ; it carries no information the estimator uses).
    """

    traces: tuple

    def __post_init__(self):
        traces = tuple(self.traces)
        object.__setattr__(self, "traces", traces)
        if not traces:
            raise ConfigError("a gather needs at least one trace")
        n0, dt0 = traces[0].n, traces[0].dt
        for i, tr in enumerate(traces):
            if tr.n != n0:
                raise ConfigError(
                    f"trace {i} has {tr.n} samples, expected {n0}"
                )
            if abs(tr.dt - dt0) > 1e-12 * dt0:
                raise ConfigError(f"trace {i} has dt {tr.dt:g}, expected {dt0:g}")

    @property
    def n_traces(self) -> int:
        return len(self.traces)

    @property
    def n_samples(self) -> int:
        return self.traces[0].n

    @property
    def dt(self) -> float:
        return self.traces[0].dt


@dataclass(frozen=True, eq=False)
class WaveletEstimate:
    """Estimated wavelet plus the spectral averages it came from.

    wavelet is peak-normalized (max |amplitude| = 1) and odd-length,
    centered on its largest sample. mean_log_amp / mean_phase are the
    across-trace averages on the half-band frequency grid.
    failed_trace_ids lists traces dropped because unwrapping or fitting
    failed on them.
    """

    wavelet: np.ndarray
    dt: float
    n_traces_used: int
    unwrap_method: str
    mean_log_amp: np.ndarray
    mean_phase: np.ndarray
    failed_trace_ids: tuple = ()


def synthetic_gather(
    n_traces: int,
    seed: int = 0,
    n_samples: int = 1024,
    dt_s: float = 1e-3,
    f0_hz: float = 30.0,
    spike_density: float = 0.1,
    snr_db: float | None = None,
) -> Gather:
    """Gather of a zero-phase wavelet filtered by random spike series.

    The wavelet sits at the circular origin and each trace gets its own
    spike series, confined to the first 45% of the record so the circular
    convolution does not wrap energy back into the wavelet support. Spike
    series are drawn sequentially from one stream seeded by `seed`, noise
    realizations from a second stream seeded by `seed + 1000`, so the
    gather is a pure function of (arguments, seed).
    """
    if n_traces < 1:
        raise ConfigError("n_traces must be at least 1")
    wavelet = ricker(f0_hz, dt_s, n_samples, t0=0.0)
    spike_rng = np.random.default_rng(seed)
    noise_rng = np.random.default_rng(seed + 1000)
    traces = []
    for _ in range(n_traces):
        spikes = gen_reflectivity(
            n_samples,
            spike_density,
            seed=spike_rng,
            dt=dt_s,
            active_fraction=0.45,
        )
        tr = circular_convolve(wavelet, spikes)
        if snr_db is not None:
            tr = add_noise(tr, snr_db, seed=noise_rng)
        traces.append(tr)
    return Gather(tuple(traces))


def log_spectral_average(
    gather: Gather,
    method: str = "PU-K",
    floor_rel: float = DEFAULT_FLOOR_REL,
):
    """Across-trace means of log amplitude and residual unwrapped phase.

    Per trace: transform, unwrap with `method`, fit and subtract the
    linear phase (intercept and slope), then shift the residual by a
    whole number of 2*pi so its amplitude-weighted in-band mean lands in
    (-pi, pi] -- per-trace branch choices would otherwise offset whole
    curves by 2*pi and corrupt the average. Amplitudes are floored before
    the log. Traces where unwrapping or fitting raises are dropped and
    reported; if every trace fails, EstimationError.

    Returns (mean_log_amp, mean_phase, used_ids, failed_ids).
    """
    log_amps = []
    phases = []
    used = []
    failed = []
    for i, tr in enumerate(gather.traces):
        try:
            inp = unwrap.prepare_input(tr, floor_rel=floor_rel)
            curve = unwrap.unwrap_curve(inp, method)
            fit = unwrap.fit_linear_phase(curve, inp.spectrum)
        except (UnwrapError, ConfigError):
            failed.append(i)
            continue
        f = inp.spectrum.frequencies()
        amp = inp.spectrum.amplitude()
        intercept = -fit.phi0_deg * np.pi / 180.0
        slope = -fit.tau_s * TWO_PI
        resid = curve.values - (intercept + slope * f)
        band = unwrap.fit_band(curve, inp.spectrum)
        weights = amp[band]
        centre = np.sum(weights * resid[band]) / np.sum(weights)
        resid = resid - TWO_PI * np.round(centre / TWO_PI)
        log_amps.append(np.log(np.maximum(amp, floor_rel * amp.max())))
        phases.append(resid)
        used.append(i)
    if not used:
        raise EstimationError(
            f"every trace failed to unwrap with {method}: {failed}"
        )
    return (
        np.mean(log_amps, axis=0),
        np.mean(phases, axis=0),
        tuple(used),
        tuple(failed),
    )


def estimate_wavelet(
    gather: Gather,
    support_s: float,
    method: str = "PU-K",
    floor_rel: float = DEFAULT_FLOOR_REL,
) -> WaveletEstimate:
    """Estimate the common wavelet of a gather.

    Rebuilds a spectrum from the across-trace mean log amplitude and mean
    residual phase, inverse-transforms, and keeps a circular window of
    +-round(support_s/dt) samples around the peak |amplitude|. The output
    has odd length 2*round(support_s/dt) + 1, is centered on its peak, and
    is normalized to max |amplitude| = 1.

    support_s must be positive and shorter than half the record.
    """
    dt = gather.dt
    n = gather.n_samples
    half = 0.5 * (n - 1) * dt
    if not 0 < support_s < half:
        raise ConfigError(
            f"support_s must be in (0, {half:g}), got {support_s}"
        )
    mean_log_amp, mean_phase, used, failed = log_spectral_average(
        gather, method=method, floor_rel=floor_rel
    )
    spec = np.exp(mean_log_amp + 1j * mean_phase)
    spec[0] = spec[0].real
    if n % 2 == 0:
        spec[-1] = spec[-1].real
    rebuilt = np.fft.irfft(spec, n)
    k = int(round(support_s / dt))
    peak = int(np.argmax(np.abs(rebuilt)))
    window = rebuilt[(peak + np.arange(-k, k + 1)) % n]
    window = window / np.max(np.abs(window))
    return WaveletEstimate(
        wavelet=window,
        dt=dt,
        n_traces_used=len(used),
        unwrap_method=method,
        mean_log_amp=mean_log_amp,
        mean_phase=mean_phase,
        failed_trace_ids=failed,
    )


def correlation_at_best_lag(a: np.ndarray, b: np.ndarray) -> float:
    """Peak normalized cross-correlation over all lags.

    1.0 means a and b are identical up to a positive scale and a shift;
    insensitive to the relative alignment of the two windows.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denom = np.sqrt(np.sum(a**2) * np.sum(b**2))
    if denom == 0.0:
        raise ConfigError("correlation is undefined for an all-zero input")
    return float(np.correlate(a, b, mode="full").max() / denom)
