"""Deterministic synthesis of test signals.

Ricker wavelets, constant-phase rotation, circular time shifts, random
reflectivity series, convolution and additive noise. Everything here is a
pure function of its arguments; random outputs take an explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class Trace:
    """A uniformly sampled real signal.

    Parameters
    ----------
    data : np.ndarray
        Sample values, finite, non-empty.
    dt : float
        Sample interval in seconds (> 0).
    t_start : float
        Time of the first sample in seconds.
    """

    data: np.ndarray
    dt: float
    t_start: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", data)
        if data.ndim != 1 or data.size == 0:
            raise ConfigError("trace data must be a non-empty 1-D array")
        if not np.all(np.isfinite(data)):
            raise ConfigError("trace data must be finite")
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")

    @property
    def n(self) -> int:
        return self.data.size

    @property
    def duration(self) -> float:
        """Time span from first to last sample, (n - 1) * dt."""
        return (self.n - 1) * self.dt

    def times(self) -> np.ndarray:
        """Physical sample times t_start + k * dt."""
        return self.t_start + self.dt * np.arange(self.n)


@dataclass(frozen=True, eq=False)
class SynthConfig:
    """Parameters of the standard benchmark scenario.

    The defaults give the three-row sampling study: a 1.024 s record holding
    a 30 Hz Ricker at 0.256 s, so n in {256, 512, 1024} maps to dt in
    {4, 2, 1} ms.
    """

    n_samples: int = 1024
    total_length_s: float = 1.024
    ricker_f0_hz: float = 30.0
    t0_s: float | None = None
    rotation_deg: float = 0.0
    shift_s: float = 0.0
    snr_db: float | None = None
    rng_seed: int = 0

    @property
    def dt(self) -> float:
        return self.total_length_s / self.n_samples

    @property
    def nyquist_hz(self) -> float:
        return 0.5 / self.dt

    @property
    def t0(self) -> float:
        """Wavelet placement; defaults to a quarter of the record."""
        return self.total_length_s / 4.0 if self.t0_s is None else self.t0_s

    def validate(self) -> "SynthConfig":
        if self.n_samples < 16:
            raise ConfigError(f"n_samples must be >= 16, got {self.n_samples}")
        if not self.total_length_s > 0:
            raise ConfigError("total_length_s must be > 0")
        if not 0 < self.ricker_f0_hz < self.nyquist_hz:
            raise ConfigError(
                f"ricker_f0_hz must lie in (0, Nyquist={self.nyquist_hz:g} Hz), "
                f"got {self.ricker_f0_hz:g}"
            )
        if not 0 <= self.t0 <= (self.n_samples - 1) * self.dt:
            raise ConfigError(f"t0_s {self.t0:g} falls outside the record")
        if abs(self.shift_s) >= (self.n_samples - 1) * self.dt:
            raise ConfigError("shift_s exceeds the record duration")
        if self.snr_db is not None and not np.isfinite(self.snr_db):
            raise ConfigError("snr_db must be finite (use None for noise-free)")
        return self

    def make_trace(self) -> Trace:
        """Build the configured trace: Ricker -> rotate -> shift -> noise."""
        self.validate()
        x = ricker(self.ricker_f0_hz, self.dt, self.n_samples, self.t0)
        if self.rotation_deg != 0.0:
            x = rotate_phase(x, self.rotation_deg)
        if self.shift_s != 0.0:
            x = time_shift(x, self.shift_s)
        if self.snr_db is not None:
            x = add_noise(x, self.snr_db, self.rng_seed)
        return x


def ricker(f0: float, dt: float, n: int, t0: float = 0.0) -> Trace:
    """Ricker wavelet w(t) = (1 - 2 pi^2 f0^2 tau^2) exp(-pi^2 f0^2 tau^2).

    The wavelet is evaluated on the periodic time axis of the n-sample
    record, i.e. tau is the circular distance from t0. For t0 well inside
    the record this equals the straight evaluation (the wrapped tail has
    underflowed to zero); with t0 = 0 it yields the symmetric zero-phase
    pulse centered on sample 0 that circular convolution expects.

    Parameters
    ----------
    f0 : float
        Dominant frequency in Hz, 0 < f0 < Nyquist.
    dt : float
        Sample interval in seconds.
    n : int
        Number of samples.
    t0 : float
        Peak time in seconds, within [0, (n-1)*dt].

    Returns
    -------
    Trace
        Peak value exactly 1 at the sample nearest t0 when t0 is on the grid.
    """
    if n < 2:
        raise ConfigError("ricker needs n >= 2")
    if not dt > 0:
        raise ConfigError("ricker needs dt > 0")
    if not 0 < f0 < 0.5 / dt:
        raise ConfigError(
            f"f0 must lie in (0, Nyquist={0.5 / dt:g} Hz), got {f0:g}"
        )
    if not 0 <= t0 <= (n - 1) * dt:
        raise ConfigError(f"t0 {t0:g} falls outside the record")
    period = n * dt
    tau = np.arange(n) * dt - t0
    tau = (tau + 0.5 * period) % period - 0.5 * period
    a = (np.pi * f0 * tau) ** 2
    return Trace((1.0 - 2.0 * a) * np.exp(-a), dt)


def rotate_phase(x: Trace, phi_deg: float) -> Trace:
    """Constant-phase rotation by phi degrees.

    Positive-frequency bins are multiplied by exp(-j*phi); the zero-frequency
    and Nyquist bins, which must stay real, are scaled by cos(phi). A +90
    degree rotation turns a symmetric pulse antisymmetric and is reported
    back as +90 by the linear-phase fit.
    """
    phi = np.deg2rad(phi_deg)
    spec = np.fft.rfft(x.data)
    mult = np.full(spec.shape, np.exp(-1j * phi))
    mult[0] = np.cos(phi)
    if x.n % 2 == 0:
        mult[-1] = np.cos(phi)
    return Trace(np.fft.irfft(spec * mult, x.n), x.dt, x.t_start)


def time_shift(x: Trace, tau_s: float) -> Trace:
    """Delay x by tau seconds (circular, frequency-domain).

    Bins are multiplied by exp(-j*2*pi*f*tau); the Nyquist bin by
    cos(2*pi*f_nyq*tau) so the output stays real. Shifts are circular in
    the DFT sense, so callers should keep shifted energy inside the record.
    """
    if abs(tau_s) >= x.duration:
        raise ConfigError(
            f"|tau_s| = {abs(tau_s):g} s must be smaller than the "
            f"record duration {x.duration:g} s"
        )
    f = np.fft.rfftfreq(x.n, x.dt)
    spec = np.fft.rfft(x.data)
    ramp = np.exp(-1j * TWO_PI * f * tau_s)
    if x.n % 2 == 0:
        ramp[-1] = np.cos(TWO_PI * f[-1] * tau_s)
    return Trace(np.fft.irfft(spec * ramp, x.n), x.dt, x.t_start)


def gen_reflectivity(
    n: int,
    spike_density: float,
    seed,
    dt: float = 1.0,
    active_fraction: float = 1.0,
) -> Trace:
    """Sparse random spike series with zero-mean Gaussian amplitudes.

    Each sample is nonzero with probability spike_density; amplitudes are
    standard normal. With active_fraction < 1 the spikes are confined to the
    first active_fraction of the record (the leading samples), which keeps
    circular convolutions from wrapping energy across the record boundary.
    Reproducible for a fixed (n, spike_density, seed); seed may also be an
    existing numpy Generator, which is advanced in place (for drawing many
    series from a single stream).
    """
    if not 0 < spike_density <= 1:
        raise ConfigError(f"spike_density must be in (0, 1], got {spike_density}")
    if not 0 < active_fraction <= 1:
        raise ConfigError("active_fraction must be in (0, 1]")
    rng = np.random.default_rng(seed)
    m = int(active_fraction * n)
    hits = rng.random(m) < spike_density
    amps = rng.standard_normal(m)
    data = np.zeros(n)
    data[:m] = np.where(hits, amps, 0.0)
    return Trace(data, dt)


def convolve(w: Trace, r: Trace) -> Trace:
    """Full linear convolution, length len(w) + len(r) - 1."""
    if abs(w.dt - r.dt) > 1e-12 * max(w.dt, r.dt):
        raise ConfigError(f"dt mismatch: {w.dt:g} vs {r.dt:g}")
    return Trace(np.convolve(w.data, r.data), w.dt, w.t_start + r.t_start)


def circular_convolve(w: Trace, r: Trace) -> Trace:
    """Circular convolution of two equal-length traces (spectra multiply)."""
    if abs(w.dt - r.dt) > 1e-12 * max(w.dt, r.dt):
        raise ConfigError(f"dt mismatch: {w.dt:g} vs {r.dt:g}")
    if w.n != r.n:
        raise ConfigError(f"length mismatch: {w.n} vs {r.n}")
    prod = np.fft.rfft(w.data) * np.fft.rfft(r.data)
    return Trace(np.fft.irfft(prod, w.n), w.dt, w.t_start + r.t_start)


def add_noise(x: Trace, snr_db: float | None, seed) -> Trace:
    """Add white Gaussian noise at the requested signal-to-noise ratio.

    The noise vector is rescaled by its empirical power, so the measured
    SNR equals the request to float precision. snr_db of None (or +inf)
    returns the input unchanged. seed may be an int or an existing numpy
    Generator (advanced in place).
    """
    if snr_db is None or np.isinf(snr_db):
        return Trace(x.data.copy(), x.dt, x.t_start)
    p_sig = np.mean(x.data**2)
    if p_sig == 0.0:
        raise ConfigError("SNR is undefined for an all-zero signal")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(x.n)
    noise *= np.sqrt(p_sig / np.mean(noise**2)) * 10.0 ** (-snr_db / 20.0)
    return Trace(x.data + noise, x.dt, x.t_start)
