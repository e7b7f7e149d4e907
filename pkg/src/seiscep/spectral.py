"""Fourier-domain kernel: half-band spectra, wrapped phase, complex log
spectrum, and the complex cepstrum with its inverse.

Real signals are represented over non-negative frequencies only (rfft
layout, Hermitian symmetry implied). The forward transform is the plain
sum over exp(-j*2*pi*k*n/N); the inverse carries 1/N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SpectralError
from .synth import Trace

TWO_PI = 2.0 * np.pi

#: Relative amplitude floor: bins below floor_rel * max|S| are untrusted.
DEFAULT_FLOOR_REL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Half-band complex spectrum of a real trace.

    Attributes
    ----------
    bins : np.ndarray
        Complex values at frequencies 0 .. Nyquist, rfft layout.
    df : float
        Bin spacing in Hz, 1 / (n_time * dt).
    n_time : int
        Length of the originating time series.
    dt : float
        Sample interval of the originating time series.
    t_start : float
        Start time of the originating trace (carried for round trips).
    """

    bins: np.ndarray
    df: float
    n_time: int
    dt: float
    t_start: float = 0.0

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=complex)
        object.__setattr__(self, "bins", bins)
        if bins.ndim != 1 or bins.size != self.n_time // 2 + 1:
            raise ConfigError(
                f"expected {self.n_time // 2 + 1} bins for n_time={self.n_time}, "
                f"got {bins.size}"
            )
        if abs(self.df * self.n_time * self.dt - 1.0) > 1e-9:
            raise ConfigError("df inconsistent with n_time and dt")

    @property
    def n_bins(self) -> int:
        return self.bins.size

    def frequencies(self) -> np.ndarray:
        return np.fft.rfftfreq(self.n_time, self.dt)

    def amplitude(self) -> np.ndarray:
        return np.abs(self.bins)


@dataclass(frozen=True, eq=False)
class PhaseCurve:
    """Phase samples aligned to Spectrum bins.

    kind is 'wrapped' (every value in [-pi, pi)) or 'unwrapped'. mask is
    True on trusted bins (amplitude above the floor). For unwrapped curves
    produced by the jump-correcting methods, wrap_counts holds the integer
    2*pi multiples n(f) and principal retains the source wrapped values, so
    re-wrapping reproduces the input bitwise. flags marks bins where a
    method took a guarded decision (bridged span, antipodal tie, clamped
    derivative, near-circle root).
    """

    values: np.ndarray
    kind: str
    mask: np.ndarray | None = None
    wrap_counts: np.ndarray | None = None
    principal: np.ndarray | None = None
    flags: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("wrapped", "unwrapped"):
            raise ConfigError(f"kind must be wrapped|unwrapped, got {self.kind!r}")
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.kind == "wrapped":
            if np.any(values < -np.pi) or np.any(values >= np.pi):
                raise ConfigError("wrapped phase must lie in [-pi, pi)")
        for name in ("mask", "wrap_counts", "principal", "flags"):
            arr = getattr(self, name)
            if arr is not None and np.asarray(arr).shape != values.shape:
                raise ConfigError(f"{name} shape does not match values")

    @property
    def n_bins(self) -> int:
        return self.values.size

    def trusted(self) -> np.ndarray:
        """Mask of trusted bins (all bins when no mask was attached)."""
        if self.mask is None:
            return np.ones(self.values.shape, dtype=bool)
        return np.asarray(self.mask, dtype=bool)


@dataclass(frozen=True, eq=False)
class Cepstrum:
    """Complex cepstrum of a real trace.

    values runs over quefrency in the same wrap-around layout as the time
    axis of an n-point DFT: index 0 is quefrency zero, the top half holds
    negative quefrencies. dq equals the dt of the originating trace. The
    linear-phase slope removed before the inverse transform is recorded in
    removed_slope (radians/Hz); the signs of the real-valued bins at zero
    frequency and Nyquist are kept so the inverse can restore them.
    """

    values: np.ndarray
    dq: float
    linear_phase_removed: bool
    removed_slope: float = 0.0
    dc_sign: float = 1.0
    nyquist_sign: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if not np.all(np.isfinite(values)):
            raise ConfigError("cepstrum values must be finite")
        if not self.dq > 0:
            raise ConfigError("dq must be > 0")

    @property
    def n(self) -> int:
        return self.values.size

    def quefrencies(self) -> np.ndarray:
        """Signed quefrency of each sample (wrap-around layout)."""
        q = np.arange(self.n) * self.dq
        half = self.n * self.dq / 2.0
        return np.where(q > half, q - self.n * self.dq, q)


def dft(x: Trace) -> Spectrum:
    """Forward DFT of a real trace onto the non-negative frequency band."""
    return Spectrum(
        np.fft.rfft(x.data),
        df=1.0 / (x.n * x.dt),
        n_time=x.n,
        dt=x.dt,
        t_start=x.t_start,
    )


def idft(spec: Spectrum) -> Trace:
    """Inverse DFT back to a real trace of the original length."""
    return Trace(np.fft.irfft(spec.bins, spec.n_time), spec.dt, spec.t_start)


def amplitude_mask(spec: Spectrum, floor_rel: float = DEFAULT_FLOOR_REL) -> np.ndarray:
    """True where |S| is at or above floor_rel times the peak amplitude."""
    amp = spec.amplitude()
    return amp >= floor_rel * amp.max()


def principal_value(phase: np.ndarray) -> np.ndarray:
    """Reduce phase to [-pi, pi), with -pi chosen for the negative real axis."""
    p = np.arctan2(np.sin(phase), np.cos(phase))
    return np.where(p == np.pi, -np.pi, p)


def wrapped_phase(spec: Spectrum, floor_rel: float = DEFAULT_FLOOR_REL) -> PhaseCurve:
    """Principal-value phase of each bin, with the amplitude-floor mask.

    Values lie in [-pi, pi); the negative real axis maps to -pi. Bins whose
    amplitude falls below the floor are flagged untrusted in the mask rather
    than dropped.
    """
    p = np.angle(spec.bins)
    p = np.where(p == np.pi, -np.pi, p)
    return PhaseCurve(p, "wrapped", mask=amplitude_mask(spec, floor_rel))


def log_spectrum(
    spec: Spectrum,
    phase: PhaseCurve,
    floor_rel: float = DEFAULT_FLOOR_REL,
) -> np.ndarray:
    """Complex log spectrum: ln(floored amplitude) + j * unwrapped phase."""
    if phase.kind != "unwrapped":
        raise ConfigError("log_spectrum needs an unwrapped PhaseCurve")
    if phase.n_bins != spec.n_bins:
        raise ConfigError("phase curve is not aligned to the spectrum")
    amp = spec.amplitude()
    peak = amp.max()
    if peak == 0.0:
        raise SpectralError("all-zero spectrum has no log")
    return np.log(np.maximum(amp, floor_rel * peak)) + 1j * phase.values


def cepstrum(
    x: Trace,
    method: str = "PU-M",
    floor_rel: float = DEFAULT_FLOOR_REL,
) -> Cepstrum:
    """Complex cepstrum of x with the linear phase removed.

    The phase is unwrapped with the requested method, a straight line
    (uniform weights over trusted bins, bin 0 excluded) is fitted, and only
    its slope is subtracted before the inverse transform; the slope is
    recorded so inverse_cepstrum can restore it. An unremoved linear phase
    would alias the cepstrum.
    """
    from . import unwrap  # local import to avoid a module cycle

    spec = dft(x)
    if spec.amplitude().max() == 0.0:
        raise SpectralError("cannot take the cepstrum of an all-zero trace")
    inp = unwrap.prepare_input(x, floor_rel=floor_rel)
    curve = unwrap.unwrap_curve(inp, method)

    f = spec.frequencies()
    band = curve.trusted().copy()
    band[0] = False
    design = np.stack([np.ones(band.sum()), f[band]], axis=1)
    sol, *_ = np.linalg.lstsq(design, curve.values[band], rcond=None)
    slope = float(sol[1])
    resid = curve.values - slope * f

    logs = log_spectrum(spec, PhaseCurve(resid, "unwrapped", mask=curve.mask),
                        floor_rel=floor_rel)
    logs[0] = logs[0].real
    dc_sign = 1.0 if spec.bins[0].real >= 0 else -1.0
    ny_sign = 1.0
    if x.n % 2 == 0:
        logs[-1] = logs[-1].real
        ny_sign = 1.0 if spec.bins[-1].real >= 0 else -1.0
    return Cepstrum(
        np.fft.irfft(logs, x.n),
        dq=x.dt,
        linear_phase_removed=True,
        removed_slope=slope,
        dc_sign=dc_sign,
        nyquist_sign=ny_sign,
    )


def inverse_cepstrum(c: Cepstrum, n_time: int | None = None) -> Trace:
    """Invert a complex cepstrum back to a trace.

    Exponentiates the forward transform of the cepstrum, reapplies the
    recorded linear-phase slope, restores the zero-frequency and Nyquist
    signs, and inverse-transforms. Reconstruction is exact up to the
    amplitude floor.
    """
    n = c.n if n_time is None else n_time
    if n != c.n:
        raise ConfigError("n_time must match the cepstrum length")
    logs = np.fft.rfft(c.values)
    f = np.fft.rfftfreq(n, c.dq)
    amp = np.exp(logs.real)
    phase = logs.imag + c.removed_slope * f
    spec = amp * np.exp(1j * phase)
    spec[0] = c.dc_sign * amp[0]
    if n % 2 == 0:
        spec[-1] = c.nyquist_sign * amp[-1]
    return Trace(np.fft.irfft(spec, n), c.dq)


def rewrap(curve: PhaseCurve) -> PhaseCurve:
    """Map a phase curve back onto principal values in [-pi, pi).

    Unwrapped curves that retained their source principal values (PU-M and
    PU-K outputs) are restored bitwise; anything else is reduced modulo
    2*pi.
    """
    if curve.kind == "wrapped":
        return PhaseCurve(curve.values.copy(), "wrapped", mask=curve.mask)
    if curve.principal is not None:
        return PhaseCurve(curve.principal.copy(), "wrapped", mask=curve.mask)
    return PhaseCurve(principal_value(curve.values), "wrapped", mask=curve.mask)
