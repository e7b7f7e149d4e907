"""Phase unwrapping: four strategies for recovering continuous spectral phase.

All four consume the same prepared input (trace, spectrum, principal-value
phase with an amplitude-floor mask) and emit a PhaseCurve:

PU-M  bin-to-bin jump correction on the phase values
PU-K  crossing detection on the unit circle w = exp(j*phase)
PU-F  exact phase accumulation from the roots of the trace polynomial
PU-S  trapezoid integration of the analytic phase derivative Im[S'/S]

PU-M and PU-K are different bookkeepings of the same decision rule and agree
bitwise; PU-F is the reference (it never misses a fast rotation between
bins); PU-S is cheap but blind to rotations hidden near masked bins.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, UnwrapError
from .rootfind import factor_polynomial
from .spectral import (
    DEFAULT_FLOOR_REL,
    TWO_PI,
    PhaseCurve,
    Spectrum,
    dft,
    wrapped_phase,
)
from .synth import Trace

#: Method tokens accepted everywhere a method can be named.
METHODS = ("PU-M", "PU-K", "PU-F", "PU-S")

# Steps within this of exactly pi are treated as legitimate (no correction):
# a principal-value difference of exactly +-pi is ambiguous by convention.
_JUMP_TIE = 1e-12

# |w1 + w2| below this means the two unit vectors are antipodal and the
# crossing direction is undefined; the step is skipped and flagged.
_ANTIPODAL_TIE = 1e-12


@dataclass(frozen=True, eq=False)
class UnwrapInput:
    """Prepared input shared by every unwrapper.

    Attributes
    ----------
    trace : Trace
        Time-domain samples (PU-F and PU-S need them, not just the phase).
    spectrum : Spectrum
        Half-band DFT of the trace.
    wrapped : PhaseCurve
        Principal-value phase in [-pi, pi) with the amplitude-floor mask.
    """

    trace: Trace
    spectrum: Spectrum
    wrapped: PhaseCurve


@dataclass(frozen=True, eq=False)
class LinearPhaseFit:
    """Straight-line phase model phi(f) = -(phi0 + 2*pi*f*tau).

    phi0_deg is the constant (rotation) term in degrees, tau_s the slope
    (delay) term in seconds. residual_rms is the amplitude-weighted RMS
    misfit over the n_bins fitted bins spanning f_lo_hz..f_hi_hz.
    """

    phi0_deg: float
    tau_s: float
    residual_rms: float
    n_bins: int
    f_lo_hz: float
    f_hi_hz: float


@dataclass(frozen=True, eq=False)
class UnwrapReport:
    """One method's unwrapped curve, its linear-phase fit, and timing.

    wall_time_s covers the unwrap itself (not input preparation or the
    fit). notes lists guarded decisions taken along the way.
    """

    method: str
    curve: PhaseCurve
    fit: LinearPhaseFit
    wall_time_s: float
    notes: tuple = ()


def prepare_input(trace: Trace, floor_rel: float = DEFAULT_FLOOR_REL) -> UnwrapInput:
    """Transform a trace and bundle everything the unwrappers consume."""
    spec = dft(trace)
    return UnwrapInput(
        trace=trace,
        spectrum=spec,
        wrapped=wrapped_phase(spec, floor_rel),
    )


def unwrap_jump(inp: UnwrapInput) -> PhaseCurve:
    """Jump-correcting unwrap (PU-M).

    Walks the trusted bins in order, keeping a running integer count of
    2*pi wraps: a step beyond +pi lowers the count, beyond -pi raises it.
    Steps of exactly +-pi (within 1e-12) are left alone. Untrusted bins are
    skipped -- the next trusted bin is compared against the last trusted
    value and flagged, since the decision bridged a gap. The chain is
    seeded at bin 0 whether or not it is trusted.
    """
    w = inp.wrapped.values
    mask = inp.wrapped.trusted()
    n = w.size
    counts = np.zeros(n, dtype=np.int64)
    flags = np.zeros(n, dtype=bool)
    carry = 0
    last = w[0]
    gap = False
    for k in range(1, n):
        if mask[k]:
            d = w[k] - last
            if d > np.pi and d - np.pi > _JUMP_TIE:
                carry -= 1
            elif d < -np.pi and -d - np.pi > _JUMP_TIE:
                carry += 1
            last = w[k]
            if gap:
                flags[k] = True
                gap = False
        else:
            gap = True
        counts[k] = carry
    return PhaseCurve(
        w + TWO_PI * counts,
        "unwrapped",
        mask=inp.wrapped.mask,
        wrap_counts=counts,
        principal=w.copy(),
        flags=flags,
    )


def unwrap_wplane(inp: UnwrapInput) -> PhaseCurve:
    """Unit-circle crossing unwrap (PU-K).

    Maps each bin to w = exp(j*phase) and counts signed crossings of the
    negative real axis between consecutive trusted bins: the chord from w1
    to w2 crosses when the imaginary parts change sign and the crossing
    abscissa is negative; upward-to-downward crossings increment the wrap
    count, the reverse decrement it. Antipodal pairs (|w1 + w2| <= 1e-12)
    have no defined crossing side, contribute nothing, and are flagged.
    Gap bridging matches unwrap_jump, and on any curve whose trusted steps
    stay inside (-pi, pi) the two produce identical output bit for bit.
    """
    w = inp.wrapped.values
    mask = inp.wrapped.trusted()
    n = w.size
    z = np.exp(1j * w)
    counts = np.zeros(n, dtype=np.int64)
    flags = np.zeros(n, dtype=bool)
    carry = 0
    last = z[0]
    gap = False
    for k in range(1, n):
        if mask[k]:
            w1, w2 = last, z[k]
            if abs(w1 + w2) > _ANTIPODAL_TIE:
                im1, im2 = w1.imag, w2.imag
                if im1 * im2 < 0:
                    t = im1 / (im1 - im2)
                    x_cross = w1.real + t * (w2.real - w1.real)
                    if x_cross < 0.0:
                        carry += 1 if im1 > 0 else -1
            else:
                flags[k] = True
            last = z[k]
            if gap:
                flags[k] = True
                gap = False
        else:
            gap = True
        counts[k] = carry
    return PhaseCurve(
        w + TWO_PI * counts,
        "unwrapped",
        mask=inp.wrapped.mask,
        wrap_counts=counts,
        principal=w.copy(),
        flags=flags,
    )


def unwrap_integrate(inp: UnwrapInput) -> PhaseCurve:
    """Derivative-integrating unwrap (PU-S).

    The phase derivative dphi/df = Im[S'(f)/S(f)] is computed analytically
    with S'(f) = -j*2*pi * DFT(t_n * s_n), then integrated by the
    trapezoid rule from phi(0) = 0 (or -pi when S(0).real <= 0). The time
    weights t_n are the signed circular sample times (second-half samples
    count as negative times), matching the periodic convention of the
    transform: a symmetric pulse at the circular origin then has exactly
    zero derivative, and a delayed spike differentiates to its exact
    line. At bins where the ratio is untrusted or undefined the
    derivative is clamped to the nearest preceding valid value (the first
    valid value for a leading run); those bins are flagged. The result is
    continuous by construction but inherits any rotation the derivative
    cannot see across masked spans.
    """
    trace = inp.trace
    spec = inp.spectrum
    mask = inp.wrapped.trusted()
    n_bins = spec.bins.size
    half = trace.n // 2
    circular_index = (np.arange(trace.n) + half) % trace.n - half
    t_n = trace.t_start + circular_index * trace.dt
    deriv_bins = -1j * TWO_PI * np.fft.rfft(t_n * trace.data)
    ok = mask & (np.abs(spec.bins) > 0)
    if not ok.any():
        raise UnwrapError("no usable bins: every amplitude is below the floor")
    dphi = np.zeros(n_bins)
    dphi[ok] = (deriv_bins[ok] / spec.bins[ok]).imag
    clamped = dphi.copy()
    first = int(np.argmax(ok))
    clamped[:first] = dphi[first]
    held = dphi[first]
    for k in range(first, n_bins):
        if ok[k]:
            held = dphi[k]
        else:
            clamped[k] = held
    phi = np.empty(n_bins)
    phi[0] = 0.0 if spec.bins[0].real > 0 else -np.pi
    phi[1:] = phi[0] + np.cumsum((clamped[:-1] + clamped[1:]) * 0.5 * spec.df)
    return PhaseCurve(
        phi,
        "unwrapped",
        mask=inp.wrapped.mask,
        flags=~ok,
    )


def _chain_expected(w: np.ndarray, k_stop: int) -> float:
    """Unwrapped value the plain jump chain assigns bin k_stop.

    Walks every bin from 0 to k_stop regardless of masking; used only to
    pin the absolute 2*pi branch of the factored curve.
    """
    carry = 0
    for k in range(1, k_stop + 1):
        d = w[k] - w[k - 1]
        if d > np.pi and d - np.pi > _JUMP_TIE:
            carry -= 1
        elif d < -np.pi and -d - np.pi > _JUMP_TIE:
            carry += 1
    return w[k_stop] + TWO_PI * carry


def unwrap_factor(
    inp: UnwrapInput,
    delta: float = 1e-8,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> PhaseCurve:
    """Root-factorization unwrap (PU-F).

    Writes the spectrum as A * exp(-j*(deg+lead)*omega) * prod(e^{j*omega} - u_k)
    over the roots u_k of the trace polynomial (exact leading/trailing zero
    samples stripped first), unwraps each factor's phase separately --
    a single factor never moves more than pi between bins unless its root
    sits on the unit circle -- and sums. The absolute 2*pi branch of the
    total is aligned to the jump chain at the first trusted bin.

    Roots within `delta` of the unit circle are flagged on their nearest
    bins. A root actually *on* the circle (within 16*eps*degree) at an
    angle inside the trusted band makes the factor phase ambiguous there
    and raises UnwrapError.
    """
    x = inp.trace.data
    w = inp.wrapped.values
    mask = inp.wrapped.trusted()
    n = inp.trace.n
    n_bins = w.size

    nonzero = np.nonzero(x)[0]
    if nonzero.size == 0:
        raise UnwrapError("all-zero trace has no factorable spectrum")
    lead = int(nonzero[0])
    core = x[nonzero[0]:nonzero[-1] + 1]
    degree = core.size - 1

    if degree > 0:
        rootset = factor_polynomial(core, tol=tol, max_iter=max_iter)
        roots = rootset.roots
    else:
        roots = np.zeros(0, dtype=complex)

    omega = TWO_PI * np.arange(n_bins) / n
    flags = np.zeros(n_bins, dtype=bool)
    if roots.size:
        radial = np.abs(np.abs(roots) - 1.0)
        theta = np.abs(np.angle(roots))
        near = radial <= delta
        if near.any():
            near_bins = np.round(theta[near] * n / TWO_PI).astype(int)
            flags[np.clip(near_bins, 0, n_bins - 1)] = True
        if mask.any():
            trusted_idx = np.nonzero(mask)[0]
            on_circle = 16.0 * np.finfo(float).eps * max(degree, 16)
            fatal = (
                (radial <= on_circle)
                & (theta >= omega[trusted_idx[0]])
                & (theta <= omega[trusted_idx[-1]])
            )
            if fatal.any():
                k_bad = int(np.argmax(fatal))
                raise UnwrapError(
                    "spectral zero on the unit circle at angle "
                    f"{float(np.angle(roots[k_bad])):+.6f} rad: factor phase "
                    "is ambiguous inside the trusted band"
                )

    points = np.exp(1j * omega)
    ang = np.angle(points[None, :] - roots[:, None])
    step = np.diff(ang, axis=1)
    correction = np.where(
        step > np.pi, -TWO_PI, np.where(step < -np.pi, TWO_PI, 0.0)
    )
    ang = ang + np.concatenate(
        [np.zeros((roots.size, 1)), np.cumsum(correction, axis=1)], axis=1
    )
    total = np.angle(complex(core[0])) - (degree + lead) * omega + ang.sum(axis=0)

    k_star = int(np.argmax(mask))
    anchor = _chain_expected(w, k_star)
    total = total - TWO_PI * np.round((total[k_star] - anchor) / TWO_PI)
    return PhaseCurve(total, "unwrapped", mask=inp.wrapped.mask, flags=flags)


_DISPATCH = {
    "PU-M": unwrap_jump,
    "PU-K": unwrap_wplane,
    "PU-F": unwrap_factor,
    "PU-S": unwrap_integrate,
}


def unwrap_curve(inp: UnwrapInput, method: str = "PU-M", **kwargs) -> PhaseCurve:
    """Run one unwrapper selected by its method token."""
    try:
        fn = _DISPATCH[method]
    except KeyError:
        raise ConfigError(
            f"unknown unwrap method {method!r}; choose one of {', '.join(METHODS)}"
        ) from None
    return fn(inp, **kwargs)


def fit_band(curve: PhaseCurve, spectrum: Spectrum) -> np.ndarray:
    """Bins eligible for linear-phase fitting.

    Trusted bins whose amplitude reaches 1% of the peak, excluding bin 0
    and the top 10% of the frequency axis (band-edge phase is the least
    reliable part of every method's output).
    """
    f = spectrum.frequencies()
    amp = spectrum.amplitude()
    band = curve.trusted() & (amp >= 0.01 * amp.max())
    band[0] = False
    band &= f <= 0.9 * f.max()
    return band


def fit_linear_phase(
    curve: PhaseCurve,
    spectrum: Spectrum,
    min_bins: int = 8,
) -> LinearPhaseFit:
    """Fit phi(f) = a + b*f to an unwrapped curve, amplitude-weighted.

    The fit runs over fit_band(curve, spectrum). The model reported is the
    negated convention phi(f) = -(phi0 + 2*pi*f*tau), so a trace rotated
    by +90 degrees and delayed by +90 ms fits phi0_deg = +90,
    tau_s = +0.090.

    Raises UnwrapError when fewer than `min_bins` bins survive the band
    selection.
    """
    if curve.kind != "unwrapped":
        raise UnwrapError("linear-phase fit needs an unwrapped curve")
    f = spectrum.frequencies()
    amp = spectrum.amplitude()
    band = fit_band(curve, spectrum)
    n_fit = int(band.sum())
    if n_fit < min_bins:
        raise UnwrapError(
            f"linear-phase fit needs at least {min_bins} usable bins, "
            f"have {n_fit}"
        )
    weights = amp[band]
    design = np.stack([np.ones(n_fit), f[band]], axis=1)
    sol, *_ = np.linalg.lstsq(
        design * weights[:, None], curve.values[band] * weights, rcond=None
    )
    intercept, slope = float(sol[0]), float(sol[1])
    resid = curve.values[band] - (intercept + slope * f[band])
    rms = float(np.sqrt(np.sum((weights * resid) ** 2) / np.sum(weights**2)))
    return LinearPhaseFit(
        phi0_deg=-intercept * 180.0 / np.pi,
        tau_s=-slope / TWO_PI,
        residual_rms=rms,
        n_bins=n_fit,
        f_lo_hz=float(f[band][0]),
        f_hi_hz=float(f[band][-1]),
    )


def run_method(
    trace: Trace,
    method: str,
    floor_rel: float = DEFAULT_FLOOR_REL,
    **kwargs,
) -> UnwrapReport:
    """Prepare, unwrap, fit, and time one method on one trace.

    Only the unwrap itself is timed (input preparation and the fit are
    common to all methods and excluded).
    """
    inp = prepare_input(trace, floor_rel=floor_rel)
    start = time.perf_counter()
    curve = unwrap_curve(inp, method, **kwargs)
    elapsed = max(time.perf_counter() - start, 1e-9)
    fit = fit_linear_phase(curve, inp.spectrum)
    notes = []
    if curve.flags is not None and curve.flags.any():
        notes.append(f"{int(curve.flags.sum())} flagged bins")
    n_floored = int((~curve.trusted()).sum())
    if n_floored:
        notes.append(f"{n_floored} bins below the amplitude floor")
    return UnwrapReport(
        method=method,
        curve=curve,
        fit=fit,
        wall_time_s=elapsed,
        notes=tuple(notes),
    )
