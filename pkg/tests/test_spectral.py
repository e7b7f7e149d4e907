"""Tests for the spectral layer: DFT wrappers, log spectra, cepstra."""

import numpy as np
import pytest

from seiscep import (
    ConfigError,
    PhaseCurve,
    SpectralError,
    Trace,
    amplitude_mask,
    cepstrum,
    circular_convolve,
    dft,
    gen_reflectivity,
    idft,
    inverse_cepstrum,
    log_spectrum,
    principal_value,
    rewrap,
    ricker,
    time_shift,
    wrapped_phase,
)


def _naive_rdft(x, n):
    """O(n^2) reference DFT on the non-negative frequency band."""
    k = np.arange(n // 2 + 1)
    m = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, m) / n) @ x


def test_dft_matches_naive_sum():
    rng = np.random.default_rng(0)
    x = Trace(rng.standard_normal(128), 2e-3)
    spec = dft(x)
    ref = _naive_rdft(x.data, 128)
    assert np.max(np.abs(spec.bins - ref)) < 1e-9
    assert spec.n_bins == 65
    assert spec.df == pytest.approx(1.0 / (128 * 2e-3))
    assert np.allclose(spec.frequencies(), np.fft.rfftfreq(128, 2e-3))


def test_dft_spike_is_flat():
    x = np.zeros(64)
    x[0] = 1.0
    spec = dft(Trace(x, 1e-3))
    assert np.max(np.abs(spec.bins - 1.0)) < 1e-12


def test_dft_on_grid_cosine_single_bin():
    n, dt, k = 128, 1e-3, 10
    t = np.arange(n) * dt
    f = k / (n * dt)
    spec = dft(Trace(np.cos(2 * np.pi * f * t), dt))
    amp = spec.amplitude()
    assert amp[k] == pytest.approx(n / 2, rel=1e-12)
    others = np.delete(amp, k)
    assert np.max(others) < 1e-9 * amp[k]


def test_idft_round_trip():
    rng = np.random.default_rng(5)
    for n in (64, 65):  # even and odd lengths
        x = Trace(rng.standard_normal(n), 1e-3, t_start=0.25)
        back = idft(dft(x))
        assert np.max(np.abs(back.data - x.data)) < 1e-10
        assert back.t_start == x.t_start
        assert back.n == n


def test_parseval():
    rng = np.random.default_rng(9)
    x = rng.standard_normal(256)
    spec = dft(Trace(x, 1e-3))
    a2 = spec.amplitude() ** 2
    # one-sided band: double the interior bins, count DC and Nyquist once
    total = a2[0] + a2[-1] + 2 * a2[1:-1].sum()
    assert total / 256 == pytest.approx(np.sum(x**2), rel=1e-9)


def test_amplitude_mask_relative_floor():
    bins = np.array([1.0, 1e-3, 1e-9, 0.5])
    spec = dft(Trace(np.ones(6), 1e-3))
    spec = type(spec)(bins, spec.df, 6, 1e-3)
    mask = amplitude_mask(spec, floor_rel=1e-6)
    assert mask.tolist() == [True, True, False, True]


def test_principal_value_range_and_edge():
    rng = np.random.default_rng(1)
    phase = rng.uniform(-40, 40, size=500)
    p = principal_value(phase)
    assert np.all(p >= -np.pi)
    assert np.all(p < np.pi)
    # values equivalent mod 2 pi
    assert np.max(np.abs(np.exp(1j * p) - np.exp(1j * phase))) < 1e-9
    # the boundary itself belongs to the negative side
    assert principal_value(np.array([np.pi])) == pytest.approx(-np.pi)
    assert principal_value(np.array([-np.pi])) == pytest.approx(-np.pi)


def test_wrapped_phase_negative_real_axis():
    # minus a spike: every bin sits on the negative real axis -> -pi, never +pi
    x = np.zeros(64)
    x[0] = -1.0
    curve = wrapped_phase(dft(Trace(x, 1e-3)))
    assert np.all(curve.values == -np.pi)
    assert curve.kind == "wrapped"


def test_wrapped_phase_masks_floored_bins():
    x = ricker(30.0, 1e-3, 1024, t0=0.256)
    curve = wrapped_phase(dft(x), floor_rel=1e-12)
    # a 30 Hz wavelet sampled at 1 ms has an underflowed high-f tail,
    # and its zero mean puts the DC bin below the floor as well
    assert not curve.mask.all()
    assert not curve.mask[0]
    assert curve.mask[1:50].all()


def test_log_spectrum_values():
    x = np.zeros(64)
    x[0] = 1.0
    spec = dft(Trace(x, 1e-3))
    phase = PhaseCurve(np.zeros(33), "unwrapped")
    logs = log_spectrum(spec, phase)
    assert np.max(np.abs(logs)) < 1e-12  # |S| = 1 -> 0 everywhere

    spec_e = type(spec)(spec.bins * np.e, spec.df, 64, 1e-3)
    logs_e = log_spectrum(spec_e, phase)
    assert np.max(np.abs(logs_e.real - 1.0)) < 1e-12


def test_log_spectrum_rejects_wrapped_curve():
    x = ricker(30.0, 1e-3, 64)
    spec = dft(x)
    with pytest.raises(ConfigError):
        log_spectrum(spec, wrapped_phase(spec))


def test_log_spectrum_rejects_zero_spectrum():
    spec = dft(Trace(np.ones(16), 1e-3))
    zero = type(spec)(np.zeros(9, complex), spec.df, 16, 1e-3)
    with pytest.raises(SpectralError):
        log_spectrum(zero, PhaseCurve(np.zeros(9), "unwrapped"))


def test_cepstrum_of_spike_is_zero():
    x = np.zeros(128)
    x[0] = 1.0
    c = cepstrum(Trace(x, 1e-3))
    assert np.max(np.abs(c.values)) < 1e-12


def test_cepstrum_of_delayed_spike_is_zero():
    # a pure delay is all linear phase, which the cepstrum removes
    x = np.zeros(128)
    x[10] = 1.0
    c = cepstrum(Trace(x, 1e-3))
    assert np.max(np.abs(c.values)) < 1e-8
    assert c.removed_slope == pytest.approx(-2 * np.pi * 10 * 1e-3, rel=1e-9)


def test_cepstrum_rejects_all_zero():
    with pytest.raises(SpectralError):
        cepstrum(Trace(np.zeros(32), 1e-3))


def test_cepstral_additivity():
    """Convolution in time becomes addition in the cepstral domain."""
    n, dt = 128, 4e-3
    t = np.arange(n) * dt
    w = Trace(np.exp(-0.5 * ((t - 32e-3) / 8e-3) ** 2), dt)
    rng = np.random.default_rng(1003)
    r = np.zeros(n)
    pos = rng.choice(np.arange(2, n // 5), 3, replace=False)
    r[pos] = [1.0, *(rng.uniform(0.1, 0.25, 2) * rng.choice([-1, 1], 2))]
    rt = Trace(r, dt)
    s = circular_convolve(w, rt)
    err = np.abs(cepstrum(s).values - cepstrum(w).values - cepstrum(rt).values)
    assert np.max(err) < 1e-6


def test_inverse_cepstrum_of_zero_is_spike():
    from seiscep import Cepstrum

    c = Cepstrum(np.zeros(64), dq=1e-3, linear_phase_removed=False)
    x = inverse_cepstrum(c)
    assert x.data[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(x.data[1:])) < 1e-12


def test_cepstrum_round_trip_ricker():
    x = ricker(30.0, 4e-3, 256, t0=0.256)
    back = inverse_cepstrum(cepstrum(x))
    assert np.max(np.abs(back.data - x.data)) < 1e-6 * np.max(np.abs(x.data))


def test_cepstrum_round_trip_restores_delay():
    # the recorded slope brings the shifted wavelet back in place
    # (an integer-sample shift, so argmax is unambiguous)
    x = time_shift(ricker(30.0, 4e-3, 256, t0=0.256), 0.088)
    back = inverse_cepstrum(cepstrum(x))
    assert np.max(np.abs(back.data - x.data)) < 1e-6
    assert np.argmax(back.data) == np.argmax(x.data)


def test_rewrap_restores_principal_bitwise():
    from seiscep import prepare_input, unwrap_curve

    x = time_shift(ricker(30.0, 1e-3, 512, t0=0.128), 0.06)
    inp = prepare_input(x)
    for method in ("PU-M", "PU-K"):
        curve = unwrap_curve(inp, method)
        back = rewrap(curve)
        assert back.kind == "wrapped"
        assert np.array_equal(back.values, inp.wrapped.values)


def test_rewrap_falls_back_to_principal_value():
    vals = np.array([0.5, 4.0, 7.0])
    curve = PhaseCurve(vals, "unwrapped")
    back = rewrap(curve)
    assert np.allclose(back.values, principal_value(vals))


def test_cepstrum_concentration_contrast():
    # a smooth pulse concentrates near zero quefrency; a spike series does not
    n, dt = 256, 4e-3
    t = np.arange(n) * dt
    w = Trace(np.exp(-0.5 * ((t - 0.128) / 10e-3) ** 2), dt)
    q = np.minimum(np.arange(n), n - np.arange(n))
    ew = cepstrum(w).values ** 2
    share_w = ew[q <= 16].sum() / ew.sum()
    assert share_w > 0.8

    r = gen_reflectivity(n, 0.15, seed=4, dt=dt)
    er = cepstrum(r).values ** 2
    share_r = er[q <= 16].sum() / er.sum()
    assert share_r < 0.8


def test_cepstrum_quefrencies():
    # signed circular axis: 0 .. n/2 stay positive, then -(n/2 - 1) .. -1
    c = cepstrum(ricker(30.0, 1e-3, 64))
    assert c.n == 64
    k = np.arange(64)
    k = np.where(k <= 32, k, k - 64)
    assert np.allclose(c.quefrencies(), k * 1e-3)
