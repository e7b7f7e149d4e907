"""Acceptance checks, one per release criterion.

Each test exercises one end-to-end behavior the package promises, prints
a single PASS line with the measured numbers (visible under pytest -s),
and pins the tolerance it was accepted against.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from seiscep import (
    PhaseCurve,
    Spectrum,
    Trace,
    UnwrapInput,
    bench,
    cepstrum,
    circular_convolve,
    correlation_at_best_lag,
    estimate_wavelet,
    factor_polynomial,
    principal_value,
    rewrap,
    ricker,
    run_method,
    synthetic_gather,
    unwrap_curve,
)
from seiscep.bench import BenchConfig, canonical_deg

SAMPLE_MS = {256: 4.0, 512: 2.0, 1024: 1.0}  # 1.024 s record


def table1_rows(tmp_path, methods):
    cfg = BenchConfig(out_dir=str(tmp_path), methods=methods).validate()
    return bench.run_table1(cfg)["rows"]


def worst_phi0_err(rows, method):
    return max(abs(canonical_deg(r.phi0_deg[method] - 90.0)) for r in rows)


def test_criterion_01_factorization_unwrapper_is_exact(tmp_path):
    t0 = time.perf_counter()
    rows = table1_rows(tmp_path, ("PU-F",))
    elapsed = time.perf_counter() - t0
    phi_err = worst_phi0_err(rows, "PU-F")
    tau_err = max(
        abs(r.tau_ms["PU-F"] - 90.0) / SAMPLE_MS[r.n_samples] for r in rows
    )
    assert phi_err <= 0.5
    assert tau_err <= 1.0  # within one sample at each n
    assert elapsed < 60.0
    print(
        f"PASS criterion 1: PU-F max|phi0-90|={phi_err:.2e} deg, "
        f"max tau err={tau_err:.2e} samples, {elapsed:.2f}s"
    )


def test_criterion_02_jump_and_crossing_unwrappers_accurate(tmp_path):
    t0 = time.perf_counter()
    rows = table1_rows(tmp_path, ("PU-M", "PU-K"))
    elapsed = time.perf_counter() - t0
    err_m = worst_phi0_err(rows, "PU-M")
    err_k = worst_phi0_err(rows, "PU-K")
    gap = max(
        abs(canonical_deg(r.phi0_deg["PU-M"] - r.phi0_deg["PU-K"]))
        for r in rows
    )
    assert err_m <= 2.0 and err_k <= 2.0
    assert gap <= 1.0
    assert elapsed < 5.0
    print(
        f"PASS criterion 2: PU-M err={err_m:.2e} deg, PU-K err={err_k:.2e} "
        f"deg, mutual gap={gap:.2e} deg, {elapsed:.2f}s"
    )


def test_criterion_03_derivative_unwrapper_diverges(tmp_path):
    rows = table1_rows(tmp_path, ("PU-F", "PU-S"))
    err_s = worst_phi0_err(rows, "PU-S")
    err_f = worst_phi0_err(rows, "PU-F")
    assert err_s > 10.0
    assert err_s >= 10.0 * err_f
    print(
        f"PASS criterion 3: PU-S worst err={err_s:.1f} deg vs PU-F "
        f"{err_f:.2e} deg (ratio {err_s / err_f:.1e})"
    )


def test_criterion_04_timing_ordering(tmp_path):
    cfg = BenchConfig(out_dir=str(tmp_path), n_list=(1024,)).validate()
    row = bench.run_table1(cfg)["rows"][0]
    walls = row.wall_time_s
    assert walls["PU-F"] >= 5.0 * walls["PU-M"]
    assert walls["PU-F"] >= walls["PU-K"]
    print(
        f"PASS criterion 4: n=1024 medians PU-M={walls['PU-M']:.2e}s, "
        f"PU-K={walls['PU-K']:.2e}s, PU-F={walls['PU-F']:.2e}s"
    )


def test_criterion_05_shift_recovery():
    worst = 0.0
    for shift_ms in (30.0, 60.0, 90.0):
        synth_cfg = BenchConfig(shift_s=shift_ms * 1e-3).synth_config(1024)
        trace = synth_cfg.make_trace()
        for m in ("PU-M", "PU-K", "PU-F"):
            rep = run_method(trace, m)
            tau_ms = (rep.fit.tau_s - synth_cfg.t0) * 1e3
            worst = max(worst, abs(tau_ms - shift_ms))
            assert abs(tau_ms - shift_ms) <= SAMPLE_MS[1024]
    print(f"PASS criterion 5: worst tau error {worst:.2e} ms over 30/60/90")


def curve_input(values, mask=None):
    dummy = Trace(np.ones(4), 1.0)
    n_time = 2 * (values.size - 1)
    spec = Spectrum(np.ones(values.size, complex), 1.0 / n_time, n_time, 1.0)
    return UnwrapInput(
        trace=dummy,
        spectrum=spec,
        wrapped=PhaseCurve(np.asarray(values, float), "wrapped", mask=mask),
    )


def test_criterion_06_rewrap_identity():
    rng = np.random.default_rng(606)
    n_bins = 129
    checked_pairs = 0
    for trial in range(1000):
        smooth = trial % 2 == 0
        if smooth:
            steps = rng.uniform(-(np.pi - 0.1), np.pi - 0.1, n_bins - 1)
            values = principal_value(
                rng.uniform(-np.pi, np.pi) + np.concatenate(([0], np.cumsum(steps)))
            )
        else:
            values = rng.uniform(-np.pi, np.pi, n_bins)
        mask = None
        if trial % 3 == 0:
            mask = rng.uniform(size=n_bins) > 0.2
            mask[0] = True
        inp = curve_input(values, mask)
        trusted = inp.wrapped.trusted()
        out_m = unwrap_curve(inp, "PU-M")
        out_k = unwrap_curve(inp, "PU-K")
        for out in (out_m, out_k):
            back = rewrap(out)
            assert np.array_equal(back.values[trusted], values[trusted])
        if smooth and mask is None:
            assert np.array_equal(out_m.values, out_k.values)
            checked_pairs += 1
    print(
        "PASS criterion 6: 1000 curves rewrap bitwise; PU-M == PU-K on "
        f"{checked_pairs} small-step curves"
    )


def test_criterion_07_cepstral_additivity():
    n, dt = 128, 4e-3
    t = np.arange(n) * dt
    w = Trace(np.exp(-0.5 * ((t - 32e-3) / 8e-3) ** 2), dt)
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        r = np.zeros(n)
        pos = rng.choice(np.arange(2, n // 5), 3, replace=False)
        r[pos] = [1.0, *(rng.uniform(0.1, 0.25, 2) * rng.choice([-1, 1], 2))]
        rt = Trace(r, dt)
        s = circular_convolve(w, rt)
        err = np.max(
            np.abs(
                cepstrum(s).values - cepstrum(w).values - cepstrum(rt).values
            )
        )
        worst = max(worst, err)
    assert worst < 1e-6
    print(f"PASS criterion 7: 100 pairs, worst additivity error {worst:.2e}")


def ring_root_set(seed):
    """Degree-255 root set with known locations spanning 0.5 <= |u| <= 2."""
    rng = np.random.default_rng(seed)
    sizes = (64, 56, 48, 40, 25, 16)
    radii = np.linspace(0.55, 1.9, 6) + rng.uniform(-0.04, 0.04, 6)
    roots = []
    coeffs = np.array([1.0])
    for m, r in zip(sizes, radii):
        sign = rng.choice([-1.0, 1.0])
        c = np.zeros(m + 1)
        c[0] = 1.0
        c[-1] = sign * r**m
        coeffs = np.convolve(coeffs, c)
        alpha = 0.0 if sign < 0 else np.pi / m
        roots.append(r * np.exp(1j * (2 * np.pi * np.arange(m) / m + alpha)))
    for _ in range(3):
        u = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0.3, np.pi - 0.3))
        coeffs = np.convolve(coeffs, np.array([1.0, -2 * u.real, abs(u) ** 2]))
        roots.append(np.array([u, np.conj(u)]))
    return np.concatenate(roots), coeffs


def test_criterion_08_root_finder_oracle():
    t0 = time.perf_counter()
    worst_match = 0.0
    worst_resid = 0.0
    for seed in range(20):
        roots, coeffs = ring_root_set(seed)
        rs = factor_polynomial(coeffs)
        cost = np.abs(roots[:, None] - rs.roots[None, :])
        ri, ci = linear_sum_assignment(cost)
        worst_match = max(worst_match, cost[ri, ci].max())
        worst_resid = max(worst_resid, rs.max_residual)
    elapsed = time.perf_counter() - t0
    assert worst_match < 1e-6
    assert worst_resid < 1e-8
    assert elapsed < 60.0
    print(
        f"PASS criterion 8: 20 degree-255 seeds, matched error "
        f"{worst_match:.2e}, residual {worst_resid:.2e}, {elapsed:.2f}s"
    )


def test_criterion_09_wavelet_estimation_quality():
    t0 = time.perf_counter()
    true_full = ricker(30.0, 1e-3, 1024, t0=0.0)
    k = round(0.2 / 1e-3)
    true_win = true_full.data[(np.arange(-k, k + 1)) % 1024]
    corrs = {}
    for label, snr in (("clean", None), ("20dB", 20.0)):
        gather = synthetic_gather(50, seed=7, snr_db=snr)
        est = estimate_wavelet(gather, 0.2, method="PU-K")
        corrs[label] = correlation_at_best_lag(est.wavelet, true_win)
    elapsed = time.perf_counter() - t0
    assert corrs["clean"] >= 0.95
    assert corrs["20dB"] >= 0.90
    assert elapsed < 120.0
    print(
        f"PASS criterion 9: 50-trace correlation clean={corrs['clean']:.4f}, "
        f"20 dB={corrs['20dB']:.4f}, {elapsed:.2f}s"
    )


def test_criterion_10_table_runs_deterministic(tmp_path):
    cfg = BenchConfig(out_dir=str(tmp_path)).validate()
    paths = bench.run_table1(cfg)["paths"]
    results = {
        p.name: p.read_bytes() for p in paths if "timing" not in p.name
    }
    assert len(results) == 2  # results CSV + JSON
    bench.run_table1(cfg)
    for p in paths:
        if p.name in results:
            assert p.read_bytes() == results[p.name], p.name
    print(
        "PASS criterion 10: repeated runs byte-identical "
        f"({', '.join(sorted(results))})"
    )
