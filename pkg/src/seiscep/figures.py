"""Figure rendering for the benchmark scenarios.

Each function takes the dict a bench runner returned and saves PNGs next
to the delimited outputs. Figures are a convenience view; the CSV/JSON
files remain the artifacts of record.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .bench import BenchConfig  # noqa: E402


def figure_synth(result: dict, cfg: BenchConfig) -> list:
    out = Path(cfg.out_dir)
    trace = result["trace"]
    spectrum = result["spectrum"]
    wrapped = result["wrapped"]

    fig, (ax_t, ax_p) = plt.subplots(2, 1, figsize=(8, 6))
    ax_t.plot(trace.times(), trace.data, lw=0.8)
    ax_t.set_xlabel("time [s]")
    ax_t.set_ylabel("amplitude")
    ax_t.set_title(
        f"trace: n={trace.n}, rotation {cfg.rotation_deg:g} deg, "
        f"shift {cfg.shift_s * 1e3:g} ms"
    )
    f = spectrum.frequencies()
    ax_p.plot(f, wrapped.values, ".", ms=2, label="wrapped")
    ax_p.plot(f, result["ideal"], lw=0.8, label="ideal line")
    ax_p.set_xlabel("frequency [Hz]")
    ax_p.set_ylabel("phase [rad]")
    ax_p.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = out / "synth_phase.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def figure_unwrap(result: dict, cfg: BenchConfig) -> list:
    out = Path(cfg.out_dir)
    spectrum = result["spectrum"]
    wrapped = result["wrapped"]
    f = spectrum.frequencies()

    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(f, wrapped.values, ".", ms=2, color="0.6", label="wrapped")
    for m, curve in result["curves"].items():
        ax.plot(f, curve.values, lw=1.0, label=m)
    ax.set_xlabel("frequency [Hz]")
    ax.set_ylabel("phase [rad]")
    ax.set_title("unwrapped phase by method")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = out / "unwrap_curves.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def figure_table1(result: dict, cfg: BenchConfig) -> list:
    out = Path(cfg.out_dir)
    rows = result["rows"]
    ns = [row.n_samples for row in rows]

    fig, (ax_p, ax_t) = plt.subplots(1, 2, figsize=(10, 4))
    for m in cfg.methods:
        phi = [row.phi0_deg.get(m, np.nan) for row in rows]
        ax_p.plot(ns, phi, "o-", label=m)
    ax_p.axhline(rows[0].ground_truth_deg, color="0.7", lw=0.8, ls="--",
                 label="ground truth")
    ax_p.set_xscale("log", base=2)
    ax_p.set_xticks(ns, [str(n) for n in ns])
    ax_p.set_xlabel("samples")
    ax_p.set_ylabel("fitted constant phase [deg]")
    ax_p.legend(loc="best", fontsize=8)

    for m in cfg.methods:
        wall = [row.wall_time_s.get(m, np.nan) for row in rows]
        ax_t.plot(ns, wall, "o-", label=m)
    ax_t.set_xscale("log", base=2)
    ax_t.set_yscale("log")
    ax_t.set_xticks(ns, [str(n) for n in ns])
    ax_t.set_xlabel("samples")
    ax_t.set_ylabel("median wall time [s]")
    ax_t.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = out / "table1.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def figure_estimate(result: dict, cfg: BenchConfig) -> list:
    out = Path(cfg.out_dir)
    est = result["estimate"]
    k = (est.wavelet.size - 1) // 2
    t = np.arange(-k, k + 1) * est.dt

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t, result["true_window"], lw=1.2, label="true")
    ax.plot(t, est.wavelet, lw=1.0, ls="--", label="estimated")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("amplitude")
    ax.set_title(
        f"wavelet estimate, {est.unwrap_method}, "
        f"{est.n_traces_used} traces, "
        f"correlation {result['correlation']:.3f}"
    )
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = out / "estimate_wavelet.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def figure_sweep(result: dict, cfg: BenchConfig) -> list:
    out = Path(cfg.out_dir)
    records = [r for r in result["records"] if "error" not in r]
    methods = sorted({r["method"] for r in records})

    fig, axes = plt.subplots(
        1, max(len(methods), 1), figsize=(4 * max(len(methods), 1), 4),
        sharey=True, squeeze=False,
    )
    for ax, m in zip(axes[0], methods):
        for n in sorted({r["n_samples"] for r in records}):
            pts = [
                r for r in records
                if r["method"] == m and r["n_samples"] == n
            ]
            x = [1e3 if r["snr_db"] == "inf" else r["snr_db"] for r in pts]
            y = [abs(r["phi0_err_deg"]) for r in pts]
            order = np.argsort(x)
            ax.plot(np.asarray(x)[order], np.asarray(y)[order], "o-",
                    label=f"n={n}")
        ax.set_title(m)
        ax.set_xlabel("SNR [dB] (1000 = noise-free)")
        ax.set_xscale("log")
        ax.legend(fontsize=7)
    axes[0][0].set_ylabel("|phase error| [deg]")
    fig.tight_layout()
    path = out / "sweep_errors.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]
