"""Benchmark scenarios and their file I/O.

Each runner builds a synthetic scenario, exercises the unwrappers or the
wavelet estimator, and writes delimited results: CSV for curves and row
tables, JSON for reports. Every file embeds the resolved configuration
and seed as comments (CSV) or a config object (JSON), and all non-timing
outputs are byte-identical across runs for a fixed (config, seed).
Wall-clock medians go to separate timing files so the result files stay
deterministic.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import unwrap as unwrap_mod
from .errors import ConfigError
from .spectral import DEFAULT_FLOOR_REL, TWO_PI
from .synth import SynthConfig, Trace, ricker
from .unwrap import METHODS
from .waveletest import correlation_at_best_lag, estimate_wavelet, synthetic_gather


@dataclass(frozen=True)
class BenchConfig:
    """Resolved settings for one scenario run.

    Built from defaults, then an optional flat key-value config file,
    then command-line flags; later sources win. All fields are plain
    values so the whole object can be round-tripped through the config
    grammar (`key = value`, one per line, # comments).
    """

    n_samples: int = 1024
    n_list: tuple = (256, 512, 1024)
    total_length_s: float = 1.024
    ricker_f0_hz: float = 30.0
    t0_s: float | None = None
    rotation_deg: float = 90.0
    shift_s: float = 0.090
    snr_db: float | None = None
    methods: tuple = METHODS
    reps: int = 3
    out_dir: str = "bench_out"
    seed: int = 0
    support_s: float = 0.200
    n_traces: int = 50
    spike_density: float = 0.1
    floor_rel: float = DEFAULT_FLOOR_REL
    sweep_n_list: tuple = (256, 512, 1024)
    sweep_snr_list: tuple = (math.inf, 40.0, 20.0, 10.0)
    figures: bool = True

    def validate(self) -> "BenchConfig":
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(
                    f"unknown method {m!r}; choose from {', '.join(METHODS)}"
                )
        if not self.methods:
            raise ConfigError("methods must not be empty")
        if self.reps < 3:
            raise ConfigError(f"reps must be >= 3 for timing, got {self.reps}")
        if not self.n_list:
            raise ConfigError("n_list must not be empty")
        if self.n_traces < 1:
            raise ConfigError("n_traces must be >= 1")
        return self

    def synth_config(self, n_samples: int, with_noise: bool = True) -> SynthConfig:
        snr = self.snr_db if with_noise else None
        if snr is not None and math.isinf(snr):
            snr = None
        return SynthConfig(
            n_samples=n_samples,
            total_length_s=self.total_length_s,
            ricker_f0_hz=self.ricker_f0_hz,
            t0_s=self.t0_s,
            rotation_deg=self.rotation_deg,
            shift_s=self.shift_s,
            snr_db=snr,
            rng_seed=self.seed,
        ).validate()


# --------------------------------------------------------------------------
# config grammar

_LIST_KEYS = {"n_list", "sweep_n_list", "sweep_snr_list", "methods"}


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    return str(value)


def _parse_value(key: str, raw: str):
    """Coerce one config value to the type of the BenchConfig default."""
    raw = raw.strip()
    defaults = BenchConfig()
    if key not in {f.name for f in fields(BenchConfig)}:
        raise ConfigError(f"unknown config key {key!r}")
    if key in _LIST_KEYS:
        items = [p.strip() for p in raw.split(",") if p.strip()]
        if key == "methods":
            return tuple(items)
        if key == "sweep_snr_list":
            parsed = (_parse_float_or_none(p) for p in items)
            return tuple(math.inf if v is None else v for v in parsed)
        try:
            return tuple(int(p) for p in items)
        except ValueError:
            raise ConfigError(f"{key} expects integers, got {raw!r}") from None
    default = getattr(defaults, key)
    if key in ("t0_s", "snr_db"):
        return _parse_float_or_none(raw)
    if isinstance(default, bool):
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ConfigError(f"{key} expects true/false, got {raw!r}")
    if isinstance(default, int):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} expects an integer, got {raw!r}") from None
    if isinstance(default, float):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key} expects a number, got {raw!r}") from None
    return raw


def _parse_float_or_none(raw: str):
    low = raw.strip().lower()
    if low in ("none", ""):
        return None
    if low in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"expected a number, none, or inf, got {raw!r}") from None


def parse_config_file(path) -> dict:
    """Read `key = value` lines; # starts a comment, blanks are skipped."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(
                f"{path}:{lineno}: expected 'key = value', got {line.rstrip()!r}"
            )
        key, raw = body.split("=", 1)
        key = key.strip()
        values[key] = _parse_value(key, raw)
    return values


def load_config(config_path=None, overrides: dict | None = None) -> BenchConfig:
    """Defaults <- config file <- overrides, validated."""
    merged = {}
    if config_path is not None:
        merged.update(parse_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        merged[key] = value
    try:
        cfg = replace(BenchConfig(), **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def config_lines(cfg: BenchConfig) -> list:
    """The resolved config in its own grammar, sorted by key."""
    return [
        f"{f.name} = {_format_value(getattr(cfg, f.name))}"
        for f in sorted(fields(cfg), key=lambda f: f.name)
    ]


# --------------------------------------------------------------------------
# writers

def _write_csv(path, comments, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _config_payload(cfg: BenchConfig) -> dict:
    return {f.name: _format_value(getattr(cfg, f.name)) for f in fields(cfg)}


def write_trace_csv(path, trace: Trace, cfg: BenchConfig):
    rows = (
        (_fmt(t), _fmt(a))
        for t, a in zip(trace.times(), trace.data)
    )
    _write_csv(path, config_lines(cfg), ("time_s", "amplitude"), rows)


def read_trace_csv(path) -> Trace:
    """Read a two-column (time_s, amplitude) CSV back into a Trace."""
    times = []
    amps = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if not body or body.startswith("time_s"):
                continue
            parts = body.split(",")
            if len(parts) != 2:
                raise ConfigError(f"{path}: expected two columns, got {line!r}")
            times.append(float(parts[0]))
            amps.append(float(parts[1]))
    if len(times) < 2:
        raise ConfigError(f"{path}: a trace needs at least two samples")
    times_arr = np.asarray(times)
    steps = np.diff(times_arr)
    dt = float(steps[0])
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-6, atol=0.0):
        raise ConfigError(f"{path}: time column is not uniformly sampled")
    return Trace(np.asarray(amps), dt, t_start=float(times_arr[0]))


def write_curve_csv(path, spectrum, wrapped, unwrapped_by_method, cfg):
    """Fixed schema: frequency_hz, wrapped_rad, unwrapped_<method>_rad, mask."""
    header = ["frequency_hz", "wrapped_rad"]
    for m in unwrapped_by_method:
        header.append(f"unwrapped_{m}_rad")
    header.append("mask")
    freqs = spectrum.frequencies()
    mask = wrapped.trusted()
    curves = list(unwrapped_by_method.values())
    rows = []
    for k in range(freqs.size):
        row = [_fmt(freqs[k]), _fmt(wrapped.values[k])]
        row.extend(_fmt(c.values[k]) for c in curves)
        row.append(str(int(mask[k])))
        rows.append(row)
    _write_csv(path, config_lines(cfg), header, rows)


# --------------------------------------------------------------------------
# scenario runners

def canonical_deg(phi_deg: float) -> float:
    """Reduce an angle to (-180, 180]; reports quote this branch."""
    phi = (phi_deg + 180.0) % 360.0 - 180.0
    return 180.0 if phi == -180.0 else phi


def _ideal_phase(cfg: BenchConfig, spectrum) -> np.ndarray:
    """The unwrapped line a rotation + delay should produce."""
    synth_cfg = cfg.synth_config(spectrum.n_time)
    delay = synth_cfg.t0 + cfg.shift_s
    f = spectrum.frequencies()
    return -(np.deg2rad(cfg.rotation_deg) + TWO_PI * f * delay)


def run_synth(cfg: BenchConfig) -> dict:
    """Write the scenario trace and its wrapped/ideal phase curves."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace = cfg.synth_config(cfg.n_samples).make_trace()
    inp = unwrap_mod.prepare_input(trace, floor_rel=cfg.floor_rel)
    trace_path = out / "synth_trace.csv"
    write_trace_csv(trace_path, trace, cfg)

    freqs = inp.spectrum.frequencies()
    ideal = _ideal_phase(cfg, inp.spectrum)
    mask = inp.wrapped.trusted()
    phase_path = out / "synth_phase.csv"
    rows = (
        (_fmt(freqs[k]), _fmt(inp.wrapped.values[k]), _fmt(ideal[k]),
         str(int(mask[k])))
        for k in range(freqs.size)
    )
    _write_csv(
        phase_path,
        config_lines(cfg),
        ("frequency_hz", "wrapped_rad", "ideal_rad", "mask"),
        rows,
    )
    return {
        "trace": trace,
        "spectrum": inp.spectrum,
        "wrapped": inp.wrapped,
        "ideal": ideal,
        "paths": [trace_path, phase_path],
    }


def run_unwrap(cfg: BenchConfig, trace_path) -> dict:
    """Unwrap a trace file with every requested method and write curves."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace = read_trace_csv(trace_path)
    inp = unwrap_mod.prepare_input(trace, floor_rel=cfg.floor_rel)
    curves = {}
    fits = {}
    for m in cfg.methods:
        report = unwrap_mod.run_method(trace, m, floor_rel=cfg.floor_rel)
        curves[m] = report.curve
        fits[m] = {
            "phi0_deg": canonical_deg(report.fit.phi0_deg),
            "tau_s": report.fit.tau_s,
            "residual_rms_rad": report.fit.residual_rms,
            "n_bins": report.fit.n_bins,
            "f_lo_hz": report.fit.f_lo_hz,
            "f_hi_hz": report.fit.f_hi_hz,
            "notes": list(report.notes),
        }
    curve_path = out / "unwrap_curves.csv"
    write_curve_csv(curve_path, inp.spectrum, inp.wrapped, curves, cfg)
    fits_path = out / "unwrap_fits.json"
    _write_json(fits_path, {"config": _config_payload(cfg), "fits": fits})
    return {
        "trace": trace,
        "spectrum": inp.spectrum,
        "wrapped": inp.wrapped,
        "curves": curves,
        "fits": fits,
        "paths": [curve_path, fits_path],
    }


@dataclass(frozen=True, eq=False)
class ResultRow:
    """One table1 result row: fits and timings for every method at one n."""

    n_samples: int
    ground_truth_deg: float
    seed: int
    phi0_deg: dict
    tau_ms: dict
    wall_time_s: dict
    errors: dict


def run_table1(cfg: BenchConfig) -> dict:
    """Accuracy and timing rows over cfg.n_list.

    Per method and per n: one discarded warm-up, then cfg.reps timed
    repetitions; the median lands in the timing artifacts, the (identical
    across repetitions) fit values in the result artifacts. A method that
    raises is marked failed in-row and the run continues.
    """
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for n in cfg.n_list:
        synth_cfg = cfg.synth_config(n)
        trace = synth_cfg.make_trace()
        phi0 = {}
        tau = {}
        walls = {}
        errors = {}
        for m in cfg.methods:
            try:
                unwrap_mod.run_method(trace, m, floor_rel=cfg.floor_rel)  # warm-up
                times = []
                report = None
                for _ in range(cfg.reps):
                    report = unwrap_mod.run_method(trace, m, floor_rel=cfg.floor_rel)
                    times.append(report.wall_time_s)
                phi0[m] = canonical_deg(report.fit.phi0_deg)
                tau[m] = (report.fit.tau_s - synth_cfg.t0) * 1e3
                walls[m] = statistics.median(times)
            except RuntimeError as exc:
                errors[m] = f"{type(exc).__name__}: {exc}"
        rows.append(
            ResultRow(
                n_samples=n,
                ground_truth_deg=canonical_deg(cfg.rotation_deg),
                seed=cfg.seed,
                phi0_deg=phi0,
                tau_ms=tau,
                wall_time_s=walls,
                errors=errors,
            )
        )

    header = ["n_samples", "ground_truth_deg"]
    for m in cfg.methods:
        header += [f"phi0_{m}_deg", f"tau_{m}_ms"]
    header.append("seed")
    csv_rows = []
    for row in rows:
        cells = [str(row.n_samples), _fmt(row.ground_truth_deg)]
        for m in cfg.methods:
            if m in row.errors:
                cells += ["failed", "failed"]
            else:
                cells += [_fmt(row.phi0_deg[m]), _fmt(row.tau_ms[m])]
        cells.append(str(row.seed))
        csv_rows.append(cells)
    results_csv = out / "table1_results.csv"
    _write_csv(results_csv, config_lines(cfg), header, csv_rows)

    results_json = out / "table1_results.json"
    _write_json(
        results_json,
        {
            "config": _config_payload(cfg),
            "rows": [
                {
                    "n_samples": row.n_samples,
                    "ground_truth_deg": row.ground_truth_deg,
                    "seed": row.seed,
                    "phi0_deg": row.phi0_deg,
                    "tau_ms": row.tau_ms,
                    "errors": row.errors,
                }
                for row in rows
            ],
        },
    )

    timing_header = ["n_samples"] + [f"wall_time_{m}_s" for m in cfg.methods]
    timing_rows = []
    for row in rows:
        cells = [str(row.n_samples)]
        for m in cfg.methods:
            cells.append("failed" if m in row.errors else _fmt(row.wall_time_s[m]))
        timing_rows.append(cells)
    timing_csv = out / "table1_timing.csv"
    _write_csv(timing_csv, config_lines(cfg), timing_header, timing_rows)
    timing_json = out / "table1_timing.json"
    _write_json(
        timing_json,
        {
            "config": _config_payload(cfg),
            "rows": [
                {"n_samples": row.n_samples, "wall_time_s": row.wall_time_s}
                for row in rows
            ],
        },
    )
    return {
        "rows": rows,
        "paths": [results_csv, results_json, timing_csv, timing_json],
    }


def run_estimate(cfg: BenchConfig) -> dict:
    """Estimate the wavelet from a synthetic gather and compare to truth."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dt = cfg.total_length_s / cfg.n_samples
    snr = cfg.snr_db
    if snr is not None and math.isinf(snr):
        snr = None
    gather = synthetic_gather(
        cfg.n_traces,
        seed=cfg.seed,
        n_samples=cfg.n_samples,
        dt_s=dt,
        f0_hz=cfg.ricker_f0_hz,
        spike_density=cfg.spike_density,
        snr_db=snr,
    )
    method = cfg.methods[0]
    estimate = estimate_wavelet(
        gather, support_s=cfg.support_s, method=method, floor_rel=cfg.floor_rel
    )
    k = (estimate.wavelet.size - 1) // 2
    true_full = ricker(cfg.ricker_f0_hz, dt, cfg.n_samples, t0=0.0).data
    true_win = true_full[(np.arange(-k, k + 1)) % cfg.n_samples]
    true_win = true_win / np.max(np.abs(true_win))
    corr = correlation_at_best_lag(estimate.wavelet, true_win)

    wavelet_csv = out / "estimate_wavelet.csv"
    times = (np.arange(-k, k + 1)) * dt
    rows = (
        (_fmt(times[i]), _fmt(estimate.wavelet[i]), _fmt(true_win[i]))
        for i in range(times.size)
    )
    _write_csv(
        wavelet_csv,
        config_lines(cfg),
        ("time_s", "estimated", "true"),
        rows,
    )
    report_json = out / "estimate_report.json"
    _write_json(
        report_json,
        {
            "config": _config_payload(cfg),
            "method": method,
            "correlation_at_best_lag": corr,
            "n_traces_used": estimate.n_traces_used,
            "failed_trace_ids": list(estimate.failed_trace_ids),
        },
    )
    return {
        "estimate": estimate,
        "true_window": true_win,
        "correlation": corr,
        "paths": [wavelet_csv, report_json],
    }


def run_sweep(cfg: BenchConfig) -> dict:
    """Fit accuracy over the (sample count, SNR) grid, noise-free included."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for n in cfg.sweep_n_list:
        for snr in cfg.sweep_snr_list:
            snr_val = None if (snr is None or math.isinf(snr)) else float(snr)
            scen = replace(cfg, snr_db=snr_val)
            synth_cfg = scen.synth_config(n)
            trace = synth_cfg.make_trace()
            for m in cfg.methods:
                rec = {
                    "n_samples": n,
                    "snr_db": "inf" if snr_val is None else snr_val,
                    "method": m,
                }
                try:
                    report = unwrap_mod.run_method(trace, m, floor_rel=cfg.floor_rel)
                    phi0 = canonical_deg(report.fit.phi0_deg)
                    tau_ms = (report.fit.tau_s - synth_cfg.t0) * 1e3
                    rec["phi0_deg"] = phi0
                    rec["tau_ms"] = tau_ms
                    rec["phi0_err_deg"] = canonical_deg(phi0 - cfg.rotation_deg)
                    rec["tau_err_ms"] = tau_ms - cfg.shift_s * 1e3
                except RuntimeError as exc:
                    rec["error"] = f"{type(exc).__name__}: {exc}"
                records.append(rec)

    sweep_csv = out / "sweep_results.csv"
    header = (
        "n_samples", "snr_db", "method",
        "phi0_deg", "tau_ms", "phi0_err_deg", "tau_err_ms",
    )
    csv_rows = []
    for rec in records:
        if "error" in rec:
            cells = [str(rec["n_samples"]), _fmt(rec["snr_db"]), rec["method"],
                     "failed", "failed", "failed", "failed"]
        else:
            cells = [
                str(rec["n_samples"]), _fmt(rec["snr_db"]), rec["method"],
                _fmt(rec["phi0_deg"]), _fmt(rec["tau_ms"]),
                _fmt(rec["phi0_err_deg"]), _fmt(rec["tau_err_ms"]),
            ]
        csv_rows.append(cells)
    _write_csv(sweep_csv, config_lines(cfg), header, csv_rows)
    sweep_json = out / "sweep_results.json"
    _write_json(sweep_json, {"config": _config_payload(cfg), "records": records})
    return {"records": records, "paths": [sweep_csv, sweep_json]}
