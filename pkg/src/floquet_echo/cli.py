"""Command-line interface: deterministic parameter sweeps written as CSV
tables with gnuplot scripts alongside.

Subcommands: sweep-frequency, sweep-n, integrand, peaks-dips, oracle.
Configuration merges, in increasing precedence: per-command defaults,
--preset, --config file (INI-style sections, flat keys), CLI flags.

Every CSV starts with '#' comment lines embedding the tool version and the
run configuration. Execution-only fields (workers, output directory) are
deliberately excluded so identical physics configs produce byte-identical
files regardless of worker count. Floats are written with repr(): the
shortest digit string that round-trips.

Exit codes: 0 success, 1 input error, 2 tolerance failure (oracle),
3 I/O error.
"""
from __future__ import annotations

import argparse
import configparser
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .analysis import bessel_j0, bessel_peak_frequencies, dip_frequencies, integrand_profile
from .fidelity import (
    direct_fidelity,
    finite_mode_terms,
    floquet_table,
    g_dec,
    g_inf_closed,
    g_n,
)
from .models import DiracParams, DriveParams, default_steps


class ToleranceFailure(Exception):
    """Oracle discrepancy above the configured tolerance."""


@dataclass(frozen=True)
class RunConfig:
    model: str = "ising"
    h: float = 1.0
    amplitude: float = 1.0
    phi0: float = 0.0
    m0: float = 1.0
    vf: float = 1.0
    lattice_a: float = 1.0
    omega0: float = 1.0
    L: int = 1000
    n: str = "1,2,12,100"
    omega_list: str | None = None
    omega_min: float = 0.1
    omega_max: float = 100.0
    omega_samples: int = 50
    omega_scale: str = "log"
    densify_dips: bool = True
    mode: str = "infinity"
    steps: int | None = None
    oracle_tol: float = 1e-8
    workers: int = 1
    out: str = "out"


_BOOL_KEYS = {"densify_dips"}
_INT_KEYS = {"L", "omega_samples", "steps", "workers"}
_FLOAT_KEYS = {
    "h", "amplitude", "phi0", "m0", "vf", "lattice_a", "omega0",
    "omega_min", "omega_max", "oracle_tol",
}
_CONFIG_KEYS = {f.name for f in fields(RunConfig)}

# execution-only keys, excluded from CSV headers so files stay
# byte-identical across worker counts and output locations
_EXEC_KEYS = {"workers", "out"}

PRESETS = {
    "fig1": {
        "model": "ising", "L": 1000, "n": "1,2,12,100",
        "omega_min": 0.1, "omega_max": 100.0, "omega_samples": 400,
        "omega_scale": "log", "densify_dips": True,
    },
    "fig2": {
        "model": "ising", "L": 1000, "n": "12,100",
        "omega_min": 0.25, "omega_max": 1.2, "omega_samples": 300,
        "omega_scale": "log", "densify_dips": True,
    },
    "fig3": {"model": "ising", "L": 1000, "omega0": 0.4, "mode": "infinity"},
    "fig4": {"model": "dirac", "L": 1000, "m0": 1.0, "omega0": 50.0, "n": "0:100"},
}

_COMMAND_DEFAULTS = {
    "oracle": {"L": 64, "n": "1,2,5", "omega_list": "0.4,2.0,6.0"},
    "peaks-dips": {"omega_min": 0.3, "omega_max": 1.0},
    "integrand": {"omega0": 0.4},
    "sweep-n": {"omega0": 50.0},
}


def _coerce(key: str, value):
    if key not in _CONFIG_KEYS:
        raise ValueError(f"unknown config key {key!r}")
    if value is None or isinstance(value, (int, float, bool)):
        return value
    value = str(value).strip()
    if key in _BOOL_KEYS:
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"bad boolean for {key}: {value!r}")
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    return value


def load_config_file(path: str) -> dict:
    """Flat key = value pairs, organized under arbitrary INI sections."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keys are case-sensitive ('L')
    read = parser.read(path)
    if not read:
        raise ValueError(f"cannot read config file {path!r}")
    out = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            out[key] = _coerce(key, value)
    return out


def build_config(command: str, args: argparse.Namespace) -> RunConfig:
    """defaults < command defaults < preset < config file < flags."""
    merged = dict(_COMMAND_DEFAULTS.get(command, {}))
    if args.preset:
        if args.preset not in PRESETS:
            raise ValueError(
                f"unknown preset {args.preset!r}; available: {sorted(PRESETS)}"
            )
        merged.update(PRESETS[args.preset])
    if args.config:
        merged.update(load_config_file(args.config))
    for key in ("L", "omega0", "n", "steps", "workers", "out", "model"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    merged = {k: _coerce(k, v) for k, v in merged.items()}
    cfg = replace(RunConfig(), **merged)
    if cfg.model not in ("ising", "dirac"):
        raise ValueError(f"model must be 'ising' or 'dirac', got {cfg.model!r}")
    if cfg.workers < 1:
        raise ValueError("workers must be >= 1")
    return cfg


def model_params(cfg: RunConfig, omega0: float | None = None):
    w = cfg.omega0 if omega0 is None else omega0
    if cfg.model == "ising":
        return DriveParams(h=cfg.h, A=cfg.amplitude, omega0=w, phi0=cfg.phi0)
    return DiracParams(m0=cfg.m0, omega0=w, vF=cfg.vf, a=cfg.lattice_a)


def parse_n_list(spec: str) -> list[int]:
    """Comma-separated entries; 'a:b' expands to the inclusive range."""
    out = []
    for token in str(spec).split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            lo, hi = token.split(":")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"bad n range {token!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(token))
    if not out:
        raise ValueError("empty n list")
    if any(n < 0 for n in out):
        raise ValueError("n values must be >= 0")
    return out


def resolve_omegas(cfg: RunConfig) -> np.ndarray:
    """Frequency samples for sweep-frequency: an explicit list, or a
    log/linear range densified near the 4/m dips."""
    if cfg.omega_list is not None:
        values = [float(v) for v in str(cfg.omega_list).split(",") if v.strip()]
        if not values:
            raise ValueError("empty frequency list")
        if any(w <= 0 for w in values):
            raise ValueError("frequencies must be positive")
        return np.array(sorted(values))
    if not (0.0 < cfg.omega_min < cfg.omega_max):
        raise ValueError("need 0 < omega_min < omega_max")
    if cfg.omega_samples < 2:
        raise ValueError("omega_samples must be >= 2")
    if cfg.omega_scale == "log":
        base = np.geomspace(cfg.omega_min, cfg.omega_max, cfg.omega_samples)
    elif cfg.omega_scale == "linear":
        base = np.linspace(cfg.omega_min, cfg.omega_max, cfg.omega_samples)
    else:
        raise ValueError(f"omega_scale must be 'log' or 'linear', got {cfg.omega_scale!r}")
    if cfg.densify_dips:
        extra = []
        for w in dip_frequencies(cfg.omega_min, cfg.omega_max):
            for rel in (-0.015, -0.005, 0.0, 0.005, 0.015):
                ww = w * (1.0 + rel)
                if cfg.omega_min <= ww <= cfg.omega_max:
                    extra.append(ww)
        base = np.concatenate([base, np.array(extra)])
    return np.unique(base)


# ---------------------------------------------------------------------------
# output helpers


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _header_lines(command: str, cfg: RunConfig, extra: dict | None = None) -> list[str]:
    lines = [f"# floquet-echo {__version__}", f"# command = {command}"]
    for f in sorted(_CONFIG_KEYS - _EXEC_KEYS):
        value = getattr(cfg, f)
        lines.append(f"# {f} = {'default' if value is None else _fmt(value)}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key} = {_fmt(value)}")
    return lines


def write_csv(path: str, header: list[str], columns: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in header:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_plot_script(
    path: str,
    csv_name: str,
    columns: list[str],
    logx: bool = False,
    x_index: int = 1,
    style: str = "lines",
) -> None:
    """gnuplot companion: one series per value column against the x column
    (1-based index)."""
    lines = [
        "# gnuplot script, generated alongside the CSV",
        'set datafile separator ","',
        'set datafile commentschars "#"',
        "set key outside",
        f'set xlabel "{columns[x_index - 1]}"',
    ]
    if logx:
        lines.append("set logscale x")
    series = [
        f'"{csv_name}" skip 1 using {x_index}:{i + 1} with {style} title "{name}"'
        for i, name in enumerate(columns)
        if i + 1 != x_index and name != "kind"
    ]
    lines.append("plot \\\n    " + ", \\\n    ".join(series))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _ensure_outdir(cfg: RunConfig) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    return cfg.out


# ---------------------------------------------------------------------------
# commands


def _freq_point(args):
    """Worker for one frequency sample: returns the full CSV row."""
    cfg, omega, n_list = args
    params = model_params(cfg, omega0=omega)
    table = floquet_table(params, cfg.L, steps=cfg.steps)
    row = [omega]
    clamps = 0
    for n in n_list:
        terms, c = finite_mode_terms(table, n)
        clamps += c
        row.append(0.0 if n == 0 else min(table.weight * _exact(terms), 0.0))
    row.append(min(g_dec(table), 0.0))
    row.append(min(g_inf_closed(table), 0.0))
    return row, clamps


def _exact(terms) -> float:
    from .numerics import exact_sum

    return exact_sum(terms)


def cmd_sweep_frequency(cfg: RunConfig) -> int:
    n_list = parse_n_list(cfg.n)
    omegas = resolve_omegas(cfg)
    jobs = [(cfg, float(w), n_list) for w in omegas]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_freq_point, jobs))
    else:
        results = [_freq_point(j) for j in jobs]
    rows = [r for r, _ in results]
    clamps = sum(c for _, c in results)
    out = _ensure_outdir(cfg)
    columns = ["omega0"] + [f"g_{n}" for n in n_list] + ["g_dec", "g_inf"]
    header = _header_lines("sweep-frequency", cfg, {"clamp_events": clamps})
    csv_path = os.path.join(out, "sweep_frequency.csv")
    write_csv(csv_path, header, columns, rows)
    write_plot_script(
        os.path.join(out, "sweep_frequency.gp"),
        "sweep_frequency.csv",
        columns,
        logx=cfg.omega_scale == "log",
    )
    print(f"wrote {csv_path} ({len(rows)} frequency samples)")
    return 0


def cmd_sweep_n(cfg: RunConfig) -> int:
    n_list = parse_n_list(cfg.n)
    params = model_params(cfg)
    table = floquet_table(params, cfg.L, steps=cfg.steps, workers=cfg.workers)
    rows = []
    clamps = 0
    for n in n_list:
        terms, c = finite_mode_terms(table, n)
        clamps += c
        rows.append([n, min(table.weight * _exact(terms), 0.0) if n else 0.0])
    out = _ensure_outdir(cfg)
    extra = {
        "g_dec": min(g_dec(table), 0.0),
        "g_inf": min(g_inf_closed(table), 0.0),
        "clamp_events": clamps,
    }
    columns = ["n", "g_n"]
    csv_path = os.path.join(out, "sweep_n.csv")
    write_csv(csv_path, _header_lines("sweep-n", cfg, extra), columns, rows)
    write_plot_script(os.path.join(out, "sweep_n.gp"), "sweep_n.csv", columns)
    print(f"wrote {csv_path} ({len(rows)} period counts)")
    return 0


def cmd_integrand(cfg: RunConfig) -> int:
    params = model_params(cfg)
    mode = cfg.mode if cfg.mode == "infinity" else int(cfg.mode)
    table = floquet_table(params, cfg.L, steps=cfg.steps, workers=cfg.workers)
    profile = integrand_profile(params, cfg.L, mode=mode, table=table)
    out = _ensure_outdir(cfg)
    if cfg.model == "ising":
        columns = ["k", "mu_k", "integrand"]
        rows = zip(profile.momenta, profile.mu, profile.values)
    else:
        columns = ["kx", "ky", "mu_k", "integrand"]
        rows = zip(
            profile.momenta[:, 0], profile.momenta[:, 1], profile.mu, profile.values
        )
    extra = {"clamp_events": profile.clamp_events}
    csv_path = os.path.join(out, "integrand.csv")
    write_csv(csv_path, _header_lines("integrand", cfg, extra), columns, rows)
    write_plot_script(os.path.join(out, "integrand.gp"), "integrand.csv", columns)
    print(f"wrote {csv_path} ({table.size} modes)")
    return 0


def cmd_peaks_dips(cfg: RunConfig) -> int:
    peaks = bessel_peak_frequencies(cfg.omega_min, cfg.omega_max)
    dips = dip_frequencies(cfg.omega_min, cfg.omega_max)
    rows = []
    for s, w in enumerate(peaks, start=1):
        rows.append(["peak", w, s, abs(bessel_j0(2.0 / w))])
    for w in dips:
        rows.append(["dip", w, int(round(4.0 / w)), ""])
    out = _ensure_outdir(cfg)
    columns = ["kind", "omega0", "order", "j0_abs"]
    csv_path = os.path.join(out, "peaks_dips.csv")
    write_csv(csv_path, _header_lines("peaks-dips", cfg), columns, rows)
    write_plot_script(
        os.path.join(out, "peaks_dips.gp"),
        "peaks_dips.csv",
        columns,
        x_index=2,
        style="points",
    )
    print(f"wrote {csv_path} ({len(peaks)} peaks, {len(dips)} dips)")
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    """Cross-validate the Floquet route against direct evolution.

    The direct reference runs at twice max(configured, default) substeps:
    at equal step counts both routes share one propagator and agree even
    when unconverged, so refining the reference is what lets a deliberately
    coarse --steps show up as a failure.
    """
    n_list = parse_n_list(cfg.n)
    if cfg.omega_list is None:
        raise ValueError("oracle needs omega_list")
    omegas = [float(v) for v in str(cfg.omega_list).split(",") if v.strip()]
    if not omegas:
        raise ValueError("empty frequency list")
    rows = []
    worst = 0.0
    for w in sorted(omegas):
        params = model_params(cfg, omega0=w)
        steps_fl = cfg.steps if cfg.steps is not None else default_steps(params)
        steps_ref = 2 * max(steps_fl, default_steps(params))
        table = floquet_table(params, cfg.L, steps=steps_fl)
        for n in n_list:
            gf = g_n(table, n)
            gd = direct_fidelity(params, cfg.L, n, steps=steps_ref, method="power")
            diff = abs(gf - gd)
            worst = max(worst, diff)
            rows.append([w, n, gf, gd, diff])
    out = _ensure_outdir(cfg)
    columns = ["omega0", "n", "g_floquet", "g_direct", "abs_diff"]
    extra = {"max_discrepancy": worst, "tolerance": cfg.oracle_tol}
    csv_path = os.path.join(out, "oracle.csv")
    write_csv(csv_path, _header_lines("oracle", cfg, extra), columns, rows)
    write_plot_script(
        os.path.join(out, "oracle.gp"), "oracle.csv", columns, style="points"
    )
    print(f"oracle: max |g_n - direct| = {worst:.3e} over {len(rows)} cases "
          f"(tolerance {cfg.oracle_tol:.1e})")
    if worst > cfg.oracle_tol:
        raise ToleranceFailure(
            f"max discrepancy {worst:.3e} exceeds tolerance {cfg.oracle_tol:.1e}"
        )
    return 0


_COMMANDS = {
    "sweep-frequency": cmd_sweep_frequency,
    "sweep-n": cmd_sweep_n,
    "integrand": cmd_integrand,
    "peaks-dips": cmd_peaks_dips,
    "oracle": cmd_oracle,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; 2 is reserved for tolerance
    failures here, so usage errors are rethrown as input errors."""

    def error(self, message):
        raise ValueError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="floquet-echo",
        description="Stroboscopic fidelity of periodically driven two-level "
        "mode families (Ising chain, 2D Dirac model).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI config file")
        p.add_argument("--preset", help=f"named preset: {', '.join(sorted(PRESETS))}")
        p.add_argument("--model", choices=["ising", "dirac"])
        p.add_argument("--L", type=int)
        p.add_argument("--omega0", type=float)
        p.add_argument("--n", help="period counts, e.g. '1,2,12' or '0:100'")
        p.add_argument("--steps", type=int, help="substeps per period (default: auto)")
        p.add_argument("--workers", type=int)
        p.add_argument("--out", help="output directory")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = build_config(args.command, args)
        return _COMMANDS[args.command](cfg)
    except ToleranceFailure as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, configparser.Error) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        path = getattr(exc, "filename", None)
        print(f"I/O error on {path!r}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
