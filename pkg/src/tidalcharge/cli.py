"""Command-line front end.

Commands::

    tidalcharge simulate --config exp.cfg --out series.csv
    tidalcharge sweep    --config exp.cfg --param rho_source --values 5000,11340 --out sweep.csv [--jobs 4]
    tidalcharge lockin   series.csv --fref 0.016666,0.033333 [--column Q]
    tidalcharge rydberg  --n 1,2,100 [--out table.csv]
    tidalcharge check    --config exp.cfg

Data files are CSV with LF line endings and 12 significant digits. Every
file written with ``--out`` gets a ``<out>.manifest.json`` next to it.
Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import datetime as _dt
import io
import json
import math
import sys

from . import __version__
from .chargesolver import (CSV_COLUMNS, SimulationError, SolverError, lock_in,
                           pair_breaking_assessment, simulate)
from .config import ConfigError, ExperimentConfig, load_config
from .constants import default_constants
from .electrostatics import cube_equilibrium_voltage
from .quadrature import QuadratureError
from .rydberg import (TidalEnvironment, diamagnetic_shift, parker_shift,
                      state_properties, tidal_shift)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

SWEEP_COLUMNS = ("param", "value", "max_abs_Q", "lockin_amp_f0", "lockin_amp_2f0", "max_abs_dn")
RYDBERG_COLUMNS = ("n", "a_n", "mu_n", "Phi_n", "dE_parker", "dE_tidal_1s", "dE_diamagnetic_1T")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    return f"{x:.11e}"


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from exc


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from exc


def resolve_config(path) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    return load_config(_read_text(path))


def write_manifest(out_path, command, config_path, cfg, started, extra=None):
    manifest = {
        "command": command,
        "config_path": config_path,
        "output_path": out_path,
        "started": started,
        "tool_version": __version__,
        "config": cfg.to_dict() if cfg is not None else None,
    }
    if extra:
        manifest.update(extra)
    _write_text(out_path + ".manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def simulation_csv(rows) -> str:
    return _csv_text(CSV_COLUMNS, ([fmt(getattr(r, c)) for c in CSV_COLUMNS] for r in rows))


def summarize(cfg: ExperimentConfig, rows) -> dict:
    t = [r.t for r in rows]
    Q = [r.Q for r in rows]
    f0 = cfg.omega / (2 * math.pi)
    return {
        "max_abs_Q": max(abs(q) for q in Q),
        "lockin_amp_f0": lock_in(t, Q, f0).amplitude,
        "lockin_amp_2f0": lock_in(t, Q, 2 * f0).amplitude,
        "max_abs_dn": max(abs(r.d_n) for r in rows),
    }


def _parse_list(text, convert, what):
    items = [v.strip() for v in text.split(",")] if text.strip() else []
    try:
        return [convert(v) for v in items]
    except ValueError:
        raise CliError(f"cannot parse {what} list {text!r}", EXIT_CONFIG) from None


def cmd_simulate(args):
    started = _now()
    cfg = resolve_config(args.config)
    rows = simulate(cfg)
    text = simulation_csv(rows)
    if args.out:
        _write_text(args.out, text)
        write_manifest(args.out, "simulate", args.config, cfg, started)
    else:
        sys.stdout.write(text)


def _sweep_point(cfg: ExperimentConfig) -> dict:
    return summarize(cfg, simulate(cfg))


def cmd_sweep(args):
    started = _now()
    cfg = resolve_config(args.config)
    values = [v.strip() for v in args.values.split(",")] if args.values.strip() else []
    variants = [cfg.with_value(args.param, raw) for raw in values]  # validate all before running
    if args.jobs > 1 and len(variants) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            summaries = list(pool.map(_sweep_point, variants))  # map keeps input order
    else:
        summaries = [_sweep_point(v) for v in variants]
    out_rows = []
    for variant, summary in zip(variants, summaries):
        value = getattr(variant, args.param)
        shown = fmt(value) if isinstance(value, float) else str(value).lower()
        out_rows.append([args.param, shown] + [fmt(summary[c]) for c in SWEEP_COLUMNS[2:]])
    text = _csv_text(SWEEP_COLUMNS, out_rows)
    if args.out:
        _write_text(args.out, text)
        write_manifest(args.out, "sweep", args.config, cfg, started,
                       {"param": args.param, "values": values})
    else:
        sys.stdout.write(text)


def read_series(path, column=None):
    """Read ``t`` and one signal column from a CSV file."""
    text = _read_text(path)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CliError(f"{path}: line 1: empty file", EXIT_CONFIG) from None
    header = [h.strip() for h in header]
    if "t" not in header:
        raise CliError(f"{path}: line 1: no 't' column", EXIT_CONFIG)
    if column is None:
        others = [h for h in header if h != "t"]
        if len(others) == 1:
            column = others[0]
        elif "Q" in others:
            column = "Q"
        else:
            raise CliError(f"{path}: line 1: several signal columns, pick one with --column",
                           EXIT_CONFIG)
    if column not in header:
        raise CliError(f"{path}: line 1: no '{column}' column", EXIT_CONFIG)
    it, ix = header.index("t"), header.index(column)
    t, x = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise CliError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}",
                           EXIT_CONFIG)
        try:
            t.append(float(row[it]))
            x.append(float(row[ix]))
        except ValueError:
            raise CliError(f"{path}: line {lineno}: non-numeric value", EXIT_CONFIG) from None
    return t, x, column


def cmd_lockin(args):
    freqs = _parse_list(args.fref, float, "frequency")
    if not freqs:
        raise CliError("--fref needs at least one frequency", EXIT_CONFIG)
    t, x, column = read_series(args.series, args.column)
    lines = []
    for f in freqs:
        try:
            res = lock_in(t, x, f)
        except ValueError as exc:
            raise CliError(f"lock-in at {f!r} Hz: {exc}", EXIT_NUMERIC) from exc
        lines.append(f"f_ref={fmt(f)} column={column} in_phase={fmt(res.in_phase)} "
                     f"quadrature={fmt(res.quadrature)} amplitude={fmt(res.amplitude)} "
                     f"n_periods={res.n_periods}")
    sys.stdout.write("\n".join(lines) + "\n")


def rydberg_table(ns) -> str:
    consts = default_constants()
    env = TidalEnvironment.earth(consts, B=1.0)
    rows = []
    for n in ns:
        st = state_properties(n, consts)
        rows.append([str(n), fmt(st.a_n), fmt(st.mu_n), fmt(st.Phi_n),
                     fmt(parker_shift(n, env, consts=consts)),
                     fmt(tidal_shift(n, env, 1.0, consts)),
                     fmt(diamagnetic_shift(n, env, consts))])
    return _csv_text(RYDBERG_COLUMNS, rows)


def cmd_rydberg(args):
    started = _now()
    ns = _parse_list(args.n, int, "n")
    bad = [n for n in ns if n < 1]
    if bad:
        raise CliError(f"principal quantum numbers must be >= 1, got {bad}", EXIT_CONFIG)
    text = rydberg_table(ns)
    if args.out:
        _write_text(args.out, text)
        write_manifest(args.out, "rydberg", None, None, started, {"n": ns})
    else:
        sys.stdout.write(text)


def stability_lines(cfg: ExperimentConfig) -> list[str]:
    consts = default_constants()
    phi = cube_equilibrium_voltage(cfg.rho_source, cfg.L_bob, cfg.alpha, cfg.beta_geom, consts)
    rep = pair_breaking_assessment(phi, cfg.E_gap, consts)
    ev = consts.e
    return [
        f"phi = {fmt(rep.phi)} V",
        f"pair_energy = {fmt(rep.pair_energy / ev)} eV",
        f"E_gap = {fmt(rep.E_gap / ev)} eV",
        f"ruled_out = {{{', '.join(sorted(rep.ruled_out_outcomes))}}}",
        f"remaining = {{{', '.join(sorted(rep.remaining_outcomes))}}}",
        rep.verdict,
    ]


def cmd_check(args):
    cfg = resolve_config(args.config)
    if cfg.rho_source <= 0:
        raise CliError("check needs rho_source > 0", EXIT_CONFIG)
    sys.stdout.write("\n".join(stability_lines(cfg)) + "\n")


def _now():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def build_parser():
    parser = argparse.ArgumentParser(prog="tidalcharge", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="quasi-static time series as CSV")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="summary statistics over values of one config key")
    p.add_argument("--config")
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True, help="comma-separated list")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lockin", help="synchronous detection of a CSV signal column")
    p.add_argument("series")
    p.add_argument("--fref", required=True, help="reference frequency in Hz, comma-separated")
    p.add_argument("--column")
    p.set_defaults(func=cmd_lockin)

    p = sub.add_parser("rydberg", help="circular Rydberg state table")
    p.add_argument("--n", required=True, help="comma-separated principal quantum numbers")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rydberg)

    p = sub.add_parser("check", help="pair-breaking stability of the DC charge separation")
    p.add_argument("--config")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationError, SolverError, QuadratureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
