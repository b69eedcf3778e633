"""qkerr: data generators for Kerr-medium revival, squeezing and Wigner studies.

Example:
  qkerr squeezing --nu 0.1 --m 0 --m 1 --q 1 --q 2 --out out/
  qkerr delta --m 0 --m 1 --m 10 --samples 64 --out out/
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .evolution import TimeGrid, autocorrelation, evolve, revival_time
from .expectations import quadrature_stats
from .fock import DEFAULT_TAIL_EPSILON, ModelParams, choose_cutoff, density_from_pure, make_pacs
from .squeezing import (
    HONG_MANDEL_BOUND, dq_cs_half_revival, dq_pacs_half_revival)
from .wigner import GridSpec, GridTooSmallError, delta_timescan, wigner_grid

log = logging.getLogger("qkerr")

DEFAULTS = {
    "chi": 5.0,
    "nu": 1.0,
    "theta": 0.0,
    "m": None,
    "q": None,
    "cutoff_eps": DEFAULT_TAIL_EPSILON,
    "tmin": 0.0,
    "tmax": 1.0,
    "samples": None,
    "times": None,
    "nu_min": 0.01,
    "nu_max": 10.0,
    "nu_samples": 200,
    "theta_samples": 181,
    "grid_extent": None,
    "grid_points": 201,
    "lobe_threshold": 0.1,
    "out": "qkerr_out",
}

# per-subcommand defaults that differ from the shared table
COMMAND_DEFAULTS = {
    "revival-scan": {"m": [0], "samples": 256},
    "squeezing": {"m": [0, 1], "q": [1, 2, 3], "samples": 512},
    "wigner": {"m": [0, 1, 10], "times": ["0", "1/2", "1/3"]},
    "delta": {"m": [0, 1, 10], "samples": 64},
}


class NumericContractError(RuntimeError):
    """A computed quantity violated a documented bound."""


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    log.info("wrote %s", path)


def resolve_config(args) -> dict:
    """Defaults <- command defaults <- JSON config file <- explicit flags."""
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS.get(args.command, {}))
    if args.config:
        cfg.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def _params(cfg, m=0) -> ModelParams:
    cutoff = choose_cutoff(cfg["nu"], m, cfg["cutoff_eps"])
    return ModelParams(chi=cfg["chi"], nu=cfg["nu"], theta=cfg["theta"], m=m, cutoff=cutoff)


def _time_fractions(cfg):
    return np.linspace(cfg["tmin"], cfg["tmax"], cfg["samples"])


def cmd_revival_scan(cfg, out: Path):
    header = ["t", "t_over_Trev", "autocorr", "mean_x", "mean_p", "var_x", "skew2_x", "kurt_x"]
    written = []
    for m in cfg["m"]:
        p = _params(cfg, m)
        t_rev = p.revival_time
        psi0 = make_pacs(p)
        rows = []
        for f in _time_fractions(cfg):
            t = f * t_rev
            psi = evolve(psi0, t, p.chi)
            st = quadrature_stats(psi, 4)
            rows.append([t, f, autocorrelation(psi0, psi), st.mean_x, st.mean_p,
                         st.variance, st.skewness2, st.kurtosis])
        path = out / f"revival_scan_m{m}.csv"
        write_csv(path, header, rows)
        written.append(path)
    return written


def _dq_half(q, p):
    if p.m == 0:
        return dq_cs_half_revival(q, p.nu, p.theta)
    return dq_pacs_half_revival(q, p)


def _check_dq(value, where):
    if not value >= -1 - 1e-9:
        raise NumericContractError(f"D_q = {value} below -1 at {where}")


def cmd_squeezing(cfg, out: Path):
    written = []
    nus = np.linspace(cfg["nu_min"], cfg["nu_max"], cfg["nu_samples"])
    thetas = np.linspace(0.0, math.pi, cfg["theta_samples"])
    for m in cfg["m"]:
        for q in cfg["q"]:
            rows = []
            for nu in nus:
                p = ModelParams(chi=cfg["chi"], nu=float(nu), theta=cfg["theta"], m=m, cutoff=1)
                d = _dq_half(q, p)
                _check_dq(d, f"nu={nu}")
                rows.append([nu, d, -1 <= d < 0])
            path = out / f"dq_vs_nu_m{m}_q{q}.csv"
            write_csv(path, ["nu", "dq", "squeezed"], rows)
            written.append(path)

            rows = []
            for th in thetas:
                p = ModelParams(chi=cfg["chi"], nu=cfg["nu"], theta=float(th), m=m, cutoff=1)
                d = _dq_half(q, p)
                _check_dq(d, f"theta={th}")
                rows.append([th, d, -1 <= d < 0])
            path = out / f"dq_vs_theta_m{m}_q{q}.csv"
            write_csv(path, ["theta", "dq", "squeezed"], rows)
            written.append(path)

        p = _params(cfg, m)
        psi0 = make_pacs(p)
        dx_rows, m4_rows = [], []
        for f in _time_fractions(cfg):
            t = f * p.revival_time
            st = quadrature_stats(evolve(psi0, t, p.chi), 4)
            dx = math.sqrt(st.variance)
            m4 = st.central_x[4]
            dx_rows.append([t, f, dx, math.sqrt(0.5), dx < math.sqrt(0.5)])
            m4_rows.append([t, f, m4, HONG_MANDEL_BOUND, m4 < HONG_MANDEL_BOUND])
        path = out / f"deltax_vs_t_m{m}.csv"
        write_csv(path, ["t", "t_over_Trev", "delta_x", "reference", "squeezed"], dx_rows)
        written.append(path)
        path = out / f"m4_vs_t_m{m}.csv"
        write_csv(path, ["t", "t_over_Trev", "m4", "bound", "squeezed"], m4_rows)
        written.append(path)
    return written


def _time_tag(frac: Fraction):
    return f"{frac.numerator}-{frac.denominator}"


def cmd_wigner(cfg, out: Path):
    written = []
    summary = []
    for m in cfg["m"]:
        p = _params(cfg, m)
        grid = _grid(cfg, p)
        psi0 = make_pacs(p)
        for spec in cfg["times"]:
            frac = Fraction(str(spec)).limit_denominator(10_000)
            t = float(frac) * p.revival_time
            field = wigner_grid(density_from_pure(evolve(psi0, t, p.chi)), grid, t)
            b1, b2 = grid.axes()
            rows = ([x, y, w] for x, row in zip(b1, field.values) for y, w in zip(b2, row))
            path = out / f"wigner_m{m}_t{_time_tag(frac)}.csv"
            write_csv(path, ["beta1", "beta2", "w"], rows)
            written.append(path)
            vmax = float(field.values.max())
            summary.append([m, t, float(frac), float(field.values.min()), vmax,
                            field.negative_cells(),
                            field.lobe_count(cfg["lobe_threshold"]), field.integral()])
    path = out / "wigner_summary.csv"
    write_csv(path, ["m", "t", "t_over_Trev", "min_w", "max_w", "negative_cells",
                     "lobes", "integral"], summary)
    written.append(path)
    return written


def _grid(cfg, p):
    grid = GridSpec.default_for(p, cfg["grid_points"])
    if cfg["grid_extent"] is not None:
        grid = GridSpec(0j, cfg["grid_extent"], cfg["grid_points"])
    return grid


def cmd_delta(cfg, out: Path):
    written = []
    combined = []
    header = ["t", "t_over_Trev", "delta_raw", "delta"]
    times = TimeGrid(cfg["tmin"], cfg["tmax"], cfg["samples"], in_revival_units=True)
    for m in cfg["m"]:
        p = _params(cfg, m)
        series = delta_timescan(make_pacs(p), times, _grid(cfg, p), p.chi)
        path = out / f"delta_m{m}.csv"
        write_csv(path, header, [list(s) for s in series])
        written.append(path)
        combined.extend([m] + list(s) for s in series)
    path = out / "delta_combined.csv"
    write_csv(path, ["m"] + header, combined)
    written.append(path)
    return written


COMMANDS = {
    "revival-scan": cmd_revival_scan,
    "squeezing": cmd_squeezing,
    "wigner": cmd_wigner,
    "delta": cmd_delta,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with any of the flag values")
    common.add_argument("--chi", type=float, help="Kerr susceptibility (default 5)")
    common.add_argument("--nu", type=float, help="mean photon number |alpha|^2 (default 1)")
    common.add_argument("--theta", type=float, help="argument of alpha in radians (default 0)")
    common.add_argument("--m", type=int, action="append",
                        help="photon-addition count; repeatable, 0 is the coherent state")
    common.add_argument("--cutoff-eps", type=float, dest="cutoff_eps",
                        help="tail probability allowed beyond the Fock cutoff (default 1e-12)")
    common.add_argument("--tmin", type=float, help="scan start in units of T_rev (default 0)")
    common.add_argument("--tmax", type=float, help="scan end in units of T_rev (default 1)")
    common.add_argument("--samples", type=int, help="time samples in the scan")
    common.add_argument("--grid-extent", type=float, dest="grid_extent",
                        help="half width of the beta window (default |alpha| + 4 max(1, sqrt(nu + m)))")
    common.add_argument("--grid-points", type=int, dest="grid_points",
                        help="odd number of nodes per axis (default 201)")
    common.add_argument("--out", help="output directory (default qkerr_out)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="qkerr", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qkerr {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("revival-scan", parents=[common],
                   help="autocorrelation and quadrature moments over time")
    sq = sub.add_parser("squeezing", parents=[common],
                        help="D_q at T_rev/2 versus nu and theta, Delta x(t), fourth moment(t)")
    sq.add_argument("--q", type=int, action="append", help="squeezing order; repeatable")
    sq.add_argument("--nu-min", type=float, dest="nu_min")
    sq.add_argument("--nu-max", type=float, dest="nu_max")
    sq.add_argument("--nu-samples", type=int, dest="nu_samples")
    sq.add_argument("--theta-samples", type=int, dest="theta_samples")
    wg = sub.add_parser("wigner", parents=[common], help="Wigner function snapshots")
    wg.add_argument("--time", action="append", dest="times",
                    help="snapshot time as a fraction of T_rev, e.g. 1/3; repeatable")
    wg.add_argument("--lobe-threshold", type=float, dest="lobe_threshold")
    sub.add_parser("delta", parents=[common], help="non-classicality delta(t)")
    return ap


def _validate(cfg):
    if cfg["chi"] <= 0:
        raise ValueError("--chi must be positive")
    if cfg["samples"] is not None and cfg["samples"] < 2:
        raise ValueError("--samples must be >= 2")
    if not cfg["m"]:
        raise ValueError("at least one --m is required")
    revival_time(cfg["chi"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        _validate(cfg)
    except (OSError, ValueError) as exc:
        print(f"qkerr: configuration error: {exc}", file=sys.stderr)
        return 2

    out = Path(cfg["out"])
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"config_{args.command}.json").write_text(
            json.dumps(cfg, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written = COMMANDS[args.command](cfg, out)
    except OSError as exc:
        print(f"qkerr: I/O error: {exc}", file=sys.stderr)
        return 1
    except (NumericContractError, GridTooSmallError, ValueError) as exc:
        print(f"qkerr: numeric error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
