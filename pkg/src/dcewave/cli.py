"""Command-line front end.

Examples::

    dcewave rate coax --a 1um --b 1cm --L 3cm --f0 10GHz --v0 1e-7c
    dcewave rate plates --a 1um --A 9cm2 --f0 10GHz --v0 1e-7c --format csv
    dcewave cutoff --a 1um --b 1cm --check-f0 1GHz
    dcewave spectrum --a 1um --b 1mm --L auto --f0 10GHz --drho0 1nm --dt 15.9ns
    dcewave sweep coax --a 1um --b 1cm --L 3cm --drho0 1nm --axis f0=1GHz:10GHz:5:log
    dcewave validate coax --a 1um --b 1mm --L 3cm --f0 10GHz --v0 1e-7c

Exit status: 0 success, 2 parse error, 3 validity failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .quantities import CODATA2018, CoaxGeometry, Drive, PlateGeometry, validate_regime
from .rates import (
    RegimeWarning,
    TRUNCATION_FACTOR,
    coax_rate,
    coax_rate_small_gap,
    discrete_photon_number,
    emission_spectrum,
    lowest_coax_cutoff,
    oracle_length,
    plate_cutoff,
    plate_rate,
)
from .specfun import CutoffSearchError, find_cutoffs
from .units import UnitError, format_si, parse_quantity

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_NUMERIC = 4

COMMANDS = ("rate", "cutoff", "spectrum", "sweep", "validate")
GEOMETRY_COMMANDS = ("rate", "sweep", "validate")

PARAM_KINDS = {
    "a": "length",
    "b": "length",
    "L": "length",
    "A": "area",
    "f0": "frequency",
    "v0": "speed",
    "drho0": "length",
    "dz0": "length",
    "amplitude": "length",
    "dt": "time",
    "check_f0": "frequency",
    "omega_min": "frequency",
    "omega_max": "frequency",
}
AMPLITUDE_KEYS = ("v0", "drho0", "dz0", "amplitude")
GEOMETRY_PARAMS = {"coax": ("a", "b", "L"), "plates": ("a", "A")}
SWEEPABLE = ("a", "b", "L", "A", "f0", "v0", "drho0", "dz0", "amplitude")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "lin"

    def values(self) -> list[float]:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count).tolist()
        return np.linspace(self.start, self.stop, self.count).tolist()

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        try:
            name, rng = text.split("=", 1)
            parts = rng.split(":")
            start, stop, count = parts[:3]
            scale = parts[3] if len(parts) > 3 else "lin"
            if len(parts) > 4:
                raise ValueError
        except ValueError:
            raise ConfigError(f"bad sweep axis {text!r}; expected NAME=MIN:MAX:COUNT[:lin|log]") from None
        name = name.strip()
        if name not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
        if scale not in ("lin", "log"):
            raise ConfigError(f"sweep scale must be lin or log, got {scale!r}")
        try:
            n = int(count)
        except ValueError:
            raise ConfigError(f"sweep count {count!r} is not an integer") from None
        if n < 2:
            raise ConfigError("sweep count must be >= 2")
        kind = PARAM_KINDS[name]
        lo, hi = parse_quantity(start, kind), parse_quantity(stop, kind)
        if scale == "log" and (lo <= 0 or hi <= 0):
            raise ConfigError("log sweeps need positive bounds")
        return cls(name, lo, hi, n, scale)

    def to_text(self) -> str:
        kind = PARAM_KINDS[self.name]
        return f"{self.name}={format_si(self.start, kind)}:{format_si(self.stop, kind)}:{self.count}:{self.scale}"


@dataclass
class RunConfig:
    command: str
    geometry: str | None = None
    params: dict[str, float] = field(default_factory=dict)  # SI values keyed by flag name
    L_auto: bool = False
    formula: str = "general"
    fmt: str = "json"
    out: str | None = None
    axes: list[SweepAxis] = field(default_factory=list)
    m_max: int = 3
    p_max: int = 3
    both_directions: bool = False

    def echo(self) -> dict[str, str]:
        """Inputs as suffixed SI strings; feeding them back reproduces ``params``."""
        out = {k: format_si(v, PARAM_KINDS[k]) for k, v in self.params.items()}
        if self.L_auto:
            out["L"] = "auto"
        return out

    def amplitude_key(self) -> str:
        keys = [k for k in AMPLITUDE_KEYS if k in self.params]
        if len(keys) != 1:
            raise ConfigError(f"give exactly one drive amplitude among {', '.join('--' + k for k in AMPLITUDE_KEYS)}")
        return keys[0]

    def require(self, *names: str) -> None:
        missing = [n for n in names if n not in self.params and not (n == "L" and self.L_auto)]
        if missing:
            raise ConfigError(f"{self.command}: missing {', '.join('--' + n for n in missing)}")


# --------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS, help="output file (default: stdout)")
    p.add_argument("--config", default=argparse.SUPPRESS, help="JSON config; flags override it")


def _add_params(p: argparse.ArgumentParser, names) -> None:
    for name in names:
        flag = "--" + name.replace("_", "-")
        p.add_argument(flag, dest=name, default=None, metavar=PARAM_KINDS[name].upper())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcewave", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(parser)
    sub = parser.add_subparsers(dest="command")

    drive = ("f0", "v0", "drho0", "dz0", "amplitude")
    for name in ("rate", "validate", "sweep"):
        p = sub.add_parser(name)
        _add_common(p)
        p.add_argument("geometry", choices=("coax", "plates"), nargs="?", default=None)
        _add_params(p, ("a", "b", "L", "A") + drive)
        if name in ("rate", "sweep"):
            p.add_argument("--formula", choices=("general", "small-gap"), default=None)
        if name == "sweep":
            p.add_argument("--axis", action="append", default=None,
                           help="NAME=MIN:MAX:COUNT[:lin|log]; repeat for a grid")

    p = sub.add_parser("cutoff")
    _add_common(p)
    _add_params(p, ("a", "b", "check_f0"))
    p.add_argument("--m-max", dest="m_max", type=int, default=None)
    p.add_argument("--p-max", dest="p_max", type=int, default=None)

    p = sub.add_parser("spectrum")
    _add_common(p)
    _add_params(p, ("a", "b", "L") + drive + ("dt", "omega_min", "omega_max"))
    p.add_argument("--both-directions", action="store_true", default=None)
    return parser


def _load_config(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def _prepare_argv(argv: list[str]) -> tuple[list[str], dict]:
    """Load ``--config`` and, if no subcommand is given, take it from the file."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    config = _load_config(known.config) if known.config else {}
    if not any(tok in COMMANDS for tok in argv) and "command" in config:
        head = [str(config["command"])]
        if config["command"] in GEOMETRY_COMMANDS and "geometry" in config:
            head.append(str(config["geometry"]))
        argv = head + list(argv)
    return argv, config


def config_from_args(args: argparse.Namespace, file_cfg: dict) -> RunConfig:
    """Merge parsed flags over config-file values into a validated RunConfig."""
    ns = vars(args)
    command = ns.get("command") or file_cfg.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"need exactly one command among {', '.join(COMMANDS)}")
    if "command" in file_cfg and file_cfg["command"] != command:
        raise ConfigError(f"config file is for {file_cfg['command']!r}, not {command!r}")

    def pick(key, default=None):
        v = ns.get(key)
        return v if v is not None else file_cfg.get(key, default)

    cfg = RunConfig(command=command)
    cfg.fmt = pick("format", "json")
    if cfg.fmt not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {cfg.fmt!r}")
    cfg.out = pick("out")

    allowed = {"command", "geometry", "format", "out", "formula", "axis", "axes", "m_max", "p_max",
               "both_directions", "config"} | set(PARAM_KINDS)
    unknown = set(file_cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    for name in PARAM_KINDS:
        if name not in ns and name not in file_cfg:
            continue
        raw = pick(name)
        if raw is None:
            continue
        if name == "L" and raw == "auto":
            cfg.L_auto = True
            continue
        try:
            cfg.params[name] = parse_quantity(raw, PARAM_KINDS[name])
        except UnitError as exc:
            raise ConfigError(f"--{name.replace('_', '-')}: {exc}") from None

    if command in GEOMETRY_COMMANDS:
        cfg.geometry = pick("geometry")
        if cfg.geometry not in GEOMETRY_PARAMS:
            raise ConfigError(f"{command}: geometry must be coax or plates")
        if command != "sweep":
            cfg.require(*GEOMETRY_PARAMS[cfg.geometry])
        cfg.formula = pick("formula", "general")
        if cfg.formula not in ("general", "small-gap"):
            raise ConfigError(f"unknown formula {cfg.formula!r}")
        if cfg.formula == "small-gap" and cfg.geometry != "coax":
            raise ConfigError("--formula small-gap applies to coax only")
    elif command == "cutoff":
        cfg.geometry = "coax"
        cfg.require("a", "b")
        cfg.m_max = int(pick("m_max", 3))
        cfg.p_max = int(pick("p_max", 3))
        if cfg.m_max < 0 or cfg.p_max < 1:
            raise ConfigError("need --m-max >= 0 and --p-max >= 1")
    elif command == "spectrum":
        cfg.geometry = "coax"
        cfg.require("a", "b", "L", "dt")
        cfg.both_directions = bool(pick("both_directions", False))

    if command in ("rate", "validate", "spectrum"):
        cfg.require("f0")
        cfg.amplitude_key()
    if command == "sweep":
        raw_axes = ns.get("axis") or file_cfg.get("axes") or file_cfg.get("axis")
        if not raw_axes:
            raise ConfigError("sweep: give at least one --axis NAME=MIN:MAX:COUNT[:lin|log]")
        if isinstance(raw_axes, str):
            raw_axes = [raw_axes]
        cfg.axes = [SweepAxis.parse(t) for t in raw_axes]
        names = [ax.name for ax in cfg.axes]
        if len(set(names)) != len(names):
            raise ConfigError("sweep axes must be distinct")
        swept = set(names)
        allowed_axes = set(GEOMETRY_PARAMS[cfg.geometry]) | {"f0"} | set(AMPLITUDE_KEYS)
        bad = swept - allowed_axes
        if bad:
            raise ConfigError(f"axes {sorted(bad)} do not apply to {cfg.geometry}")
        fixed = [n for n in GEOMETRY_PARAMS[cfg.geometry] + ("f0",) if n not in swept]
        cfg.require(*fixed)
        amp = [k for k in AMPLITUDE_KEYS if k in cfg.params or k in swept]
        if len(amp) != 1:
            raise ConfigError("sweep: give exactly one drive amplitude (fixed or swept)")
    for name in cfg.params:
        if name in ("a", "b", "L", "A", "f0", "dt") and cfg.params[name] <= 0:
            raise ConfigError(f"--{name} must be positive")
    return cfg


# --------------------------------------------------------------------------
# commands


def _drive(params: dict[str, float]) -> Drive:
    omega0 = params["f0"]
    if "v0" in params:
        return Drive.from_peak_speed(omega0, params["v0"])
    for key in ("drho0", "dz0", "amplitude"):
        if key in params:
            return Drive(omega0, params[key])
    raise ConfigError("no drive amplitude given")


def _geometry(kind: str, params: dict[str, float]):
    if kind == "coax":
        return CoaxGeometry(b=params["b"], a=params["a"], L=params.get("L", 1.0))
    return PlateGeometry(A=params["A"], a=params["a"])


def _provenance(formula_tag: str, **extra) -> dict:
    return {"formula_tag": formula_tag, "version": __version__, **extra}


def _rate_for(geometry: str, formula: str, params: dict[str, float]):
    geom, drive = _geometry(geometry, params), _drive(params)
    if geometry == "plates":
        return plate_rate(geom, drive), drive
    if formula == "small-gap":
        return coax_rate_small_gap(geom, drive), drive
    return coax_rate(geom, drive), drive


def cmd_rate(cfg: RunConfig) -> tuple[list[dict], int]:
    result, drive = _rate_for(cfg.geometry, cfg.formula, cfg.params)
    record = {
        "command": "rate",
        "geometry": cfg.geometry,
        "inputs": cfg.echo(),
        "derived": {"omega0_rad_s": drive.omega0, "amplitude_m": drive.amplitude,
                    "v0_m_s": drive.omega0 * drive.amplitude},
        "results": {"rate_per_s": result.rate, "photon_frequency_rad_s": result.photon_frequency},
        "validity": result.validity.to_dict(),
        "provenance": _provenance(result.formula_tag),
    }
    return [record], (EXIT_OK if result.validity.ok else EXIT_INVALID)


def cmd_cutoff(cfg: RunConfig) -> tuple[list[dict], int]:
    geom = _geometry("coax", cfg.params)
    status = EXIT_OK
    error = None
    try:
        table = find_cutoffs(geom, cfg.m_max, cfg.p_max)
        entries = list(table.entries)
    except CutoffSearchError as exc:
        entries, error, status = exc.partial, str(exc), EXIT_NUMERIC
    omega0 = cfg.params.get("check_f0")
    lowest = entries[0] if entries else None
    record = {
        "command": "cutoff",
        "geometry": "coax",
        "inputs": cfg.echo(),
        "results": {
            "entries": [
                {"family": e.family, "m": e.m, "p": e.p, "k_per_m": e.k, "omega_c_rad_s": e.omega_c,
                 "lowest": e is lowest}
                for e in entries
            ],
            "lowest_omega_c_rad_s": lowest.omega_c if lowest else None,
            "error": error,
        },
        "validity": {"ok": True, "checks": []},
        "provenance": _provenance("cutoff-table", m_max=cfg.m_max, p_max=cfg.p_max),
    }
    if omega0 is not None and lowest is not None:
        ratio = omega0 / lowest.omega_c
        ok = ratio < 1.0
        record["validity"] = {"ok": ok, "checks": [
            {"name": "tem_only", "ratio": ratio, "limit": 1.0, "status": "pass" if ok else "fail",
             "caveat": False, "note": "omega0 / lowest non-TEM cutoff"}]}
        if not ok and status == EXIT_OK:
            status = EXIT_INVALID
    return [record], status


def cmd_spectrum(cfg: RunConfig) -> tuple[list[dict], int]:
    params = dict(cfg.params)
    drive = _drive(params)
    dt = params["dt"]
    if cfg.L_auto:
        params["L"] = oracle_length(drive, dt)
    geom = _geometry("coax", params)
    spec = emission_spectrum(geom, drive, dt, omega_min=params.get("omega_min", 0.0),
                             omega_max=params.get("omega_max"), both_directions=cfg.both_directions)
    closed = coax_rate(geom, drive)
    oracle = discrete_photon_number(geom, drive, dt)
    fwd = spec.forward()
    peak = spec.peak()
    try:
        fwhm = spec.fwhm()
    except ValueError:
        fwhm = None
    record = {
        "command": "spectrum",
        "geometry": "coax",
        "inputs": cfg.echo(),
        "derived": {"L_m": geom.L, "omega0_rad_s": drive.omega0, "amplitude_m": drive.amplitude,
                    "omega0_dt": drive.omega0 * dt, "mode_spacing_rad_s": spec.spacing},
        "results": {
            "delta_n": math.fsum(fwd.probability.tolist()),
            "rate_from_sum_per_s": math.fsum(fwd.probability.tolist()) / dt,
            "closed_form_rate_per_s": closed.rate,
            "peak_omega_rad_s": peak.omega,
            "fwhm_rad_s": fwhm,
            "fwhm_over_2pi_dt": None if fwhm is None else fwhm * dt / (2 * math.pi),
            "samples": [
                {"n": int(n), "omega_rad_s": float(w), "probability": float(p), "dN_domega": float(s)}
                for n, w, p, s in zip(spec.n, spec.omega, spec.probability, spec.dN_domega)
            ],
        },
        "validity": closed.validity.to_dict(),
        "provenance": _provenance("discrete-oracle", truncation_omega_rad_s=TRUNCATION_FACTOR * drive.omega0,
                                  tail_per_mode_bound=oracle.tail_per_mode_bound),
    }
    return [record], (EXIT_OK if closed.validity.ok else EXIT_INVALID)


def cmd_validate(cfg: RunConfig) -> tuple[list[dict], int]:
    geom, drive = _geometry(cfg.geometry, cfg.params), _drive(cfg.params)
    try:
        cutoff = lowest_coax_cutoff(geom) if cfg.geometry == "coax" else plate_cutoff(geom)
    except CutoffSearchError as exc:
        return [{"command": "validate", "inputs": cfg.echo(), "error": str(exc),
                 "validity": {"ok": False, "checks": []}}], EXIT_NUMERIC
    report = validate_regime(drive, geom, cutoff)
    record = {
        "command": "validate",
        "geometry": cfg.geometry,
        "inputs": cfg.echo(),
        "derived": {"omega0_rad_s": drive.omega0, "amplitude_m": drive.amplitude,
                    "lowest_cutoff_rad_s": cutoff},
        "validity": report.to_dict(),
        "caveats": [c.name for c in report.caveats],
        "provenance": _provenance("validity"),
    }
    return [record], (EXIT_OK if report.ok else EXIT_INVALID)


def _threads() -> int | None:
    raw = os.environ.get("DCE_NUM_THREADS")
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"DCE_NUM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("DCE_NUM_THREADS must be >= 1")
    return n


def fit_loglog(points: list[dict[str, float]], rates: list[float], names: list[str]) -> dict[str, dict]:
    """Least-squares ``log rate = c + sum_i s_i log x_i``; slope and standard error per axis."""
    rows = [(p, r) for p, r in zip(points, rates) if r is not None and r > 0]
    varying = [n for n in names if len({p[n] for p, _ in rows}) > 1]
    if len(rows) <= len(varying) or not varying:
        return {n: {"slope": None, "stderr": None} for n in names}
    X = np.column_stack([np.ones(len(rows))] + [np.log([p[n] for p, _ in rows]) for n in varying])
    y = np.log([r for _, r in rows])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    dof = len(rows) - X.shape[1]
    if dof > 0:
        resid = y - X @ coef
        sigma2 = float(resid @ resid) / dof
        cov = sigma2 * np.linalg.inv(X.T @ X)
        err = np.sqrt(np.abs(np.diag(cov)))
    else:
        err = np.zeros(X.shape[1])
    out = {n: {"slope": None, "stderr": None} for n in names}
    for i, n in enumerate(varying, start=1):
        out[n] = {"slope": float(coef[i]), "stderr": float(err[i])}
    return out


def cmd_sweep(cfg: RunConfig) -> tuple[list[dict], int]:
    grids = [ax.values() for ax in cfg.axes]
    names = [ax.name for ax in cfg.axes]
    points = [dict(zip(names, combo)) for combo in _product(grids)]

    def run(point):
        params = {**cfg.params, **point}
        try:
            result, drive = _rate_for(cfg.geometry, cfg.formula, params)
        except (ValueError, ArithmeticError, CutoffSearchError) as exc:
            return None, None, f"{type(exc).__name__}: {exc}"
        return result, drive, None

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        outcomes = list(pool.map(run, points))

    records = []
    rates = []
    for i, (point, (result, drive, error)) in enumerate(zip(points, outcomes)):
        rec = {
            "command": "sweep",
            "geometry": cfg.geometry,
            "index": i,
            "point": {n: format_si(v, PARAM_KINDS[n]) for n, v in point.items()},
            "point_si": point,
            "error": error,
        }
        if result is not None:
            rec["derived"] = {"omega0_rad_s": drive.omega0, "amplitude_m": drive.amplitude}
            rec["results"] = {"rate_per_s": result.rate}
            rec["validity"] = result.validity.to_dict()
            rates.append(result.rate)
        else:
            rec["validity"] = {"ok": False, "checks": []}
            rates.append(None)
        records.append(rec)

    summary = {
        "command": "sweep",
        "summary": {
            "inputs": cfg.echo(),
            "axes": [ax.to_text() for ax in cfg.axes],
            "loglog_slopes": fit_loglog(points, rates, names),
            "points": len(points),
            "failed_points": sum(r is None for r in rates),
        },
        "validity": {"ok": all(r.get("validity", {}).get("ok") for r in records), "checks": []},
        "provenance": _provenance(cfg.formula if cfg.geometry == "coax" else "golden-rule"),
    }
    records.append(summary)
    status = EXIT_NUMERIC if all(r is None for r in rates) else EXIT_OK
    return records, status


def _product(grids):
    if not grids:
        yield ()
        return
    for head in grids[0]:
        for tail in _product(grids[1:]):
            yield (head,) + tail


COMMAND_FUNCS = {
    "rate": cmd_rate,
    "cutoff": cmd_cutoff,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


# --------------------------------------------------------------------------
# serialisation


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _flat_validity(validity: dict) -> dict:
    row = {"valid": validity.get("ok")}
    for c in validity.get("checks", []):
        row[f"{c['name']}_ratio"] = c["ratio"]
        row[f"{c['name']}_status"] = c["status"]
    return row


def _csv_rows(cfg: RunConfig, records: list[dict]) -> tuple[list[str], list[dict]]:
    if cfg.command == "spectrum":
        header = ["n", "omega_rad_s", "probability", "dN_domega"]
        return header, records[0]["results"]["samples"]
    if cfg.command == "cutoff":
        rec = records[0]
        omega0 = cfg.params.get("check_f0")
        header = ["family", "m", "p", "k_per_m", "omega_c_rad_s", "lowest"]
        rows = [dict(e) for e in rec["results"]["entries"]]
        if omega0 is not None:
            header.append("omega0_over_omega_c")
            for row in rows:
                row["omega0_over_omega_c"] = omega0 / row["omega_c_rad_s"]
        return header, rows
    if cfg.command == "sweep":
        names = [ax.name for ax in cfg.axes]
        header = ["index"] + [f"{n}_si" for n in names] + ["omega0_rad_s", "amplitude_m", "rate_per_s",
                                                              "valid", "error"]
        rows = []
        for rec in records[:-1]:
            row = {"index": rec["index"], "error": rec["error"], "valid": rec["validity"]["ok"]}
            row.update({f"{n}_si": rec["point_si"][n] for n in names})
            if "results" in rec:
                row.update(omega0_rad_s=rec["derived"]["omega0_rad_s"],
                           amplitude_m=rec["derived"]["amplitude_m"],
                           rate_per_s=rec["results"]["rate_per_s"])
            rows.append(row)
        slopes = records[-1]["summary"]["loglog_slopes"]
        rows.append({"index": "slope", **{f"{n}_si": slopes[n]["slope"] for n in names}})
        rows.append({"index": "slope_stderr", **{f"{n}_si": slopes[n]["stderr"] for n in names}})
        return header, rows
    rec = records[0]
    row = {"command": rec["command"], "geometry": rec.get("geometry")}
    row.update({f"in_{k}": v for k, v in rec.get("inputs", {}).items()})
    row.update(rec.get("derived", {}))
    row.update({k: v for k, v in rec.get("results", {}).items()})
    row.update(_flat_validity(rec["validity"]))
    row["formula_tag"] = rec["provenance"]["formula_tag"]
    row["version"] = rec["provenance"]["version"]
    return list(row), [row]


def render(cfg: RunConfig, records: list[dict]) -> str:
    if cfg.fmt == "json":
        return json.dumps(records, indent=2, allow_nan=False) + "\n"
    header, rows = _csv_rows(cfg, records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(row.get(h)) for h in header])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, file_cfg = _prepare_argv(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        cfg = config_from_args(args, file_cfg)
        # regime problems land in the records and the exit status; workers run
        # in threads, so the filter is set once here
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            records, status = COMMAND_FUNCS[cfg.command](cfg)
    except SystemExit as exc:  # argparse
        return int(exc.code) if isinstance(exc.code, int) else EXIT_PARSE
    except (ConfigError, UnitError) as exc:
        print(f"dcewave: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"dcewave: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ArithmeticError, CutoffSearchError) as exc:
        print(f"dcewave: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = render(cfg, records)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if status == EXIT_INVALID:
        failed = [c["name"] for r in records for c in r.get("validity", {}).get("checks", [])
                  if c["status"] == "fail" and not c.get("caveat")]
        print(f"dcewave: validity checks failed: {', '.join(failed)}", file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
