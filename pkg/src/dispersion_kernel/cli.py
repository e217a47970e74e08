"""Command line front-end: parameter sweeps written as CSV or JSON.

Usage::

    dispersion-kernel run --config sweep.ini [--output out.csv]
    dispersion-kernel --explain PairPotential
    dispersion-kernel --version

The configuration is an INI file with the sections [system], [task],
[sweep], [quadrature] and [output]. Unknown sections or keys are errors and
every physical parameter must be given explicitly.

Exit status: 0 success, 2 configuration error, 3 computation error,
4 input/output error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__, _backend, geometry, pair
from .errors import DispersionError, InvalidParameter, RegimeWarning
from .model import DiluteGasMedium, QuadratureSpec, TwoLevelAtom

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_IO = 4

TASKS = ("PairPotential", "PairForce", "PlanarForce", "HemisphereForce", "DivergenceDemo",
         "LimitCheck")
SWEEP_VARIABLE = {
    "PairPotential": "R",
    "PairForce": "R",
    "PlanarForce": "z0",
    "HemisphereForce": "r0",
    "DivergenceDemo": "cutoff",
}
UNITS_LINE = ("# units: natural (hbar = c = 1); lengths in inverse frequency units, "
              "energies and forces in the matching natural units; forces > 0 are repulsive")

_SYSTEM_REQUIRED = ("omega_a", "d2_a", "gamma_a", "omega_b", "d2_b", "gamma_b", "n0")
_SYSTEM_OPTIONAL = ("mean_free_path", "resonant_index", "dissimilarity_factor")
_KEYS = {
    "system": _SYSTEM_REQUIRED + _SYSTEM_OPTIONAL,
    "task": ("name", "envelope", "r0", "z0", "oracle", "window", "tolerance"),
    "sweep": ("variable", "min", "max", "points", "spacing", "units"),
    "quadrature": ("rel_tol", "abs_tol", "max_subdivisions", "tail_decades", "radial_cutoff"),
    "output": ("path", "format"),
}


class ConfigError(Exception):
    """Invalid run configuration; the message names the offending key."""


class ComputeError(Exception):
    pass


class IoError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    points: int
    spacing: str = "linear"
    units: str = "natural"

    def grid(self, wavelength):
        if self.spacing == "log":
            values = np.geomspace(self.min, self.max, self.points)
        else:
            values = np.linspace(self.min, self.max, self.points)
        if self.units == "wavelength":
            values = values * wavelength
        return [float(v) for v in values]


@dataclass(frozen=True)
class RunConfig:
    cfg: pair.PairConfig
    task: str
    sweep: SweepSpec | None
    volume: geometry.VolumeOracleSpec
    output_path: str | None = None
    output_format: str = "csv"
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepRecord:
    x: float
    values: tuple
    error: float
    flagged: bool


# ---------------------------------------------------------------------------
# parsing


def _number(section, key, raw):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key}: must be finite, got {raw!r}")
    return value


def _integer(section, key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from None


def _choice(section, key, raw, options):
    if raw not in options:
        raise ConfigError(f"{section}.{key}: expected one of {', '.join(options)}, got {raw!r}")
    return raw


def parse_config(text) -> RunConfig:
    """Parse and validate the INI text of a run configuration."""
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__",
                                       inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None
    for section in parser.sections():
        if section not in _KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KEYS[section]:
                raise ConfigError(f"{section}.{key}: unknown key")
    for section in ("system", "task"):
        if section not in parser:
            raise ConfigError(f"missing section [{section}]")

    sysv = parser["system"]
    for key in _SYSTEM_REQUIRED:
        if key not in sysv:
            raise ConfigError(f"system.{key}: required (no physics defaults)")
    p = {k: _number("system", k, sysv[k]) for k in _SYSTEM_REQUIRED}

    qv = parser["quadrature"] if "quadrature" in parser else {}
    quad_kw = {}
    for key in ("rel_tol", "abs_tol", "tail_decades"):
        if key in qv:
            quad_kw[key] = _number("quadrature", key, qv[key])
    if "max_subdivisions" in qv:
        quad_kw["max_subdivisions"] = _integer("quadrature", "max_subdivisions",
                                               qv["max_subdivisions"])
    try:
        quad = QuadratureSpec(**quad_kw)
        volume = geometry.VolumeOracleSpec(
            radial_cutoff=_number("quadrature", "radial_cutoff", qv["radial_cutoff"])
            if "radial_cutoff" in qv else 20.0, quad=quad)
    except InvalidParameter as exc:
        raise ConfigError(f"quadrature: {exc}") from None

    try:
        atom_a = TwoLevelAtom(p["omega_a"], p["d2_a"], p["gamma_a"])
        atom_b = TwoLevelAtom(p["omega_b"], p["d2_b"], p["gamma_b"])
        medium = DiluteGasMedium(atom_b, p["n0"])
        extra = {}
        if "mean_free_path" in sysv:
            extra["mean_free_path"] = _number("system", "mean_free_path", sysv["mean_free_path"])
        if "resonant_index" in sysv:
            extra["resonant_index"] = _choice("system", "resonant_index", sysv["resonant_index"],
                                              pair.RESONANT_INDEX_CHOICES)
        if "dissimilarity_factor" in sysv:
            extra["dissimilarity_factor"] = _number("system", "dissimilarity_factor",
                                                    sysv["dissimilarity_factor"])
        cfg = pair.PairConfig(atom_a, atom_b, medium, quad, **extra)
    except InvalidParameter as exc:
        raise ConfigError(f"system: {exc}") from None

    tv = parser["task"]
    if "name" not in tv:
        raise ConfigError("task.name: required")
    task = _choice("task", "name", tv["name"], TASKS)
    options = {}
    if "envelope" in tv:
        options["envelope"] = _choice("task", "envelope", tv["envelope"],
                                      ("slab", "exponential", "medium"))
    for key in ("r0", "z0", "window", "tolerance"):
        if key in tv:
            options[key] = _number("task", key, tv[key])
    if "oracle" in tv:
        try:
            options["oracle"] = tv.getboolean("oracle")
        except ValueError:
            raise ConfigError(f"task.oracle: expected a boolean, got {tv['oracle']!r}") from None
    if task == "DivergenceDemo" and "z0" not in options:
        raise ConfigError("task.z0: required for DivergenceDemo")
    if options.get("envelope") == "exponential" and "r0" not in options:
        raise ConfigError("task.r0: required for the exponential envelope")

    sweep = None
    if task != "LimitCheck":
        if "sweep" not in parser:
            raise ConfigError(f"missing section [sweep] (required for {task})")
        sv = parser["sweep"]
        for key in ("min", "max", "points"):
            if key not in sv:
                raise ConfigError(f"sweep.{key}: required")
        variable = sv.get("variable", SWEEP_VARIABLE[task])
        if variable != SWEEP_VARIABLE[task]:
            raise ConfigError(f"sweep.variable: {task} sweeps {SWEEP_VARIABLE[task]!r}, "
                              f"got {variable!r}")
        sweep = SweepSpec(
            variable=variable,
            min=_number("sweep", "min", sv["min"]),
            max=_number("sweep", "max", sv["max"]),
            points=_integer("sweep", "points", sv["points"]),
            spacing=_choice("sweep", "spacing", sv.get("spacing", "linear"), ("linear", "log")),
            units=_choice("sweep", "units", sv.get("units", "natural"),
                          ("natural", "wavelength")),
        )
        if not sweep.min < sweep.max:
            raise ConfigError("sweep.min: must be smaller than sweep.max")
        if sweep.points < 2:
            raise ConfigError("sweep.points: must be >= 2")
        if not sweep.min > 0:
            raise ConfigError(f"sweep.min: {variable} must be > 0")

    ov = parser["output"] if "output" in parser else {}
    fmt = _choice("output", "format", ov.get("format", "csv"), ("csv", "json-summary"))
    return RunConfig(cfg, task, sweep, volume, ov.get("path"), fmt, options)


# ---------------------------------------------------------------------------
# tasks


def _flag(value, error, quad):
    return not error <= max(quad.rel_tol * abs(value), quad.abs_tol)


def _envelope(options):
    name = options.get("envelope", "slab")
    if name == "exponential":
        return pair.Exponential(options["r0"])
    if name == "medium":
        return pair.MediumResonant()
    return pair.SlabModel()


def _columns(rc):
    task = rc.task
    oracle = rc.options.get("oracle", True)
    if task == "PairPotential":
        return ["R", "U_total", "U_resonant", "U_nonresonant", "err"]
    if task == "PairForce":
        return ["R", "F_resonant", "U_resonant_model", "err"]
    if task == "PlanarForce":
        cols = ["z0", "F_closed", "F_closed_printed", "F_near", "F_far"]
        return cols + (["F_oracle", "err"] if oracle else ["err"])
    if task == "HemisphereForce":
        cols = ["r0", "F_far", "F_near", "F_near_printed"]
        return cols + (["F_oracle", "err"] if oracle else ["err"])
    if task == "DivergenceDemo":
        return ["cutoff", "I_vacuum", "I_absorbing", "I_vacuum_exact", "err"]
    raise AssertionError(task)


def _point(rc, x):
    cfg = rc.cfg
    quad = cfg.quad
    task = rc.task
    oracle = rc.options.get("oracle", True)
    with warnings.catch_warnings():
        # the sweep deliberately crosses regime boundaries
        warnings.simplefilter("ignore", RegimeWarning)
        if task == "PairPotential":
            u, err = pair.potential_excited_with_error(cfg, x)
            return SweepRecord(x, (u.total, u.resonant, u.nonresonant), err,
                               _flag(u.nonresonant, err, quad))
        if task == "PairForce":
            env = _envelope(rc.options)
            f = pair.resonant_force(cfg, x, env)
            u = pair.resonant_potential_model(cfg, x, env)
            return SweepRecord(x, (f, u), 0.0, False)
        if task == "PlanarForce":
            g = geometry.HalfSpaceGeometry(x)
            vals = (geometry.planar_force_closed(cfg, g),
                    geometry.planar_force_closed(cfg, g, "printed"),
                    geometry.planar_force_asymptote(cfg, g, "near"),
                    geometry.planar_force_asymptote(cfg, g, "far"))
            if not oracle:
                return SweepRecord(x, vals, 0.0, False)
            o = geometry.planar_force_oracle(cfg, g, rc.volume)
            return SweepRecord(x, vals + (o.value,), o.error_estimate,
                               _flag(o.value, o.error_estimate, quad))
        if task == "HemisphereForce":
            g = geometry.HemisphereGeometry(x)
            vals = (geometry.hemisphere_force_closed(cfg, g, "far"),
                    geometry.hemisphere_force_closed(cfg, g, "near"),
                    geometry.hemisphere_force_closed(cfg, g, "near", "printed"))
            if not oracle:
                return SweepRecord(x, vals, 0.0, False)
            o = geometry.hemisphere_force_oracle(cfg, g, rc.volume)
            return SweepRecord(x, vals + (o.value,), o.error_estimate,
                               _flag(o.value, o.error_estimate, quad))
        if task == "DivergenceDemo":
            s = geometry.divergence_demo(cfg, geometry.HalfSpaceGeometry(rc.options["z0"]), [x])
            err = max(s.vacuum_errors[0], s.absorbing_errors[0])
            flagged = (_flag(s.vacuum[0], s.vacuum_errors[0], quad)
                       or _flag(s.absorbing[0], s.absorbing_errors[0], quad))
            return SweepRecord(x, (s.vacuum[0], s.absorbing[0], s.vacuum_exact[0]), err, flagged)
    raise AssertionError(task)


def thread_count():
    raw = os.environ.get("DISPERSION_KERNEL_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"DISPERSION_KERNEL_THREADS: expected an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("DISPERSION_KERNEL_THREADS: must be >= 0")
    return n or (os.cpu_count() or 1)


def run_sweep(rc: RunConfig, threads=None):
    """Evaluate all sweep points; records come back in sweep order."""
    grid = rc.sweep.grid(rc.cfg.atom_a.wavelength)
    threads = threads or thread_count()
    if threads == 1:
        return [_point(rc, x) for x in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda x: _point(rc, x), grid))


def _fmt(v):
    return f"{v:.16e}"


def render_csv(rc, records):
    lines = [UNITS_LINE, ",".join(_columns(rc) + ["flagged"])]
    for r in records:
        row = [_fmt(r.x)] + [_fmt(v) for v in r.values] + [_fmt(r.error), str(int(r.flagged))]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def render_json(rc, records):
    cols = _columns(rc) + ["flagged"]
    rows = [[r.x, *r.values, r.error, r.flagged] for r in records]
    doc = {
        "task": rc.task,
        "version": __version__,
        "units": UNITS_LINE[2:],
        "columns": cols,
        "rows": rows,
        "flagged": sum(r.flagged for r in records),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run_limit_check(rc):
    window = rc.options.get("window", 100.0)
    tol = rc.options.get("tolerance", 0.01)
    return pair.limit_check(rc.cfg, window=window, tolerance=tol)


def render_limits(rc, rows):
    if rc.output_format == "json-summary":
        doc = {
            "task": rc.task,
            "version": __version__,
            "units": UNITS_LINE[2:],
            "tolerance": rc.options.get("tolerance", 0.01),
            "regimes": [
                {"regime": r.regime.value, "R": r.R, "value": r.value, "asymptote": r.asymptote,
                 "ratio": r.ratio, "passed": r.passed}
                for r in rows
            ],
            "passed": all(r.passed for r in rows),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [UNITS_LINE, "regime,R,U,U_asymptote,ratio,passed"]
    for r in rows:
        lines.append(",".join([r.regime.value, _fmt(r.R), _fmt(r.value), _fmt(r.asymptote),
                               _fmt(r.ratio), str(int(r.passed))]))
    return "\n".join(lines) + "\n"


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".dk-", suffix=".tmp", dir=directory)
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None


def execute(rc: RunConfig, output=None, threads=None):
    """Run the task, write the output file and return the summary line."""
    path = output or rc.output_path
    if not path:
        raise ConfigError("output.path: required (or pass --output)")
    try:
        if rc.task == "LimitCheck":
            rows = run_limit_check(rc)
            text = render_limits(rc, rows)
            npass = sum(r.passed for r in rows)
            summary = f"{rc.task}: {npass}/{len(rows)} regimes within tolerance -> {path}"
        else:
            records = run_sweep(rc, threads)
            render = render_json if rc.output_format == "json-summary" else render_csv
            text = render(rc, records)
            nflag = sum(r.flagged for r in records)
            summary = f"{rc.task}: {len(records)} points, {nflag} flagged -> {path}"
    except DispersionError as exc:
        raise ComputeError(f"{type(exc).__name__}: {exc}") from None
    write_atomic(path, text)
    return summary


# ---------------------------------------------------------------------------
# explain


EXPLAIN = {
    "PairPotential": """\
U(R) = U_nonres + U_res, atom A excited, atom B in its ground state.
  U_nonres = -(1/pi) int_0^inf alpha_eA(iu) alpha_gB(iu) (u^4/R^2)
             P(n(iu) u R) exp(-2 n(iu) u R) du,
  P(x) = 1 + 2/x + 5/x^2 + 6/x^3 + 3/x^4
  U_res = -(4/9) Re[ d2_A d2_B w_B w_A^4 / ((w_B^2 - w_A^2 - i g_B w_A) R^2)
          (1 + 1/(n w_A R)^2 + 3/(n w_A R)^4) ] exp(-2 Im n(w_A) w_A R)
alpha(w) = (d2/3) [1/(W - w - i g/2) + 1/(W + w + i g/2)], W = +w_eg (ground),
-w_eg (excited); n = sqrt(1 + 4 pi n0 alpha_gB).""",
    "PairForce": """\
Resonant pair force F = -dU/dR (positive = repulsive), c = -(4/9) Re K,
K = d2_A d2_B w_B w_A^4 / (w_B^2 - w_A^2 - i g_B w_A):
  slab:        F = c (2/R^3) A(R)
  exponential: F = c/R^2 [2 A(R)/R + Q(R)/L] exp(-(R - r0)/L)
  medium:      derivative of the full resonant term with complex n
A = 1 + 2/(w_A R)^2 + 9/(w_A R)^4, Q = 1 + 1/(w_A R)^2 + 3/(w_A R)^4,
L = 1/(2 Im n(w_A) w_A) the photon mean free path.""",
    "PlanarForce": """\
Half-space z >= z0, slab model (pair force without absorption, depth L):
  F = -(4 pi/9) n0 Re K [2 ln(1 + L/z0) + (1/w_A^2)(1/z0^2 - 1/(z0+L)^2)
                        + (3/(2 w_A^4))(1/z0^4 - 1/(z0+L)^4)]
  near (z0 << L, lambda): F = -(2 pi/3) n0 Re K / (w_A^4 z0^4)
  far  (z0 >> L):         F = -(8 pi/9) n0 Re K L / z0
F_closed_printed keeps the historical bracket ln(1 + L/z0) + (2/w^2)(...).
The oracle integrates the pair force over the layer numerically.""",
    "HemisphereForce": """\
Atom at the centre of a gas hemisphere, inner radius r0:
  F = pi n0 int_r0^inf r^2 F_exp(r) dr   (exponential envelope, r0 as origin)
  far  (r0 >> L, lambda): F = -(4 pi/9) n0 Re K [1 + 2 L/r0]
  near (r0 << L, lambda): F = -2 pi n0 d2_A d2_B w_B D / ((D^2 + (g_B w_A)^2) r0^4),
  D = w_B^2 - w_A^2. F_near_printed carries an extra factor w_A^4 D.""",
    "DivergenceDemo": """\
Energy of the atom and the half-space z >= z0 cut at radius C:
  I(C) = n0 int U dV over {z >= z0, |r| <= C}
  vacuum:    U = -(4/9) d2_A d2_B w_A^4 w_B / (D R^2), I grows linearly in C,
             exactly 2 pi n0 c [(C - z0) - z0 ln(C/z0)]
  absorbing: U = c Q(R) exp(-R/L) / R^2, I converges for C >> L.""",
    "LimitCheck": """\
Ratios U/U_asym at R = lambda_min/100 (short range) and 100 lambda_max:
  vdw-excited:      -(4/3) d2_A d2_B w_B / (D R^6)       (resonant channel, vacuum)
  retarded-excited: -(4/9) d2_A d2_B w_A^4 w_B / (D R^2) (resonant channel, vacuum)
  vdw-ground:       -(3/(pi R^6)) int alpha_gA alpha_gB / n^4 du
  retarded-ground:  -23 alpha_gA(0) alpha_gB(0) / (4 pi n(0)^5 R^7)""",
}


def _build_parser():
    p = argparse.ArgumentParser(
        prog="dispersion-kernel",
        description="Dispersion potentials and forces of an excited atom in a dilute gas.")
    p.add_argument("--version", action="version",
                   version=f"dispersion-kernel {__version__} (core: {_backend.NAME})")
    p.add_argument("--explain", metavar="TASK", choices=TASKS,
                   help="print the formulas behind a task and exit")
    sub = p.add_subparsers(dest="command")
    r = sub.add_parser("run", help="run the sweep described by a configuration file")
    r.add_argument("--config", required=True, help="INI configuration file")
    r.add_argument("--output", help="output path (overrides [output] path)")
    return p


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.explain:
        print(EXPLAIN[args.explain])
        return EXIT_OK
    if args.command != "run":
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise IoError(f"cannot read {args.config}: {exc}") from None
        rc = parse_config(text)
        print(execute(rc, args.output))
        return EXIT_OK
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ComputeError as exc:
        print(f"ComputeError: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except IoError as exc:
        print(f"IoError: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
