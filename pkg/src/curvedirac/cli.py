"""Command line entry point: ``curvedirac <subcommand> [config.json|-] [options]``.

Every subcommand reads a JSON object (file path, ``-`` for stdin, or a
shipped ``--preset``), applies ``--set key=value`` overrides (values are
parsed as JSON, nested keys use dots) and writes its outputs plus
``manifest.json`` into the output directory.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from . import __version__
from . import bogolyubov as bg
from . import dirac, io, waveguide, zitter
from .closed_forms import compare_at, probe_points
from .exceptions import CurveDiracError, DomainTooSmallError, NumericalError
from .geometry import MetricFamily, ScalarFunction
from .profiles import ConformalProfile, profile_from_config

REQUIRED = object()


class ConfigError(Exception):
    """Invalid configuration; carries every violation found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Key:
    type: Any
    default: Any
    help: str
    check: Optional[Callable[[Any], Optional[str]]] = None


def _nonneg(v):
    return None if v >= 0 else "must be >= 0"


def _pos(v):
    return None if v > 0 else "must be > 0"


def _pow2(v):
    return None if v >= 2 and (v & (v - 1)) == 0 else "must be a power of two >= 2"


def _even(v):
    return None if v >= 2 and v % 2 == 0 else "must be an even integer >= 2"


def _choice(*opts):
    def f(v):
        return None if v in opts else f"must be one of {list(opts)}"

    return f


def _components(v):
    if not isinstance(v, list) or len(v) != 2:
        return "must be a list of two numbers (strings like '1j' allowed)"
    try:
        c = [complex(x) for x in v]
    except (TypeError, ValueError):
        return "entries must be numbers or complex literals"
    return None if any(c) else "must not be all zero"


def _windows(v):
    if v is None:
        return None
    if not isinstance(v, list) or not all(isinstance(w, list) and len(w) == 2 for w in v):
        return "must be a list of [t_start, t_end] pairs"
    return None if all(w[1] > w[0] for w in v) else "each window needs t_end > t_start"


GLOBAL = {
    "outdir": Key(str, None, "output directory (default out/<subcommand>)"),
    "seed": Key(int, 0, "seed for randomised probe points"),
}

PACKET = {
    "packet": Key(str, "gaussian", "initial state: 'gaussian' (position space) or 'branch' (single energy branch)",
                  _choice("gaussian", "branch")),
    "sigma": Key(float, 3.0, "Gaussian width in x [length]", _pos),
    "components": Key(list, [1, 1], "constant spinor multiplying the Gaussian", _components),
    "sigma_k": Key(float, 2**-0.5, "branch packet width in k [1/length]", _pos),
    "k0": Key(float, 0.0, "central wavenumber [1/length]; Gaussian carries exp(+i k0 x)"),
    "branch": Key(str, "+", "energy branch of the branch packet", _choice("+", "-")),
    "L": Key(float, 200.0, "periodic box length [length]", _pos),
    "N": Key(int, 1024, "grid points (power of two)", _pow2),
}

EVOLVE = {
    **GLOBAL,
    **PACKET,
    "mass": Key(float, 1.0, "mass m [1/length]", _nonneg),
    "t_max": Key(float, REQUIRED, "final time [length, c = 1]", _pos),
    "dt": Key(float, 0.05, "output sampling interval [length]", _pos),
    "max_step": Key(float, None, "largest stepper step (default 0.01 / max E_k)", _pos),
    "n_frames": Key(int, 101, "density snapshots written to density.csv/pgm", _pos),
    "pgm": Key(bool, True, "write density.pgm"),
    "zb_windows": Key(list, None, "time windows [[t0, t1], ...] for zb.csv (default: whole run, "
                                  "or before/after the profile excursion)", _windows),
}

SCHEMAS = {
    "flat-evolve": EVOLVE,
    "frw-evolve": {
        **EVOLVE,
        "profile": Key(dict, REQUIRED, "conformal factor, e.g. {kind: inverted_gaussian, depth, center, width}"),
    },
    "bogolyubov": {
        **GLOBAL,
        "m": Key(float, 1.0, "scalar mass [1/length]", _nonneg),
        "profile": Key(dict, {"kind": "squarehat", "t0": 1.0},
                       "Omega^2 profile: {kind: squarehat, t0} or {kind: inverted_gaussian, depth, center, width}"),
        "kmin": Key(float, 0.1, "smallest wavenumber [1/length]", _nonneg),
        "kmax": Key(float, 5.0, "largest wavenumber [1/length]", _pos),
        "nk": Key(int, 50, "number of wavenumbers", _pos),
        "method": Key(str, "auto", "matching | ode | analytic | auto", _choice("auto", "matching", "ode", "analytic")),
        "rtol": Key(float, 1e-12, "relative tolerance of the mode ODE integrator", _pos),
    },
    "waveguide-evolve": {
        **GLOBAL,
        "n_waveguides": Key(int, REQUIRED, "number of waveguides (even)", _even),
        "d": Key(float, None, "lattice constant [length]; give d or kappa", _pos),
        "kappa": Key(float, None, "coupling 1/d [1/length]; give d or kappa", _pos),
        "mass": Key(float, 1.0, "mass m setting the detuning (-1)^l m Omega(z)", _nonneg),
        "profile": Key(dict, None, "conformal factor along z (default constant)"),
        "z_max": Key(float, REQUIRED, "propagation distance [length]", _pos),
        "dz": Key(float, 0.05, "output sampling interval in z [length]", _pos),
        "max_step": Key(float, None, "largest integrator step (default 0.01 / kappa)", _pos),
        "boundary": Key(str, "open", "open | periodic", _choice("open", "periodic")),
        "method": Key(str, "exponential", "exponential | rk4", _choice("exponential", "rk4")),
        "initial": Key(dict, REQUIRED, "continuum packet sampled onto the lattice: {type: gaussian|branch, "
                                       "sigma, components, k0, sigma_k, branch, project: '+'|'-'|null}"),
        "compare_continuum": Key(bool, False, "also evolve the continuum packet and write report.csv"),
        "zb_windows": Key(list, None, "z windows for zb.csv", _windows),
        "pgm": Key(bool, True, "write lattice.pgm"),
    },
    "geometry-check": {
        **GLOBAL,
        "metric": Key(str, REQUIRED, "conformal | static | frw | rindler_polar | rindler_conformal",
                      _choice("conformal", "static", "frw", "rindler_polar", "rindler_conformal")),
        "params": Key(dict, {}, "sympy expressions in t, x: {omega}, {phi, psi}, {a} or {accel}"),
        "points": Key(int, 20, "number of random probe points", _pos),
    },
    "compare": {
        **GLOBAL,
        "a": Key(str, REQUIRED, "first CSV (abscissa in the first column)"),
        "b": Key(str, REQUIRED, "second CSV"),
        "column": Key(str, "mean_x", "column compared"),
        "width": Key(float, None, "packet width for the relative metric", _pos),
    },
}

INITIAL_KEYS = {
    "type": Key(str, "gaussian", "gaussian | branch", _choice("gaussian", "branch")),
    "sigma": PACKET["sigma"],
    "components": PACKET["components"],
    "k0": PACKET["k0"],
    "sigma_k": PACKET["sigma_k"],
    "branch": PACKET["branch"],
    "project": Key(str, None, "keep only one lattice band", _choice("+", "-")),
    "L": PACKET["L"],
    "N": PACKET["N"],
}


def _coerce(name, key: Key, value, errors):
    if value is None:
        return None
    t = key.type
    ok = True
    if t is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        value = float(value) if ok else value
        ok = ok and np.isfinite(value)
    elif t is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif t is bool:
        ok = isinstance(value, bool)
    else:
        ok = isinstance(value, t)
    if not ok:
        errors.append(f"{name}: expected {t.__name__}, got {value!r}")
        return None
    if key.check is not None:
        msg = key.check(value)
        if msg:
            errors.append(f"{name}: {msg} (got {value!r})")
    return value


def validate(raw: dict, schema: dict, prefix: str = "") -> tuple:
    """Return ``(config, errors)`` with defaults filled in."""
    errors = []
    if not isinstance(raw, dict):
        return {}, [f"{prefix or 'config'}: expected a JSON object"]
    for k in sorted(set(raw) - set(schema)):
        errors.append(f"{prefix}{k}: unknown key")
    cfg = {}
    for name, key in schema.items():
        if name in raw:
            cfg[name] = _coerce(prefix + name, key, raw[name], errors)
        elif key.default is REQUIRED:
            errors.append(f"{prefix}{name}: missing required key")
        else:
            cfg[name] = key.default
    return cfg, errors


def _check_profile(cfg, name, errors):
    p = cfg.get(name)
    if p is None:
        return None
    try:
        return profile_from_config(p)
    except (ValueError, TypeError) as exc:
        errors.append(f"{name}: {exc}")
        return None


def _check_semantics(command, cfg, errors):
    if command in ("flat-evolve", "frw-evolve"):
        if command == "frw-evolve":
            cfg["_profile"] = _check_profile(cfg, "profile", errors)
        if cfg.get("t_max") and cfg.get("dt") and cfg["dt"] > cfg["t_max"]:
            errors.append("dt: must not exceed t_max")
    elif command == "bogolyubov":
        cfg["_profile"] = _check_profile(cfg, "profile", errors)
        if cfg.get("kmax") is not None and cfg.get("kmin") is not None and cfg["kmax"] < cfg["kmin"]:
            errors.append("kmax: must be >= kmin")
    elif command == "waveguide-evolve":
        cfg["_profile"] = _check_profile(cfg, "profile", errors)
        if (cfg.get("d") is None) == (cfg.get("kappa") is None):
            errors.append("d/kappa: give exactly one of d and kappa")
        if isinstance(cfg.get("initial"), dict):
            init, errs = validate(cfg["initial"], INITIAL_KEYS, "initial.")
            errors.extend(errs)
            cfg["initial"] = init
    elif command == "geometry-check":
        cfg["_metric"] = None
        if cfg.get("metric") and isinstance(cfg.get("params"), dict):
            try:
                cfg["_metric"] = build_metric(cfg["metric"], cfg.get("params") or {})
            except (ValueError, TypeError, SyntaxError) as exc:
                errors.append(f"params: {exc}")


def build_metric(kind: str, params: dict) -> MetricFamily:
    """Metric family from sympy expression strings."""
    allowed = {
        "conformal": {"omega"},
        "static": {"phi", "psi"},
        "frw": {"a"},
        "rindler_polar": set(),
        "rindler_conformal": {"accel"},
    }[kind]
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown parameters for {kind}: {sorted(unknown)}")
    expr = lambda name, default: ScalarFunction.from_expression(str(params.get(name, default)))  # noqa: E731
    if kind == "conformal":
        return MetricFamily.conformal(expr("omega", "1 + t**2"))
    if kind == "static":
        return MetricFamily.static(expr("phi", "0.3*x"), expr("psi", "0.2*x**2"))
    if kind == "frw":
        return MetricFamily.frw(expr("a", "1 + t"))
    if kind == "rindler_polar":
        return MetricFamily.rindler_polar()
    return MetricFamily.rindler_conformal(float(params.get("accel", 1.0)))


# ---------------------------------------------------------------------------
# config loading


def load_preset(name: str) -> dict:
    fname = name if name.endswith(".json") else name + ".json"
    try:
        text = resources.files("curvedirac.presets").joinpath(fname).read_text()
    except FileNotFoundError:
        raise ConfigError([f"preset: no preset named {name!r}; available: {', '.join(list_presets())}"])
    return json.loads(text)


def list_presets() -> list:
    return sorted(
        p.name[:-5] for p in resources.files("curvedirac.presets").iterdir() if p.name.endswith(".json")
    )


def _set_dotted(cfg: dict, dotted: str, value):
    parts = dotted.split(".")
    node = cfg
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError([f"--set {dotted}: {p} is not an object"])
    node[parts[-1]] = value


def assemble_config(command: str, args) -> dict:
    raw: dict = {}
    if args.preset:
        preset = load_preset(args.preset)
        if preset.get("command") != command:
            raise ConfigError([f"preset: {args.preset!r} is for {preset.get('command')!r}, not {command!r}"])
        raw.update(preset["config"])
    if args.config:
        try:
            text = sys.stdin.read() if args.config == "-" else Path(args.config).read_text()
            loaded = json.loads(text)
        except OSError as exc:
            raise ConfigError([f"config: cannot read {args.config}: {exc}"])
        except json.JSONDecodeError as exc:
            raise ConfigError([f"config: invalid JSON ({exc})"])
        if not isinstance(loaded, dict):
            raise ConfigError(["config: expected a JSON object"])
        raw.update(loaded)
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError([f"--set {item!r}: expected key=value"])
        k, v = item.split("=", 1)
        try:
            val = json.loads(v)
        except json.JSONDecodeError:
            val = v
        _set_dotted(raw, k, val)
    for k, v in _flag_overrides(command, args, raw).items():
        _set_dotted(raw, k, v)
    return raw


def _flag_overrides(command, args, raw) -> dict:
    out = {}
    if getattr(args, "seed", None) is not None:
        out["seed"] = args.seed
    if command == "bogolyubov":
        if args.profile == "gaussian":
            out["profile"] = {"kind": "inverted_gaussian", "depth": 0.5, "center": 0.0, "width": 1.0}
        elif args.profile == "squarehat" or (args.t0 is not None and "profile" not in raw):
            out["profile"] = {"kind": "squarehat", "t0": 1.0 if args.t0 is None else args.t0}
        elif args.t0 is not None:
            out["profile.t0"] = args.t0
        for name in ("m", "kmin", "kmax", "nk"):
            if getattr(args, name) is not None:
                out[name] = getattr(args, name)
    elif command == "geometry-check":
        if args.metric is not None:
            out["metric"] = args.metric
        if args.params is not None:
            try:
                out["params"] = json.loads(args.params)
            except json.JSONDecodeError as exc:
                raise ConfigError([f"--params: invalid JSON ({exc})"])
        if args.points is not None:
            out["points"] = args.points
    elif command == "compare":
        for name in ("a", "b", "column", "width"):
            if getattr(args, name) is not None:
                out[name] = getattr(args, name)
    return out


# ---------------------------------------------------------------------------
# runners


def _packet(cfg) -> dirac.SpinorGrid:
    kind = cfg.get("packet", cfg.get("type"))
    if kind == "branch":
        return dirac.branch_packet(cfg["sigma_k"], cfg["k0"], cfg["branch"], cfg.get("mass", 1.0), cfg["L"], cfg["N"])
    comps = [complex(c) for c in cfg["components"]]
    return dirac.gaussian_position_packet(cfg["sigma"], comps, cfg["L"], cfg["N"], k0=cfg["k0"])


def _time_grid(t_max, dt):
    n = int(round(t_max / dt))
    return np.arange(n + 1) * dt


def _default_windows(profile: Optional[ConformalProfile], t0, t1):
    if profile is None or profile.kind == "constant":
        return [("all", t0, t1)]
    lo, hi = profile.flat_window(1e-6)
    out = []
    if lo > t0:
        out.append(("pre", t0, min(lo, t1)))
    if hi < t1:
        out.append(("post", max(hi, t0), t1))
    return out or [("all", t0, t1)]


def _zb_rows(t, x, windows):
    cols = {k: [] for k in ("window", "t_start", "t_end", "frequency", "amplitude", "has_zb", "spectral_amplitude")}
    for label, a, b in windows:
        sel = (t >= a - 1e-12) & (t <= b + 1e-12)
        try:
            res = zitter.zb_analysis(t[sel], x[sel])
        except ValueError:
            res = zitter.ZBResult(float("nan"), 0.0, False, float("nan"))
        for k, v in zip(cols, (label, float(a), float(b), res.frequency, res.amplitude, res.has_zb, res.spectral_amplitude)):
            cols[k].append(v)
    return cols


def _frames(n_t, n_frames):
    return max(1, int(np.ceil(n_t / n_frames)))


def run_evolve(command, cfg, outdir: Path) -> list:
    state = _packet(cfg)
    t = _time_grid(cfg["t_max"], cfg["dt"])
    every = _frames(t.size, cfg["n_frames"])
    profile = cfg.get("_profile")
    if command == "flat-evolve":
        traj = dirac.flat_trajectory(state, cfg["mass"], t, snapshot_every=every)
    else:
        traj = dirac.evolve_frw(state, cfg["mass"], profile, t, cfg["max_step"], snapshot_every=every)
    files = []
    snaps = np.abs(traj.snapshots) ** 2
    nt, nx = snaps.shape[:2]
    files.append(
        io.write_csv(
            {
                "t": np.repeat(traj.snapshot_t, nx),
                "x": np.tile(traj.x, nt),
                "rho1": snaps[:, :, 0].ravel(),
                "rho2": snaps[:, :, 1].ravel(),
                "rho": snaps.sum(axis=2).ravel(),
            },
            outdir / "density.csv",
        )
    )
    files.append(
        io.write_csv(
            {
                "t": traj.t,
                "mean_x": traj.mean_x,
                "norm": traj.norm,
                "pos_fraction": traj.pos_fraction,
                "neg_fraction": traj.neg_fraction,
            },
            outdir / "observables.csv",
        )
    )
    if cfg["pgm"]:
        files.append(io.write_pgm(np.sqrt(snaps.sum(axis=2)), outdir / "density.pgm", "linear"))
    windows = (
        [(f"w{i}", a, b) for i, (a, b) in enumerate(cfg["zb_windows"])]
        if cfg["zb_windows"]
        else _default_windows(profile, t[0], t[-1])
    )
    files.append(io.write_csv(_zb_rows(traj.t, traj.mean_x, windows), outdir / "zb.csv"))
    return files


def run_bogolyubov(cfg, outdir: Path) -> list:
    prof = cfg["_profile"]
    k = np.linspace(cfg["kmin"], cfg["kmax"], cfg["nk"])
    kw = {"rtol": cfg["rtol"]} if cfg["method"] == "ode" or (cfg["method"] == "auto" and prof.kind != "squarehat") else {}
    pairs = bg.bogolyubov_spectrum(k, cfg["m"], prof, cfg["method"], **kw)
    n_num = np.array([bg.particle_number(p) for p in pairs])
    n_an = np.full(k.size, np.nan)
    if prof.kind == "squarehat" and prof.inner_sq == -1.0:
        for i, kk in enumerate(k):
            try:
                n_an[i] = bg.particle_number(bg.analytic_squarehat(kk, cfg["m"], prof.t0))
            except CurveDiracError:
                pass
    cols = {
        "k": k,
        "re_alpha": np.array([p.alpha.real for p in pairs]),
        "im_alpha": np.array([p.alpha.imag for p in pairs]),
        "re_beta": np.array([p.beta.real for p in pairs]),
        "im_beta": np.array([p.beta.imag for p in pairs]),
        "n_k": n_num,
        "n_k_analytic": n_an,
        "abs_err": np.abs(n_num - n_an),
    }
    return [io.write_csv(cols, outdir / "spectrum.csv")]


def lattice_initial(cfg) -> tuple:
    """Continuum packet and the lattice state sampled from it."""
    init = dict(cfg["initial"])
    init["mass"] = cfg["mass"]
    cont = _packet(init)
    d = cfg["d"] if cfg.get("d") is not None else 1.0 / cfg["kappa"]
    n_sites = cfg["n_waveguides"] // 2
    state = waveguide.sample_on_lattice(cont, n_sites, d)
    if init.get("project"):
        state = waveguide.project_band(state, cfg["mass"], init["project"], cfg["boundary"])
    return cont, state


def run_waveguide(cfg, outdir: Path) -> list:
    cont, state = lattice_initial(cfg)
    z = _time_grid(cfg["z_max"], cfg["dz"])
    det = waveguide.DetuningProfile(mass=cfg["mass"], profile=cfg.get("_profile"))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", waveguide.EdgeReflectionWarning)
        traj = waveguide.propagate(state, det, z, cfg["method"], cfg["boundary"], cfg["max_step"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    amp = traj.amplitudes
    nz, nl = amp.shape
    files = [
        io.write_csv(
            {
                "z": np.repeat(z, nl),
                "l": np.tile(traj.labels, nz),
                "re_c": amp.real.ravel(),
                "im_c": amp.imag.ravel(),
                "abs_c": np.abs(amp).ravel(),
            },
            outdir / "lattice.csv",
        ),
        io.write_csv(
            {"z": z, "mean_x": traj.mean_x, "power": traj.power, "edge_flag": np.full(nz, traj.edge_warning)},
            outdir / "lattice_observables.csv",
        ),
    ]
    if cfg["pgm"]:
        files.append(io.write_pgm(waveguide.intensity_map(traj), outdir / "lattice.pgm", "linear"))
    windows = (
        [(f"w{i}", a, b) for i, (a, b) in enumerate(cfg["zb_windows"])]
        if cfg["zb_windows"]
        else _default_windows(cfg.get("_profile"), z[0], z[-1])
    )
    files.append(io.write_csv(_zb_rows(z, traj.mean_x, windows), outdir / "zb.csv"))
    if cfg["compare_continuum"]:
        prof = cfg.get("_profile")
        if prof is None or prof.kind == "constant":
            ctraj = dirac.flat_trajectory(cont, cfg["mass"], z)
        else:
            ctraj = dirac.evolve_frw(cont, cfg["mass"], prof, z)
        files.append(
            io.write_csv(
                {
                    "t": z,
                    "mean_x": ctraj.mean_x,
                    "norm": ctraj.norm,
                    "pos_fraction": ctraj.pos_fraction,
                    "neg_fraction": ctraj.neg_fraction,
                },
                outdir / "continuum_observables.csv",
            )
        )
        width = comparison_width(cfg["initial"], cont)
        rep = io.compare(io.Series("lattice", z, traj.mean_x), io.Series("continuum", z, ctraj.mean_x), width)
        files.extend(_write_report(rep, outdir))
    return files


def comparison_width(init: dict, cont: dirac.SpinorGrid) -> float:
    """Packet width used by the lattice/continuum report.

    For Gaussian initial states this is the envelope parameter ``sigma`` of
    ``exp(-x^2 / (2 sigma^2))``; otherwise the RMS width of the density.
    """
    if init.get("type", "gaussian") == "gaussian":
        return float(init["sigma"])
    return dirac.packet_width(cont)


def _write_report(rep: io.ComparisonReport, outdir: Path) -> list:
    va = np.interp(rep.grid, rep.a.t, rep.a.values)
    vb = np.interp(rep.grid, rep.b.t, rep.b.values)
    f1 = io.write_csv({"t": rep.grid, "a": va, "b": vb, "deviation": rep.deviation}, outdir / "report.csv")
    f2 = io.write_csv(
        {
            "metric": list(rep.metrics) + ["width"],
            "value": [float(v) for v in rep.metrics.values()] + [float("nan") if rep.width is None else rep.width],
        },
        outdir / "report_summary.csv",
    )
    return [f1, f2]


def run_geometry(cfg, outdir: Path) -> list:
    metric = cfg["_metric"]
    pts = probe_points(metric, cfg["points"], np.random.default_rng(cfg["seed"]))
    cols = {k: [] for k in ("point", "t", "x", "object", "component", "value", "oracle", "abs_err", "rel_err")}
    for i, p in enumerate(pts):
        for obj, comp, val, ora, err, rel in compare_at(metric, p):
            for k, v in zip(cols, (i, p[0], p[1], obj, comp, val, ora, err, rel)):
                cols[k].append(v)
    print(f"max relative deviation from closed forms: {max(cols['rel_err']):.3e}")
    return [io.write_csv(cols, outdir / "geometry.csv")]


def run_compare(cfg, outdir: Path) -> list:
    series = []
    for key in ("a", "b"):
        try:
            data = io.read_csv(cfg[key])
        except (OSError, ValueError) as exc:
            raise ConfigError([f"{key}: cannot read {cfg[key]} ({exc})"])
        names = list(data)
        if cfg["column"] not in data:
            raise ConfigError([f"column: {cfg['column']!r} not in {cfg[key]} (has {names})"])
        series.append(io.Series(Path(cfg[key]).name, data[names[0]], data[cfg["column"]]))
    try:
        rep = io.compare(series[0], series[1], cfg["width"])
    except ValueError as exc:
        raise ConfigError([str(exc)])
    for k, v in rep.metrics.items():
        print(f"{k}: {v:.6e}")
    return _write_report(rep, outdir)


RUNNERS = {
    "flat-evolve": lambda cfg, out: run_evolve("flat-evolve", cfg, out),
    "frw-evolve": lambda cfg, out: run_evolve("frw-evolve", cfg, out),
    "bogolyubov": run_bogolyubov,
    "waveguide-evolve": run_waveguide,
    "geometry-check": run_geometry,
    "compare": run_compare,
}


# ---------------------------------------------------------------------------
# argument parsing


def _key_help(schema: dict) -> str:
    lines = ["config keys:"]
    for name, key in schema.items():
        default = "required" if key.default is REQUIRED else f"default {json.dumps(key.default)}"
        lines.append(f"  {name:<18} {key.help} ({default})")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvedirac",
        description="Dirac wave packets in flat and FRW spacetimes, scalar particle creation, "
        "and their binary waveguide array analogue.",
        epilog="exit codes: 0 success, 1 configuration error, 2 numerical failure",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True
    for name, schema in SCHEMAS.items():
        extra = _key_help(schema)
        if name == "waveguide-evolve":
            extra += "\n" + _key_help(INITIAL_KEYS).replace("config keys:", "initial.* keys:")
        p = sub.add_parser(name, formatter_class=argparse.RawDescriptionHelpFormatter, epilog=extra)
        p.add_argument("config", nargs="?", help="JSON config file, or '-' for stdin")
        p.add_argument("--preset", help=f"shipped config ({', '.join(list_presets())})")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (JSON value)")
        p.add_argument("--outdir", help="output directory")
        p.add_argument("--seed", type=int, help="seed for randomised probes")
        if name == "bogolyubov":
            p.add_argument("--profile", choices=["squarehat", "gaussian"])
            p.add_argument("--m", type=float)
            p.add_argument("--t0", type=float)
            p.add_argument("--kmin", type=float)
            p.add_argument("--kmax", type=float)
            p.add_argument("--nk", type=int)
        elif name == "geometry-check":
            p.add_argument("--metric")
            p.add_argument("--params", help="JSON object of expressions")
            p.add_argument("--points", type=int)
        elif name == "compare":
            p.add_argument("--a")
            p.add_argument("--b")
            p.add_argument("--column")
            p.add_argument("--width", type=float)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    started = time.perf_counter()
    try:
        raw = assemble_config(command, args)
        cfg, errors = validate(raw, SCHEMAS[command])
        _check_semantics(command, cfg, errors)
        if errors:
            raise ConfigError(errors)
        outdir = Path(args.outdir or cfg.get("outdir") or f"out/{command}")
        outdir.mkdir(parents=True, exist_ok=True)
        files = RUNNERS[command](cfg, outdir)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 1
    except DomainTooSmallError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, CurveDiracError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    echo = {k: v for k, v in raw.items()}
    manifest = io.RunManifest(command, echo, __version__, round(time.perf_counter() - started, 3))
    for f in files:
        manifest.add(f)
    manifest.write(outdir)
    print(f"wrote {len(files)} files to {outdir}")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
