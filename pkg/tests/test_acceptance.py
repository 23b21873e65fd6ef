"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line with the measured
numbers.  The evolution criteria run the shipped presets through the CLI so
the checked files are exactly what users get.
"""
import contextlib
import io as stdio
import time

import numpy as np
import pytest

from curvedirac import cli, dirac, io, zitter
from curvedirac.bogolyubov import (
    FrequencyProfile,
    analytic_squarehat,
    numeric_bogolyubov,
    piecewise_bogolyubov,
)
from curvedirac.closed_forms import compare_at, probe_points
from curvedirac.geometry import MetricFamily, ScalarFunction
from curvedirac.profiles import ConformalProfile

import oracles


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def run_preset(name, outdir):
    p = cli.load_preset(name)
    t = time.perf_counter()
    with contextlib.redirect_stdout(stdio.StringIO()), contextlib.redirect_stderr(stdio.StringIO()):
        rc = cli.run([p["command"], "--preset", name, "--outdir", str(outdir / name)])
    assert rc == 0, name
    return outdir / name, time.perf_counter() - t


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    out = tmp_path_factory.mktemp("presets")
    return {n: run_preset(n, out) for n in cli.list_presets()}


def _zb_row(row):
    f = row.split(",")
    return {"frequency": float(f[3]), "amplitude": float(f[4]), "has_zb": f[5] == "1",
            "spectral_amplitude": float(f[6])}


def zb_rows(path):
    rows = (path / "zb.csv").read_text().splitlines()[1:]
    return {r.split(",")[0]: _zb_row(r) for r in rows}


# ---------------------------------------------------------------------------


def _families():
    return {
        "conformal": MetricFamily.conformal(ScalarFunction.from_expression("1 + t**2 + 0.1*sin(x)")),
        "conformal_t": MetricFamily.conformal(ScalarFunction.from_expression("1 + t**2")),
        "static": MetricFamily.static(ScalarFunction.from_expression("0.3*x"),
                                      ScalarFunction.from_expression("0.2*x**2")),
        "frw": MetricFamily.frw(ScalarFunction.from_expression("1 + t")),
        "rindler_polar": MetricFamily.rindler_polar(),
        "rindler_conformal": MetricFamily.rindler_conformal(1.0),
    }


def test_criterion_1_geometry(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    worst = {}
    for name, metric in _families().items():
        for p in probe_points(metric, 20, rng):
            for obj, comp, val, ora, err, rel in compare_at(metric, p):
                worst[(name, obj)] = max(worst.get((name, obj), 0.0), rel)
    analytic = max(v for (n, o), v in worst.items() if o != "ricci_scalar")
    # Ricci scalar goes through nested finite differences
    fd = max((v for (n, o), v in worst.items() if o == "ricci_scalar"), default=0.0)
    elapsed = time.perf_counter() - t0
    ok = analytic < 1e-8 and fd < 1e-5 and elapsed < 1.0
    report(capsys, 1, ok, f"max rel err analytic {analytic:.1e}, finite-difference {fd:.1e}, {elapsed:.2f} s")


def test_criterion_2_zb_frequency_law(runs, capsys):
    freq, amp, elapsed = [], [], 0.0
    for m, name in zip((1, 2, 4, 8), ("fig2a", "fig2b", "fig2c", "fig2d")):
        path, dt = runs[name]
        elapsed += dt
        r = zb_rows(path)["all"]
        freq.append(r["frequency"] / (2 * m) - 1)
        amp.append(r["amplitude"])
    ratio = amp[1] / amp[0]
    ok = (max(map(abs, freq)) < 0.05 and all(a > b for a, b in zip(amp, amp[1:]))
          and abs(ratio / 0.5 - 1) < 0.15 and elapsed < 30)
    report(capsys, 2, ok, f"max freq err {max(map(abs, freq)):.2%}, amplitudes {np.round(amp, 4).tolist()}, "
                          f"ratio {ratio:.3f}, {elapsed:.1f} s")


def test_criterion_3_selection_rule(runs, capsys):
    path, elapsed = runs["fig3"]
    obs = io.read_csv(path / "observables.csv")
    cfg = cli.load_preset("fig3")["config"]
    g = dirac.branch_packet(cfg["sigma_k"], cfg["k0"], cfg["branch"], cfg["mass"], cfg["L"], cfg["N"])
    width = dirac.packet_width(g)
    two_e = 2 * float(dirac.energy(cfg["k0"], cfg["mass"]))
    a = zitter.spectral_amplitude(obs["t"], obs["mean_x"], two_e)
    ok = a < 1e-4 * width and elapsed < 10
    report(capsys, 3, ok, f"amplitude at 2E {a:.1e} vs width {width:.2f}, {elapsed:.1f} s")


def test_criterion_4_particle_creation(runs, capsys):
    path, elapsed = runs["fig4"]
    t0 = time.perf_counter()
    obs = io.read_csv(path / "observables.csv")
    pre = obs["pos_fraction"][obs["t"] <= 25].max()
    post = obs["pos_fraction"][-1]
    r = zb_rows(path)
    ratio = r["w1"]["amplitude"] / r["w0"]["amplitude"] if r["w0"]["amplitude"] > 0 else np.inf
    cfg = cli.load_preset("fig4")["config"]
    prof = ConformalProfile.inverted_gaussian(**{k: v for k, v in cfg["profile"].items() if k != "kind"})
    g = dirac.branch_packet(cfg["sigma_k"], cfg["k0"], "-", cfg["mass"], cfg["L"], cfg["N"])
    w = np.sum(np.abs(np.fft.fft(g.psi, axis=0)) ** 2, axis=1)
    keep = w > w.max() * 1e-18
    c = prof.center
    P = np.array([oracles.transition_probability(k, cfg["mass"], prof.omega, c - 12, c + 12) for k in g.k[keep]])
    oracle = np.sum(w[keep] * P) / w.sum()
    elapsed += time.perf_counter() - t0
    ok = pre < 1e-6 and post > 1e-3 and ratio >= 100 and abs(post - oracle) < 1e-6 and elapsed < 30
    report(capsys, 4, ok, f"pre {pre:.1e}, post {post:.6f}, oracle {oracle:.6f}, ZB ratio {ratio:.3g}, "
                          f"{elapsed:.1f} s")


def test_criterion_5_bogolyubov(capsys):
    t0 = time.perf_counter()
    ks = np.linspace(0.05, 5.0, 10)
    ks = ks[np.abs(ks - 1) > 0.1]
    while ks.size < 10:
        ks = np.append(ks, ks[-1] + 0.37)
    worst, defect = 0.0, 0.0
    for k in ks:
        for tt in np.linspace(0.1, 5.0, 10):
            a = analytic_squarehat(k, 1.0, tt)
            b = piecewise_bogolyubov(k, 1.0, [(0.0, tt, -1.0)])
            worst = max(worst, abs(a.alpha - b.alpha), abs(a.beta - b.beta))
            defect = max(defect, abs(a.norm_defect), abs(b.norm_defect))
    massless = max(abs(analytic_squarehat(k, 0.0, tt).beta) ** 2
                   for k in ks for tt in np.linspace(0.1, 5.0, 10))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and defect < 1e-8 and massless < 1e-12 and elapsed < 5
    report(capsys, 5, ok, f"max |d alpha|,|d beta| {worst:.1e}, norm defect {defect:.1e}, "
                          f"n_k(m=0) {massless:.1e}, {elapsed:.2f} s")


def _summary(path):
    return {r.split(",")[0]: float(r.split(",")[1])
            for r in (path / "report_summary.csv").read_text().splitlines()[1:]}


def test_criterion_6_lattice_continuum(runs, capsys):
    p50, t50 = runs["fig6"]
    p502, t502 = runs["fig6_502"]
    p8, t8 = runs["fig8"]
    s50, s502 = _summary(p50), _summary(p502)
    r = zb_rows(p8)
    ratio = r["w1"]["amplitude"] / r["w0"]["amplitude"] if r["w0"]["amplitude"] > 0 else np.inf
    elapsed = t50 + t502 + t8
    ok = (s50["relative_to_width"] < 0.02 and s502["max_abs"] < s50["max_abs"] and ratio >= 100
          and elapsed < 60)
    report(capsys, 6, ok, f"N=50 deviation {s50['relative_to_width']:.2%} of width, N=502 "
                          f"{s502['relative_to_width']:.3%}, lattice ZB ratio {ratio:.3g}, {elapsed:.1f} s")


def test_criterion_7_conservation(runs, capsys):
    worst = {}
    for name, (path, _) in runs.items():
        kind = cli.load_preset(name)
        if (path / "observables.csv").exists():
            n = io.read_csv(path / "observables.csv")["norm"]
            tol_key = "flat" if kind["command"] == "flat-evolve" else "frw"
            worst[tol_key] = max(worst.get(tol_key, 0.0), np.abs(n / n[0] - 1).max())
        if (path / "lattice_observables.csv").exists():
            p = io.read_csv(path / "lattice_observables.csv")["power"]
            worst["lattice"] = max(worst.get("lattice", 0.0), np.abs(p / p[0] - 1).max())
    wr = 0.0
    prof = ConformalProfile.inverted_gaussian(0.5, 0.0, 1.0)
    window = prof.flat_window(1e-9)
    for k in np.linspace(0.05, 5.0, 25):
        _, mode = numeric_bogolyubov(FrequencyProfile(k, 1.0, prof), *window, n_samples=200, return_mode=True)
        wr = max(wr, np.abs(mode.wronskian() - 1).max())
    sq = ConformalProfile.squarehat(1.0)
    for k in np.linspace(0.05, 5.0, 25):
        _, mode = numeric_bogolyubov(FrequencyProfile(k, 1.0, sq), -1.0, 2.0, n_samples=50, return_mode=True)
        wr = max(wr, np.abs(mode.wronskian() - 1).max())
    ok = (worst["flat"] < 1e-12 and worst["frw"] < 1e-8 and worst["lattice"] < 1e-8 and wr < 1e-8)
    report(capsys, 7, ok, f"norm drift flat {worst['flat']:.1e}, FRW {worst['frw']:.1e}, "
                          f"lattice {worst['lattice']:.1e}, Wronskian {wr:.1e}")


def test_criterion_8_determinism(runs, tmp_path, capsys):
    differ = []
    for name, (path, _) in runs.items():
        again, _ = run_preset(name, tmp_path)
        for f in sorted(path.iterdir()):
            if f.name == "manifest.json":
                continue
            if f.read_bytes() != (again / f.name).read_bytes():
                differ.append(f"{name}/{f.name}")
    report(capsys, 8, not differ, f"{len(runs)} presets rerun, differing files: {differ or 'none'}")
