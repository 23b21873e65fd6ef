"""Hand-derived geometric objects for each metric family.

These are independent of the general formulas in :mod:`curvedirac.geometry`
and are used to cross-check them (tests and ``geometry-check``).  Each
function returns a dict ``{object_name: array}`` using the same index
layout as the general routines; objects without a closed form for a given
family are omitted.
"""
from __future__ import annotations

import numpy as np

from .geometry import MetricFamily, commutator_g0g1

OBJECTS = ("christoffel", "vielbein", "spin_connection", "spinor_connection", "ricci_scalar")


def _conformal(omega, point) -> dict:
    w = omega.value(point)
    wt, wx = omega.gradient(point)
    h = omega.hessian(point)
    dot, prime = wt / w, wx / w
    gam = np.zeros((2, 2, 2))
    gam[0, 0, 0] = gam[0, 1, 1] = gam[1, 1, 0] = gam[1, 0, 1] = dot
    gam[0, 0, 1] = gam[0, 1, 0] = gam[1, 0, 0] = gam[1, 1, 1] = prime
    om = np.zeros((2, 2, 2))
    om[0, 1, 0] = om[1, 0, 0] = prime
    om[0, 1, 1] = om[1, 0, 1] = dot
    c = commutator_g0g1()
    out = {
        "christoffel": gam,
        "vielbein": np.diag([1 / w, 1 / w]),
        "spin_connection": om,
        "spinor_connection": np.array([prime / 4 * c, dot / 4 * c]),
    }
    if wx == 0 and h[1, 1] == 0 and h[0, 1] == 0:
        out["ricci_scalar"] = 2 * (dot**2 - h[0, 0] / w) / w**2
    return out


def _static(dphi, phi, psi, dpsi) -> dict:
    gam = np.zeros((2, 2, 2))
    gam[0, 1, 0] = gam[0, 0, 1] = dphi
    gam[1, 0, 0] = dphi * np.exp(2 * (phi - psi))
    gam[1, 1, 1] = dpsi
    om = np.zeros((2, 2, 2))
    om[1, 0, 0] = om[0, 1, 0] = dphi * np.exp(phi - psi)
    c = commutator_g0g1()
    return {
        "christoffel": gam,
        "vielbein": np.diag([np.exp(-phi), np.exp(-psi)]),
        "spin_connection": om,
        "spinor_connection": np.array([0.25 * dphi * np.exp(phi - psi) * c, 0 * c]),
    }


def closed_forms(metric: MetricFamily, point) -> dict:
    """Closed-form objects for ``metric`` at ``point``."""
    metric.check_domain(point)
    kind = metric.kind
    if kind == "conformal":
        return _conformal(metric.sources["omega"], point)
    if kind == "rindler_conformal":
        out = _conformal(metric.sources["omega"], point)
        out["ricci_scalar"] = 0.0
        return out
    if kind == "static":
        phi, psi = metric.sources["phi"], metric.sources["psi"]
        return _static(
            phi.gradient(point)[1], phi.value(point), psi.value(point), psi.gradient(point)[1]
        )
    if kind == "rindler_polar":
        # static with Phi = ln u, Psi = 0
        u = point[1]
        out = _static(1.0 / u, np.log(u), 0.0, 0.0)
        out["ricci_scalar"] = 0.0
        return out
    if kind == "frw":
        a_fn = metric.sources["a"]
        a = a_fn.value(point)
        adot = a_fn.gradient(point)[0]
        gam = np.zeros((2, 2, 2))
        gam[0, 1, 1] = a * adot
        gam[1, 1, 0] = gam[1, 0, 1] = adot / a
        om = np.zeros((2, 2, 2))
        om[0, 1, 1] = om[1, 0, 1] = adot
        c = commutator_g0g1()
        return {
            "christoffel": gam,
            "vielbein": np.diag([1.0, 1.0 / a]),
            "spin_connection": om,
            "spinor_connection": np.array([0 * c, adot / 4 * c]),
        }
    raise ValueError(f"no closed forms for metric kind {kind!r}")


def _flat_components(name: str, value) -> list:
    arr = np.asarray(value)
    if arr.ndim == 0:
        return [(name, "", complex(arr))]
    return [(name, "".join(map(str, idx)), complex(v)) for idx, v in np.ndenumerate(arr)]


def general_objects(metric: MetricFamily, point) -> dict:
    """The general-formula counterparts of :func:`closed_forms`."""
    from .geometry import christoffel, ricci_scalar, spin_connection, spinor_connection, vielbein

    return {
        "christoffel": christoffel(metric, point),
        "vielbein": vielbein(metric, point).e_inv,
        "spin_connection": spin_connection(metric, point).omega,
        "spinor_connection": spinor_connection(metric, point),
        "ricci_scalar": ricci_scalar(metric, point),
    }


def compare_at(metric: MetricFamily, point) -> list:
    """Rows ``(object, component, value, oracle, abs_err, rel_err)`` at one point.

    Complex components (spinor connection) are compared in modulus of the
    difference; the reported value and oracle are real parts when the
    imaginary part vanishes, otherwise the imaginary part.
    """
    oracle = closed_forms(metric, point)
    general = general_objects(metric, point)
    rows = []
    for name in OBJECTS:
        if name not in oracle:
            continue
        got = _flat_components(name, general[name])
        ref = _flat_components(name, oracle[name])
        for (obj, comp, g), (_, _, r) in zip(got, ref):
            err = abs(g - r)
            pick = (lambda z: z.imag) if (g.imag or r.imag) else (lambda z: z.real)
            rows.append((obj, comp, pick(g), pick(r), err, err / max(abs(r), 1.0)))
    return rows


def probe_points(metric: MetricFamily, n: int, rng: np.random.Generator, box=None) -> np.ndarray:
    """``n`` random points inside the metric's domain.

    The default box is ``t in [0.1, 2]``, ``x in [-2, 2]`` (``u in [0.2, 3]``
    for the Rindler polar chart); points outside the domain are redrawn.
    """
    from .exceptions import DomainError

    if box is None:
        box = ((0.1, 2.0), (0.2, 3.0)) if metric.kind == "rindler_polar" else ((0.1, 2.0), (-2.0, 2.0))
    out = []
    for _ in range(100 * max(n, 1)):
        if len(out) == n:
            break
        p = np.array([rng.uniform(*box[0]), rng.uniform(*box[1])])
        try:
            metric.check_domain(p)
        except DomainError:
            continue
        out.append(p)
    if len(out) < n:
        raise DomainError(f"could not find {n} probe points inside the {metric.kind} domain")
    return np.array(out).reshape(n, 2)
