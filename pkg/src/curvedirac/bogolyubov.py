"""Scalar particle creation in a 1+1D FRW background.

Each Fourier mode obeys ``v'' + omega_k(t)^2 v = 0`` with
``omega_k^2(t) = k^2 + Omega^2(t) m^2``.  The in-mode is
``v = exp(i omega t) / sqrt(omega)`` before the excursion, and after it

    v(t) = [alpha* exp(i omega (t - t_ref)) + beta* exp(-i omega (t - t_ref))] / sqrt(omega).

Phase conventions: with these mode functions the out-side coefficients come
out as ``alpha = cos(W t0) - (i/2)(omega/W + W/omega) sin(W t0)`` and
``beta = (i/2)(W/omega - omega/W) sin(W t0)`` for the square hat, where
``W = sqrt(k^2 - m^2)`` (principal branch, imaginary when ``k < m``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .exceptions import DomainError, NumericalError, ResonanceError
from .profiles import ConformalProfile
from .validation import check_mass

__all__ = [
    "FrequencyProfile",
    "ModeFunction",
    "BogolyubovPair",
    "wronskian",
    "analytic_squarehat",
    "piecewise_bogolyubov",
    "numeric_bogolyubov",
    "particle_number",
    "bogolyubov_spectrum",
]

RESONANCE_TOL = 1e-9
NORM_TOL = 1e-8


@dataclass(frozen=True)
class FrequencyProfile:
    """Time-dependent mode frequency ``omega_k^2(t) = k^2 + Omega^2(t) m^2``."""

    k: float
    m: float
    conformal: ConformalProfile

    def __post_init__(self):
        check_mass(self.m, "m")
        if not np.isfinite(self.k):
            raise ValueError(f"k must be finite, got {self.k!r}")

    def omega_sq(self, t) -> np.ndarray:
        return self.k**2 + self.conformal.omega_sq(t) * self.m**2

    @property
    def omega_asymptotic(self) -> float:
        """Frequency where ``Omega^2 = 1``."""
        w = np.hypot(self.k, self.m)
        if w == 0:
            raise DomainError("k = m = 0 has zero frequency; mode functions are undefined")
        return float(w)

    @property
    def breakpoints(self):
        return self.conformal.breakpoints


@dataclass
class ModeFunction:
    k: float
    t: np.ndarray
    v: np.ndarray
    vdot: np.ndarray

    def wronskian(self) -> np.ndarray:
        return np.array([wronskian(a, b) for a, b in zip(self.v, self.vdot)])


@dataclass(frozen=True)
class BogolyubovPair:
    alpha: complex
    beta: complex
    k: float

    @property
    def norm_defect(self) -> float:
        """``|alpha|^2 - |beta|^2 - 1``, zero for a valid pair."""
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2 - 1.0


def wronskian(v, vdot) -> float:
    """``-i (vdot v* - v vdot*) / 2``; equals 1 for a normalised mode."""
    w = -0.5j * (vdot * np.conj(v) - v * np.conj(vdot))
    if abs(w.imag) >= 1e-12:
        raise NumericalError(f"Wronskian has imaginary residue {w.imag:.3e}")
    return float(w.real)


def particle_number(pair: BogolyubovPair) -> float:
    """``n_k = |beta|^2``."""
    return float(abs(pair.beta) ** 2)


def _check_pair(pair: BogolyubovPair, tol: float = NORM_TOL) -> BogolyubovPair:
    if not abs(pair.norm_defect) <= tol:
        raise NumericalError(f"|alpha|^2 - |beta|^2 - 1 = {pair.norm_defect:.3e} at k={pair.k}")
    return pair


def analytic_squarehat(k: float, m: float, t0: float) -> BogolyubovPair:
    """Closed-form coefficients for ``Omega^2 = -1`` on ``0 < t < t0``."""
    m = check_mass(m, "m")
    if t0 < 0 or not np.isfinite(t0):
        raise ValueError(f"t0 must be a finite real >= 0, got {t0!r}")
    k = abs(float(k))
    if m > 0 and abs(k - m) < RESONANCE_TOL:
        raise ResonanceError(f"k = m = {m}: inner frequency vanishes; use numeric_bogolyubov")
    w = np.hypot(k, m)
    if w == 0:
        raise DomainError("k = m = 0 has zero frequency")
    W = np.sqrt(complex((k - m) * (k + m)))
    if W == 0:
        c, s_over, s_times = 1.0, t0, 0.0
    else:
        c = np.cos(W * t0).real
        s_over = (np.sin(W * t0) / W).real  # sin(W t0)/W
        s_times = (np.sin(W * t0) * W).real  # W sin(W t0)
    alpha = c - 0.5j * (w * s_over + s_times / w)
    beta = 0.5j * (s_times / w - w * s_over)
    return _check_pair(BogolyubovPair(complex(alpha), complex(beta), k), 1e-10)


def _in_mode(w: float, t: float):
    v = np.exp(1j * w * t) / np.sqrt(w)
    return v, 1j * w * v


def _project_out(v, vdot, w, t, t_ref) -> tuple:
    """Return ``(alpha, beta)`` from the field at ``t``."""
    ph = np.exp(-1j * w * (t - t_ref))
    a_conj = 0.5 * np.sqrt(w) * (v + vdot / (1j * w)) * ph
    b_conj = 0.5 * np.sqrt(w) * (v - vdot / (1j * w)) / ph
    return complex(np.conj(a_conj)), complex(np.conj(b_conj))


def _transfer(v, vdot, w_sq: float, tau: float):
    """Exact evolution through a segment of constant ``omega^2``."""
    W = np.sqrt(complex(w_sq))
    if W == 0:
        return v + vdot * tau, vdot
    c, s = np.cos(W * tau), np.sin(W * tau)
    return v * c + vdot * s / W, -v * W * s + vdot * c


def piecewise_bogolyubov(
    k: float,
    m: float,
    segments: Sequence[tuple],
    t_ref: Optional[float] = None,
) -> BogolyubovPair:
    """Exact matching through piecewise-constant ``Omega^2``.

    ``segments`` is a sequence of ``(t_start, t_end, Omega_sq)`` covering a
    contiguous interval; ``Omega^2 = 1`` is assumed before and after it.
    """
    m = check_mass(m, "m")
    if not segments:
        raise ValueError("need at least one segment")
    w = np.hypot(k, m)
    if w == 0:
        raise DomainError("k = m = 0 has zero frequency")
    t_start = segments[0][0]
    v, vdot = _in_mode(w, t_start)
    t = t_start
    for a, b, osq in segments:
        if not np.isclose(a, t, rtol=0, atol=1e-14) or b < a:
            raise ValueError("segments must be contiguous and ordered")
        v, vdot = _transfer(v, vdot, k**2 + osq * m**2, b - a)
        t = b
    t_ref = t if t_ref is None else t_ref
    alpha, beta = _project_out(v, vdot, w, t, t_ref)
    return _check_pair(BogolyubovPair(alpha, beta, abs(float(k))))


def _rhs(freq: FrequencyProfile):
    def f(t, y):
        wsq = freq.omega_sq(t)
        return np.array([y[2], y[3], -wsq * y[0], -wsq * y[1]])

    return f


def numeric_bogolyubov(
    profile: FrequencyProfile,
    t_in: float,
    t_out: float,
    t_ref: Optional[float] = None,
    rtol: float = 1e-12,
    atol: float = 1e-13,
    flat_tol: float = 1e-8,
    n_samples: int = 0,
    return_mode: bool = False,
):
    """Integrate the mode equation from the in-mode at ``t_in`` to ``t_out``.

    Smooth stretches use DOP853; the integration restarts at every profile
    discontinuity so step control never straddles one.  ``t_ref`` fixes the
    phase origin of the out-modes; it defaults to the last profile
    breakpoint (``t0`` for the square hat) or 0, so that a flat profile gives
    ``alpha = 1`` exactly.  With ``return_mode`` the sampled
    :class:`ModeFunction` (``n_samples`` points per segment) is returned too.
    """
    if not t_out > t_in:
        raise ValueError("need t_out > t_in")
    for tt in (t_in, t_out):
        dev = float(abs(profile.conformal.omega_sq(tt) - 1.0))
        if dev > flat_tol:
            raise DomainError(
                f"Omega^2({tt}) deviates from 1 by {dev:.2e}; widen [t_in, t_out]", point=(tt,)
            )
    w = profile.omega_asymptotic
    v, vdot = _in_mode(w, t_in)
    cuts = [t_in] + [b for b in profile.breakpoints if t_in < b < t_out] + [t_out]
    ts, vs, vds = [], [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        # evaluate Omega^2 strictly inside the segment to avoid the jump
        mid = 0.5 * (a + b)
        if profile.breakpoints:
            wsq_mid = float(profile.omega_sq(mid))

            def rhs(t, y, wsq=wsq_mid):
                return np.array([y[2], y[3], -wsq * y[0], -wsq * y[1]])

        else:
            rhs = _rhs(profile)
        y0 = np.array([v.real, v.imag, vdot.real, vdot.imag])
        t_eval = np.linspace(a, b, n_samples) if n_samples > 1 else None
        sol = solve_ivp(rhs, (a, b), y0, method="DOP853", rtol=rtol, atol=atol, t_eval=t_eval)
        if sol.status != 0:
            raise NumericalError(f"mode integration failed on [{a}, {b}]: {sol.message}")
        yb = sol.y[:, -1]
        v, vdot = complex(yb[0], yb[1]), complex(yb[2], yb[3])
        if t_eval is not None:
            ts.append(sol.t)
            vs.append(sol.y[0] + 1j * sol.y[1])
            vds.append(sol.y[2] + 1j * sol.y[3])
    wr = wronskian(v, vdot)
    if abs(wr - 1.0) > NORM_TOL:
        raise NumericalError(f"Wronskian drifted to {wr!r}; tighten rtol")
    if t_ref is None:
        t_ref = profile.breakpoints[-1] if profile.breakpoints else 0.0
    alpha, beta = _project_out(v, vdot, w, t_out, t_ref)
    pair = _check_pair(BogolyubovPair(alpha, beta, abs(float(profile.k))))
    if return_mode:
        mode = ModeFunction(
            profile.k,
            np.concatenate(ts) if ts else np.array([t_out]),
            np.concatenate(vs) if vs else np.array([v]),
            np.concatenate(vds) if vds else np.array([vdot]),
        )
        return pair, mode
    return pair


def bogolyubov_spectrum(k, m: float, conformal: ConformalProfile, method: str = "auto", **kw) -> list:
    """Coefficients for every ``k`` in an array.

    ``method`` is ``"analytic"`` (square hat only), ``"matching"`` (square
    hat only), ``"ode"`` or ``"auto"`` (matching for the square hat, ODE
    otherwise).
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if method == "auto":
        method = "matching" if conformal.kind == "squarehat" else "ode"
    if method in ("analytic", "matching") and conformal.kind != "squarehat":
        raise ValueError(f"method {method!r} needs a square-hat profile")
    if method == "ode":
        if conformal.kind == "squarehat":
            window = (-1.0, conformal.t0 + 1.0)
        else:
            window = conformal.flat_window(kw.get("flat_tol", 1e-8) / 10)
        t_in, t_out = kw.pop("t_in", window[0]), kw.pop("t_out", window[1])
    out = []
    for kk in k:
        if method == "analytic":
            out.append(analytic_squarehat(kk, m, conformal.t0))
        elif method == "matching":
            out.append(
                piecewise_bogolyubov(kk, m, [(0.0, conformal.t0, conformal.inner_sq)], t_ref=conformal.t0)
            )
        elif method == "ode":
            out.append(numeric_bogolyubov(FrequencyProfile(float(kk), m, conformal), t_in, t_out, **kw))
        else:
            raise ValueError(f"unknown method {method!r}")
    return out
