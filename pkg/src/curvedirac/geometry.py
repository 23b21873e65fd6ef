"""Differential geometry of diagonal 1+1 dimensional metrics.

Coordinates are ordered ``(t, x)`` (index 0 and 1); for the Rindler families
the same slots hold ``(v, u)`` and ``(eta, xi)``.  All arrays follow the index
order of the component symbols, upper indices first:

* ``christoffel(...)[lam, mu, nu]``      = Gamma^lam_{mu nu}
* ``Vielbein.e_inv[mu, a]``              = e^mu_a
* ``Vielbein.e[a, mu]``                  = e^a_mu
* ``SpinConnection.omega[a, b, nu]``     = omega^a_{b nu}
* ``spinor_connection(...)[nu]``         = 2x2 matrix Omega_nu

The local Minkowski metric is eta = diag(1, -1) and the gamma matrices are
fixed to gamma^0 = sigma_z, gamma^1 = i sigma_y.

Every object is evaluated from the general metric-connection formulas using
the metric and its derivatives; the closed forms in :mod:`curvedirac.closed_forms`
are kept separate and only serve as cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import DomainError

__all__ = [
    "DomainError",
    "ScalarFunction",
    "MetricFamily",
    "Vielbein",
    "SpinConnection",
    "ETA",
    "GAMMA",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "commutator_g0g1",
    "fd_step",
    "christoffel",
    "christoffel_derivative",
    "vielbein",
    "vielbein_derivative",
    "spin_connection",
    "spinor_connection",
    "ricci_tensor",
    "ricci_scalar",
    "metric_covariant_derivative",
    "vielbein_covariant_derivative",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
ETA = np.diag([1.0, -1.0])
GAMMA = (SIGMA_Z, 1j * SIGMA_Y)


def commutator_g0g1() -> np.ndarray:
    """Return [gamma^0, gamma^1] in the fixed representation (= 2 sigma_x)."""
    g0, g1 = GAMMA
    return g0 @ g1 - g1 @ g0


def fd_step(coord: float, base: float = 1e-5) -> float:
    """Central-difference step scaled to the coordinate magnitude."""
    return base * max(1.0, abs(coord))


Point = Sequence[float]


@dataclass(frozen=True)
class ScalarFunction:
    """Real function of the two coordinates with optional analytic derivatives.

    ``grad(t, x)`` returns ``(d/dt, d/dx)`` and ``hess(t, x)`` the 2x2 Hessian.
    Missing derivatives are replaced by central finite differences; first
    derivatives use the step ``1e-5 * max(1, |c|)``, second derivatives taken
    from function values use ``1e-4 * max(1, |c|)`` to keep roundoff below
    truncation error.
    """

    func: Callable[[float, float], float]
    grad: Optional[Callable[[float, float], Sequence[float]]] = None
    hess: Optional[Callable[[float, float], Sequence[Sequence[float]]]] = None
    name: str = ""

    @property
    def analytic(self) -> bool:
        return self.grad is not None and self.hess is not None

    def value(self, point: Point) -> float:
        return float(self.func(point[0], point[1]))

    def gradient(self, point: Point) -> np.ndarray:
        if self.grad is not None:
            return np.asarray(self.grad(point[0], point[1]), dtype=float)
        out = np.empty(2)
        for i in range(2):
            h = fd_step(point[i])
            hi = np.array(point, dtype=float)
            lo = np.array(point, dtype=float)
            hi[i] += h
            lo[i] -= h
            out[i] = (self.value(hi) - self.value(lo)) / (2 * h)
        return out

    def hessian(self, point: Point) -> np.ndarray:
        if self.hess is not None:
            return np.asarray(self.hess(point[0], point[1]), dtype=float)
        out = np.empty((2, 2))
        if self.grad is not None:
            for i in range(2):
                h = fd_step(point[i])
                hi = np.array(point, dtype=float)
                lo = np.array(point, dtype=float)
                hi[i] += h
                lo[i] -= h
                out[i] = (self.gradient(hi) - self.gradient(lo)) / (2 * h)
            return 0.5 * (out + out.T)
        p = np.asarray(point, dtype=float)
        h = np.array([fd_step(p[0], 1e-4), fd_step(p[1], 1e-4)])
        f0 = self.value(p)
        for i in range(2):
            e = np.zeros(2)
            e[i] = h[i]
            out[i, i] = (self.value(p + e) - 2 * f0 + self.value(p - e)) / h[i] ** 2
        ea = np.array([h[0], 0.0])
        eb = np.array([0.0, h[1]])
        mixed = (
            self.value(p + ea + eb)
            - self.value(p + ea - eb)
            - self.value(p - ea + eb)
            + self.value(p - ea - eb)
        ) / (4 * h[0] * h[1])
        out[0, 1] = out[1, 0] = mixed
        return out

    def without_derivatives(self) -> "ScalarFunction":
        """Same function, forcing the finite-difference fallback."""
        return ScalarFunction(self.func, name=self.name)

    # --- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c: float) -> "ScalarFunction":
        return cls(
            lambda t, x: c,
            lambda t, x: (0.0, 0.0),
            lambda t, x: ((0.0, 0.0), (0.0, 0.0)),
            name=f"const({c})",
        )

    @classmethod
    def of_time(cls, f, df=None, d2f=None, name: str = "") -> "ScalarFunction":
        """Wrap a function of ``t`` only."""
        grad = hess = None
        if df is not None:
            grad = lambda t, x: (df(t), 0.0)  # noqa: E731
        if df is not None and d2f is not None:
            hess = lambda t, x: ((d2f(t), 0.0), (0.0, 0.0))  # noqa: E731
        return cls(lambda t, x: f(t), grad, hess, name=name)

    @classmethod
    def of_space(cls, f, df=None, d2f=None, name: str = "") -> "ScalarFunction":
        """Wrap a function of ``x`` only."""
        grad = hess = None
        if df is not None:
            grad = lambda t, x: (0.0, df(x))  # noqa: E731
        if df is not None and d2f is not None:
            hess = lambda t, x: ((0.0, 0.0), (0.0, d2f(x)))  # noqa: E731
        return cls(lambda t, x: f(x), grad, hess, name=name)

    @classmethod
    def from_expression(cls, expr: str) -> "ScalarFunction":
        """Parse an expression in ``t`` and ``x`` with analytic derivatives."""
        import sympy as sp

        t, x = sp.symbols("t x", real=True)
        e = sp.sympify(expr, locals={"t": t, "x": x})
        extra = e.free_symbols - {t, x}
        if extra:
            raise ValueError(f"unknown symbols in {expr!r}: {sorted(map(str, extra))}")
        grad_e = [sp.diff(e, v) for v in (t, x)]
        hess_e = [[sp.diff(g, v) for v in (t, x)] for g in grad_e]
        f = sp.lambdify((t, x), e, "math")
        g = sp.lambdify((t, x), grad_e, "math")
        h = sp.lambdify((t, x), hess_e, "math")
        return cls(f, g, h, name=expr)

    def compose(self, outer, d_outer, d2_outer, name: str = "") -> "ScalarFunction":
        """Return ``outer(self)`` with chain-rule derivatives when available."""
        inner = self

        def func(t, x):
            return outer(inner.func(t, x))

        if not inner.analytic:
            return ScalarFunction(func, name=name)

        def grad(t, x):
            u = inner.func(t, x)
            return d_outer(u) * np.asarray(inner.grad(t, x), dtype=float)

        def hess(t, x):
            u = inner.func(t, x)
            g = np.asarray(inner.grad(t, x), dtype=float)
            return d2_outer(u) * np.outer(g, g) + d_outer(u) * np.asarray(
                inner.hess(t, x), dtype=float
            )

        return ScalarFunction(func, grad, hess, name=name)

    def square(self) -> "ScalarFunction":
        return self.compose(lambda u: u * u, lambda u: 2 * u, lambda u: 2.0, f"({self.name})^2")

    def exp2(self) -> "ScalarFunction":
        """exp(2 f)."""
        return self.compose(
            lambda u: np.exp(2 * u),
            lambda u: 2 * np.exp(2 * u),
            lambda u: 4 * np.exp(2 * u),
            f"exp(2*{self.name})",
        )


@dataclass(frozen=True)
class MetricFamily:
    """Diagonal metric ``ds^2 = A dt^2 - B dx^2``.

    Use the classmethod constructors; they record the generating functions
    (``Omega``, ``Phi``/``Psi`` or ``a``) in ``sources`` so that closed-form
    oracles can be evaluated for the same metric.
    """

    kind: str
    g00: ScalarFunction
    g11: ScalarFunction  # B, the metric component is -B
    sources: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @classmethod
    def conformal(cls, omega: ScalarFunction) -> "MetricFamily":
        sq = omega.square()
        return cls("conformal", sq, sq, {"omega": omega})

    @classmethod
    def static(cls, phi: ScalarFunction, psi: ScalarFunction) -> "MetricFamily":
        return cls("static", phi.exp2(), psi.exp2(), {"phi": phi, "psi": psi})

    @classmethod
    def frw(cls, a: ScalarFunction) -> "MetricFamily":
        return cls("frw", ScalarFunction.constant(1.0), a.square(), {"a": a})

    @classmethod
    def rindler_polar(cls) -> "MetricFamily":
        """``ds^2 = u^2 dv^2 - du^2`` with point = (v, u), u > 0."""
        u2 = ScalarFunction(
            lambda v, u: u * u,
            lambda v, u: (0.0, 2 * u),
            lambda v, u: ((0.0, 0.0), (0.0, 2.0)),
            name="u^2",
        )
        return cls("rindler_polar", u2, ScalarFunction.constant(1.0))

    @classmethod
    def rindler_conformal(cls, accel: float) -> "MetricFamily":
        """``ds^2 = exp(2 a xi) (d eta^2 - d xi^2)`` with point = (eta, xi)."""
        if not accel > 0:
            raise ValueError(f"acceleration must be positive, got {accel}")
        omega = ScalarFunction(
            lambda e, xi: np.exp(accel * xi),
            lambda e, xi: (0.0, accel * np.exp(accel * xi)),
            lambda e, xi: ((0.0, 0.0), (0.0, accel**2 * np.exp(accel * xi))),
            name=f"exp({accel}*xi)",
        )
        sq = omega.square()
        return cls("rindler_conformal", sq, sq, {"omega": omega}, {"accel": accel})

    def check_domain(self, point: Point) -> None:
        if not all(np.isfinite(point)):
            raise DomainError("non-finite coordinate", point)
        if self.kind in ("conformal", "rindler_conformal"):
            if not self.sources["omega"].value(point) > 0:
                raise DomainError("conformal factor Omega <= 0", point)
        elif self.kind == "frw":
            if not self.sources["a"].value(point) > 0:
                raise DomainError("scale factor a <= 0", point)
        elif self.kind == "rindler_polar":
            if not point[1] > 0:
                raise DomainError("Rindler coordinate u <= 0", point)
        a, b = self.g00.value(point), self.g11.value(point)
        if not (a > 0 and b > 0 and np.isfinite(a) and np.isfinite(b)):
            raise DomainError("metric lost Lorentzian signature", point)

    def metric(self, point: Point) -> np.ndarray:
        self.check_domain(point)
        return np.diag([self.g00.value(point), -self.g11.value(point)])

    def inverse_metric(self, point: Point) -> np.ndarray:
        self.check_domain(point)
        return np.diag([1.0 / self.g00.value(point), -1.0 / self.g11.value(point)])

    def metric_derivative(self, point: Point) -> np.ndarray:
        """``dg[rho, mu, nu] = d_rho g_{mu nu}``."""
        self.check_domain(point)
        da = self.g00.gradient(point)
        db = self.g11.gradient(point)
        dg = np.zeros((2, 2, 2))
        dg[:, 0, 0] = da
        dg[:, 1, 1] = -db
        return dg

    def metric_second_derivative(self, point: Point) -> np.ndarray:
        """``d2g[alpha, beta, mu, nu] = d_alpha d_beta g_{mu nu}``."""
        self.check_domain(point)
        d2 = np.zeros((2, 2, 2, 2))
        d2[:, :, 0, 0] = self.g00.hessian(point)
        d2[:, :, 1, 1] = -self.g11.hessian(point)
        return d2


@dataclass(frozen=True)
class Vielbein:
    e_inv: np.ndarray  # e^mu_a
    e: np.ndarray  # e^a_mu


@dataclass(frozen=True)
class SpinConnection:
    omega: np.ndarray  # omega^a_{b nu}

    @property
    def lowered(self) -> np.ndarray:
        """``omega_{a b nu} = eta_{ac} omega^c_{b nu}``."""
        return np.einsum("ac,cbn->abn", ETA, self.omega)


def _connection_from(ginv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    # S[rho, mu, nu] = d_mu g_{nu rho} + d_nu g_{rho mu} - d_rho g_{mu nu}
    s = (
        np.einsum("mnr->rmn", dg)
        + np.einsum("nrm->rmn", dg)
        - dg
    )
    gamma = 0.5 * np.einsum("sr,rmn->smn", ginv, s)
    # exact torsion-free symmetry regardless of summation order
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def christoffel(metric: MetricFamily, point: Point) -> np.ndarray:
    """Christoffel symbols ``Gamma[lam, mu, nu]`` from the metric connection."""
    return _connection_from(metric.inverse_metric(point), metric.metric_derivative(point))


def christoffel_derivative(metric: MetricFamily, point: Point) -> np.ndarray:
    """``dGamma[alpha, sig, mu, nu] = d_alpha Gamma^sig_{mu nu}``."""
    ginv = metric.inverse_metric(point)
    dg = metric.metric_derivative(point)
    d2g = metric.metric_second_derivative(point)
    # d_alpha g^{sig rho} = -g^{sig a} d_alpha g_{ab} g^{b rho}
    dginv = -np.einsum("sa,xab,br->xsr", ginv, dg, ginv)
    s = np.einsum("mnr->rmn", dg) + np.einsum("nrm->rmn", dg) - dg
    ds = (
        np.einsum("xmnr->xrmn", d2g)
        + np.einsum("xnrm->xrmn", d2g)
        - d2g
    )
    return 0.5 * (
        np.einsum("xsr,rmn->xsmn", dginv, s) + np.einsum("sr,xrmn->xsmn", ginv, ds)
    )


def vielbein(metric: MetricFamily, point: Point) -> Vielbein:
    g = metric.metric(point)
    scale = np.sqrt(np.abs(np.diag(g)))
    return Vielbein(e_inv=np.diag(1.0 / scale), e=np.diag(scale))


def vielbein_derivative(metric: MetricFamily, point: Point) -> np.ndarray:
    """``de[nu, mu, a] = d_nu e^mu_a`` for the diagonal vielbein."""
    metric.check_domain(point)
    a, b = metric.g00.value(point), metric.g11.value(point)
    da, db = metric.g00.gradient(point), metric.g11.gradient(point)
    de = np.zeros((2, 2, 2))
    de[:, 0, 0] = -0.5 * a**-1.5 * da
    de[:, 1, 1] = -0.5 * b**-1.5 * db
    return de


def spin_connection(metric: MetricFamily, point: Point) -> SpinConnection:
    """``omega^a_{b nu} = e^a_mu d_nu e^mu_b + e^a_mu e^sig_b Gamma^mu_{sig nu}``."""
    vb = vielbein(metric, point)
    de = vielbein_derivative(metric, point)
    gamma = christoffel(metric, point)
    omega = np.einsum("am,nmb->abn", vb.e, de) + np.einsum(
        "am,sb,msn->abn", vb.e, vb.e_inv, gamma
    )
    return SpinConnection(omega)


def spinor_connection(metric: MetricFamily, point: Point) -> np.ndarray:
    """``Omega_nu = -(i/4) omega_{ab nu} sigma^{ab}``, shape (2, 2, 2)."""
    low = spin_connection(metric, point).lowered
    sig = np.empty((2, 2, 2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            sig[a, b] = 0.5j * (GAMMA[a] @ GAMMA[b] - GAMMA[b] @ GAMMA[a])
    return -0.25j * np.einsum("abn,abij->nij", low, sig)


def ricci_tensor(metric: MetricFamily, point: Point) -> np.ndarray:
    """``R_{mu nu}`` from the Christoffel symbols and their derivatives."""
    gam = christoffel(metric, point)
    dgam = christoffel_derivative(metric, point)
    return (
        np.einsum("llmn->mn", dgam)
        - np.einsum("nlml->mn", dgam)
        + np.einsum("lmn,sls->mn", gam, gam)
        - np.einsum("lms,snl->mn", gam, gam)
    )


def ricci_scalar(metric: MetricFamily, point: Point) -> float:
    return float(np.einsum("mn,mn->", metric.inverse_metric(point), ricci_tensor(metric, point)))


def metric_covariant_derivative(metric: MetricFamily, point: Point) -> np.ndarray:
    """``nabla_rho g_{mu nu}`` with d_rho g from finite differences of the metric."""
    p = np.asarray(point, dtype=float)
    dg = np.empty((2, 2, 2))
    for r in range(2):
        h = fd_step(p[r])
        e = np.zeros(2)
        e[r] = h
        dg[r] = (metric.metric(p + e) - metric.metric(p - e)) / (2 * h)
    g = metric.metric(p)
    gam = christoffel(metric, p)
    return dg - np.einsum("lrm,ln->rmn", gam, g) - np.einsum("lrn,ml->rmn", gam, g)


def vielbein_covariant_derivative(metric: MetricFamily, point: Point) -> np.ndarray:
    """``nabla_nu e^mu_a`` (shape [nu, mu, a]) with finite-difference d_nu e."""
    p = np.asarray(point, dtype=float)
    de = np.empty((2, 2, 2))
    for n in range(2):
        h = fd_step(p[n])
        e = np.zeros(2)
        e[n] = h
        de[n] = (vielbein(metric, p + e).e_inv - vielbein(metric, p - e).e_inv) / (2 * h)
    vb = vielbein(metric, p)
    gam = christoffel(metric, p)
    om = spin_connection(metric, p).omega
    return (
        de
        + np.einsum("msn,sa->nma", gam, vb.e_inv)
        - np.einsum("ban,mb->nma", om, vb.e_inv)
    )
