"""Spinor wave packets under the 1+1 D Dirac equation.

The flat equation is ``i d_t psi = -i sigma_x d_x psi + sigma_z m psi``; in a
conformally flat FRW background the rescaled field obeys the same equation
with ``m -> m_eff(t) = Omega(t) m``.  Because the mass depends on time only,
every Fourier mode evolves on its own under the 2x2 Hamiltonian
``H_k = k sigma_x + m sigma_z``.

Spatial grids are periodic with ``x_n = (n - N // 2) * dx``; for even ``N``
this is ``[-L/2, L/2)``.  Mode amplitudes use the unitary convention

    phi(k_j) = dx / sqrt(2 pi) * sum_n psi(x_n) exp(-i k_j x_n)

so that ``sum |phi|^2 dk == sum |psi|^2 dx``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import DomainError, DomainTooSmallError, NumericalError, UnreliableObservableWarning
from .profiles import ConformalProfile
from .validation import check_branch, check_mass, check_positive, check_spinor_array, check_time_grid

__all__ = [
    "SpinorGrid",
    "ModeSpectrum",
    "Trajectory",
    "energy",
    "eigenspinor",
    "gaussian_position_packet",
    "branch_packet",
    "to_spectrum",
    "from_spectrum",
    "evolve_flat",
    "flat_trajectory",
    "evolve_frw",
    "mean_position",
    "energy_fractions",
    "packet_width",
    "default_step",
]

EDGE_TOL = 1e-8


@dataclass
class SpinorGrid:
    """Two-component field on a uniform periodic grid of length ``L``."""

    L: float
    psi: np.ndarray

    def __post_init__(self):
        self.L = check_positive(self.L, "L")
        self.psi = check_spinor_array(self.psi)

    @property
    def N(self) -> int:
        return self.psi.shape[0]

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.N) - self.N // 2) * self.dx

    @property
    def k(self) -> np.ndarray:
        """Wavenumbers in FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.N, self.dx)

    @property
    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.psi) ** 2, axis=1)

    def norm(self) -> float:
        return float(np.sum(self.density) * self.dx)

    def normalized(self) -> "SpinorGrid":
        n = self.norm()
        if n <= 0:
            raise ValueError("cannot normalise a zero state")
        return SpinorGrid(self.L, self.psi / np.sqrt(n))

    def copy(self) -> "SpinorGrid":
        return SpinorGrid(self.L, self.psi.copy())


@dataclass
class ModeSpectrum:
    """Per-mode amplitudes, wavenumbers ascending from ``-pi/dx``."""

    k: np.ndarray
    phi: np.ndarray  # (N, 2)

    @property
    def dk(self) -> float:
        return float(self.k[1] - self.k[0])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.phi) ** 2) * self.dk)


@dataclass
class Trajectory:
    """Observables (and optionally snapshots) sampled on a time grid."""

    t: np.ndarray
    mean_x: np.ndarray
    norm: np.ndarray
    pos_fraction: np.ndarray
    neg_fraction: np.ndarray
    L: float
    snapshots: Optional[np.ndarray] = None  # (n_frames, N, 2)
    snapshot_t: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = check_time_grid(self.t, "trajectory times")

    @property
    def x(self) -> np.ndarray:
        n = self.snapshots.shape[1]
        return (np.arange(n) - n // 2) * (self.L / n)


# ---------------------------------------------------------------------------
# dispersion and eigenspinors


def energy(k, m):
    """Relativistic dispersion sqrt(k^2 + m^2)."""
    return np.hypot(k, m)


def eigenspinor(k, m, branch):
    """Normalised eigenspinor of ``H_k = k sigma_x + m sigma_z``.

    Branch ``+`` is ``(E + m, k) / sqrt(2E(E + m))``, branch ``-`` is
    ``(-k, E + m) / sqrt(2E(E + m))``.  At ``k = m = 0`` the rest-frame
    vectors ``(1, 0)`` and ``(0, 1)`` are returned.  Accepts array ``k``;
    the spinor index is the last axis.
    """
    s = check_branch(branch)
    m = check_mass(m)
    k = np.asarray(k, dtype=float)
    # eigenvectors are scale invariant; rescaling avoids under/overflow
    scale = np.maximum(np.abs(k), m)
    safe = np.where(scale > 0, scale, 1.0)
    k, m = k / safe, m / safe
    e = energy(k, m)
    em = e + m
    with np.errstate(invalid="ignore", divide="ignore"):
        norm = np.sqrt(2 * e * em)
        if s > 0:
            u = np.stack([em / norm, k / norm], axis=-1)
        else:
            u = np.stack([-k / norm, em / norm], axis=-1)
    degenerate = em == 0
    if np.any(degenerate):
        u[degenerate] = (1.0, 0.0) if s > 0 else (0.0, 1.0)
    return u.astype(complex)


# ---------------------------------------------------------------------------
# spectral transforms


def _phase(grid_k, x0):
    return np.exp(-1j * grid_k * x0)


def to_spectrum(state: SpinorGrid) -> ModeSpectrum:
    k = state.k
    f = np.fft.fft(state.psi, axis=0) * (state.dx / np.sqrt(2 * np.pi))
    f *= _phase(k, state.x[0])[:, None]
    order = np.argsort(k, kind="stable")
    return ModeSpectrum(k[order], f[order])


def from_spectrum(spec: ModeSpectrum, L: float) -> SpinorGrid:
    n = spec.k.size
    dx = L / n
    k_fft = 2 * np.pi * np.fft.fftfreq(n, dx)
    order = np.argsort(k_fft, kind="stable")
    f = np.empty_like(spec.phi)
    f[order] = spec.phi
    x0 = -(n // 2) * dx
    f = f / _phase(k_fft, x0)[:, None]
    psi = np.fft.ifft(f, axis=0) * (np.sqrt(2 * np.pi) / dx)
    return SpinorGrid(L, psi)


# ---------------------------------------------------------------------------
# initial states


def _check_edges(psi: np.ndarray, what: str):
    amp = np.sqrt(np.sum(np.abs(psi) ** 2, axis=1))
    peak = amp.max()
    if amp[0] > EDGE_TOL * peak or amp[-1] > EDGE_TOL * peak:
        raise DomainTooSmallError(
            f"{what}: envelope at the box edge is {max(amp[0], amp[-1]) / peak:.2e} of the peak "
            f"(limit {EDGE_TOL:g}); enlarge L"
        )


def gaussian_position_packet(sigma, components=(1, 1), L=200.0, N=1024, k0=0.0, x0=0.0) -> SpinorGrid:
    """Normalised ``exp(-(x - x0)^2 / (2 sigma^2) + i k0 x) * (c1, c2)``."""
    sigma = check_positive(sigma, "sigma")
    c = np.asarray(components, dtype=complex)
    if c.shape != (2,) or not np.any(c):
        raise ValueError(f"components must be two numbers, not both zero; got {components!r}")
    grid = SpinorGrid(L, np.zeros((int(N), 2), dtype=complex))
    x = grid.x
    env = np.exp(-((x - x0) ** 2) / (2 * sigma**2) + 1j * k0 * x)
    psi = env[:, None] * c[None, :]
    _check_edges(psi, "Gaussian packet")
    return SpinorGrid(L, psi).normalized()


def branch_packet(sigma_k, k0=0.0, branch="+", m=1.0, L=200.0, N=1024) -> SpinorGrid:
    """Superpose single-branch eigenspinors with weight ``exp(-(k-k0)^2/(2 sigma_k^2))``.

    The packet is centred at ``x = 0`` and normalised; it has no overlap with
    the opposite branch of ``H_k`` at mass ``m``.
    """
    sigma_k = check_positive(sigma_k, "sigma_k")
    m = check_mass(m)
    grid = SpinorGrid(L, np.zeros((int(N), 2), dtype=complex))
    k = grid.k
    w = np.exp(-((k - k0) ** 2) / (2 * sigma_k**2))
    if w[np.argmax(np.abs(k))] > EDGE_TOL or np.abs(k).max() < abs(k0):
        raise DomainTooSmallError("momentum weight does not decay inside the k grid; refine N/L")
    f = w[:, None] * eigenspinor(k, m, branch)
    f *= np.exp(1j * k * grid.x[0])[:, None]  # centre at x = 0
    psi = np.fft.ifft(f, axis=0)
    _check_edges(psi, "branch packet")
    return SpinorGrid(L, psi).normalized()


# ---------------------------------------------------------------------------
# evolution


def _apply_mode_unitary(f, k, m, t):
    """Apply ``exp(-i (k sigma_x + m sigma_z) t)`` to FFT-ordered amplitudes."""
    e = energy(k, m)
    c = np.cos(e * t)
    # sin(E t) / E, continuous at E = 0
    s = t * np.sinc(e * t / np.pi)
    f1, f2 = f[:, 0], f[:, 1]
    out = np.empty_like(f)
    out[:, 0] = c * f1 - 1j * s * (m * f1 + k * f2)
    out[:, 1] = c * f2 - 1j * s * (k * f1 - m * f2)
    return out


def evolve_flat(state: SpinorGrid, m, t) -> SpinorGrid:
    """Exact evolution by time ``t`` under the flat Dirac Hamiltonian."""
    m = check_mass(m)
    f = np.fft.fft(state.psi, axis=0)
    f = _apply_mode_unitary(f, state.k, m, float(t))
    return SpinorGrid(state.L, np.fft.ifft(f, axis=0))


def _observables(psi, L, k, m_ref, f=None):
    n = psi.shape[0]
    dx = L / n
    x = (np.arange(n) - n // 2) * dx
    dens = np.sum(np.abs(psi) ** 2, axis=1)
    norm = dens.sum() * dx
    mean_x = _mean_position(dens, x, dens.sum())
    if f is None:
        f = np.fft.fft(psi, axis=0)
    pos, neg = _fractions(f, k, m_ref, dx / n)
    return mean_x, norm, pos, neg


def _mean_position(dens, x, total):
    if total <= 0:
        raise ValueError("mean position of a zero state")
    if dens[0] / total > 0 and dens[-1] / total > 0:
        dx = x[1] - x[0]
        if dens[0] / (total * dx) > 1e-6 and dens[-1] / (total * dx) > 1e-6:
            warnings.warn(
                "packet density exceeds 1e-6 at both box edges; <x> is unreliable",
                UnreliableObservableWarning,
                stacklevel=3,
            )
    return float(np.sum(x * dens) / total)


def _fractions(f, k, m_ref, weight):
    up = eigenspinor(k, m_ref, "+")
    un = eigenspinor(k, m_ref, "-")
    ap = np.sum(np.conj(up) * f, axis=1)
    an = np.sum(np.conj(un) * f, axis=1)
    return float(np.sum(np.abs(ap) ** 2) * weight), float(np.sum(np.abs(an) ** 2) * weight)


def flat_trajectory(state: SpinorGrid, m, t_grid, snapshot_every: int = 0) -> Trajectory:
    """Exact flat evolution sampled at ``t_grid`` (times measured from ``state``)."""
    m = check_mass(m)
    t_grid = check_time_grid(t_grid)
    k = state.k
    f0 = np.fft.fft(state.psi, axis=0)
    rows = []
    snaps, snap_t = [], []
    for i, t in enumerate(t_grid):
        f = _apply_mode_unitary(f0, k, m, t)
        psi = np.fft.ifft(f, axis=0)
        rows.append(_observables(psi, state.L, k, m, f))
        if snapshot_every and i % snapshot_every == 0:
            snaps.append(psi)
            snap_t.append(t)
    rows = np.array(rows)
    return Trajectory(
        t_grid,
        rows[:, 0],
        rows[:, 1],
        rows[:, 2],
        rows[:, 3],
        state.L,
        np.array(snaps) if snaps else None,
        np.array(snap_t) if snaps else None,
        {"mass": m, "m_ref": m},
    )


def default_step(state: SpinorGrid, m: float, profile: Optional[ConformalProfile] = None) -> float:
    """``0.01 / max_k E_k`` using the largest effective mass on the grid."""
    kmax = np.abs(state.k).max()
    return 0.01 / float(energy(kmax, m))


def evolve_frw(
    state: SpinorGrid,
    m,
    profile: ConformalProfile,
    t_grid,
    max_step: Optional[float] = None,
    snapshot_every: int = 0,
    drift_tol: float = 1e-10,
) -> Trajectory:
    """Evolve under ``m_eff(t) = Omega(t) m`` with the midpoint exponential stepper.

    Each step applies ``exp(-i H_k(t + dt/2) dt)`` exactly per mode, so the
    scheme is unitary by construction and second-order accurate.  Steps on
    which the profile is exactly constant are merged into one exact step.
    ``state`` is taken to be the field at ``t_grid[0]``.
    """
    m = check_mass(m)
    t_grid = check_time_grid(t_grid)
    h_max = default_step(state, m) if max_step is None else check_positive(max_step, "max_step")
    k = state.k
    f = np.fft.fft(state.psi, axis=0)
    ref = np.sum(np.abs(f) ** 2)

    def record(i, t, f):
        psi = np.fft.ifft(f, axis=0)
        rows.append(_observables(psi, state.L, k, m, f))
        if snapshot_every and i % snapshot_every == 0:
            snaps.append(psi)
            snap_t.append(t)

    rows, snaps, snap_t = [], [], []
    record(0, t_grid[0], f)
    total_steps = 0
    for i in range(1, t_grid.size):
        ta, tb = t_grid[i - 1], t_grid[i]
        nsteps = max(1, int(np.ceil((tb - ta) / h_max - 1e-9)))
        dt = (tb - ta) / nsteps
        mids = ta + (np.arange(nsteps) + 0.5) * dt
        omega = profile.omega(mids)
        if np.any(~np.isfinite(omega)) or np.any(omega <= 0):
            bad = mids[np.argmax(~(omega > 0))]
            raise DomainError(f"non-positive effective mass factor Omega={profile.omega(bad)}", (bad,))
        if np.all(omega == omega[0]):
            f = _apply_mode_unitary(f, k, m * omega[0], tb - ta)
        else:
            for om in omega:
                f = _apply_mode_unitary(f, k, m * om, dt)
        total_steps += nsteps
        now = np.sum(np.abs(f) ** 2)
        if abs(now - ref) / ref > drift_tol * total_steps:
            raise NumericalError(
                f"unitarity drift {abs(now - ref) / ref:.2e} after {total_steps} steps exceeds "
                f"{drift_tol:g} per step; reduce max_step"
            )
        record(i, tb, f)
    rows = np.array(rows)
    return Trajectory(
        t_grid,
        rows[:, 0],
        rows[:, 1],
        rows[:, 2],
        rows[:, 3],
        state.L,
        np.array(snaps) if snaps else None,
        np.array(snap_t) if snaps else None,
        {"mass": m, "m_ref": m, "max_step": h_max, "steps": total_steps},
    )


# ---------------------------------------------------------------------------
# observables


def mean_position(state: SpinorGrid) -> float:
    """Centre of mass on the centred periodic domain."""
    dens = state.density
    return _mean_position(dens, state.x, dens.sum())


def packet_width(state: SpinorGrid) -> float:
    """RMS width of the probability density."""
    dens = state.density
    x = state.x
    mu = np.sum(x * dens) / dens.sum()
    return float(np.sqrt(np.sum((x - mu) ** 2 * dens) / dens.sum()))


def energy_fractions(state: SpinorGrid, m_ref) -> tuple:
    """Weights of the positive- and negative-energy branches at mass ``m_ref``.

    Returns ``(pos, neg)`` in the same measure as :meth:`SpinorGrid.norm`.
    """
    m_ref = check_mass(m_ref, "m_ref")
    f = np.fft.fft(state.psi, axis=0)
    return _fractions(f, state.k, m_ref, state.dx / state.N)
