"""scikit-learn style wrappers around the functional core.

The estimators keep their constructor arguments untouched (so ``get_params``
and ``clone`` work) and store fitted state in attributes with a trailing
underscore.  ``fit`` takes the physical input (an initial spinor, a time
series or a set of wavenumbers) and ``predict``/``transform`` evaluate the
fitted model on new abscissae.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import bogolyubov as bg
from . import dirac, waveguide, zitter
from .profiles import ConformalProfile
from .validation import check_mass, check_positive, check_spinor_array, check_time_grid

__all__ = [
    "DiracPropagator",
    "ZitterbewegungAnalyzer",
    "EnergyProjector",
    "BogolyubovSpectrum",
    "WaveguideArray",
]


def _profile(profile) -> ConformalProfile:
    if profile is None:
        return ConformalProfile.constant(1.0)
    if isinstance(profile, ConformalProfile):
        return profile
    from .profiles import profile_from_config

    return profile_from_config(profile)


class DiracPropagator(BaseEstimator):
    """Evolve an initial spinor and predict ``<x>(t)``.

    Parameters
    ----------
    mass : float
        Asymptotic mass ``m``.
    L : float
        Length of the periodic box holding the samples passed to ``fit``.
    profile : ConformalProfile, dict or None
        Conformal factor; ``None`` means flat evolution with the exact
        propagator.
    max_step : float, optional
        Stepper size for the FRW route.
    """

    def __init__(self, mass=1.0, L=200.0, profile=None, max_step=None):
        self.mass = mass
        self.L = L
        self.profile = profile
        self.max_step = max_step

    def fit(self, X, y=None):
        """Store the initial spinor ``X`` of shape ``(N, 2)``."""
        check_mass(self.mass)
        check_positive(self.L, "L")
        psi = check_spinor_array(X)
        self.state_ = dirac.SpinorGrid(float(self.L), psi)
        self.n_features_in_ = 2
        return self

    def trajectory(self, t) -> dirac.Trajectory:
        check_is_fitted(self, "state_")
        t = check_time_grid(t, "t")
        prof = _profile(self.profile)
        if prof.kind == "constant" and prof.c == 1.0:
            return dirac.flat_trajectory(self.state_, self.mass, t)
        return dirac.evolve_frw(self.state_, self.mass, prof, t, self.max_step)

    def predict(self, t) -> np.ndarray:
        """Mean position at the (increasing) times ``t``."""
        return self.trajectory(t).mean_x


class ZitterbewegungAnalyzer(BaseEstimator):
    """Frequency and amplitude of the oscillatory part of ``<x>(t)``."""

    def __init__(self, pad=8, min_cycles=4.0, noise_floor=zitter.NOISE_FLOOR):
        self.pad = pad
        self.min_cycles = min_cycles
        self.noise_floor = noise_floor

    def fit(self, t, x):
        res = zitter.zb_analysis(t, x, self.pad, self.min_cycles, self.noise_floor)
        self.frequency_ = res.frequency
        self.amplitude_ = res.amplitude
        self.has_zb_ = res.has_zb
        self.spectral_amplitude_ = res.spectral_amplitude
        return self

    @property
    def result_(self) -> zitter.ZBResult:
        check_is_fitted(self, "frequency_")
        return zitter.ZBResult(self.frequency_, self.amplitude_, self.has_zb_, self.spectral_amplitude_)


class EnergyProjector(TransformerMixin, BaseEstimator):
    """Map spinor samples to their positive/negative-energy weights.

    ``transform`` accepts one spinor ``(N, 2)`` or a stack ``(n, N, 2)`` and
    returns an array of ``(pos, neg)`` rows.
    """

    def __init__(self, m_ref=1.0, L=200.0):
        self.m_ref = m_ref
        self.L = L

    def fit(self, X=None, y=None):
        check_mass(self.m_ref, "m_ref")
        check_positive(self.L, "L")
        self.n_features_in_ = 2
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        arr = np.asarray(X, dtype=complex)
        stack = arr[None] if arr.ndim == 2 else arr
        if stack.ndim != 3:
            raise ValueError(f"expected (N, 2) or (n, N, 2) spinor samples, got {arr.shape}")
        rows = [
            dirac.energy_fractions(dirac.SpinorGrid(float(self.L), check_spinor_array(s)), self.m_ref)
            for s in stack
        ]
        return np.array(rows)


class BogolyubovSpectrum(BaseEstimator):
    """Particle number ``n_k`` created by a conformal-factor excursion.

    ``fit(k)`` computes the coefficients on the grid ``k``; ``predict(k)``
    returns ``n_k`` (recomputing for unseen wavenumbers).
    """

    def __init__(self, m=1.0, profile=None, method="auto"):
        self.m = m
        self.profile = profile
        self.method = method

    def _pairs(self, k):
        prof = _profile(self.profile if self.profile is not None else {"kind": "squarehat", "t0": 1.0})
        return bg.bogolyubov_spectrum(k, self.m, prof, self.method)

    def fit(self, k, y=None):
        k = np.atleast_1d(np.asarray(k, dtype=float))
        pairs = self._pairs(k)
        self.k_ = k
        self.alpha_ = np.array([p.alpha for p in pairs])
        self.beta_ = np.array([p.beta for p in pairs])
        return self

    def predict(self, k) -> np.ndarray:
        check_is_fitted(self, "beta_")
        k = np.atleast_1d(np.asarray(k, dtype=float))
        if k.shape == self.k_.shape and np.array_equal(k, self.k_):
            return np.abs(self.beta_) ** 2
        return np.array([bg.particle_number(p) for p in self._pairs(k)])


class WaveguideArray(BaseEstimator):
    """Binary waveguide array simulating the Dirac equation.

    ``fit`` samples a continuum spinor (a :class:`~curvedirac.dirac.SpinorGrid`
    or a callable ``x -> (N, 2)``) onto the staggered guide positions;
    ``predict(z)`` returns the lattice mean position.
    """

    def __init__(self, n_waveguides=50, kappa=0.63, mass=1.0, profile=None, project_band=None, boundary="open"):
        self.n_waveguides = n_waveguides
        self.kappa = kappa
        self.mass = mass
        self.profile = profile
        self.project_band = project_band
        self.boundary = boundary

    def fit(self, X, y=None):
        if int(self.n_waveguides) % 2 or self.n_waveguides < 2:
            raise ValueError(f"n_waveguides must be even and >= 2, got {self.n_waveguides!r}")
        d = 1.0 / check_positive(self.kappa, "kappa")
        state = waveguide.sample_on_lattice(X, int(self.n_waveguides) // 2, d)
        if self.project_band is not None:
            state = waveguide.project_band(state, self.mass, self.project_band, self.boundary)
        self.state_ = state
        return self

    def trajectory(self, z) -> waveguide.LatticeTrajectory:
        check_is_fitted(self, "state_")
        prof = None if self.profile is None else _profile(self.profile)
        det = waveguide.DetuningProfile(mass=check_mass(self.mass), profile=prof)
        return waveguide.propagate(self.state_, det, z, boundary=self.boundary)

    def predict(self, z) -> np.ndarray:
        return self.trajectory(z).mean_x
