import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvedirac.bogolyubov import (
    BogolyubovPair,
    FrequencyProfile,
    analytic_squarehat,
    bogolyubov_spectrum,
    numeric_bogolyubov,
    particle_number,
    piecewise_bogolyubov,
    wronskian,
)
from curvedirac.exceptions import DomainError, NumericalError, ResonanceError
from curvedirac.profiles import ConformalProfile


def _n_closed(k, m, t0):
    return m**4 / abs(k**4 - m**4) * abs(np.sin(np.sqrt(complex(k**2 - m**2)) * t0)) ** 2


def test_massless_field_creates_nothing():
    for k in (0.1, 1.0, 3.0):
        p = analytic_squarehat(k, 0.0, 2.0)
        assert p.beta == 0 and abs(p.alpha) == pytest.approx(1.0)


def test_zero_duration():
    p = analytic_squarehat(2.0, 1.0, 0.0)
    assert p.alpha == 1 and p.beta == 0


def test_reference_mode_value():
    p = analytic_squarehat(2.0, 1.0, 1.0)
    # (1/15) sin^2(sqrt 3)
    assert particle_number(p) == pytest.approx(np.sin(np.sqrt(3.0)) ** 2 / 15, rel=1e-12)
    assert particle_number(p) == pytest.approx(0.0649481, abs=1e-7)


def test_closed_form_n_k_below_threshold():
    # k < m: sin -> sinh through the complex root
    for k in (0.2, 0.5, 0.9):
        assert particle_number(analytic_squarehat(k, 1.0, 1.3)) == pytest.approx(_n_closed(k, 1.0, 1.3), rel=1e-10)


def test_resonance():
    with pytest.raises(ResonanceError):
        analytic_squarehat(1.0, 1.0, 1.0)
    # the matching route handles it
    p = piecewise_bogolyubov(1.0, 1.0, [(0.0, 1.0, -1.0)], t_ref=1.0)
    assert abs(p.norm_defect) < 1e-12


def test_particle_number_trivial():
    assert particle_number(BogolyubovPair(1, 0, 1.0)) == 0
    assert particle_number(BogolyubovPair(np.sqrt(2), 1, 1.0)) == 1


def test_wronskian_examples():
    w, t = 1.0, 0.0
    v = np.exp(1j * w * t) / np.sqrt(w)
    assert wronskian(v, 1j * w * v) == pytest.approx(1.0)
    assert wronskian(0.7, -0.3) == 0


def test_flat_profile_is_trivial():
    f = FrequencyProfile(0.7, 1.0, ConformalProfile.constant(1.0))
    p = numeric_bogolyubov(f, 0.0, 5.0)
    assert abs(p.alpha - 1) < 1e-8 and abs(p.beta) < 1e-8


def test_numeric_matches_analytic_squarehat():
    f = FrequencyProfile(2.0, 1.0, ConformalProfile.squarehat(1.0))
    num = numeric_bogolyubov(f, -1.0, 2.0, t_ref=1.0)
    ana = analytic_squarehat(2.0, 1.0, 1.0)
    assert abs(num.alpha - ana.alpha) < 1e-6 and abs(num.beta - ana.beta) < 1e-6


def test_oracle_grid_matching_vs_closed_form():
    for k in np.linspace(0.05, 4.0, 12):
        if abs(k - 1.0) < 0.1:
            continue
        for t0 in (0.3, 1.0, 2.7):
            a = analytic_squarehat(k, 1.0, t0)
            b = piecewise_bogolyubov(k, 1.0, [(0.0, t0, -1.0)], t_ref=t0)
            assert abs(a.alpha - b.alpha) < 1e-10 and abs(a.beta - b.beta) < 1e-10


def test_printed_phase_convention():
    # beta is purely imaginary and alpha carries -i(w/W + W/w) sin/2
    k, m, t0 = 2.0, 1.0, 1.0
    w, W = np.sqrt(5.0), np.sqrt(3.0)
    p = analytic_squarehat(k, m, t0)
    assert p.beta == pytest.approx(0.5j * (W / w - w / W) * np.sin(W * t0))
    assert p.alpha == pytest.approx(np.cos(W * t0) - 0.5j * (w / W + W / w) * np.sin(W * t0))


def test_wronskian_conserved_along_mode():
    f = FrequencyProfile(0.5, 1.0, ConformalProfile.inverted_gaussian(0.5, 0.0, 1.0))
    pair, mode = numeric_bogolyubov(f, -8.0, 8.0, n_samples=200, return_mode=True)
    assert np.abs(mode.wronskian() - 1).max() < 1e-8
    f2 = FrequencyProfile(2.0, 1.0, ConformalProfile.squarehat(1.5))
    _, mode2 = numeric_bogolyubov(f2, -1.0, 3.0, t_ref=1.5, n_samples=50, return_mode=True)
    assert np.abs(mode2.wronskian() - 1).max() < 1e-8


def test_inverted_gaussian_regression():
    # pinned from the first verified run (rtol 1e-12, flat to 1e-9 at the ends)
    f = FrequencyProfile(0.5, 1.0, ConformalProfile.inverted_gaussian(0.5, 0.0, 1.0))
    lo, hi = f.conformal.flat_window(1e-9)
    p = numeric_bogolyubov(f, lo, hi)
    assert particle_number(p) == pytest.approx(0.060934, abs=2e-6)
    assert abs(p.norm_defect) < 1e-8


def test_not_asymptotically_flat():
    f = FrequencyProfile(0.5, 1.0, ConformalProfile.inverted_gaussian(0.5, 0.0, 1.0))
    with pytest.raises(DomainError):
        numeric_bogolyubov(f, -1.0, 8.0)


def test_integration_failure_is_reported():
    f = FrequencyProfile(0.5, 1.0, ConformalProfile.inverted_gaussian(0.5, 0.0, 1.0))
    with pytest.raises(NumericalError):
        numeric_bogolyubov(f, -8.0, 8.0, rtol=1e-3, atol=1e-3)


def test_adiabatic_decay_and_massless_null():
    n2 = particle_number(analytic_squarehat(2.0, 1.0, 1.0))
    n4 = particle_number(analytic_squarehat(4.0, 1.0, 1.0))
    assert n4 < n2
    for p in bogolyubov_spectrum(np.linspace(0.1, 5, 20), 0.0, ConformalProfile.squarehat(1.7), "matching"):
        assert particle_number(p) < 1e-12


def test_spectrum_methods_agree():
    prof = ConformalProfile.squarehat(0.8)
    k = [0.3, 1.7, 3.0]
    a = bogolyubov_spectrum(k, 1.0, prof, "analytic")
    b = bogolyubov_spectrum(k, 1.0, prof, "matching")
    c = bogolyubov_spectrum(k, 1.0, prof, "ode")
    for x, y, z in zip(a, b, c):
        assert abs(x.beta - y.beta) < 1e-10 and abs(x.beta - z.beta) < 1e-6
    with pytest.raises(ValueError):
        bogolyubov_spectrum(k, 1.0, ConformalProfile.inverted_gaussian(0.5, 0, 1), "analytic")


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 6.0), st.floats(0.0, 3.0), st.floats(0.0, 4.0))
def test_normalisation_property(k, m, t0):
    if m > 0 and abs(k - m) < 1e-6 or k == m == 0:
        return
    p = analytic_squarehat(k, m, t0)
    assert abs(p.norm_defect) < 1e-8 * max(1.0, abs(p.alpha) ** 2)
    q = piecewise_bogolyubov(k, m, [(0.0, t0, -1.0)], t_ref=t0)
    assert abs(q.norm_defect) < 1e-8 * max(1.0, abs(q.alpha) ** 2)
