import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from curvedirac import dirac
from curvedirac.estimators import (
    BogolyubovSpectrum,
    DiracPropagator,
    EnergyProjector,
    WaveguideArray,
    ZitterbewegungAnalyzer,
)


@pytest.mark.parametrize(
    "est",
    [
        DiracPropagator(mass=2.0, L=100.0),
        ZitterbewegungAnalyzer(pad=4),
        EnergyProjector(m_ref=0.5),
        BogolyubovSpectrum(m=1.0, method="matching"),
        WaveguideArray(n_waveguides=20, kappa=1.0),
    ],
)
def test_params_and_clone(est):
    params = est.get_params()
    c = clone(est)
    assert c.get_params() == params
    c.set_params(**params)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DiracPropagator().predict([0.0, 1.0])
    with pytest.raises(NotFittedError):
        BogolyubovSpectrum().predict([1.0])


def test_propagator_matches_functional_core():
    g = dirac.gaussian_position_packet(3.0, (1, 1), L=80.0, N=512)
    t = np.linspace(0, 5, 51)
    est = DiracPropagator(mass=1.0, L=80.0).fit(g.psi)
    ref = dirac.flat_trajectory(g, 1.0, t).mean_x
    assert np.array_equal(est.predict(t), ref)
    frw = DiracPropagator(mass=1.0, L=80.0, profile={"kind": "constant", "c": 1.0}).fit(g.psi)
    assert np.allclose(frw.predict(t), ref, atol=1e-12)


def test_zb_analyzer():
    t = np.linspace(0, 40, 2001)
    x = 0.3 * np.cos(2.0 * t) + 0.01 * t
    z = ZitterbewegungAnalyzer().fit(t, x)
    assert z.has_zb_ and z.frequency_ == pytest.approx(2.0, rel=1e-3)
    assert z.amplitude_ == pytest.approx(0.3, rel=0.05)
    assert z.result_.frequency == z.frequency_


def test_energy_projector():
    pos = dirac.branch_packet(0.5, 0.0, "+", 1.0, 80.0, 256)
    neg = dirac.branch_packet(0.5, 0.0, "-", 1.0, 80.0, 256)
    out = EnergyProjector(m_ref=1.0, L=80.0).fit_transform(np.stack([pos.psi, neg.psi]))
    assert out.shape == (2, 2)
    assert out[0, 1] < 1e-20 and out[1, 0] < 1e-20
    with pytest.raises(ValueError):
        EnergyProjector().fit().transform(np.zeros(4))


def test_bogolyubov_spectrum():
    b = BogolyubovSpectrum(m=1.0).fit([2.0, 3.0])
    n = b.predict([2.0, 3.0])
    assert n[0] == pytest.approx(np.sin(np.sqrt(3)) ** 2 / 15, rel=1e-10)
    assert b.predict([2.0])[0] == pytest.approx(n[0], rel=1e-12)


@pytest.mark.filterwarnings("ignore::curvedirac.exceptions.EdgeReflectionWarning")
def test_waveguide_array():
    g = dirac.gaussian_position_packet(2.0, (1, 1), L=80.0, N=512)
    w = WaveguideArray(n_waveguides=40, kappa=2.0, project_band="-").fit(g)
    z = np.linspace(0, 2, 5)
    mx = w.predict(z)
    assert mx.shape == (5,) and np.all(np.isfinite(mx))
    assert w.trajectory(z).power == pytest.approx(np.full(5, w.state_.power()), rel=1e-10)
    with pytest.raises(ValueError):
        WaveguideArray(n_waveguides=7).fit(g)
