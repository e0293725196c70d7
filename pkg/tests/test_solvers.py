"""Estimator-style solver wrappers."""

import numpy as np
import pytest

from idealflow import CalabiFlow, ConvergenceWarning, DomainError, RicciFlow

R_STAR = 2.44845244767807579001


def test_get_set_params_round_trip():
    solver = CalabiFlow(geometry="hyperbolic", dt=0.5)
    params = solver.get_params()
    assert params["geometry"] == "hyperbolic"
    assert params["dt"] == 0.5
    assert set(params) == {"geometry", "dt", "tol", "max_steps", "method",
                           "record_every"}
    solver.set_params(dt=0.25, method="euler")
    assert solver.dt == 0.25 and solver.method == "euler"
    clone = CalabiFlow(**solver.get_params())
    assert clone.get_params() == solver.get_params()


def test_set_params_rejects_unknown():
    with pytest.raises(ValueError, match="invalid parameter"):
        CalabiFlow().set_params(step_size=0.1)


def test_repr_shows_params():
    text = repr(RicciFlow(dt=0.125))
    assert text.startswith("RicciFlow(")
    assert "dt=0.125" in text


def test_fit_octagon(octagon):
    solver = CalabiFlow(geometry="hyperbolic")
    assert solver.fit(octagon) is solver
    assert solver.converged_
    assert solver.stop_reason_ == "converged"
    assert solver.n_steps_ > 0
    assert solver.radii_[0] == pytest.approx(R_STAR, abs=1e-8)
    assert abs(solver.curvature_[0]) < 1e-10
    assert solver.trajectory_.stop_reason == "converged"
    assert solver.spectral_gap_() == pytest.approx(32.0, abs=1e-6)


def test_fit_accepts_triangulation_and_r0(toctagon):
    solver = CalabiFlow(geometry="hyperbolic").fit(toctagon, r0=[0.7])
    assert solver.radii_[0] == pytest.approx(R_STAR, abs=1e-8)
    with pytest.raises(DomainError):
        CalabiFlow(geometry="hyperbolic").fit(toctagon, r0=[-1.0])


def test_calabi_and_ricci_agree(octagon):
    a = CalabiFlow(geometry="hyperbolic").fit(octagon)
    b = RicciFlow(geometry="hyperbolic").fit(octagon)
    assert abs(a.radii_[0] - b.radii_[0]) < 1e-6


def test_euclidean_cube_fit(cube, rng):
    solver = CalabiFlow(geometry="euclidean").fit(cube, r0=rng.uniform(0.5, 2.0, 8))
    assert solver.converged_
    np.testing.assert_allclose(solver.curvature_, np.pi / 2, atol=1e-10)


def test_non_convergence_warns(octagon):
    solver = CalabiFlow(geometry="hyperbolic", max_steps=5)
    with pytest.warns(ConvergenceWarning):
        solver.fit(octagon)
    assert not solver.converged_
    assert solver.stop_reason_ == "max_steps"


def test_fitted_rate_attached(octagon):
    solver = CalabiFlow(geometry="hyperbolic", dt=5e-4, record_every=1).fit(octagon)
    fit = solver.trajectory_.fitted_rate
    assert fit is not None
    assert fit.rate > 0.0 and fit.r_squared > 0.99
