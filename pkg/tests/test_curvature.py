"""Curvature vectors, Jacobians and the flow potential on the fixtures."""

import numpy as np
import pytest

from helpers import fd_jacobian
from idealflow import (
    DomainError,
    PatternState,
    QuadratureError,
    calabi_energy,
    curvature_jacobian,
    curvature_map,
    curvature_vector,
    from_u,
    gauss_bonnet_residual,
    k_average,
    ricci_potential,
    spectral_gap,
    to_u,
)

U_HYP_1 = -0.77193683290530472507   # log tanh(1/2), frozen
K_OCT_1 = -9.75002715521962130222   # octagon curvature at unit radius, frozen
K_TOR_HYP_1 = 1.68313584655229165248  # hyperbolic square torus at unit radius
R_STAR = 2.44845244767807579001     # acosh(3 + 2 sqrt 2)


# ---------------------------------------------------------------------------
# coordinates


def test_u_round_trip(rng):
    r = np.exp(rng.uniform(np.log(1e-6), np.log(30.0), 200))
    for geometry in ("euclidean", "hyperbolic"):
        back = from_u(geometry, to_u(geometry, r))
        np.testing.assert_allclose(back, r, rtol=1e-12)


def test_u_frozen_value_and_signs():
    assert to_u("hyperbolic", [1.0])[0] == pytest.approx(U_HYP_1, rel=1e-15)
    assert to_u("euclidean", [np.e])[0] == pytest.approx(1.0, rel=1e-15)
    assert np.all(to_u("hyperbolic", np.linspace(0.01, 20, 50)) < 0.0)


def test_from_u_rejects_nonnegative_hyperbolic():
    with pytest.raises(DomainError):
        from_u("hyperbolic", [0.0])
    with pytest.raises(DomainError):
        from_u("hyperbolic", [-1.0, 0.5])


def test_pattern_state_validation():
    state = PatternState.from_radii("hyperbolic", [1.0, 2.0])
    assert state.num_vertices == 2
    assert not state.r.flags.writeable
    np.testing.assert_allclose(from_u("hyperbolic", state.u), state.r, rtol=1e-14)
    with pytest.raises(DomainError):
        PatternState.from_radii("euclidean", 1.0)        # scalar, not a vector
    with pytest.raises(DomainError):
        PatternState.from_radii("euclidean", [1.0, -2.0])
    with pytest.raises(DomainError):
        PatternState.from_radii("euclidean", [np.nan])
    with pytest.raises(DomainError):
        PatternState.from_log("hyperbolic", [0.5])
    round_trip = PatternState.from_log("hyperbolic", state.u)
    np.testing.assert_allclose(round_trip.r, state.r, rtol=1e-14)


# ---------------------------------------------------------------------------
# curvature against closed forms

# with all radii equal to r and every weight theta, each corner angle is
# atan(tan(theta/2) / cosh r) hyperbolic, theta/2 euclidean


def test_torus_euclidean_curvature_vanishes(ttorus):
    for r in (0.1, 1.0, 7.3):
        K = curvature_vector(ttorus, PatternState.from_radii("euclidean", [r]))
        assert abs(K[0]) < 1e-14


def test_torus_hyperbolic_closed_form(ttorus):
    for r in (0.05, 0.5, 1.0, 2.0, 5.0):
        K = curvature_vector(ttorus, PatternState.from_radii("hyperbolic", [r]))
        expect = 2 * np.pi - 8 * np.arctan(1.0 / np.cosh(r))
        assert K[0] == pytest.approx(expect, rel=1e-13, abs=1e-13)
        assert K[0] > 0.0
    K1 = curvature_vector(ttorus, PatternState.from_radii("hyperbolic", [1.0]))
    assert K1[0] == pytest.approx(K_TOR_HYP_1, rel=1e-14)


def test_octagon_closed_form(toctagon):
    tan38 = np.tan(3 * np.pi / 8)
    for r in (0.3, 1.0, R_STAR, 4.0):
        K = curvature_vector(toctagon, PatternState.from_radii("hyperbolic", [r]))
        expect = 2 * np.pi - 16 * np.arctan(tan38 / np.cosh(r))
        assert K[0] == pytest.approx(expect, rel=1e-12, abs=1e-12)
    K1 = curvature_vector(toctagon, PatternState.from_radii("hyperbolic", [1.0]))
    assert K1[0] == pytest.approx(K_OCT_1, rel=1e-14)
    # the zero of K is exactly cosh r = 3 + 2 sqrt 2
    Ks = curvature_vector(toctagon, PatternState.from_radii("hyperbolic", [R_STAR]))
    assert abs(Ks[0]) < 1e-13


def test_cube_uniform_radii(tcube):
    for r in (0.2, 1.0, 3.0):
        K = curvature_vector(tcube, PatternState.from_radii("euclidean", [r] * 8))
        np.testing.assert_allclose(K, np.pi / 2, atol=1e-13)
        Kh = curvature_vector(tcube, PatternState.from_radii("hyperbolic", [r] * 8))
        expect = 2 * np.pi - 6 * np.arctan(1.0 / np.cosh(r))
        np.testing.assert_allclose(Kh, expect, atol=1e-12)


def test_k_average(torus, octagon, cube):
    assert k_average(torus) == 0.0
    assert k_average(octagon) == pytest.approx(-4 * np.pi, rel=1e-15)
    assert k_average(cube) == pytest.approx(np.pi / 2, rel=1e-15)


def test_curvature_map_report(toctagon, tcube, rng):
    state = PatternState.from_radii("hyperbolic", [1.0])
    report = curvature_map(toctagon, state)
    assert report.K[0] == pytest.approx(K_OCT_1, rel=1e-13)
    assert report.calabi_energy == pytest.approx(K_OCT_1 ** 2, rel=1e-13)
    # area follows from the curvature identity: sum K = 2 pi chi + area
    assert report.total_area == pytest.approx(K_OCT_1 + 4 * np.pi, rel=1e-12)
    assert abs(report.gauss_bonnet_residual) < 1e-12

    r = rng.uniform(0.5, 2.0, 8)
    euc = curvature_map(tcube, PatternState.from_radii("euclidean", r))
    assert euc.total_area is None
    assert abs(euc.gauss_bonnet_residual) < 1e-12
    assert gauss_bonnet_residual(tcube, PatternState.from_radii("euclidean", r)) == (
        euc.gauss_bonnet_residual)


def test_calabi_energy_is_squared_norm(rng):
    K = rng.normal(size=10)
    assert calabi_energy(K) == pytest.approx(float(K @ K), rel=1e-15)


# ---------------------------------------------------------------------------
# Jacobian


def _random_state(rng, geometry, n):
    if geometry == "hyperbolic":
        return PatternState.from_log(geometry, rng.uniform(-3.0, -0.1, n))
    return PatternState.from_log(geometry, rng.uniform(-1.5, 1.5, n))


def test_jacobian_matches_finite_differences(ttorus, toctagon, tcube, rng):
    for t in (ttorus, toctagon, tcube):
        for geometry in ("euclidean", "hyperbolic"):
            state = _random_state(rng, geometry, t.num_vertices)
            L = curvature_jacobian(t, state).L
            ref = fd_jacobian(t, geometry, np.array(state.u))
            np.testing.assert_allclose(L, ref, rtol=1e-5, atol=1e-8)


def test_jacobian_exact_symmetry(tcube, rng):
    # paired corners accumulate bitwise-identical terms in matching order
    for geometry in ("euclidean", "hyperbolic"):
        for _ in range(10):
            state = _random_state(rng, geometry, 8)
            L = curvature_jacobian(tcube, state).L
            assert np.array_equal(L, L.T)


def test_jacobian_structural_split(tcube, toctagon, rng):
    state = _random_state(rng, "hyperbolic", 8)
    jac = curvature_jacobian(tcube, state)
    assert jac.A_diag is not None and np.all(jac.A_diag > 0.0)
    np.testing.assert_allclose(jac.L, jac.L_B + np.diag(jac.A_diag), atol=1e-15)
    # the Laplacian part annihilates constants
    np.testing.assert_allclose(jac.L_B @ np.ones(8), 0.0, atol=1e-12)
    assert np.linalg.eigvalsh(jac.L_B)[0] > -1e-12

    euc = curvature_jacobian(tcube, _random_state(rng, "euclidean", 8))
    assert euc.A_diag is None
    assert euc.L is euc.L_B
    np.testing.assert_allclose(euc.L @ np.ones(8), 0.0, atol=1e-12)


def test_torus_euclidean_jacobian_is_zero(ttorus, rng):
    # loop edges contribute nothing: the corner angle is scale invariant
    state = _random_state(rng, "euclidean", 1)
    jac = curvature_jacobian(ttorus, state)
    assert np.array_equal(jac.L, np.zeros((1, 1)))


def test_spectral_gap_values(ttorus, toctagon, tcube, rng):
    gap = spectral_gap(curvature_jacobian(
        toctagon, PatternState.from_radii("hyperbolic", [R_STAR])))
    assert gap == pytest.approx(32.0, abs=1e-9)
    assert np.isnan(spectral_gap(curvature_jacobian(
        ttorus, _random_state(rng, "euclidean", 1))))
    assert spectral_gap(curvature_jacobian(
        tcube, _random_state(rng, "euclidean", 8))) > 0.0
    for t in (ttorus, toctagon, tcube):
        jac = curvature_jacobian(t, _random_state(rng, "hyperbolic", t.num_vertices))
        assert spectral_gap(jac) > 0.0


# ---------------------------------------------------------------------------
# potential


def test_ricci_potential_path_independence(toctagon, tcube, rng):
    u0 = np.array([-1.5])
    u1 = np.array([-0.4])
    direct = ricci_potential(toctagon, "hyperbolic", u0, u1)
    detour = ricci_potential(toctagon, "hyperbolic", u0, u1,
                             waypoints=[np.array([-2.3])])
    assert direct == pytest.approx(detour, abs=1e-8)

    a = rng.uniform(-0.5, 0.5, 8)
    b = rng.uniform(-0.5, 0.5, 8)
    w = rng.uniform(-0.5, 0.5, 8)
    direct = ricci_potential(tcube, "euclidean", a, b)
    detour = ricci_potential(tcube, "euclidean", a, b, waypoints=[w])
    assert direct == pytest.approx(detour, abs=1e-8)


def test_ricci_potential_gradient_is_curvature(toctagon):
    # d potential / d u_i = K_i
    u = np.array([-0.8])
    h = 1e-5
    up = ricci_potential(toctagon, "hyperbolic", np.array([-1.0]), u + h)
    um = ricci_potential(toctagon, "hyperbolic", np.array([-1.0]), u - h)
    K = curvature_vector(toctagon, PatternState.from_log("hyperbolic", u))
    assert (up - um) / (2 * h) == pytest.approx(K[0], rel=1e-6)


def test_ricci_potential_zero_leg_and_failure(toctagon):
    u = np.array([-1.0])
    assert ricci_potential(toctagon, "hyperbolic", u, u.copy()) == 0.0
    with pytest.raises(QuadratureError):
        ricci_potential(toctagon, "hyperbolic", np.array([-2.0]), np.array([-0.5]),
                        tol=0.0, max_doublings=2)
