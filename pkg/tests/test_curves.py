import numpy as np
import pytest

from nullcyl.curves import (
    V1,
    V2,
    V3,
    curve_kappa,
    half_curvature_curve,
    half_curvature_eta,
    integrate_lc2_curve,
    solve_eta,
)
from nullcyl.errors import PreconditionError
from nullcyl.lorentz import minkowski_dot

TWO_PI = 2.0 * np.pi
MAX_H = TWO_PI / 512


def _integrate_half_curvature(t1=TWO_PI, tol=1e-8):
    return integrate_lc2_curve(
        lambda t: -0.5, (V1, V3, V2), (0.0, t1), tol=tol, max_h=MAX_H
    )


def test_constraints_hold_along_curve():
    curve = _integrate_half_curvature()
    assert curve.max_constraint_drift() < 1e-6


def test_matches_closed_form():
    curve = _integrate_half_curvature()
    worst = 0.0
    for t, g, e in zip(curve.ts, curve.gammas, curve.etas):
        worst = max(worst, np.abs(g - half_curvature_curve(t)).max())
        worst = max(worst, np.abs(e - half_curvature_eta(t)).max())
    assert worst < 1e-6


def test_period_drift():
    curve = _integrate_half_curvature(t1=2.0 * TWO_PI)
    g0, gp0, e0 = curve.gammas[0], curve.gamma_primes[0], curve.etas[0]
    idx = np.argmin(np.abs(curve.ts - TWO_PI))
    assert abs(curve.ts[idx] - TWO_PI) < 1e-12
    assert np.abs(curve.gammas[idx] - g0).max() < 1e-6
    assert np.abs(curve.gamma_primes[idx] - gp0).max() < 1e-6
    assert np.abs(curve.etas[idx] - e0).max() < 1e-6


def test_zero_kappa_has_constant_eta():
    gamma0 = np.array([np.sqrt(2.0), 1.0, 1.0])
    gp0 = np.array([0.0, 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)])
    eta0 = solve_eta(gamma0, gp0)
    curve = integrate_lc2_curve(
        lambda t: 0.0, (gamma0, gp0, eta0), (0.0, 1.0), max_h=MAX_H
    )
    assert np.abs(curve.etas - curve.etas[0]).max() < 1e-9


def test_curve_kappa_closed_forms():
    for t in np.linspace(0.1, TWO_PI - 0.1, 20):
        c, s = np.cos(t), np.sin(t)
        g = half_curvature_curve(t)
        dg = np.array([s / (2 * np.sqrt(2.0)), c, -3 * s / (2 * np.sqrt(2.0))])
        ddg = np.array([c / (2 * np.sqrt(2.0)), -s, -3 * c / (2 * np.sqrt(2.0))])
        assert curve_kappa(g, dg, ddg)[0] == pytest.approx(-0.5, abs=1e-10)
        circle = np.array([1.0, c, s])
        dcirc = np.array([0.0, -s, c])
        ddcirc = np.array([0.0, -c, -s])
        assert curve_kappa(circle, dcirc, ddcirc)[0] == pytest.approx(-0.5, abs=1e-10)


def test_curve_kappa_preconditions():
    t = 0.3
    with pytest.raises(PreconditionError):
        # off the cone
        curve_kappa(
            np.array([2.0, np.cos(t), np.sin(t)]),
            np.array([0.0, -np.sin(t), np.cos(t)]),
            np.array([0.0, -np.cos(t), -np.sin(t)]),
        )
    with pytest.raises(PreconditionError):
        # not arc length: scaled time axis
        curve_kappa(
            np.array([1.0, np.cos(t), np.sin(t)]),
            2.0 * np.array([0.0, -np.sin(t), np.cos(t)]),
            4.0 * np.array([0.0, -np.cos(t), -np.sin(t)]),
        )


def test_recomputed_kappa():
    curve = _integrate_half_curvature()
    ts, kappas = curve.recomputed_kappa()
    assert np.abs(kappas + 0.5).max() < 1e-6
    assert ts.size == kappas.size


def test_gamma_functions_interpolant():
    curve = _integrate_half_curvature()
    fns = curve.gamma_functions("g")
    assert len(fns) == 3
    for t in np.linspace(0.2, TWO_PI - 0.2, 17):
        g = half_curvature_curve(t)
        for i, fn in enumerate(fns):
            value = fn.jet(t)[0]
            assert value == pytest.approx(g[i], abs=1e-8)


def test_eta_solver_constraints():
    rng = np.random.default_rng(7)
    for _ in range(25):
        t = rng.uniform(0.0, TWO_PI)
        g = half_curvature_curve(t)
        dg = np.array(
            [
                np.sin(t) / (2 * np.sqrt(2.0)),
                np.cos(t),
                -3 * np.sin(t) / (2 * np.sqrt(2.0)),
            ]
        )
        eta = solve_eta(g, dg)
        assert abs(minkowski_dot(eta, eta)) < 1e-12
        assert abs(minkowski_dot(eta, g) + 1.0) < 1e-12
        assert abs(minkowski_dot(eta, dg)) < 1e-12


def test_initial_eta_is_v2():
    assert np.allclose(solve_eta(V1, V3), V2)
