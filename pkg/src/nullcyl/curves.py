"""Null-position curves on the two-dimensional light cone in E_1^3.

An arc-length curve gamma with <gamma,gamma> = 0 carries a companion null
field eta fixed by <gamma,eta> = -1, <eta,eta> = <gamma',eta> = 0, and the
pair obeys  gamma'' = kappa*gamma + eta,  eta' = kappa*gamma'  with
kappa = <gamma', eta'>.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .jets import QuinticHermite1D
from .lorentz import complete_pseudo_orthonormal, minkowski_dot

CONSTRAINT_NAMES = (
    "<gamma,gamma>=0",
    "<gamma',gamma'>=1",
    "<gamma,eta>=-1",
    "<eta,eta>=0",
    "<gamma',eta>=0",
)


def constraint_residuals(gamma, dgamma, eta):
    return np.array(
        [
            minkowski_dot(gamma, gamma),
            minkowski_dot(dgamma, dgamma) - 1.0,
            minkowski_dot(gamma, eta) + 1.0,
            minkowski_dot(eta, eta),
            minkowski_dot(dgamma, eta),
        ]
    )


@dataclass(frozen=True)
class CurveOnCone:
    """Sampled arc-length null-position curve with its companion field."""

    ts: np.ndarray
    gammas: np.ndarray  # (N, 3)
    gamma_primes: np.ndarray  # (N, 3)
    etas: np.ndarray  # (N, 3)
    kappa_fn: object  # callable t -> kappa

    def max_constraint_drift(self):
        worst = 0.0
        for i in range(len(self.ts)):
            r = constraint_residuals(self.gammas[i], self.gamma_primes[i], self.etas[i])
            worst = max(worst, float(np.abs(r).max()))
        return worst

    def gamma_functions(self, prefix="gamma"):
        """Quintic-Hermite interpolants of the three coordinate functions.

        Second derivatives at the nodes come from the structure equation
        gamma'' = kappa*gamma + eta, so the interpolant carries usable 2-jets.
        """
        fns = []
        second = np.array(
            [
                self.kappa_fn(t) * g + e
                for t, g, e in zip(self.ts, self.gammas, self.etas)
            ]
        )
        for c in range(3):
            fns.append(
                QuinticHermite1D(
                    self.ts,
                    self.gammas[:, c],
                    self.gamma_primes[:, c],
                    second[:, c],
                    name=f"{prefix}{c + 1}",
                )
            )
        return fns

    def recomputed_kappa(self):
        """kappa from the samples via the defining pairing <gamma', eta'>.

        Independent of the stored eta and of kappa_fn: eta is re-solved at
        every node from (gamma, gamma') alone, its derivative is taken by a
        local quartic fit over five neighboring nodes, and kappa follows
        from <gamma', eta'>.  Interior nodes only (returns ts, kappas).
        """
        ts = self.ts
        etas = np.array(
            [solve_eta(g, dg) for g, dg in zip(self.gammas, self.gamma_primes)]
        )
        out_t, out_k = [], []
        for i in range(2, len(ts) - 2):
            window = slice(i - 2, i + 3)
            tt = ts[window] - ts[i]
            deta = np.array(
                [np.polyfit(tt, etas[window, c], 4)[-2] for c in range(3)]
            )
            out_t.append(ts[i])
            out_k.append(minkowski_dot(self.gamma_primes[i], deta))
        return np.asarray(out_t), np.asarray(out_k)


def solve_eta(gamma, dgamma):
    """The unique companion field value at one point."""
    return complete_pseudo_orthonormal(gamma, [dgamma])


def curve_kappa(gamma, dgamma, ddgamma, tol=1e-8):
    """Curvature and companion field from a 2-jet of an arc-length curve.

    kappa is extracted as -<gamma'', eta>: pairing the structure equation
    with eta kills its eta term and <gamma, eta> = -1 fixes the sign.
    """
    if abs(minkowski_dot(gamma, gamma)) > tol:
        raise PreconditionError("curve point is not on the cone")
    if abs(minkowski_dot(dgamma, dgamma) - 1.0) > tol:
        raise PreconditionError("curve is not arc-length parametrized")
    eta = solve_eta(gamma, dgamma)
    kappa = -minkowski_dot(ddgamma, eta)
    return float(kappa), eta


def _project_state(gamma, dgamma):
    """Restore the constraint manifold around a drifted state."""
    gamma = gamma.copy()
    gamma[0] = np.linalg.norm(gamma[1:])  # back on the future cone
    eta = solve_eta(gamma, dgamma)
    # remove the cone-tangency violation along eta, then renormalize
    dgamma = dgamma + minkowski_dot(gamma, dgamma) * eta
    dgamma = dgamma / np.sqrt(minkowski_dot(dgamma, dgamma))
    eta = solve_eta(gamma, dgamma)
    return gamma, dgamma, eta


def integrate_lc2_curve(
    kappa_fn, initial, t_range, tol=1e-8, max_steps=200000, max_h=None
):
    """Integrate gamma'' = kappa*gamma + eta, eta' = kappa*gamma' by RK4.

    `initial` is (gamma0, dgamma0, eta0) satisfying all five constraints
    within 1e-10.  Fixed-order RK4 with step halving on a local-error
    estimate; whenever constraint drift exceeds 10*tol the state is
    projected back onto the constraint manifold.
    """
    gamma0, dgamma0, eta0 = (np.asarray(v, dtype=float) for v in initial)
    res = constraint_residuals(gamma0, dgamma0, eta0)
    bad = [name for name, r in zip(CONSTRAINT_NAMES, res) if abs(r) > 1e-10]
    if bad:
        raise PreconditionError(f"initial data violates constraints: {bad}")
    t0, t1 = float(t_range[0]), float(t_range[1])
    if t1 <= t0:
        raise PreconditionError("t_range must be increasing")

    def rhs(t, y):
        g, dg, e = y[0:3], y[3:6], y[6:9]
        k = kappa_fn(t)
        return np.concatenate([dg, k * g + e, k * dg])

    y = np.concatenate([gamma0, dgamma0, eta0])
    t = t0
    h = (t1 - t0) / 64.0
    if max_h is not None:
        h = min(h, max_h)
    ts = [t]
    ys = [y.copy()]
    steps = 0
    while t < t1 - 1e-14 and steps < max_steps:
        steps += 1
        h = min(h, t1 - t)
        y_full = _rk4_step(rhs, t, y, h)
        y_half = _rk4_step(rhs, t + 0.5 * h, _rk4_step(rhs, t, y, 0.5 * h), 0.5 * h)
        err = float(np.abs(y_full - y_half).max()) / 15.0
        if err > tol and h > 1e-12:
            h *= 0.5
            continue
        t += h
        y = y_half
        drift = np.abs(constraint_residuals(y[0:3], y[3:6], y[6:9])).max()
        if drift > 10.0 * tol:
            g, dg, e = _project_state(y[0:3], y[3:6])
            y = np.concatenate([g, dg, e])
        ts.append(t)
        ys.append(y.copy())
        if err < tol / 32.0:
            h *= 2.0
            if max_h is not None:
                h = min(h, max_h)
    ys = np.asarray(ys)
    return CurveOnCone(
        ts=np.asarray(ts),
        gammas=ys[:, 0:3],
        gamma_primes=ys[:, 3:6],
        etas=ys[:, 6:9],
        kappa_fn=kappa_fn,
    )


def _rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


# ---------------------------------------------------------------------------
# the closed-form curve with kappa = -1/2


V1 = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
V2 = np.array([1.0, 0.0, -1.0]) / np.sqrt(2.0)
V3 = np.array([0.0, 1.0, 0.0])


def half_curvature_curve(t):
    """Closed form of the arc-length cone curve with constant kappa = -1/2."""
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    return (
        np.multiply.outer((c + 1.0) / 2.0, V1)
        + np.multiply.outer(1.0 - c, V2)
        + np.multiply.outer(s, V3)
    )


def half_curvature_eta(t):
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    return (
        np.multiply.outer((1.0 - c) / 4.0, V1)
        + np.multiply.outer((1.0 + c) / 2.0, V2)
        - np.multiply.outer(s / 2.0, V3)
    )


# DSL text of the same curve's coordinates (components of gamma in the
# standard basis), used by the closed-form surface generators
HALF_CURVATURE_CURVE_EXPRS = (
    "(3 - cos(t)) / (2 * sqrt2)",
    "sin(t)",
    "(3 * cos(t) - 1) / (2 * sqrt2)",
)


def circle_cone_curve_exprs():
    """Arc-length circle-type curve (1, cos t, sin t) on the cone."""
    return ("1", "cos(t)", "sin(t)")
