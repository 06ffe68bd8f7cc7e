"""Generators for the classified families, plus their supporting integrators.

Every public generator returns an ImmersionSpec whose advertised invariant
flags can be re-derived numerically with the invariants module; the
integrators supply the numeric profiles (the radial factor of the
pseudo-umbilical family, curves on the two-dimensional cone) that some
generators splice into their component expressions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .curves import CurveOnCone, _rk4_step
from .dsl import (
    BinOp,
    FuncRef,
    ImmersionSpec,
    Num,
    Var,
    eval_expr,
    eval_jet2,
    parse_expression,
    parse_immersion_spec,
)
from .errors import (
    BlowDownError,
    DimensionError,
    EvalDomainError,
    NotOnCylinderError,
    PreconditionError,
)
from .jets import QuinticHermite1D, Taylor2
from .lorentz import (
    complete_pseudo_orthonormal,
    gram_matrix,
    minkowski_dot,
    orthonormalize_spacelike,
)

ALPHA_HAT_MIN = 1e-6


# ---------------------------------------------------------------------------
# unit-sphere charts


def sphere_exprs(angle_names):
    """Angle chart of the unit sphere S^m for m = len(angle_names).

    Returns m+1 expression strings: (cos a1, sin a1 cos a2, ...,
    sin a1 ... sin a_{m-1} cos a_m, sin a1 ... sin a_m).
    """
    if not angle_names:
        raise PreconditionError("need at least one angle")
    exprs = []
    prefix = ""
    for name in angle_names:
        exprs.append(f"{prefix}cos({name})")
        prefix += f"sin({name}) * "
    exprs.append(prefix.rstrip(" *"))
    return exprs


def _angle_domains(count):
    """Interior domains: polar angles away from the poles, azimuth near-full."""
    doms = [(0.4, math.pi - 0.4)] * (count - 1)
    doms.append((0.4, 2.0 * math.pi - 0.4))
    return doms


def _angle_names(n):
    return [f"t{i}" for i in range(2, n + 1)]


# ---------------------------------------------------------------------------
# the {gamma, eta} normal frame for submanifolds inside the cone


@dataclass(frozen=True)
class ConeFrame:
    """Shape data of a cone-mode spec with respect to {gamma, eta}."""

    gamma: np.ndarray
    eta: np.ndarray
    metric: np.ndarray
    a_gamma: np.ndarray
    a_eta: np.ndarray


def cone_shape_operators(spec, point, tol=1e-8):
    """Shape operators A_gamma, A_eta at a point of a cone-mode immersion.

    gamma is the (null) position vector; eta is the unique normal null field
    with <gamma, eta> = -1.  A_zeta = g^{-1} (<phi_ij, zeta>)_ij.
    """
    jet = eval_jet2(spec, point)
    gamma = jet.value
    if abs(minkowski_dot(gamma, gamma)) > tol * (1.0 + gamma @ gamma):
        raise NotOnCylinderError(f"position vector is not null at {tuple(point)}")
    if gamma[0] <= 0:
        raise NotOnCylinderError(f"first coordinate not positive at {tuple(point)}")
    p = spec.n_params
    tangent = [jet.first[:, j] for j in range(p)]
    g = gram_matrix(tangent)
    ortho = orthonormalize_spacelike(tangent)
    eta = complete_pseudo_orthonormal(gamma, ortho)
    h_gamma = np.empty((p, p))
    h_eta = np.empty((p, p))
    for i in range(p):
        for j in range(p):
            h_gamma[i, j] = minkowski_dot(jet.second[:, i, j], gamma)
            h_eta[i, j] = minkowski_dot(jet.second[:, i, j], eta)
    return ConeFrame(
        gamma=gamma,
        eta=eta,
        metric=g,
        a_gamma=np.linalg.solve(g, h_gamma),
        a_eta=np.linalg.solve(g, h_eta),
    )


# ---------------------------------------------------------------------------
# the radial ODE of the pseudo-umbilical family


@dataclass(frozen=True)
class OdeSolution:
    """Solution samples of the radial equation
    (n-2) tau^2 ahat ahat'' - (n-1)(c + tau^2 ahat'^2) = 0."""

    ts: np.ndarray
    alpha_hat: np.ndarray
    alpha_hat_prime: np.ndarray
    n: int
    c: float
    tau: float
    blow_down: bool = False
    s_critical: float = np.nan

    def second_derivative(self, ahat, dahat):
        return (
            (self.n - 1)
            * (self.c + self.tau**2 * dahat**2)
            / ((self.n - 2) * self.tau**2 * ahat)
        )

    def alpha_hat_function(self, name="ahat"):
        """Quintic-Hermite interpolant with node f'' supplied by the ODE."""
        fpp = self.second_derivative(self.alpha_hat, self.alpha_hat_prime)
        return QuinticHermite1D(self.ts, self.alpha_hat, self.alpha_hat_prime, fpp, name)

    def midpoint_residuals(self):
        """ODE residual of the interpolant at every interval midpoint."""
        fn = self.alpha_hat_function()
        out = np.empty(len(self.ts) - 1)
        for i, s in enumerate(0.5 * (self.ts[:-1] + self.ts[1:])):
            f0, f1, f2 = fn.jet(s)
            out[i] = (self.n - 2) * self.tau**2 * f0 * f2 - (self.n - 1) * (
                self.c + self.tau**2 * f1**2
            )
        return out

    def beta(self, s=None):
        """The off-radial frame eigenvalue -(c + tau^2 ahat'^2)/(2 tau^2 ahat^2)."""
        if s is None:
            a, da = self.alpha_hat, self.alpha_hat_prime
        else:
            fn = self.alpha_hat_function()
            jets = [fn.jet(v) for v in np.atleast_1d(np.asarray(s, dtype=float))]
            a = np.array([j[0] for j in jets])
            da = np.array([j[1] for j in jets])
        return -(self.c + self.tau**2 * da**2) / (2.0 * self.tau**2 * a**2)


def _adaptive_rk4(rhs, t0, y0, t1, tol, stop=None, max_steps=200000):
    """RK4 with step halving; works in either time direction.

    Returns (ts, ys, stopped): `stopped` is True when the `stop` predicate
    fired before reaching t1.
    """
    sgn = 1.0 if t1 >= t0 else -1.0
    t, y = t0, np.asarray(y0, dtype=float).copy()
    h = (t1 - t0) / 64.0
    ts, ys = [t], [y.copy()]
    steps = 0
    while sgn * (t1 - t) > 1e-14 and steps < max_steps:
        steps += 1
        if sgn * h > sgn * (t1 - t):
            h = t1 - t
        y_full = _rk4_step(rhs, t, y, h)
        y_half = _rk4_step(rhs, t + 0.5 * h, _rk4_step(rhs, t, y, 0.5 * h), 0.5 * h)
        err = float(np.abs(y_full - y_half).max()) / 15.0
        if err > tol and abs(h) > 1e-12:
            h *= 0.5
            continue
        t += h
        y = y_half
        ts.append(t)
        ys.append(y.copy())
        if stop is not None and stop(y):
            return np.asarray(ts), np.asarray(ys), True
        if err < tol / 32.0:
            h *= 2.0
    return np.asarray(ts), np.asarray(ys), False


def solve_alpha_hat_ode(n, c, tau, ivp, s_range, tol=1e-10):
    """Integrate the radial equation as the first-order system (ahat, ahat').

    The initial values are taken at s_range[0].  Integration stops early,
    with the blow-down flag set, if ahat drops to ALPHA_HAT_MIN.
    """
    if n == 2:
        raise DimensionError(
            "the radial equation degenerates for surfaces (coefficient n - 2 = 0)"
        )
    if n < 2:
        raise DimensionError(f"intrinsic dimension {n} must be at least 3")
    if tau <= 0:
        raise PreconditionError(f"tau = {tau} must be positive")
    ahat0, dahat0 = ivp
    if ahat0 <= 0:
        raise PreconditionError(f"initial value {ahat0} must be positive")

    def rhs(_s, y):
        return np.array(
            [y[1], (n - 1) * (c + tau**2 * y[1] ** 2) / ((n - 2) * tau**2 * y[0])]
        )

    ts, ys, stopped = _adaptive_rk4(
        rhs, s_range[0], [ahat0, dahat0], s_range[1], tol,
        stop=lambda y: y[0] <= ALPHA_HAT_MIN,
    )
    ts[-1] = min(ts[-1], s_range[1])  # clamp float drift of the final step
    return OdeSolution(
        ts=ts,
        alpha_hat=ys[:, 0],
        alpha_hat_prime=ys[:, 1],
        n=n,
        c=float(c),
        tau=float(tau),
        blow_down=stopped,
        s_critical=float(ts[-1]) if stopped else np.nan,
    )


# ---------------------------------------------------------------------------
# generators


def gen_sigma_tau(n, tau):
    """The totally umbilical slice {gamma on the cone : time coordinate = tau}.

    Chart gamma(t2..tn) = (tau, tau * Theta) with Theta the angle chart of
    the unit sphere; cone mode (no cylinder coordinate).
    """
    if n < 3:
        raise DimensionError(f"cone dimension {n} must be at least 3")
    if tau <= 0:
        raise PreconditionError(f"tau = {tau} must be positive")
    names = _angle_names(n)
    doms = _angle_domains(len(names))
    lines = [f"params {', '.join(names)};", f"ambient {n + 1};", f"const tau = {tau!r};"]
    lines += [
        f"domain {nm} in [{lo!r}, {hi!r}];" for nm, (lo, hi) in zip(names, doms)
    ]
    comps = ["tau"] + [f"tau * {e}" for e in sphere_exprs(names)]
    lines.append(f"map [{', '.join(comps)}];")
    return parse_immersion_spec("\n".join(lines))


def gen_isotropic(n, eps, c0, s_domain=(0.0, 2.0)):
    """The 0-isotropic family: a moving sphere with linear radial factor.

    phi(s, t2..tn) = ((eps*s + c0)(1, Theta(t)), s).
    """
    if n <= 2:
        raise DimensionError(f"intrinsic dimension {n} must exceed 2")
    if eps not in (1, -1):
        raise PreconditionError(f"eps = {eps} must be +1 or -1")
    lo, hi = s_domain
    if min(eps * lo + c0, eps * hi + c0) <= 0:
        raise EvalDomainError(
            f"radial factor eps*s + c0 is not positive on [{lo}, {hi}]"
        )
    names = _angle_names(n)
    doms = _angle_domains(len(names))
    lines = [
        f"params s, {', '.join(names)};",
        f"ambient {n + 2};",
        f"const eps = {float(eps)!r};",
        f"const c0 = {float(c0)!r};",
        f"domain s in [{lo!r}, {hi!r}];",
    ]
    lines += [
        f"domain {nm} in [{a!r}, {b!r}];" for nm, (a, b) in zip(names, doms)
    ]
    comps = ["(eps * s + c0)"] + [
        f"(eps * s + c0) * {e}" for e in sphere_exprs(names)
    ]
    comps.append("s")
    lines.append(f"map [{', '.join(comps)}];")
    return parse_immersion_spec("\n".join(lines))


def gen_pseudo_umbilical_n(n, c=-1, tau=1.0, ivp=(1.0, 0.0), s_range=(0.0, 2.0),
                           tol=1e-10):
    """Radial graph over the tau-slice: phi(s, t) = (ahat(s) gamma(t), s).

    ahat solves the radial equation; gamma(t) = (tau, tau*Theta(t)).  Only
    the time-like-axis base (c = -1) ships.
    """
    if c != -1:
        raise PreconditionError("only the c = -1 (time-like axis) base is built")
    sol = solve_alpha_hat_ode(n, c, tau, ivp, s_range, tol)
    if sol.blow_down:
        raise BlowDownError(sol.s_critical)
    ahat = sol.alpha_hat_function()
    names = _angle_names(n)
    radial = BinOp("*", Num(float(tau)), FuncRef(ahat, Var("s")))
    comps = [radial]
    for e in sphere_exprs(names):
        comps.append(BinOp("*", radial, parse_expression(e, names)))
    comps.append(Var("s"))
    return ImmersionSpec(
        param_names=tuple(["s"] + names),
        ambient_dim=n + 2,
        components=tuple(comps),
        param_domain=tuple(
            [(float(sol.ts[0]), float(sol.ts[-1]))] + _angle_domains(len(names))
        ),
    )


def _horner_text(coeffs, var):
    """Polynomial text in Horner form; coeffs[k] multiplies var^k."""
    text = repr(float(coeffs[-1]))
    for c in coeffs[-2::-1]:
        text = f"{float(c)!r} + {var} * ({text})"
    return f"({text})"


def alpha_hat_poly_expr(sol, degree=14, samples=240):
    """Closed-form polynomial stand-in for the integrated radial profile.

    Least-squares fit to the Hermite interpolant on a dense grid; lets the
    ODE-backed generator emit plain DSL text.  Returns (expr_text, max_err).
    """
    fn = sol.alpha_hat_function()
    xs = np.linspace(sol.ts[0], sol.ts[-1], samples)
    ys = np.array([fn.jet(x)[0] for x in xs])
    coeffs = np.polynomial.polynomial.polyfit(xs, ys, degree)
    err = float(np.abs(np.polynomial.polynomial.polyval(xs, coeffs) - ys).max())
    return _horner_text(coeffs, "s"), err


def gen_pseudo_umbilical_n_closed(n, c=-1, tau=1.0, ivp=(1.0, 0.0),
                                  s_range=(0.0, 2.0), degree=14):
    """Serializable variant of gen_pseudo_umbilical_n.

    The radial profile is replaced by a polynomial fit (well below the
    classification tolerances for desk-scale intervals), so the result
    round-trips through DSL text.
    """
    if c != -1:
        raise PreconditionError("only the c = -1 (time-like axis) base is built")
    sol = solve_alpha_hat_ode(n, c, tau, ivp, s_range)
    if sol.blow_down:
        raise BlowDownError(sol.s_critical)
    poly, _ = alpha_hat_poly_expr(sol, degree)
    names = _angle_names(n)
    doms = _angle_domains(len(names))
    lines = [
        f"params s, {', '.join(names)};",
        f"ambient {n + 2};",
        f"const tau = {float(tau)!r};",
        f"domain s in [{float(sol.ts[0])!r}, {float(sol.ts[-1])!r}];",
    ]
    lines += [f"domain {nm} in [{a!r}, {b!r}];" for nm, (a, b) in zip(names, doms)]
    comps = [f"tau * {poly}"] + [f"tau * {poly} * {e}" for e in sphere_exprs(names)]
    comps.append("s")
    lines.append(f"map [{', '.join(comps)}];")
    return parse_immersion_spec("\n".join(lines))


def gen_pseudo_umbilical_surface(c1):
    """The explicit pseudo-umbilical surface over the kappa = -1/2 curve.

    phi(s,t) = ((s+c1)(3-cos t)/(2 sqrt2), (s+c1) sin t,
                (s+c1)(3 cos t - 1)/(2 sqrt2), s).
    """
    lo, hi = -c1 + 0.05, -c1 + 2.05
    text = f"""
    params s, t;
    ambient 4;
    const c1 = {float(c1)!r};
    domain s in [{lo!r}, {hi!r}];
    domain t in [{-math.pi!r}, {math.pi!r}];
    map [(s + c1) * (3 - cos(t)) / (2 * sqrt2),
         (s + c1) * sin(t),
         (s + c1) * (3 * cos(t) - 1) / (2 * sqrt2),
         s];
    """
    return parse_immersion_spec(text)


def _curve_nodes(curve, prefix="gamma"):
    """Three 1-D component functions of t from either input form."""
    if isinstance(curve, CurveOnCone):
        fns = curve.gamma_functions(prefix)
        t_dom = (float(curve.ts[0]), float(curve.ts[-1]))
        return [FuncRef(f, Var("t")) for f in fns], t_dom
    if len(curve) != 3:
        raise PreconditionError("closed-form curve needs exactly 3 components")
    nodes = [
        parse_expression(e, ["t"]) if isinstance(e, str) else e for e in curve
    ]
    return nodes, (0.0, 2.0 * math.pi)


def gen_ruled_flat(a_expr, curve, s_domain=(0.25, 2.25), t_domain=None):
    """The flat ruled surface phi(s,t) = ((s + a(t)) gamma(t), s).

    `curve` is a CurveOnCone or three closed-form expressions in t for an
    arc-length null-position curve on the two-dimensional cone.
    """
    a_node = parse_expression(a_expr, ["t"]) if isinstance(a_expr, str) else a_expr
    gamma_nodes, t_default = _curve_nodes(curve)
    t_dom = tuple(t_domain) if t_domain is not None else t_default
    lo_s, hi_s = s_domain
    for tv in np.linspace(t_dom[0], t_dom[1], 65):
        a_val = eval_expr(a_node, {"t": Taylor2.variable(float(tv), 0, 1)}).val
        if lo_s + a_val <= 0:
            raise EvalDomainError(
                f"ruling offset s + a(t) <= 0 at t = {tv} (a = {a_val})"
            )
    factor = BinOp("+", Var("s"), a_node)
    comps = [BinOp("*", factor, g) for g in gamma_nodes] + [Var("s")]
    return ImmersionSpec(
        param_names=("s", "t"),
        ambient_dim=4,
        components=tuple(comps),
        param_domain=((float(lo_s), float(hi_s)), t_dom),
    )


def gen_product(curve, interval):
    """The cylinder-direction product phi(s,t) = (gamma(t), s): alpha == 0."""
    gamma_nodes, t_dom = _curve_nodes(curve)
    comps = list(gamma_nodes) + [Var("s")]
    return ImmersionSpec(
        param_names=("s", "t"),
        ambient_dim=4,
        components=tuple(comps),
        param_domain=((float(interval[0]), float(interval[1])), t_dom),
    )


def gen_example61():
    """A pseudo-umbilical surface inside the degenerate hyperplane x1 = x4."""
    text = """
    params s, t;
    ambient 4;
    domain s in [0.25, 2.25];
    domain t in [-1.5, 1.5];
    map [s,
         s / sqrt(t^2 + 1),
         s * t / sqrt(t^2 + 1),
         s];
    """
    return parse_immersion_spec(text)


# ---------------------------------------------------------------------------
# the isotropy PDE for radial surfaces phi = (ahat(s,t) gamma(t), s)


def isotropy_pde_residual(alpha_hat_expr, kappa, point):
    """Residual of ahat^2 (ahat_s^2 + 2 kappa) + 2 ahat ahat_tt - 3 ahat_t^2.

    `alpha_hat_expr` is an expression in (s, t); zero residual characterizes
    the isotropic surfaces in this radial form.
    """
    node = (
        parse_expression(alpha_hat_expr, ["s", "t"])
        if isinstance(alpha_hat_expr, str)
        else alpha_hat_expr
    )
    env = {
        "s": Taylor2.variable(float(point[0]), 0, 2),
        "t": Taylor2.variable(float(point[1]), 1, 2),
    }
    r = eval_expr(node, env)
    a, a_s, a_t, a_tt = r.val, r.d1[0], r.d1[1], r.d2[1, 1]
    return a**2 * (a_s**2 + 2.0 * kappa) + 2.0 * a * a_tt - 3.0 * a_t**2
