"""The theorem-verification suite: one named check per mathematical claim.

Checks come in two numerical kinds.  "algebraic" checks evaluate exact
pointwise algebra on machine-precision jets; "differencing" checks involve
an outer finite-difference or integration layer and are therefore limited
by stencil truncation.  Tightening the differencing tolerance far below
that limit (say to 1e-14) makes exactly the differencing checks fail -- a
useful sensitivity demonstration, not a defect.

Each check carries a claim string; the same strings appear in the
claim-to-check map in the README.
"""

import json
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .constructions import (
    cone_shape_operators,
    gen_example61,
    gen_isotropic,
    gen_product,
    gen_pseudo_umbilical_n,
    gen_pseudo_umbilical_surface,
    gen_ruled_flat,
    gen_sigma_tau,
    isotropy_pde_residual,
    solve_alpha_hat_ode,
)
from .curves import (
    HALF_CURVATURE_CURVE_EXPRS,
    V1,
    V2,
    V3,
    circle_cone_curve_exprs,
    half_curvature_curve,
    integrate_lc2_curve,
)
from .dsl import eval_jet2, eval_value
from .frame import build_adapted_frame, first_fundamental_form, frame_pairing_residual
from .invariants import (
    analyze_point,
    frame_structure_residuals,
    mean_curvature,
    second_fundamental_form,
    structure_residuals,
)
from .lorentz import minkowski_dot

DEFAULT_TOL_ALGEBRAIC = 1e-6
DEFAULT_TOL_DIFFERENCING = 1e-4


@dataclass(frozen=True)
class CheckResult:
    name: str
    claim: str
    kind: str  # 'algebraic' | 'differencing'
    value: float
    tol: float
    op: str  # '<' (residual bound) or '>' (negative control)
    passed: bool


@dataclass(frozen=True)
class SuiteResult:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_text(self):
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{status} {c.name} [{c.kind}] value={c.value!r} {c.op} "
                f"tol={c.tol!r} :: {c.claim}"
            )
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{len(self.checks)} checks, {n_fail} failed")
        return "\n".join(lines) + "\n"

    def to_json(self):
        obj = [
            {
                "name": c.name,
                "claim": c.claim,
                "kind": c.kind,
                "value": c.value,
                "tol": c.tol,
                "op": c.op,
                "passed": c.passed,
            }
            for c in self.checks
        ]
        return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _grid(spec, per_axis):
    return spec.interior_grid((per_axis,) * spec.n_params)


def _frame_sff(spec, point, tol, with_derivatives=True):
    jet = eval_jet2(spec, point)
    frame = build_adapted_frame(spec, point, tol, with_derivatives=with_derivatives)
    return jet, frame, second_fundamental_form(jet, frame)


def run_suite(tol_algebraic=DEFAULT_TOL_ALGEBRAIC,
              tol_differencing=DEFAULT_TOL_DIFFERENCING,
              tol=DEFAULT_TOL, seed=20240615):
    """Run every check; deterministic order and output."""
    checks = []

    def add(name, claim, kind, value, op="<", fixed_tol=None):
        if fixed_tol is not None:
            bound = fixed_tol
        else:
            bound = tol_algebraic if kind == "algebraic" else tol_differencing
        value = float(value)
        passed = value < bound if op == "<" else value > bound
        checks.append(CheckResult(name, claim, kind, value, bound, op, passed))

    # -- sample specs ------------------------------------------------------
    s_pu = gen_pseudo_umbilical_surface(1.0)
    s_61 = gen_example61()
    s_iso3 = gen_isotropic(3, 1, 1.0)
    s_iso4 = gen_isotropic(4, 1, 1.0)
    s_flat0 = gen_ruled_flat("0", HALF_CURVATURE_CURVE_EXPRS)
    s_flatt = gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS)
    s_prod = gen_product(circle_cone_curve_exprs(), (0.0, 2.0))
    families = (s_pu, s_61, s_iso3, s_flat0, s_prod)

    # -- frame lemma: algebraic parts --------------------------------------
    pair_res = 0.0
    decomp_res = 0.0
    a_theta_res = 0.0
    light_res = 0.0
    h_mixed_res = 0.0
    mean_res = 0.0
    beta_norm_res = 0.0
    tu_fraction = 0.0
    n_tu = 0
    for spec in families:
        for p in _grid(spec, 3):
            jet, frame, sff = _frame_sff(spec, p, tol, with_derivatives=False)
            n = spec.n_params
            pair_res = max(pair_res, frame_pairing_residual(frame))
            d_last = np.zeros(spec.ambient_dim)
            d_last[-1] = 1.0
            decomp_res = max(
                decomp_res,
                float(np.abs(frame.e[0] - frame.alpha * frame.theta - d_last).max()),
            )
            want = np.diag([0.0] + [-1.0] * (n - 1))
            a_theta = -sff.h_xi * minkowski_dot(sff.theta, sff.theta) - sff.h_theta * (
                minkowski_dot(sff.xi, sff.theta)
            )
            a_theta_res = max(a_theta_res, float(np.abs(a_theta - want).max()))
            h11 = sff.ambient(0, 0)
            light_res = max(light_res, abs(minkowski_dot(h11, h11)))
            for a in range(1, n):
                for b in range(1, n):
                    if a != b:
                        h_mixed_res = max(
                            h_mixed_res, float(np.abs(sff.ambient(a, b)).max())
                        )
                haa = sff.ambient(a, a)
                beta_norm_res = max(
                    beta_norm_res,
                    abs(minkowski_dot(haa, haa) - 2.0 * frame.beta[a - 1]),
                )
            H, _, _ = mean_curvature(sff, frame, tol)
            mean_res = max(
                mean_res, abs(minkowski_dot(H, frame.theta) + (n - 1) / n)
            )
    add("frame_pairing",
        "the adapted frame {e_1..e_n; theta, xi} is pseudo-orthonormal with "
        "<theta,xi> = -1",
        "algebraic", pair_res)
    add("frame_decomposition",
        "the cylinder direction decomposes as e_1 - alpha*theta",
        "algebraic", decomp_res)
    add("shape_operator_theta",
        "A_theta = diag(0, -1, ..., -1) in the adapted frame",
        "algebraic", a_theta_res)
    add("h_first_direction_null",
        "h(e_1,e_1) is light-like (proportional to theta)",
        "algebraic", light_res)
    add("h_mixed_vanishes",
        "h(e_a,e_b) = 0 for distinct a,b >= 2",
        "algebraic", h_mixed_res)
    add("h_diagonal_norm",
        "<h(e_a,e_a), h(e_a,e_a)> = 2 beta_a",
        "algebraic", beta_norm_res)
    add("mean_curvature_form",
        "H = H_theta * theta + ((n-1)/n) * xi",
        "algebraic", mean_res)

    # -- frame lemma: differencing parts, structure equations --------------
    fb = fd = fe = 0.0
    gauss = codazzi = ricci = 0.0
    for spec in (s_pu, s_61, s_flatt):
        for p in _grid(spec, 2):
            res = structure_residuals(spec, p, tol)
            fb = max(fb, res["frame_b"])
            fd = max(fd, res["frame_d"])
            fe = max(fe, res["frame_e"])
            gauss = max(gauss, res["gauss"])
            codazzi = max(codazzi, res["codazzi"])
            ricci = max(ricci, res["ricci"])
    add("connection_tangent",
        "nabla_{e_1} e_1 = 0 and nabla_{e_a} e_1 = alpha e_a",
        "differencing", fb)
    add("connection_normal",
        "nabla^perp_{e_1} theta = alpha theta and nabla^perp_{e_a} theta = 0",
        "differencing", fd)
    add("h_frame_components",
        "h(e_1,e_1) = (e_1(alpha)+alpha^2) theta, h(e_1,e_a) = e_a(alpha) theta,"
        " h(e_a,e_a) = -beta_a theta + xi",
        "differencing", fe)
    add("gauss_equation", "the Gauss equation holds", "differencing", gauss)
    add("codazzi_equation", "the Codazzi equation holds", "differencing", codazzi)
    add("ricci_equation", "the Ricci equation holds", "differencing", ricci)

    # -- classification round trips ----------------------------------------
    pu_res = 0.0
    for p in _grid(s_pu, 3):
        rep = analyze_point(s_pu, p, tol, seed=seed)
        _, frame, _ = _frame_sff(s_pu, p, tol, with_derivatives=False)
        dev = rep.A_H - (np.trace(rep.A_H) / 2.0) * np.eye(2)
        pu_res = max(
            pu_res,
            float(np.abs(dev).max()),
            abs(rep.e1_alpha + rep.alpha**2),
            float(np.abs(rep.ea_alpha).max()),
            float(np.abs(rep.beta).max()),
            abs(rep.K or 0.0),
            rep.lambda_iso,
            float(np.abs(rep.H - 0.5 * frame.xi).max()),
        )
        if not (rep.flags["pseudo_umbilical"] and rep.flags["isotropic"]
                and rep.flags["flat"] and rep.flags["flat_normal_bundle"]
                and rep.flags["marginally_trapped"]):
            pu_res = max(pu_res, 1.0)
    add("pseudo_umbilical_surface",
        "the explicit surface over the kappa = -1/2 curve is pseudo-umbilical,"
        " 0-isotropic, flat, has flat normal bundle and is marginally trapped",
        "differencing", pu_res)

    iso_res = 0.0
    trap_res = 0.0
    for spec in (s_iso3, s_iso4):
        for p in _grid(spec, 2):
            rep = analyze_point(spec, p, tol, seed=seed)
            iso_res = max(iso_res, abs(rep.lambda_iso),
                          rep.flag_details["isotropic"]["spread"])
            trap_res = max(trap_res, float(np.abs(rep.A_H).max()))
            if not (rep.flags["isotropic"] and rep.flags["pseudo_umbilical"]
                    and rep.flags["marginally_trapped"]):
                iso_res = max(iso_res, 1.0)
    add("isotropic_family",
        "if the radial factor is linear with slope eps/tau, "
        "then M is 0-isotropic",
        "algebraic", iso_res, fixed_tol=max(tol_algebraic, 1e-5))
    add("marginally_trapped_family",
        "the 0-isotropic family is marginally trapped with A_H = 0",
        "algebraic", trap_res, fixed_tol=max(tol_algebraic, 1e-5))

    metric_res = 0.0
    k_res = 0.0
    for p in _grid(s_flatt, 3):
        jet = eval_jet2(s_flatt, p)
        g = first_fundamental_form(jet)
        s, t = p
        want = np.diag([1.0, (s + t) ** 2])
        metric_res = max(metric_res, float(np.abs(g - want).max()))
    for spec in (s_flat0, s_flatt):
        for p in _grid(spec, 4):
            rep = analyze_point(spec, p, tol, seed=seed)
            k_res = max(k_res, abs(rep.K))
    add("ruled_flat_metric",
        "the ruled surface over a cone curve has metric ds^2 + (s+a(t))^2 dt^2",
        "algebraic", metric_res)
    add("ruled_flat_K",
        "the ruled surfaces over null-position cone curves are flat",
        "algebraic", k_res)

    kp_min = np.inf
    for p in _grid(s_flatt, 3):
        rep = analyze_point(s_flatt, p, tol, seed=seed)
        kp_min = min(kp_min, abs(rep.K_perp))
    add("ruled_nonconstant_offset",
        "a non-constant ruling offset a(t) makes the normal curvature nonzero",
        "algebraic", kp_min, op=">", fixed_tol=1e-3)

    alpha_res = 0.0
    for p in _grid(s_prod, 4):
        rep = analyze_point(s_prod, p, tol, seed=seed)
        alpha_res = max(alpha_res, abs(rep.alpha))
    add("product_alpha_zero",
        "on a product with the cylinder direction, that direction becomes "
        "tangent: alpha = 0",
        "algebraic", alpha_res, fixed_tol=max(tol_algebraic, 1e-8))

    for spec in (s_pu, s_flat0, s_prod, s_iso3):
        for p in _grid(spec, 2):
            rep = analyze_point(spec, p, tol, seed=seed)
            n_tu += 1
            tu_fraction += float(rep.flags["totally_umbilical"])
    add("never_totally_umbilical",
        "no submanifold of the light-like cylinder is totally umbilical",
        "algebraic", tu_fraction / n_tu, fixed_tol=0.5)

    # -- the tau-slice of the cone ------------------------------------------
    cone_res = 0.0
    for n, tau in ((3, 2.0), (4, 1.0)):
        spec = gen_sigma_tau(n, tau)
        for p in _grid(spec, 2):
            cf = cone_shape_operators(spec, p)
            m = spec.n_params
            cone_res = max(
                cone_res,
                float(np.abs(cf.a_gamma + np.eye(m)).max()),
                float(np.abs(cf.a_eta - np.eye(m) / (2.0 * tau**2)).max()),
            )
    add("sigma_tau_operators",
        "the tau-slice of the cone is totally umbilical with A_gamma = -I and "
        "A_eta = (1/(2 tau^2)) I for a time-like axis",
        "algebraic", cone_res)

    # -- the radial ODE -----------------------------------------------------
    sol = solve_alpha_hat_ode(3, -1, 1.0, (1.0, 1.0), (0.0, 2.0))
    lin_res = float(np.abs(sol.alpha_hat - (1.0 + sol.ts)).max())
    add("ode_linear_solution",
        "alpha_hat = 1 + s solves the radial equation for n = 3, c = -1, "
        "tau = 1",
        "differencing", lin_res)

    n4 = 4
    spec_n4 = gen_pseudo_umbilical_n(n4, -1, 1.0, (1.0, 0.0), (0.0, 1.0))
    sol_n4 = solve_alpha_hat_ode(n4, -1, 1.0, (1.0, 0.0), (0.0, 1.0))
    ahat = sol_n4.alpha_hat_function()
    beta_res = 0.0
    alpha_ode_res = 0.0
    pts = spec_n4.interior_grid((5, 2, 2, 1))
    for p in pts:
        rep = analyze_point(spec_n4, p, tol, seed=seed)
        f0, f1, _ = ahat.jet(p[0])
        beta_closed = -(sol_n4.c + f1**2) / (2.0 * f0**2)
        beta_res = max(beta_res, float(np.abs(rep.beta - beta_closed).max()))
        alpha_ode_res = max(alpha_ode_res, abs(rep.alpha - f1 / f0))
        rel = rep.e1_alpha + rep.alpha**2 + (2.0 * n4 - 2.0) / (n4 - 2.0) * (
            float(rep.beta.mean())
        )
        beta_res = max(beta_res, abs(rel))
        if not rep.flags["pseudo_umbilical"]:
            beta_res = max(beta_res, 1.0)
    add("ode_beta_relation",
        "the radial graph over the tau-slice is pseudo-umbilical with "
        "e_1(alpha) + alpha^2 = -((2n-2)/(n-2)) beta and "
        "beta = -(c + tau^2 alpha_hat'^2)/(2 tau^2 alpha_hat^2)",
        "differencing", beta_res)
    add("ode_alpha_consistency",
        "alpha = alpha_hat'/alpha_hat on the radial graph",
        "differencing", alpha_ode_res)

    # -- curves on the two-dimensional cone ----------------------------------
    curve = integrate_lc2_curve(
        lambda t: -0.5, (V1, V3, V2), (0.0, 2.0 * np.pi), tol=1e-10,
        max_h=2.0 * np.pi / 512.0,
    )
    closed = half_curvature_curve(curve.ts)
    curve_res = float(np.abs(curve.gammas - closed).max())
    add("curve_closed_form",
        "the kappa = -1/2 curve integrates to its closed form "
        "((cos t+1)/2) v1 + (1-cos t) v2 + sin t v3",
        "differencing", curve_res)
    add("curve_constraints",
        "the five curve constraints <gamma,gamma>=0, <gamma',gamma'>=1, "
        "<gamma,eta>=-1, <eta,eta>=0, <gamma',eta>=0 are preserved",
        "differencing", curve.max_constraint_drift())
    _, kappas = curve.recomputed_kappa()
    add("curve_kappa_recovery",
        "kappa = <gamma',eta'> recomputed from samples matches the "
        "prescribed curvature",
        "differencing", float(np.abs(kappas + 0.5).max()))

    # -- Example: the hyperplane graph ---------------------------------------
    plane_res = 0.0
    pu61_res = 0.0
    for p in _grid(s_61, 3):
        x = eval_value(s_61, p)
        plane_res = max(plane_res, abs(x[0] - x[3]))
        rep = analyze_point(s_61, p, tol, seed=seed)
        if not rep.flags["pseudo_umbilical"]:
            pu61_res = max(pu61_res, 1.0)
        dev = rep.A_H - (np.trace(rep.A_H) / 2.0) * np.eye(2)
        pu61_res = max(pu61_res, float(np.abs(dev).max()))
    add("example_hyperplane_containment",
        "the graph s(1, Theta(t), 1) lies in the degenerate hyperplane "
        "x1 = x4",
        "algebraic", plane_res)
    add("example_hyperplane_pseudo_umbilical",
        "the hyperplane graph is pseudo-umbilical",
        "algebraic", pu61_res, fixed_tol=max(tol_algebraic, 1e-5))

    # -- the isotropy PDE -----------------------------------------------------
    pde_iso = max(
        abs(isotropy_pde_residual("s + 1", -0.5, (s0, t0)))
        for s0 in (0.2, 1.0) for t0 in (0.1, 0.8)
    )
    pde_non = min(
        abs(isotropy_pde_residual("s + t", -0.5, (s0, t0)))
        for s0 in (0.2, 1.0) for t0 in (0.1, 0.8)
    )
    add("isotropy_pde_zero",
        "a radial surface is isotropic exactly when alpha_hat^2(alpha_hat_s^2"
        " + 2 kappa) + 2 alpha_hat alpha_hat_tt - 3 alpha_hat_t^2 = 0: "
        "the isotropic side",
        "algebraic", pde_iso)
    add("isotropy_pde_nonzero",
        "a radial surface is isotropic exactly when alpha_hat^2(alpha_hat_s^2"
        " + 2 kappa) + 2 alpha_hat alpha_hat_tt - 3 alpha_hat_t^2 = 0: "
        "the non-isotropic side",
        "algebraic", pde_non, op=">", fixed_tol=1.0)

    return SuiteResult(checks=tuple(checks))
