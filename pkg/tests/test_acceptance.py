"""Acceptance suite: the end-to-end numerical contracts for the package.

Each test states a quantitative contract (a tolerance and a sample plan) and
fails honestly if the implementation stops meeting it.
"""

import time

import numpy as np
import pytest

from nullcyl.constructions import (
    gen_example61,
    gen_isotropic,
    gen_product,
    gen_pseudo_umbilical_n,
    gen_pseudo_umbilical_surface,
    gen_ruled_flat,
    solve_alpha_hat_ode,
)
from nullcyl.curves import (
    V1,
    V2,
    V3,
    half_curvature_curve,
    half_curvature_eta,
    integrate_lc2_curve,
    HALF_CURVATURE_CURVE_EXPRS,
    circle_cone_curve_exprs,
)
from nullcyl.dsl import (
    eval_expr,
    eval_jet2,
    parse_expression,
    parse_immersion_spec,
    pretty,
)
from nullcyl.errors import DslSyntaxError, UndeclaredIdentifierError
from nullcyl.frame import build_adapted_frame
from nullcyl.invariants import (
    analyze_point,
    intrinsic_gauss_curvature,
    second_fundamental_form,
    structure_residuals,
)
from nullcyl.jets import Jet2, Taylor2, richardson_partial
from nullcyl.report import analyze_grid
from nullcyl.verify import run_suite

CURVED = parse_immersion_spec("""
params s, t;
ambient 4;
domain s in [0.3, 1.7]; domain t in [0.3, 1.7];
map [(2 + sin(s)) * (3 - cos(t)) / (2 * sqrt2),
     (2 + sin(s)) * sin(t),
     (2 + sin(s)) * (3 * cos(t) - 1) / (2 * sqrt2),
     s];
""")


def _families():
    return (
        gen_pseudo_umbilical_surface(1.0),
        gen_example61(),
        gen_isotropic(3, 1, 1.0),
        gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS),
        CURVED,
    )


def _sample_grid(spec, per_spec=100):
    rank = spec.n_params
    side = int(np.ceil(per_spec ** (1.0 / rank)))
    return spec.interior_grid((side,) * rank)


def test_frame_lemma_across_families():
    """h(e1,e1) = (e1(a)+a^2) theta, h(e1,ea) = ea(a) theta,
    h(ea,ea) = -beta_a theta + xi, h(ea,eb) = 0, on >=100 interior samples
    of five families, within 1e-6 (frame build residuals within 1e-8)."""
    t0 = time.monotonic()
    worst = 0.0
    worst_build = 0.0
    for spec in _families():
        pts = _sample_grid(spec)
        assert len(pts) >= 100
        for p in pts:
            jet = eval_jet2(spec, p)
            frame = build_adapted_frame(spec, p)
            sff = second_fundamental_form(jet, frame)
            n = frame.n
            worst_build = max(
                worst_build,
                frame.residuals["decomposition"],
                frame.residuals["cone"],
            )
            pred11 = (frame.e1_alpha + frame.alpha**2) * frame.theta
            worst = max(worst, np.abs(sff.ambient(0, 0) - pred11).max())
            for a in range(1, n):
                worst = max(
                    worst,
                    np.abs(
                        sff.ambient(0, a) - frame.ea_alpha[a - 1] * frame.theta
                    ).max(),
                    np.abs(
                        sff.ambient(a, a)
                        - (-frame.beta[a - 1] * frame.theta + frame.xi)
                    ).max(),
                )
                for b in range(a + 1, n):
                    worst = max(worst, np.abs(sff.ambient(a, b)).max())
    assert worst < 1e-6
    assert worst_build < 1e-8
    assert time.monotonic() - t0 < 30.0


def test_structure_equations_and_negative_controls():
    """Gauss/Codazzi/Ricci residuals < 1e-4 on clean jets; corrupted jets
    push the corresponding residual above 1e-2."""
    for spec in _families():
        for p in spec.interior_grid((2,) * spec.n_params):
            res = structure_residuals(spec, p)
            assert max(res["gauss"], res["codazzi"], res["ricci"]) < 1e-4, (
                spec.param_names,
                p,
                res,
            )

    def zero_second(jet):
        return Jet2(jet.value, jet.first, jet.second * 0.0)

    def bend_second(jet):
        return Jet2(
            jet.value, jet.first, jet.second + 0.2 * np.sin(3.0 * jet.value[0])
        )

    ruled = gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS)
    assert (
        structure_residuals(CURVED, CURVED.midpoint(), jet_transform=zero_second)[
            "gauss"
        ]
        > 1e-2
    )
    assert (
        structure_residuals(ruled, ruled.midpoint(), jet_transform=bend_second)[
            "codazzi"
        ]
        > 1e-2
    )
    assert (
        structure_residuals(ruled, ruled.midpoint(), jet_transform=zero_second)[
            "ricci"
        ]
        > 1e-2
    )


def test_classification_round_trips():
    """Each generator lands in its own class everywhere on an interior grid;
    totally umbilical never holds."""
    pu = gen_pseudo_umbilical_surface(1.0)
    for p in pu.interior_grid((4, 4)):
        rep = analyze_point(pu, p)
        assert rep.flags["pseudo_umbilical"]
        assert rep.flags["marginally_trapped"]
        assert not rep.flags["minimal"]
        assert not rep.flags["totally_umbilical"]
        assert rep.flags["flat"]

    for n in (3, 4):
        iso = gen_isotropic(n, 1, 1.0)
        for p in iso.interior_grid((3,) * n):
            rep = analyze_point(iso, p)
            assert rep.lambda_iso < 1e-6
            assert rep.flags["isotropic"]
            assert rep.flags["pseudo_umbilical"]
            assert rep.flags["marginally_trapped"]
            assert np.abs(rep.A_H).max() < 1e-5
            assert not rep.flags["totally_umbilical"]

    ruled = gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS)
    for p in ruled.interior_grid((4, 4)):
        rep = analyze_point(ruled, p)
        assert abs(rep.K) < 1e-6
        assert rep.flags["flat"]
        assert not rep.flags["flat_normal_bundle"]
        assert not rep.flags["totally_umbilical"]

    prod = gen_product(circle_cone_curve_exprs(), (0.0, 2.0))
    for p in prod.interior_grid((4, 4)):
        rep = analyze_point(prod, p)
        assert abs(rep.alpha) < 1e-8
        assert rep.flags["alpha_zero"]
        assert not rep.flags["totally_umbilical"]


def test_ode_closure_and_beta_relation():
    """The linear profile 1+s closes the radial ODE to 1e-8 on [0, 2]; for
    n=4 the generated family satisfies e1(a) + a^2 = -3 beta to 1e-5."""
    sol = solve_alpha_hat_ode(4, -1, 1.0, (1.0, 1.0), (0.0, 2.0))
    assert np.abs(sol.alpha_hat - (1.0 + sol.ts)).max() < 1e-8

    n = 4
    spec = gen_pseudo_umbilical_n(n, -1, 1.0, (1.0, 0.0), (0.0, 1.0))
    sol = solve_alpha_hat_ode(n, -1, 1.0, (1.0, 0.0), (0.0, 1.0))
    pts = spec.interior_grid((5, 2, 2, 1))
    assert len(pts) == 20
    coef = (2.0 * n - 2.0) / (n - 2.0)
    for p in pts:
        frame = build_adapted_frame(spec, p)
        beta = sol.beta(p[0])
        assert abs(frame.e1_alpha + frame.alpha**2 + coef * beta) < 1e-5
        assert np.abs(frame.beta - beta).max() < 1e-5


def test_curve_suite():
    """Integrated curve matches the closed form to 1e-6, drifts below 1e-6
    over a period, and the recomputed curvature is -1/2 to 1e-6."""
    two_pi = 2.0 * np.pi
    curve = integrate_lc2_curve(
        lambda t: -0.5, (V1, V3, V2), (0.0, two_pi), tol=1e-8,
        max_h=two_pi / 512,
    )
    assert curve.max_constraint_drift() < 1e-6
    for t, g, e in zip(curve.ts, curve.gammas, curve.etas):
        assert np.abs(g - half_curvature_curve(t)).max() < 1e-6
        assert np.abs(e - half_curvature_eta(t)).max() < 1e-6
    assert np.abs(curve.gammas[-1] - curve.gammas[0]).max() < 1e-6
    _, kappas = curve.recomputed_kappa()
    assert np.abs(kappas + 0.5).max() < 1e-6


def test_cross_checked_gauss_curvature():
    """Extrinsic K (via the second fundamental form) agrees with intrinsic K
    (metric differencing) to 1e-3 on curved and flat samples."""
    for spec in (CURVED, gen_pseudo_umbilical_surface(1.0),
                 gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS)):
        for p in spec.interior_grid((4, 4)):
            jet = eval_jet2(spec, p)
            frame = build_adapted_frame(spec, p)
            sff = second_fundamental_form(jet, frame)
            from nullcyl.invariants import gauss_curvature

            assert abs(
                gauss_curvature(sff) - intrinsic_gauss_curvature(spec, p)
            ) < 1e-3


_LEAVES = ["s", "t", "0.5", "2", "pi", "1.25"]
_UNARY = ["sin", "cos", "exp", "sinh", "cosh"]


def _rand_expr(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(_LEAVES)
    kind = rng.choice(["bin", "un", "neg", "pow"])
    if kind == "bin":
        op = rng.choice(["+", "-", "*", "/"])
        rhs = _rand_expr(rng, depth - 1)
        if op == "/":
            rhs = f"(2 + sin({rhs}))"
        return f"({_rand_expr(rng, depth - 1)}) {op} ({rhs})"
    if kind == "un":
        return f"{rng.choice(_UNARY)}({_rand_expr(rng, depth - 1)})"
    if kind == "neg":
        return f"-({_rand_expr(rng, depth - 1)})"
    return f"(2 + sin({_rand_expr(rng, depth - 1)}))^{rng.choice(['2', '-1', '0.5'])}"


def test_random_expressions_jet_vs_differencing():
    """100 random expressions: exact-jet gradients match Richardson
    extrapolation to 1e-7 relative; pretty-print round trips to 1e-14."""
    rng = np.random.default_rng(20240615)
    checked = 0
    while checked < 100:
        text = _rand_expr(rng, 3)
        node = parse_expression(text, ["s", "t"])
        point = rng.uniform(-0.8, 0.8, size=2)

        def scalar(u):
            env = {
                "s": Taylor2.variable(u[0], 0, 2),
                "t": Taylor2.variable(u[1], 1, 2),
            }
            return eval_expr(node, env).val

        env = {
            "s": Taylor2.variable(point[0], 0, 2),
            "t": Taylor2.variable(point[1], 1, 2),
        }
        result = eval_expr(node, env)
        if not np.isfinite(result.val) or np.abs(result.d1).max() > 1e3:
            continue
        for i in range(2):
            fd, _ = richardson_partial(scalar, point, i, 1e-3)
            scale = 1.0 + abs(result.d1[i])
            assert abs(result.d1[i] - fd) / scale < 1e-7, text

        node2 = parse_expression(pretty(node), ["s", "t"])
        r2 = eval_expr(node2, env)
        assert abs(result.val - r2.val) / (1.0 + abs(result.val)) < 1e-14
        checked += 1

    with pytest.raises((DslSyntaxError, UndeclaredIdentifierError)) as exc:
        parse_immersion_spec("params s; ambient 3; map [s + ];")
    assert exc.value.line == 1 and exc.value.col > 0


def test_determinism():
    """The verify suite and grid analysis are byte-for-byte reproducible."""
    assert run_suite().to_text() == run_suite().to_text()
    spec = gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS)
    a = analyze_grid(spec, (16, 16)).to_json()
    b = analyze_grid(spec, (16, 16)).to_json()
    assert a == b
