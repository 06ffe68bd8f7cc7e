import numpy as np
import pytest

from nullcyl.dsl import eval_jet2, parse_immersion_spec
from nullcyl.errors import NotOnCylinderError
from nullcyl.frame import (
    build_adapted_frame,
    build_e1_alpha,
    build_theta,
    check_on_cylinder,
    first_fundamental_form,
    frame_pairing_residual,
)
from nullcyl.lorentz import minkowski_dot
from nullcyl.constructions import (
    gen_example61,
    gen_isotropic,
    gen_pseudo_umbilical_surface,
)

OFF_CONE = parse_immersion_spec(
    "params s, t; ambient 4;"
    "domain s in [0, 2]; domain t in [0, 2];"
    "map [2, cos(t), sin(t), s];"
)


def test_check_on_cylinder():
    spec = gen_pseudo_umbilical_surface(1.0)
    jet = eval_jet2(spec, spec.midpoint())
    check = check_on_cylinder(jet)
    assert check.admissible
    assert abs(check.cone_residual) < 1e-12

    bad = eval_jet2(OFF_CONE, [1.0, 1.0])
    assert not check_on_cylinder(bad).admissible


def test_first_fundamental_form_positive_definite():
    spec = gen_example61()
    for p in spec.interior_grid((4, 4)):
        g = first_fundamental_form(eval_jet2(spec, p))
        assert np.all(np.linalg.eigvalsh(g) > 0)


def test_theta_is_null_and_future():
    spec = gen_isotropic(3, 1, 1.0)
    jet = eval_jet2(spec, spec.midpoint())
    theta = build_theta(jet)
    assert theta[0] > 0
    assert theta[-1] == 0.0
    assert abs(minkowski_dot(theta, theta)) < 1e-12


def test_e1_alpha_decomposition():
    spec = gen_pseudo_umbilical_surface(1.0)
    for p in spec.interior_grid((3, 3)):
        jet = eval_jet2(spec, p)
        theta = build_theta(jet)
        e1, alpha, res = build_e1_alpha(jet, theta)
        assert res < 1e-10
        assert abs(minkowski_dot(e1, e1) - 1.0) < 1e-10
        d_last = np.zeros(4)
        d_last[-1] = 1.0
        assert np.abs(e1 - alpha * theta - d_last).max() < 1e-10
        # closed form: alpha = 1/(s + c1) for this surface
        assert alpha == pytest.approx(1.0 / (p[0] + 1.0), abs=1e-10)


def test_adapted_frame_pairings():
    for spec in (gen_pseudo_umbilical_surface(1.0), gen_isotropic(3, 1, 1.0),
                 gen_example61()):
        for p in spec.interior_grid((2,) * spec.n_params):
            frame = build_adapted_frame(spec, p, with_derivatives=False)
            assert frame_pairing_residual(frame) < 1e-10
            # coordinate coefficients reproduce the frame vectors
            jet = eval_jet2(spec, p)
            for i, v in enumerate(frame.e):
                rebuilt = frame.coord_coeffs[i] @ jet.first.T
                assert np.abs(rebuilt - v).max() < 1e-9


def test_frame_derivatives_match_closed_form():
    # alpha = 1/(s + a(t)) with a = t on the ruled surface:
    # e1(alpha) = -1/(s+t)^2, e2(alpha) = -a'(t)/(s+t)^2 * 1/(s+t)
    from nullcyl.constructions import gen_ruled_flat
    from nullcyl.curves import HALF_CURVATURE_CURVE_EXPRS

    spec = gen_ruled_flat("t", HALF_CURVATURE_CURVE_EXPRS)
    for p in [(1.0, 1.0), (0.5, 2.0)]:
        frame = build_adapted_frame(spec, np.array(p))
        s, t = p
        assert frame.alpha == pytest.approx(1.0 / (s + t), abs=1e-10)
        assert frame.e1_alpha == pytest.approx(-1.0 / (s + t) ** 2, abs=1e-7)
        assert frame.ea_alpha[0] == pytest.approx(
            -1.0 / (s + t) ** 3, abs=1e-7
        )


def test_off_cylinder_detected():
    # inadmissible points are reported, not silently framed
    jet = eval_jet2(OFF_CONE, [1.0, 1.0])
    assert not check_on_cylinder(jet).admissible
    from nullcyl.invariants import analyze_point

    rep = analyze_point(OFF_CONE, [1.0, 1.0])
    assert not rep.admissible
    assert np.isnan(rep.alpha)


def test_off_cone_raises_in_cone_mode():
    from nullcyl.constructions import cone_shape_operators

    spec = parse_immersion_spec(
        "params t; ambient 3; domain t in [0, 2]; map [2, cos(t), sin(t)];"
    )
    with pytest.raises(NotOnCylinderError):
        cone_shape_operators(spec, [1.0])
