import math

import numpy as np
import pytest

from nullcyl.errors import EvalDomainError, StencilError
from nullcyl.jets import (
    QuinticHermite1D,
    Taylor2,
    UNARY_FUNCTIONS,
    eval_scalar_field_jet,
    richardson_partial,
)


def _vars(x, y):
    return Taylor2.variable(x, 0, 2), Taylor2.variable(y, 1, 2)


def test_arithmetic_jets():
    x, y = _vars(0.7, -0.3)
    f = x * x * y + x / (y + 2.0) - y
    # f = x^2 y + x/(y+2) - y at (0.7, -0.3)
    fx = 2 * 0.7 * -0.3 + 1 / 1.7
    fy = 0.7**2 - 0.7 / 1.7**2 - 1
    fxx = 2 * -0.3
    fxy = 2 * 0.7 - 1 / 1.7**2
    fyy = 2 * 0.7 / 1.7**3
    assert f.val == pytest.approx(0.49 * -0.3 + 0.7 / 1.7 + 0.3)
    assert np.allclose(f.d1, [fx, fy])
    assert np.allclose(f.d2, [[fxx, fxy], [fxy, fyy]])


def test_unary_functions_chain():
    for name, fn in UNARY_FUNCTIONS.items():
        x = Taylor2.variable(0.4, 0, 1)
        g = fn(x * x + Taylor2.constant(0.5, 1))
        u = 0.4**2 + 0.5
        ref = {
            "sin": (math.sin(u), math.cos(u), -math.sin(u)),
            "cos": (math.cos(u), -math.sin(u), -math.cos(u)),
            "exp": (math.exp(u), math.exp(u), math.exp(u)),
            "log": (math.log(u), 1 / u, -1 / u**2),
            "sqrt": (math.sqrt(u), 0.5 / math.sqrt(u), -0.25 * u**-1.5),
            "sinh": (math.sinh(u), math.cosh(u), math.sinh(u)),
            "cosh": (math.cosh(u), math.sinh(u), math.cosh(u)),
        }[name]
        du = 2 * 0.4
        assert g.val == pytest.approx(ref[0])
        assert g.d1[0] == pytest.approx(ref[1] * du)
        assert g.d2[0, 0] == pytest.approx(ref[2] * du * du + ref[1] * 2.0)


def test_pow_const():
    x = Taylor2.variable(1.3, 0, 1)
    g = x.pow_const(2.5)
    assert g.val == pytest.approx(1.3**2.5)
    assert g.d1[0] == pytest.approx(2.5 * 1.3**1.5)
    assert g.d2[0, 0] == pytest.approx(2.5 * 1.5 * 1.3**0.5)


def test_domain_errors():
    x = Taylor2.variable(-2.0, 0, 1)
    with pytest.raises(EvalDomainError):
        UNARY_FUNCTIONS["log"](x)
    with pytest.raises(EvalDomainError):
        UNARY_FUNCTIONS["sqrt"](x)
    with pytest.raises(EvalDomainError):
        x / Taylor2.constant(0.0, 1)


def test_quintic_hermite_reproduces_quintics():
    coeffs = np.array([0.3, -1.2, 0.5, 2.0, -0.7, 0.1])

    def p(x):
        return np.polyval(coeffs, x)

    dp = np.polyder(coeffs)
    ddp = np.polyder(dp)
    xs = np.linspace(0.0, 2.0, 7)
    fn = QuinticHermite1D(xs, p(xs), np.polyval(dp, xs), np.polyval(ddp, xs))
    for x in np.linspace(0.0, 2.0, 41):
        f0, f1, f2 = fn.jet(x)
        assert f0 == pytest.approx(p(x), abs=1e-11)
        assert f1 == pytest.approx(np.polyval(dp, x), abs=1e-10)
        assert f2 == pytest.approx(np.polyval(ddp, x), abs=1e-9)


def test_quintic_hermite_out_of_range():
    fn = QuinticHermite1D([0.0, 1.0], [0.0, 1.0], [1.0, 1.0], [0.0, 0.0])
    with pytest.raises(EvalDomainError):
        fn.jet(1.5)


def test_richardson_partial():
    def f(u):
        return math.sin(u[0]) * math.exp(u[1])

    point = np.array([0.4, -0.2])
    val, err = richardson_partial(f, point, 0, 1e-3)
    assert val == pytest.approx(math.cos(0.4) * math.exp(-0.2), abs=1e-10)
    assert err < 1e-6


def test_eval_scalar_field_jet():
    def f(u):
        return u[0] ** 2 * math.cos(u[1])

    domain = ((-1.0, 1.0), (-1.0, 1.0))
    point = np.array([0.3, 0.5])
    grad, err = eval_scalar_field_jet(f, point, domain, 1e-4)
    assert grad == pytest.approx(
        [2 * 0.3 * math.cos(0.5), -(0.3**2) * math.sin(0.5)], abs=1e-8
    )
    assert err < 1e-6
    with pytest.raises(StencilError):
        eval_scalar_field_jet(f, np.array([1.0, 0.0]), domain, 1e-4)
