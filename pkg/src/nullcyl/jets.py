"""Second-order forward-mode Taylor arithmetic and finite-difference helpers.

A Taylor2 carries the value, gradient and full Hessian of a scalar with
respect to the immersion parameters.  Propagating them through closed-form
expressions gives derivatives exact to roundoff; third derivatives, needed
only for directional derivatives of derived scalar fields, are obtained by
Richardson-extrapolated central differences.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvalDomainError, StencilError


@dataclass(frozen=True)
class Taylor2:
    """value + gradient + Hessian of a scalar w.r.t. n parameters."""

    val: float
    d1: np.ndarray  # (n,)
    d2: np.ndarray  # (n, n), symmetric

    @staticmethod
    def constant(c, n):
        return Taylor2(float(c), np.zeros(n), np.zeros((n, n)))

    @staticmethod
    def variable(value, index, n):
        d1 = np.zeros(n)
        d1[index] = 1.0
        return Taylor2(float(value), d1, np.zeros((n, n)))

    def _coerce(self, other):
        if isinstance(other, Taylor2):
            return other
        return Taylor2.constant(other, self.d1.shape[0])

    def __add__(self, other):
        o = self._coerce(other)
        return Taylor2(self.val + o.val, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Taylor2(self.val - o.val, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Taylor2(-self.val, -self.d1, -self.d2)

    def __mul__(self, other):
        o = self._coerce(other)
        outer = np.outer(self.d1, o.d1)
        return Taylor2(
            self.val * o.val,
            self.val * o.d1 + o.val * self.d1,
            self.val * o.d2 + o.val * self.d2 + outer + outer.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.val == 0.0:
            raise EvalDomainError("division by zero")
        return self * o._chain(1.0 / o.val, -1.0 / o.val**2, 2.0 / o.val**3)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def _chain(self, f0, f1, f2):
        """Compose with a scalar function given (f, f', f'') at self.val."""
        outer = np.outer(self.d1, self.d1)
        return Taylor2(f0, f1 * self.d1, f1 * self.d2 + f2 * outer)

    def pow_const(self, p):
        v = self.val
        if v == 0.0 and p < 2:
            if p == 0.0:
                return Taylor2.constant(1.0, self.d1.shape[0])
            raise EvalDomainError(f"zero base with exponent {p}")
        if v < 0.0 and p != int(p):
            raise EvalDomainError("negative base with fractional exponent")
        return self._chain(v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))


def _sin(x):
    s, c = math.sin(x.val), math.cos(x.val)
    return x._chain(s, c, -s)


def _cos(x):
    s, c = math.sin(x.val), math.cos(x.val)
    return x._chain(c, -s, -c)


def _exp(x):
    e = math.exp(x.val)
    return x._chain(e, e, e)


def _log(x):
    if x.val <= 0.0:
        raise EvalDomainError(f"log of non-positive value {x.val}")
    return x._chain(math.log(x.val), 1.0 / x.val, -1.0 / x.val**2)


def _sqrt(x):
    if x.val < 0.0:
        raise EvalDomainError(f"sqrt of negative value {x.val}")
    if x.val == 0.0:
        raise EvalDomainError("sqrt at zero is not differentiable")
    r = math.sqrt(x.val)
    return x._chain(r, 0.5 / r, -0.25 / (r * x.val))


def _sinh(x):
    s, c = math.sinh(x.val), math.cosh(x.val)
    return x._chain(s, c, s)


def _cosh(x):
    s, c = math.sinh(x.val), math.cosh(x.val)
    return x._chain(c, s, c)


UNARY_FUNCTIONS = {
    "sin": _sin,
    "cos": _cos,
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "sinh": _sinh,
    "cosh": _cosh,
}


@dataclass(frozen=True)
class Jet2:
    """2-jet of an ambient-space-valued map at one parameter point."""

    value: np.ndarray  # (k,)
    first: np.ndarray  # (k, n)
    second: np.ndarray  # (k, n, n), symmetric in the parameter indices

    @property
    def ambient_dim(self):
        return self.value.shape[0]

    @property
    def n_params(self):
        return self.first.shape[1]


class JetFunction1D:
    """A smooth function of one variable exposing exact 2-jets.

    Subclasses provide value/derivative/second-derivative; used to splice
    numerically constructed profiles (ODE solutions, integrated curves)
    into immersion components.
    """

    name = "f"

    def jet(self, x):
        raise NotImplementedError

    def __call__(self, t2: Taylor2) -> Taylor2:
        f0, f1, f2 = self.jet(t2.val)
        return t2._chain(f0, f1, f2)


class QuinticHermite1D(JetFunction1D):
    """Piecewise-quintic interpolant from (x, f, f', f'') node data.

    C^2 by construction; second-derivative accuracy inherits the node data,
    which makes it suitable for splicing ODE solutions into jets.
    """

    def __init__(self, xs, f, fp, fpp, name="f"):
        self.xs = np.asarray(xs, dtype=float)
        self.f = np.asarray(f, dtype=float)
        self.fp = np.asarray(fp, dtype=float)
        self.fpp = np.asarray(fpp, dtype=float)
        self.name = name
        if not np.all(np.diff(self.xs) > 0):
            raise ValueError("nodes must be strictly increasing")

    def jet(self, x):
        xs = self.xs
        slack = 1e-9 * (1.0 + abs(xs[-1] - xs[0]))
        if x < xs[0] - slack or x > xs[-1] + slack:
            raise EvalDomainError(
                f"{self.name} evaluated at {x} outside [{xs[0]}, {xs[-1]}]"
            )
        x = min(max(x, xs[0]), xs[-1])
        i = int(np.searchsorted(xs, x, side="right") - 1)
        i = min(max(i, 0), len(xs) - 2)
        h = xs[i + 1] - xs[i]
        u = (x - xs[i]) / h
        coeffs = _quintic_coeffs(
            self.f[i], self.fp[i] * h, self.fpp[i] * h * h,
            self.f[i + 1], self.fp[i + 1] * h, self.fpp[i + 1] * h * h,
        )
        p = sum(c * u**j for j, c in enumerate(coeffs))
        pd = sum(j * c * u ** (j - 1) for j, c in enumerate(coeffs) if j >= 1)
        pdd = sum(
            j * (j - 1) * c * u ** (j - 2) for j, c in enumerate(coeffs) if j >= 2
        )
        return p, pd / h, pdd / (h * h)


def _quintic_coeffs(f0, g0, h0, f1, g1, h1):
    """Monomial coefficients of the quintic with given scaled end data on [0,1]."""
    c0 = f0
    c1 = g0
    c2 = 0.5 * h0
    c3 = 10 * (f1 - f0) - 6 * g0 - 4 * g1 - 1.5 * h0 + 0.5 * h1
    c4 = -15 * (f1 - f0) + 8 * g0 + 7 * g1 + 1.5 * h0 - h1
    c5 = 6 * (f1 - f0) - 3 * (g0 + g1) - 0.5 * (h0 - h1)
    return (c0, c1, c2, c3, c4, c5)


# ---------------------------------------------------------------------------
# outer finite differences


def richardson_partial(field, point, index, h):
    """Richardson-extrapolated central difference of `field` along one parameter.

    Returns (derivative, error_estimate); works for scalar- or array-valued
    fields.
    """
    point = np.asarray(point, dtype=float)

    def central(step):
        up = point.copy()
        um = point.copy()
        up[index] += step
        um[index] -= step
        return (np.asarray(field(up)) - np.asarray(field(um))) / (2.0 * step)

    d1 = central(h)
    d2 = central(h / 2.0)
    extrap = (4.0 * d2 - d1) / 3.0
    err = np.max(np.abs(d2 - d1)) / 3.0
    return extrap, float(err)


def eval_scalar_field_jet(field, point, domain=None, h=None):
    """Gradient of a derived scalar field by Richardson central differences.

    `field` maps a parameter point to a float (or array).  Returns
    (gradient, error_estimate).  Raises StencilError when the stencil would
    leave the declared closed domain.
    """
    point = np.asarray(point, dtype=float)
    n = point.shape[0]
    grads = []
    err = 0.0
    for j in range(n):
        hj = h if h is not None else 1e-4 * (1.0 + abs(point[j]))
        if domain is not None:
            lo, hi = domain[j]
            if point[j] - hj < lo or point[j] + hj > hi:
                raise StencilError(
                    f"stencil of width {hj} leaves [{lo}, {hi}] at parameter {j}"
                )
        dj, ej = richardson_partial(field, point, j, hj)
        grads.append(dj)
        err = max(err, ej)
    return np.array(grads), err
