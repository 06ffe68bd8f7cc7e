"""Point-wise adapted frames on submanifolds of the null hypercylinder.

Given a 2-jet of an immersion phi into E_1^{n+2} with the first n+1
coordinates on the light cone, this builds the tangent frame {e1, ..., en},
the null normal pair {theta, xi} with <theta, xi> = -1, the axial coupling
scalar alpha (from the splitting of the last coordinate direction into
e1 - alpha*theta), and the eigenvalues beta_a of the xi-shape operator
restricted to the complement of e1.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .dsl import eval_jet2
from .errors import NotOnCylinderError, PreconditionError
from .jets import eval_scalar_field_jet
from .lorentz import (
    complete_pseudo_orthonormal,
    minkowski_dot,
    orthonormalize_spacelike,
    symmetric_eigen,
)


@dataclass(frozen=True)
class CylinderCheck:
    """Admissibility diagnostics for one immersion point."""

    cone_residual: float  # signed value of -phi1^2 + sum phi_i^2 (i <= n+1)
    future_flag: bool  # phi1 > 0
    spacelike_flag: bool  # induced metric positive definite
    admissible: bool


@dataclass(frozen=True)
class AdaptedFrame:
    point: np.ndarray
    e: tuple  # n ambient tangent vectors, e1 first
    theta: np.ndarray
    xi: np.ndarray
    alpha: float
    beta: np.ndarray  # (n-1,) eigenvalues, ascending
    e1_alpha: float
    ea_alpha: np.ndarray  # (n-1,)
    coord_coeffs: np.ndarray  # (n, n): e_i = sum_j C[i, j] d/du_j
    metric: np.ndarray  # first fundamental form in parameter coordinates
    residuals: dict = field(default_factory=dict, compare=False)

    @property
    def n(self):
        return len(self.e)


def check_on_cylinder(jet, tol=DEFAULT_TOL):
    """Cone-constraint residual, future flag and space-likeness of a point."""
    phi = jet.value
    k = jet.ambient_dim
    if k != jet.n_params + 2:
        raise PreconditionError(
            f"cylinder mode needs ambient = n+2, got {k} with n = {jet.n_params}"
        )
    res = float(-phi[0] ** 2 + phi[1 : k - 1] @ phi[1 : k - 1])
    future = bool(phi[0] > 0)
    g = first_fundamental_form(jet)
    evals = np.linalg.eigvalsh(g)
    spacelike = bool(evals[0] > tol.gram * max(1.0, evals[-1]))
    admissible = (
        abs(res) < tol.cone * (1.0 + phi[0] ** 2) and future and spacelike
    )
    return CylinderCheck(res, future, spacelike, admissible)


def first_fundamental_form(jet):
    """Induced metric g_jk = <d_j phi, d_k phi> in parameter coordinates."""
    n = jet.n_params
    g = np.empty((n, n))
    for j in range(n):
        for k in range(j, n):
            g[j, k] = g[k, j] = minkowski_dot(jet.first[:, j], jet.first[:, k])
    return g


def build_theta(jet):
    """Null normal from the position vector: last coordinate zeroed."""
    theta = jet.value.copy()
    theta[-1] = 0.0
    return theta


def build_e1_alpha(jet, theta=None, tol=DEFAULT_TOL):
    """Split the axial coordinate direction into e1 - alpha*theta.

    e1 is the tangential projection (under the induced metric) of the unit
    vector along the last ambient coordinate; the paper forces its norm to
    be 1 on admissible points, so a deviation signals a bad input.  alpha
    is recovered by least squares over the large components of theta.
    Returns (e1, alpha, decomposition_residual).
    """
    if theta is None:
        theta = build_theta(jet)
    k = jet.ambient_dim
    n = jet.n_params
    axial = np.zeros(k)
    axial[-1] = 1.0
    g = first_fundamental_form(jet)
    b = np.array([minkowski_dot(axial, jet.first[:, j]) for j in range(n)])
    coeffs = np.linalg.solve(g, b)
    e1 = jet.first @ coeffs
    unit_dev = abs(minkowski_dot(e1, e1) - 1.0)
    if unit_dev > 1e3 * tol.algebraic:
        raise NotOnCylinderError(
            f"tangential part of the axial direction has norm^2 deviating by "
            f"{unit_dev:.3e}; point not on the cylinder or not space-like"
        )
    normal_part = axial - e1
    mask = np.abs(theta) > 0.1 * np.abs(theta).max()
    alpha = float(-(normal_part[mask] @ theta[mask]) / (theta[mask] @ theta[mask]))
    residual = float(np.linalg.norm(normal_part + alpha * theta))
    return e1, alpha, residual


def _frame_at_jet(jet, tol=DEFAULT_TOL):
    """Everything derivable from a single jet (no outer differencing)."""
    n = jet.n_params
    theta = build_theta(jet)
    e1, alpha, decomp_res = build_e1_alpha(jet, theta, tol)
    g = first_fundamental_form(jet)

    # complete e1 to a Minkowski-orthonormal tangent basis, tracking the
    # coordinate coefficients of each basis vector
    e1_coeffs = np.linalg.solve(g, np.array(
        [minkowski_dot(e1, jet.first[:, j]) for j in range(n)]
    ))
    basis = [e1]
    coeffs = [e1_coeffs]
    for j in range(n):
        if len(basis) == n:
            break
        v = jet.first[:, j].copy()
        c = np.zeros(n)
        c[j] = 1.0
        for u, cu in zip(basis, coeffs):
            d = minkowski_dot(v, u)
            v -= d * u
            c -= d * cu
        norm2 = minkowski_dot(v, v)
        if norm2 <= 1e-12:
            continue
        r = np.sqrt(norm2)
        basis.append(v / r)
        coeffs.append(c / r)
    if len(basis) != n:
        raise NotOnCylinderError("could not complete a tangent basis from e1")
    # re-orthonormalize for numerical hygiene (idempotent on good input)
    basis = orthonormalize_spacelike(basis, tol.gram)

    xi = complete_pseudo_orthonormal(theta, basis, tol.gram)

    # shape operator along xi in the (e1, f_2, ..., f_n) basis
    C = np.vstack(coeffs)
    h_xi_coord = np.array(
        [
            [minkowski_dot(jet.second[:, p, q], xi) for q in range(n)]
            for p in range(n)
        ]
    )
    a_xi = C @ h_xi_coord @ C.T

    if n >= 2:
        lower = 0.5 * (a_xi[1:, 1:] + a_xi[1:, 1:].T)
        beta, vecs = symmetric_eigen(lower, max(tol.sym, 1e-7))
        e_rest = []
        coeff_rest = []
        for j in range(n - 1):
            w = sum(vecs[i, j] * basis[1 + i] for i in range(n - 1))
            cw = sum(vecs[i, j] * coeffs[1 + i] for i in range(n - 1))
            e_rest.append(w)
            coeff_rest.append(cw)
        if n == 2:
            # fix e2 by orientation against the parameter order
            det = np.linalg.det(np.vstack([coeffs[0], coeff_rest[0]]))
            if det < 0:
                e_rest[0] = -e_rest[0]
                coeff_rest[0] = -coeff_rest[0]
        e = [e1] + e_rest
        C = np.vstack([coeffs[0]] + coeff_rest)
    else:
        beta = np.zeros(0)
        e = [e1]

    return {
        "e": tuple(e),
        "theta": theta,
        "xi": xi,
        "alpha": alpha,
        "beta": np.asarray(beta),
        "coord_coeffs": C,
        "metric": g,
        "decomp_residual": decomp_res,
    }


def alpha_field(spec, tol=DEFAULT_TOL):
    """The coupling scalar alpha as a plain function of the parameters."""

    def field_fn(u):
        jet = eval_jet2(spec, u)
        _, alpha, _ = build_e1_alpha(jet, tol=tol)
        return alpha

    return field_fn


def build_adapted_frame(spec, point, tol=DEFAULT_TOL, with_derivatives=True):
    """Construct the full adapted frame at one parameter point.

    with_derivatives=False skips the outer-differencing of alpha (the
    e1(alpha), e_a(alpha) entries become NaN); useful in bulk sweeps that
    only need the algebraic frame data.
    """
    point = np.asarray(point, dtype=float)
    jet = eval_jet2(spec, point)
    check = check_on_cylinder(jet, tol)
    if not check.admissible:
        raise NotOnCylinderError(
            f"point {tuple(point)} inadmissible: cone residual "
            f"{check.cone_residual:.3e}, future={check.future_flag}, "
            f"spacelike={check.spacelike_flag}"
        )
    data = _frame_at_jet(jet, tol)
    n = jet.n_params
    if with_derivatives:
        grad_alpha, fd_err = eval_scalar_field_jet(
            alpha_field(spec, tol), point, domain=None, h=tol.fd_step
        )
        dirs = data["coord_coeffs"] @ grad_alpha
        e1_alpha = float(dirs[0])
        ea_alpha = np.asarray(dirs[1:])
    else:
        fd_err = float("nan")
        e1_alpha = float("nan")
        ea_alpha = np.full(n - 1, np.nan)
    return AdaptedFrame(
        point=point,
        e=data["e"],
        theta=data["theta"],
        xi=data["xi"],
        alpha=data["alpha"],
        beta=data["beta"],
        e1_alpha=e1_alpha,
        ea_alpha=ea_alpha,
        coord_coeffs=data["coord_coeffs"],
        metric=data["metric"],
        residuals={
            "decomposition": data["decomp_residual"],
            "cone": abs(check.cone_residual),
            "alpha_fd": fd_err,
        },
    )


def frame_pairing_residual(frame):
    """Max deviation of all frame pairings from the pseudo-orthonormal table."""
    vectors = list(frame.e) + [frame.theta, frame.xi]
    n = len(frame.e)
    worst = 0.0
    for i, u in enumerate(vectors):
        for j in range(i, len(vectors)):
            v = vectors[j]
            d = minkowski_dot(u, v)
            if i < n and j < n:
                want = 1.0 if i == j else 0.0
            elif i < n or j < n:
                want = 0.0  # tangent against normal
            elif i == j:
                want = 0.0  # null normals
            else:
                want = -1.0  # <theta, xi>
            worst = max(worst, abs(d - want))
    return worst
