"""Extrinsic invariants, structure-equation residuals and classification.

The flat ambient connection makes the second fundamental form at a point a
pure projection of the jet's second derivatives onto the normal bundle,
expanded in the null normal pair as  h = -<h,xi> theta - <h,theta> xi.
Structure-equation residuals are computed on frame-independent fields
(metric, theta, xi, e1, alpha, coordinate h components), so no eigenvector
continuation across stencil points is ever needed.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL
from .dsl import eval_jet2
from .errors import DimensionError, NotNormalError, StencilError
from .frame import (
    build_adapted_frame,
    build_e1_alpha,
    build_theta,
    check_on_cylinder,
    first_fundamental_form,
)
from .jets import richardson_partial
from .lorentz import CausalCharacter, causal_character, minkowski_dot


@dataclass(frozen=True)
class SecondFundamentalForm:
    """h in the adapted frame: inner products against theta and xi.

    h(e_i, e_j) = -h_xi[i,j] * theta - h_theta[i,j] * xi.
    """

    h_theta: np.ndarray  # <h(e_i,e_j), theta>
    h_xi: np.ndarray  # <h(e_i,e_j), xi>
    theta: np.ndarray
    xi: np.ndarray

    @property
    def n(self):
        return self.h_theta.shape[0]

    def ambient(self, i, j):
        """h(e_i, e_j) as an ambient vector."""
        return -self.h_xi[i, j] * self.theta - self.h_theta[i, j] * self.xi

    def ambient_bilinear(self, x, y):
        """h(X, Y) for tangent vectors given by frame coefficients."""
        ht = float(x @ self.h_theta @ y)
        hx = float(x @ self.h_xi @ y)
        return -hx * self.theta - ht * self.xi


@dataclass(frozen=True)
class InvariantReport:
    point: np.ndarray
    admissible: bool
    alpha: float
    beta: np.ndarray
    e1_alpha: float
    ea_alpha: np.ndarray
    A_theta: np.ndarray
    A_xi: np.ndarray
    A_H: np.ndarray
    H: np.ndarray
    H_causal: CausalCharacter
    K: float | None
    K_perp: float | None
    lambda_iso: float | None
    residuals: dict
    flags: dict
    flag_details: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------------------
# pointwise invariants


def second_fundamental_form(jet, frame):
    """Project the jet's second derivatives onto the normal bundle."""
    n = jet.n_params
    C = frame.coord_coeffs
    ht_coord = np.empty((n, n))
    hx_coord = np.empty((n, n))
    for p in range(n):
        for q in range(p, n):
            w = jet.second[:, p, q]
            ht_coord[p, q] = ht_coord[q, p] = minkowski_dot(w, frame.theta)
            hx_coord[p, q] = hx_coord[q, p] = minkowski_dot(w, frame.xi)
    return SecondFundamentalForm(
        h_theta=C @ ht_coord @ C.T,
        h_xi=C @ hx_coord @ C.T,
        theta=frame.theta,
        xi=frame.xi,
    )


def shape_operator(sff, frame, zeta, tol=DEFAULT_TOL):
    """Matrix [<h(e_i,e_j), zeta>] in the adapted frame."""
    scale = 1.0 + float(np.abs(zeta).max())
    for v in frame.e:
        if abs(minkowski_dot(zeta, v)) > 1e3 * tol.algebraic * scale:
            raise NotNormalError("zeta is not normal to the tangent space")
    return _pairing_matrix(sff, zeta)


def _pairing_matrix(sff, zeta):
    # <h(e_i,e_j), zeta> with h = -h_xi theta - h_theta xi
    return -sff.h_xi * minkowski_dot(sff.theta, zeta) - sff.h_theta * minkowski_dot(
        sff.xi, zeta
    )


def mean_curvature(sff, frame, tol=DEFAULT_TOL):
    """Mean curvature vector, its shape operator and causal character."""
    n = sff.n
    H = sum(sff.ambient(i, i) for i in range(n)) / n
    A_H = _pairing_matrix(sff, H)
    causal = causal_character(H, tol.causal)
    return H, A_H, causal


def gauss_curvature(sff):
    """Extrinsic closed form of the Gaussian curvature (surfaces only)."""
    if sff.n != 2:
        raise DimensionError("Gaussian curvature is defined for n = 2 only")
    return float(
        minkowski_dot(sff.ambient(0, 0), sff.ambient(1, 1))
        - minkowski_dot(sff.ambient(0, 1), sff.ambient(0, 1))
    )


def normal_curvature(sff, frame, tol=DEFAULT_TOL):
    """Normal curvature of a surface from the Ricci equation.

    Uses the orthonormal normal pair zeta1 = (theta+xi)/sqrt2 (time-like),
    zeta2 = (xi-theta)/sqrt2 (space-like); the denominator of the defining
    quotient is then -1.
    """
    if sff.n != 2:
        raise DimensionError("normal curvature is defined for n = 2 only")
    r = 1.0 / np.sqrt(2.0)
    zeta1 = r * (sff.theta + sff.xi)
    zeta2 = r * (sff.xi - sff.theta)
    m1 = _pairing_matrix(sff, zeta1)
    # A_{zeta1} e_j has frame coefficients g^{-1} m1[:, j]; frame is
    # orthonormal so the Gram factor is the identity
    a_e1 = m1[:, 0]
    a_e2 = m1[:, 1]
    rperp = sff.ambient_bilinear(np.array([1.0, 0.0]), a_e2) - sff.ambient_bilinear(
        a_e1, np.array([0.0, 1.0])
    )
    return float(minkowski_dot(rperp, zeta2) / -1.0)


# ---------------------------------------------------------------------------
# frame-independent point fields (used by the residual machinery)


def _point_fields(spec, point, tol, jet_transform=None):
    """Canonical quantities at a point, all smooth in the parameters."""
    jet = eval_jet2(spec, point)
    if jet_transform is not None:
        jet = jet_transform(jet)
    n = jet.n_params
    g = first_fundamental_form(jet)
    ginv = np.linalg.inv(g)
    theta = build_theta(jet)
    e1, alpha, _ = build_e1_alpha(jet, theta, tol)
    from .frame import _frame_at_jet  # light reuse; no outer differencing

    fr = _frame_at_jet(jet, tol)
    xi = fr["xi"]
    # normal projection of an ambient vector
    def normal_part(w):
        return -minkowski_dot(w, xi) * theta - minkowski_dot(w, theta) * xi

    h_coord = np.empty((n, n, jet.ambient_dim))
    for p in range(n):
        for q in range(p, n):
            h_coord[p, q] = h_coord[q, p] = normal_part(jet.second[:, p, q])
    # normal connection form: nabla^perp_{d_j} theta = sigma_j theta
    dtheta = jet.first.copy()
    dtheta[-1, :] = 0.0
    sigma = np.array(
        [-minkowski_dot(normal_part(dtheta[:, j]), xi) for j in range(n)]
    )
    # coordinate matrices of the shape operators: (A_zeta)^m_q
    a_theta = ginv @ np.array(
        [[minkowski_dot(jet.second[:, p, q], theta) for q in range(n)] for p in range(n)]
    )
    a_xi = ginv @ np.array(
        [[minkowski_dot(jet.second[:, p, q], xi) for q in range(n)] for p in range(n)]
    )
    return {
        "jet": jet,
        "g": g,
        "ginv": ginv,
        "theta": theta,
        "xi": xi,
        "e1": e1,
        "alpha": alpha,
        "h_coord": h_coord,
        "sigma": sigma,
        "a_theta": a_theta,
        "a_xi": a_xi,
        "normal_part": normal_part,
    }


def _fd_steps(spec, point, h_base):
    return [h_base * (1.0 + abs(x)) for x in point]


def _check_stencil(spec, point, hs):
    for j, ((lo, hi), h) in enumerate(zip(spec.param_domain, hs)):
        if point[j] - h < lo - 0.009 * (hi - lo) or point[j] + h > hi + 0.009 * (
            hi - lo
        ):
            raise StencilError(
                f"structure stencil leaves the domain at parameter {j}"
            )


def structure_residuals(spec, point, tol=DEFAULT_TOL, jet_transform=None):
    """Residual norms of the Gauss, Codazzi and Ricci equations and of the
    frame structure identities, at one interior point.

    The intrinsic sides are built exclusively from the induced metric by
    finite differences (Christoffel symbols from metric derivatives), so
    they stay independent of the jet's second derivatives.
    """
    point = np.asarray(point, dtype=float)
    n = spec.n_params
    hs = _fd_steps(spec, point, tol.fd_step * 10)
    _check_stencil(spec, point, hs)
    pf = _point_fields(spec, point, tol, jet_transform)
    g, ginv = pf["g"], pf["ginv"]

    def g_field(u):
        j = eval_jet2(spec, u)
        if jet_transform is not None:
            j = jet_transform(j)
        return first_fundamental_form(j)

    def gamma_field(u):
        """Christoffel symbols from metric derivatives only."""
        gu = g_field(u)
        dg = np.stack(
            [richardson_partial(g_field, u, j, hs[j])[0] for j in range(n)]
        )  # dg[j][k][l] = d_j g_kl
        giu = np.linalg.inv(gu)
        gamma = np.empty((n, n, n))  # gamma[m][j][k] = Gamma^m_{jk}
        for m in range(n):
            for j in range(n):
                for k in range(n):
                    s = 0.0
                    for l in range(n):
                        s += giu[m, l] * (dg[j][k, l] + dg[k][j, l] - dg[l][j, k])
                    gamma[m, j, k] = 0.5 * s
        return gamma

    gamma0 = gamma_field(point)
    dgamma = np.stack(
        [richardson_partial(gamma_field, point, j, hs[j])[0] for j in range(n)]
    )  # dgamma[j][m][k][l] = d_j Gamma^m_{kl}

    # Gauss: <R(d_j,d_k)d_l, d_m> vs <h(d_k,d_l), h(d_j,d_m)> - <h(d_j,d_l), h(d_k,d_m)>
    hc = pf["h_coord"]
    gauss_res = 0.0
    gauss_scale = 1.0 + np.abs(g).max()
    for j in range(n):
        for k in range(j + 1, n):
            for l in range(n):
                # R^i_{l jk} = d_j Gamma^i_{kl} - d_k Gamma^i_{jl} + products
                r_up = (
                    dgamma[j][:, k, l]
                    - dgamma[k][:, j, l]
                    + gamma0[:, j, :] @ gamma0[:, k, l]
                    - gamma0[:, k, :] @ gamma0[:, j, l]
                )
                for m in range(n):
                    lhs = float(g[:, m] @ r_up)
                    rhs = minkowski_dot(hc[k, l], hc[j, m]) - minkowski_dot(
                        hc[j, l], hc[k, m]
                    )
                    gauss_res = max(gauss_res, abs(lhs - rhs) / gauss_scale)

    # Codazzi: normal projections of d_j h(d_k,d_l) antisymmetrized in j,k,
    # corrected by Christoffel contractions
    def h_field(u):
        return _point_fields(spec, u, tol, jet_transform)["h_coord"]

    dh = np.stack(
        [richardson_partial(h_field, point, j, hs[j])[0] for j in range(n)]
    )  # dh[j][k][l] = d_j (h(d_k, d_l))
    codazzi_res = 0.0
    np_ = pf["normal_part"]
    for j in range(n):
        for k in range(j + 1, n):
            for l in range(n):
                term_j = np_(dh[j][k, l]) - sum(
                    gamma0[m, j, l] * hc[k, m] for m in range(n)
                )
                term_k = np_(dh[k][j, l]) - sum(
                    gamma0[m, k, l] * hc[j, m] for m in range(n)
                )
                codazzi_res = max(
                    codazzi_res, float(np.abs(term_j - term_k).max())
                )

    # Ricci: R^perp(d_j, d_k) theta = (d_j sigma_k - d_k sigma_j) theta
    # against h(d_j, A_theta d_k) - h(A_theta d_j, d_k); likewise for xi
    def sigma_field(u):
        return _point_fields(spec, u, tol, jet_transform)["sigma"]

    dsigma = np.stack(
        [richardson_partial(sigma_field, point, j, hs[j])[0] for j in range(n)]
    )
    ricci_res = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            curl = dsigma[j][k] - dsigma[k][j]
            for zeta, a_coord, sign in (
                (pf["theta"], pf["a_theta"], 1.0),
                (pf["xi"], pf["a_xi"], -1.0),
            ):
                lhs = sign * curl * zeta
                rhs = sum(a_coord[m, k] * hc[j, m] for m in range(n)) - sum(
                    a_coord[m, j] * hc[m, k] for m in range(n)
                )
                ricci_res = max(ricci_res, float(np.abs(lhs - rhs).max()))

    return {
        "gauss": gauss_res,
        "codazzi": codazzi_res,
        "ricci": ricci_res,
        **frame_structure_residuals(spec, point, tol),
    }


def frame_structure_residuals(spec, point, tol=DEFAULT_TOL):
    """Residuals of the frame connection / normal-connection / h identities."""
    point = np.asarray(point, dtype=float)
    frame = build_adapted_frame(spec, point, tol)
    pf = _point_fields(spec, point, tol)
    n = frame.n
    hs = _fd_steps(spec, point, tol.fd_step)

    def e1_field(u):
        j = eval_jet2(spec, u)
        e1, _, _ = build_e1_alpha(j, tol=tol)
        return e1

    de1 = np.stack(
        [richardson_partial(e1_field, point, j, hs[j])[0] for j in range(n)]
    )  # de1[j] = d_j e1 as ambient vector

    def tangential(w):
        return sum(minkowski_dot(w, v) * v for v in frame.e)

    # part (b): nabla_{e1} e1 = 0 and nabla_{e_a} e1 = alpha e_a
    frame_b = 0.0
    for i, v in enumerate(frame.e):
        dv = frame.coord_coeffs[i] @ de1  # directional derivative along e_i
        cov = tangential(dv)
        want = np.zeros_like(cov) if i == 0 else frame.alpha * v
        frame_b = max(frame_b, float(np.abs(cov - want).max()))

    # part (d): normal connection, exact in sigma; plus the xi side by FD
    sigma = pf["sigma"]
    frame_d = 0.0
    for i in range(n):
        s_dir = float(frame.coord_coeffs[i] @ sigma)
        want = frame.alpha if i == 0 else 0.0
        frame_d = max(frame_d, abs(s_dir - want))

    def xi_field(u):
        from .frame import _frame_at_jet

        j = eval_jet2(spec, u)
        return _frame_at_jet(j, tol)["xi"]

    dxi = np.stack(
        [richardson_partial(xi_field, point, j, hs[j])[0] for j in range(n)]
    )
    for i in range(n):
        dv = frame.coord_coeffs[i] @ dxi
        cov = dv - tangential(dv)
        want = -frame.alpha * frame.xi if i == 0 else np.zeros_like(cov)
        frame_d = max(frame_d, float(np.abs(cov - want).max()))

    # part (e): h component structure against alpha derivatives and beta
    jet = eval_jet2(spec, point)
    sff = second_fundamental_form(jet, frame)
    frame_e = 0.0
    h11 = sff.ambient(0, 0)
    frame_e = max(
        frame_e,
        float(np.abs(h11 - (frame.e1_alpha + frame.alpha**2) * frame.theta).max()),
    )
    for a in range(1, n):
        h1a = sff.ambient(0, a)
        frame_e = max(
            frame_e,
            float(np.abs(h1a - frame.ea_alpha[a - 1] * frame.theta).max()),
        )
        haa = sff.ambient(a, a)
        want = -frame.beta[a - 1] * frame.theta + frame.xi
        frame_e = max(frame_e, float(np.abs(haa - want).max()))
        for b in range(1, n):
            if a != b:
                frame_e = max(
                    frame_e, float(np.abs(sff.ambient(a, b)).max())
                )

    return {"frame_b": frame_b, "frame_d": frame_d, "frame_e": frame_e}


def intrinsic_gauss_curvature(spec, point, tol=DEFAULT_TOL):
    """K of a surface by finite differences of the induced metric only."""
    if spec.n_params != 2:
        raise DimensionError("intrinsic K implemented for n = 2 only")
    point = np.asarray(point, dtype=float)
    n = 2
    hs = _fd_steps(spec, point, tol.fd_step * 10)
    _check_stencil(spec, point, hs)

    def g_field(u):
        return first_fundamental_form(eval_jet2(spec, u))

    def gamma_field(u):
        gu = g_field(u)
        dg = np.stack(
            [richardson_partial(g_field, u, j, hs[j])[0] for j in range(n)]
        )
        giu = np.linalg.inv(gu)
        gamma = np.empty((n, n, n))
        for m in range(n):
            for j in range(n):
                for k in range(n):
                    gamma[m, j, k] = 0.5 * sum(
                        giu[m, l] * (dg[j][k, l] + dg[k][j, l] - dg[l][j, k])
                        for l in range(n)
                    )
        return gamma

    gamma0 = gamma_field(point)
    dgamma = np.stack(
        [richardson_partial(gamma_field, point, j, hs[j])[0] for j in range(n)]
    )
    g = g_field(point)
    r_up = (
        dgamma[0][:, 1, 1]
        - dgamma[1][:, 0, 1]
        + gamma0[:, 0, :] @ gamma0[:, 1, 1]
        - gamma0[:, 1, :] @ gamma0[:, 0, 1]
    )
    r_1212 = float(g[:, 0] @ r_up)
    return r_1212 / float(np.linalg.det(g))


# ---------------------------------------------------------------------------
# classification


def unit_tangent_directions(n, count=128, seed=20240615):
    """Deterministic set of unit vectors in frame coordinates."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def isotropy_samples(sff, count=128, seed=20240615):
    """<h(X,X), h(X,X)> over the deterministic unit tangent directions."""
    dirs = unit_tangent_directions(sff.n, count, seed)
    values = np.empty(count)
    for i, x in enumerate(dirs):
        w = sff.ambient_bilinear(x, x)
        values[i] = minkowski_dot(w, w)
    return values


def _two_route(name, primary, secondary, tol):
    agree = primary == secondary
    return {
        "value": bool(primary),
        "routes": {"primary": bool(primary), "secondary": bool(secondary)},
        "consistent": bool(agree),
    }


def classify(frame, sff, H, A_H, K, K_perp, tol=DEFAULT_TOL, seed=20240615):
    """Classification flags, each computed by two independent routes.

    Returns (flags, details); a route mismatch sets details[...]["consistent"]
    to False with both routes reported.
    """
    n = frame.n
    ct = tol.classify
    flags = {}
    details = {}

    alpha_zero = abs(frame.alpha) < 1e3 * tol.algebraic
    flags["alpha_zero"] = alpha_zero

    h_causal = causal_character(H, tol.causal)
    minimal = bool(np.abs(H).max() < ct)
    trapped = (h_causal is CausalCharacter.LIGHT_LIKE) and not minimal
    flags["minimal"] = minimal
    flags["marginally_trapped"] = trapped

    # pseudo-umbilical: A_H proportional to the identity / scalar conditions
    dev = A_H - (np.trace(A_H) / n) * np.eye(n)
    pu_primary = bool(np.abs(dev).max() < ct)
    if n == 2:
        pu_secondary = (
            abs(frame.e1_alpha + frame.alpha**2) < ct
            and abs(frame.ea_alpha[0]) < ct
            and abs(frame.beta[0]) < ct
        )
    else:
        beta_spread = float(frame.beta.max() - frame.beta.min())
        b = float(frame.beta.mean())
        rel = frame.e1_alpha + frame.alpha**2 + (2.0 * n - 2.0) / (n - 2.0) * b
        pu_secondary = (
            beta_spread < ct
            and abs(rel) < ct
            and float(np.abs(frame.ea_alpha).max()) < ct
        )
    details["pseudo_umbilical"] = _two_route(
        "pseudo_umbilical", pu_primary, pu_secondary, ct
    )
    flags["pseudo_umbilical"] = pu_primary

    # flat normal bundle: e_a(alpha) = 0 / commuting shape operators
    fnb_primary = float(np.abs(frame.ea_alpha).max()) < ct if n >= 2 else True
    a_theta = _pairing_matrix(sff, sff.theta)
    a_xi = _pairing_matrix(sff, sff.xi)
    comm = a_theta @ a_xi - a_xi @ a_theta
    fnb_secondary = bool(np.abs(comm).max() < ct)
    if n == 2 and K_perp is not None:
        fnb_secondary = fnb_secondary and abs(K_perp) < ct
    details["flat_normal_bundle"] = _two_route(
        "flat_normal_bundle", fnb_primary, fnb_secondary, ct
    )
    flags["flat_normal_bundle"] = fnb_primary

    # isotropic: scalar criterion / Monte-Carlo constancy
    samples = isotropy_samples(sff, seed=seed)
    spread = float(samples.max() - samples.min())
    lam = float(samples.mean())
    iso_secondary = spread < max(ct, 1e-5)
    if n == 2:
        iso_primary = abs(frame.beta[0]) < ct
    else:
        iso_primary = trapped and bool(np.abs(A_H).max() < ct)
    details["isotropic"] = _two_route("isotropic", iso_primary, iso_secondary, ct)
    details["isotropic"]["lambda"] = lam
    details["isotropic"]["spread"] = spread
    flags["isotropic"] = iso_primary

    # flat (surfaces): K / scalar criterion
    if n == 2 and K is not None:
        flat_primary = abs(K) < ct
        flat_secondary = abs(frame.e1_alpha + frame.alpha**2) < ct
        details["flat"] = _two_route("flat", flat_primary, flat_secondary, ct)
        flags["flat"] = flat_primary

    # totally umbilical: umbilical along both normal directions
    dev_t = a_theta - (np.trace(a_theta) / n) * np.eye(n)
    dev_x = a_xi - (np.trace(a_xi) / n) * np.eye(n)
    flags["totally_umbilical"] = bool(
        np.abs(dev_t).max() < ct and np.abs(dev_x).max() < ct
    )

    return flags, details


def analyze_point(spec, point, tol=DEFAULT_TOL, structure=False, seed=20240615):
    """Full invariant computation at one parameter point."""
    point = np.asarray(point, dtype=float)
    jet = eval_jet2(spec, point)
    check = check_on_cylinder(jet, tol)
    if not check.admissible:
        n = spec.n_params
        return InvariantReport(
            point=point,
            admissible=False,
            alpha=float("nan"),
            beta=np.full(n - 1, np.nan),
            e1_alpha=float("nan"),
            ea_alpha=np.full(n - 1, np.nan),
            A_theta=np.full((n, n), np.nan),
            A_xi=np.full((n, n), np.nan),
            A_H=np.full((n, n), np.nan),
            H=np.full(spec.ambient_dim, np.nan),
            H_causal=CausalCharacter.SPACE_LIKE,
            K=None,
            K_perp=None,
            lambda_iso=None,
            residuals={"cone": abs(check.cone_residual)},
            flags={"admissible": False},
        )
    frame = build_adapted_frame(spec, point, tol)
    sff = second_fundamental_form(jet, frame)
    H, A_H, h_causal = mean_curvature(sff, frame, tol)
    K = gauss_curvature(sff) if frame.n == 2 else None
    K_perp = normal_curvature(sff, frame, tol) if frame.n == 2 else None
    flags, details = classify(frame, sff, H, A_H, K, K_perp, tol, seed)
    flags["admissible"] = True
    residuals = dict(frame.residuals)
    # Weingarten duality is definitional here; record the frame pairing table
    from .frame import frame_pairing_residual

    residuals["pairings"] = frame_pairing_residual(frame)
    if structure:
        residuals.update(structure_residuals(spec, point, tol))
    return InvariantReport(
        point=point,
        admissible=True,
        alpha=frame.alpha,
        beta=frame.beta,
        e1_alpha=frame.e1_alpha,
        ea_alpha=frame.ea_alpha,
        A_theta=_pairing_matrix(sff, sff.theta),
        A_xi=_pairing_matrix(sff, sff.xi),
        A_H=A_H,
        H=H,
        H_causal=h_causal,
        K=K,
        K_perp=K_perp,
        lambda_iso=details["isotropic"]["lambda"],
        residuals=residuals,
        flags=flags,
        flag_details=details,
    )
