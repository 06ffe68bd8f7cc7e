"""nullcyl: a numerical laboratory for codimension-two submanifolds of
Minkowski space lying on the light-like cylinder (null cone x real line).

Layers, bottom up: lorentz (indefinite linear algebra), jets/dsl (exact
2-jets of immersions given in a small expression language), frame (the
adapted pseudo-orthonormal frame and the scalars alpha, beta_a), invariants
(second fundamental form, curvatures, structure-equation residuals,
classification flags), constructions (generators for every classified
family plus the supporting ODE/curve integrators), report/verify/cli
(artifact plumbing).
"""

from .config import DEFAULT_TOL, Tolerances, VERSION
from .constructions import (
    ConeFrame,
    OdeSolution,
    cone_shape_operators,
    gen_example61,
    gen_isotropic,
    gen_product,
    gen_pseudo_umbilical_n,
    gen_pseudo_umbilical_n_closed,
    gen_pseudo_umbilical_surface,
    gen_ruled_flat,
    gen_sigma_tau,
    isotropy_pde_residual,
    solve_alpha_hat_ode,
)
from .curves import CurveOnCone, curve_kappa, integrate_lc2_curve, solve_eta
from .dsl import (
    ImmersionSpec,
    eval_jet2,
    eval_value,
    parse_expression,
    parse_immersion_spec,
    spec_to_text,
)
from .errors import NullcylError
from .frame import AdaptedFrame, build_adapted_frame, check_on_cylinder
from .invariants import (
    InvariantReport,
    SecondFundamentalForm,
    analyze_point,
    classify,
    gauss_curvature,
    intrinsic_gauss_curvature,
    mean_curvature,
    normal_curvature,
    second_fundamental_form,
    shape_operator,
    structure_residuals,
)
from .jets import Jet2, QuinticHermite1D, Taylor2
from .lorentz import (
    CausalCharacter,
    causal_character,
    complete_pseudo_orthonormal,
    minkowski_dot,
    minkowski_norm2,
)
from .report import AnalysisReport, analyze_grid, export_mesh, report_to_csv
from .verify import CheckResult, SuiteResult, run_suite

__version__ = VERSION

__all__ = [name for name in dir() if not name.startswith("_")]
