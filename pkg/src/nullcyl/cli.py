"""Command-line front end: analyze, verify, generate, export.

Exit codes: 0 = ran to completion, 1 = verification failures,
2 = usage / parse / domain errors.

The environment variable NULLCYL_CONFIG may point at a JSON file providing
defaults for the tolerance flags, e.g. {"tol_alg": 1e-6, "tol_class": 1e-4}.
"""

import argparse
import dataclasses
import json
import os
import sys

from .config import DEFAULT_TOL, VERSION
from .constructions import (
    gen_example61,
    gen_isotropic,
    gen_product,
    gen_pseudo_umbilical_n_closed,
    gen_pseudo_umbilical_surface,
    gen_ruled_flat,
    gen_sigma_tau,
)
from .curves import HALF_CURVATURE_CURVE_EXPRS, circle_cone_curve_exprs
from .dsl import parse_immersion_spec, spec_to_text
from .errors import DslSyntaxError, NullcylError
from .report import analyze_grid, export_mesh, report_to_csv
from .verify import DEFAULT_TOL_ALGEBRAIC, DEFAULT_TOL_DIFFERENCING, run_suite


class UsageError(Exception):
    pass


def _load_config_defaults():
    path = os.environ.get("NULLCYL_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return obj


def _build_parser(cfg):
    parser = argparse.ArgumentParser(
        prog="nullcyl",
        description="numerical laboratory for codimension-two submanifolds of "
        "the light-like cylinder in Minkowski space",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    def common_tols(p):
        p.add_argument("--tol-alg", type=float,
                       default=cfg.get("tol_alg", DEFAULT_TOL_ALGEBRAIC),
                       help="tolerance for algebraic (machine-precision) checks")
        p.add_argument("--tol-class", type=float,
                       default=cfg.get("tol_class", DEFAULT_TOL_DIFFERENCING),
                       help="tolerance for differencing-limited checks and "
                            "classification predicates")
        p.add_argument("--seed", type=int, default=cfg.get("seed", 20240615),
                       help="seed for the isotropy direction sample")

    pa = sub.add_parser("analyze", help="sweep a grid of invariant computations")
    pa.add_argument("spec_path")
    pa.add_argument("--grid", default=cfg.get("grid", "8x8"),
                    help="grid shape, e.g. 16x16")
    pa.add_argument("--structure", action="store_true",
                    help="also compute structure-equation residuals (slow)")
    pa.add_argument("--out")
    common_tols(pa)

    pv = sub.add_parser("verify", help="run the claim-verification suite")
    pv.add_argument("--json", action="store_true", help="emit JSON instead of text")
    pv.add_argument("--out")
    common_tols(pv)

    pg = sub.add_parser("generate", help="emit a DSL spec for a known family")
    pg.add_argument("family")
    pg.add_argument("params", nargs="*", metavar="key=value")
    pg.add_argument("--out")

    pe = sub.add_parser("export", help="export analysis artifacts")
    pe.add_argument("spec_path")
    pe.add_argument("--format", required=True, choices=("mesh", "csv", "json"))
    pe.add_argument("--grid", default=cfg.get("grid", "8x8"))
    pe.add_argument("--out")
    common_tols(pe)
    return parser


def _parse_grid(text, rank):
    try:
        shape = tuple(int(part) for part in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad grid '{text}' (expected e.g. 16x16)") from None
    if any(s < 1 for s in shape):
        raise UsageError(f"grid counts must be positive in '{text}'")
    if len(shape) != rank:
        raise UsageError(
            f"grid '{text}' has rank {len(shape)}, spec has {rank} parameters"
        )
    return shape


def _load_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_immersion_spec(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _tolerances(args):
    return dataclasses.replace(
        DEFAULT_TOL, algebraic=args.tol_alg, classify=args.tol_class
    )


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kv_params(pairs):
    out = {}
    for item in pairs:
        if "=" not in item:
            raise UsageError(f"expected key=value, got '{item}'")
        key, val = item.split("=", 1)
        out[key] = val
    return out


_CURVES = {
    "halfk": HALF_CURVATURE_CURVE_EXPRS,
    "circle": circle_cone_curve_exprs(),
}


def _generate(family, kv):
    def num(key, default=None, cast=float):
        if key in kv:
            return cast(kv.pop(key))
        if default is None:
            raise UsageError(f"family '{family}' needs {key}=...")
        return default

    def curve():
        name = kv.pop("curve", "halfk")
        if name not in _CURVES:
            raise UsageError(f"unknown curve '{name}' (halfk or circle)")
        return _CURVES[name]

    if family == "sigma_tau":
        spec = gen_sigma_tau(num("n", cast=int), num("tau"))
    elif family == "ruled_flat":
        spec = gen_ruled_flat(kv.pop("a", "0"), curve())
    elif family == "pseudo_umbilical_surface":
        spec = gen_pseudo_umbilical_surface(num("c1"))
    elif family == "isotropic":
        spec = gen_isotropic(
            num("n", cast=int), num("eps", 1, int), num("c0"),
            (num("s0", 0.0), num("s1", 2.0)),
        )
    elif family == "pseudo_umbilical_n":
        spec = gen_pseudo_umbilical_n_closed(
            num("n", cast=int), -1, num("tau", 1.0),
            (num("a0", 1.0), num("da0", 0.0)),
            (num("s0", 0.0), num("s1", 2.0)),
            degree=num("degree", 14, int),
        )
    elif family == "product":
        spec = gen_product(curve(), (num("s0", 0.0), num("s1", 2.0)))
    elif family == "example61":
        spec = gen_example61()
    else:
        raise UsageError(
            f"unknown family '{family}' (sigma_tau, ruled_flat, "
            "pseudo_umbilical_surface, isotropic, pseudo_umbilical_n, "
            "product, example61)"
        )
    if kv:
        raise UsageError(f"unused parameters {sorted(kv)} for family '{family}'")
    return spec_to_text(spec)


def main(argv=None):
    try:
        cfg = _load_config_defaults()
        parser = _build_parser(cfg)
        args = parser.parse_args(argv)

        if args.command == "analyze":
            spec = _load_spec(args.spec_path)
            shape = _parse_grid(args.grid, spec.n_params)
            report = analyze_grid(
                spec, shape, _tolerances(args), args.structure, args.seed
            )
            _write(report.to_json(), args.out)
            return 0

        if args.command == "verify":
            suite = run_suite(args.tol_alg, args.tol_class, seed=args.seed)
            _write(suite.to_json() if args.json else suite.to_text(), args.out)
            return 0 if suite.passed else 1

        if args.command == "generate":
            text = _generate(args.family, _kv_params(args.params))
            _write(text, args.out)
            return 0

        if args.command == "export":
            spec = _load_spec(args.spec_path)
            shape = _parse_grid(args.grid, spec.n_params)
            if args.format == "mesh":
                if spec.n_params != 2:
                    raise UsageError("mesh export needs a two-parameter spec")
                if not args.out:
                    raise UsageError("mesh export needs --out")
                mesh, sidecar = export_mesh(spec, shape)
                _write(mesh, args.out)
                _write(sidecar, args.out + ".x1")
                return 0
            report = analyze_grid(spec, shape, _tolerances(args), seed=args.seed)
            if args.format == "csv":
                _write(report_to_csv(report, spec.param_names), args.out)
            else:
                _write(report.to_json(), args.out)
            return 0
        raise UsageError(f"unknown command {args.command}")
    except (UsageError, DslSyntaxError, NullcylError, ValueError) as exc:
        print(f"nullcyl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
