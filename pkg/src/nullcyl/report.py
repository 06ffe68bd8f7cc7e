"""Grid analysis reports and their machine-readable export formats.

JSON output is canonical (sorted keys, shortest-repr floats) and therefore
byte-identical across runs for identical inputs; CSV has a fixed, documented
column order; mesh export writes an OBJ-style quad mesh of the spatial
coordinates (x2, x3, x4) with the time coordinate x1 in a sidecar column.
"""

import hashlib
import io
import json
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, VERSION
from .dsl import eval_value, pretty, spec_to_text
from .invariants import analyze_point
from .lorentz import minkowski_dot


def spec_fingerprint(spec):
    """Content hash of a canonical rendering of the spec.

    Serializable specs hash their DSL text; specs with numeric components
    hash an equivalent canonical layout (pretty-printed components carry the
    profile function names).
    """
    if spec.serializable():
        text = spec_to_text(spec)
    else:
        lines = [f"params {', '.join(spec.param_names)};",
                 f"ambient {spec.ambient_dim};"]
        for name, (lo, hi) in zip(spec.param_names, spec.param_domain):
            lines.append(f"domain {name} in [{lo!r}, {hi!r}];")
        lines.append("map [" + ", ".join(pretty(c) for c in spec.components) + "];")
        text = "\n".join(lines)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _scalar(x):
    if x is None:
        return None
    x = float(x)
    return x


def _report_dict(rep):
    """InvariantReport -> JSON-ready dict."""
    out = {
        "point": [float(v) for v in rep.point],
        "admissible": bool(rep.admissible),
        "alpha": _scalar(rep.alpha),
        "beta": [float(v) for v in np.atleast_1d(rep.beta)],
        "e1_alpha": _scalar(rep.e1_alpha),
        "ea_alpha": [float(v) for v in np.atleast_1d(rep.ea_alpha)],
        "H": [float(v) for v in np.atleast_1d(rep.H)],
        "H_causal": rep.H_causal.name,
        "K": _scalar(rep.K),
        "K_perp": _scalar(rep.K_perp),
        "lambda_iso": _scalar(rep.lambda_iso),
        "residuals": {k: float(v) for k, v in rep.residuals.items()},
        "flags": {k: bool(v) for k, v in rep.flags.items()},
    }
    return out


@dataclass(frozen=True)
class AnalysisReport:
    """Grid sweep of pointwise invariants plus per-flag aggregate verdicts."""

    version: str
    spec_fingerprint: str
    grid_shape: tuple
    tolerances: dict
    per_point: tuple  # JSON-ready dicts, ordered by grid index

    @property
    def aggregate(self):
        return aggregate_flags(self.per_point)

    def to_json(self):
        obj = {
            "version": self.version,
            "spec_fingerprint": self.spec_fingerprint,
            "grid_shape": list(self.grid_shape),
            "tolerances": self.tolerances,
            "per_point": list(self.per_point),
            "aggregate": self.aggregate,
        }
        return json.dumps(obj, sort_keys=True, indent=1) + "\n"

    @staticmethod
    def from_json(text):
        obj = json.loads(text)
        return AnalysisReport(
            version=obj["version"],
            spec_fingerprint=obj["spec_fingerprint"],
            grid_shape=tuple(obj["grid_shape"]),
            tolerances=obj["tolerances"],
            per_point=tuple(obj["per_point"]),
        )


def aggregate_flags(per_point):
    """Per-flag verdict (all/none/mixed) over admissible nodes, plus maxima
    of every residual channel.  A pure function of the per-point entries."""
    verdicts = {}
    adm = [p for p in per_point if p["admissible"]]
    n_adm = len(adm)
    verdicts["admissible"] = (
        "all" if n_adm == len(per_point) else "none" if n_adm == 0 else "mixed"
    )
    flags = {}
    if adm:
        keys = sorted(set().union(*(p["flags"].keys() for p in adm)) - {"admissible"})
        for k in keys:
            vals = [bool(p["flags"].get(k, False)) for p in adm]
            flags[k] = "all" if all(vals) else "none" if not any(vals) else "mixed"
    max_res = {}
    for p in per_point:
        for k, v in p["residuals"].items():
            if not np.isnan(v):
                max_res[k] = max(max_res.get(k, 0.0), v)
    return {"verdicts": verdicts, "flags": flags, "max_residuals": max_res}


def analyze_grid(spec, shape, tol=DEFAULT_TOL, structure=False, seed=20240615):
    """Run analyze_point over the deterministic interior grid.

    Nodes are independent (safe to farm out); assembly is ordered by grid
    index, so the report bytes never depend on evaluation order.
    """
    pts = spec.interior_grid(shape)
    per_point = tuple(
        _report_dict(analyze_point(spec, p, tol, structure, seed)) for p in pts
    )
    return AnalysisReport(
        version=VERSION,
        spec_fingerprint=spec_fingerprint(spec),
        grid_shape=tuple(int(s) for s in shape),
        tolerances=tol.as_dict(),
        per_point=per_point,
    )


# ---------------------------------------------------------------------------
# CSV


CSV_SCALARS = (
    "admissible",
    "alpha",
    "e1_alpha",
    "beta_min",
    "beta_max",
    "ea_alpha_max_abs",
    "K",
    "K_perp",
    "lambda_iso",
    "H_norm2",
)

CSV_FLAGS = (
    "alpha_zero",
    "minimal",
    "marginally_trapped",
    "pseudo_umbilical",
    "flat_normal_bundle",
    "isotropic",
    "flat",
    "totally_umbilical",
)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    return repr(float(v))


def report_to_csv(report, param_names):
    """Fixed column order: index, parameters, CSV_SCALARS, CSV_FLAGS."""
    buf = io.StringIO()
    header = ["index", *param_names, *CSV_SCALARS, *CSV_FLAGS]
    buf.write(",".join(header) + "\n")
    for i, p in enumerate(report.per_point):
        beta = p["beta"]
        ea = p["ea_alpha"]
        h = np.asarray(p["H"])
        row = [str(i)] + [_fmt(v) for v in p["point"]]
        scalars = {
            "admissible": p["admissible"],
            "alpha": p["alpha"],
            "e1_alpha": p["e1_alpha"],
            "beta_min": min(beta) if beta else None,
            "beta_max": max(beta) if beta else None,
            "ea_alpha_max_abs": max(abs(v) for v in ea) if ea else None,
            "K": p["K"],
            "K_perp": p["K_perp"],
            "lambda_iso": p["lambda_iso"],
            "H_norm2": float(minkowski_dot(h, h)) if p["admissible"] else None,
        }
        row += [_fmt(scalars[k]) for k in CSV_SCALARS]
        row += [_fmt(bool(p["flags"].get(k, False))) if p["admissible"] else ""
                for k in CSV_FLAGS]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# mesh (surfaces only)


def export_mesh(spec, shape):
    """OBJ-style quad mesh of a surface spec over its interior grid.

    Vertices carry the spatial coordinates (x2, x3, x4); the time coordinate
    x1 is returned as a sidecar column (one value per vertex, same order), a
    convention chosen because downstream viewers are three-dimensional.
    Returns (mesh_text, sidecar_text).
    """
    if spec.n_params != 2:
        raise ValueError("mesh export needs a two-parameter spec")
    rows, cols = shape
    pts = spec.interior_grid(shape)
    mesh = io.StringIO()
    side = io.StringIO()
    mesh.write("# quad mesh: spatial coordinates (x2, x3, x4); x1 in sidecar\n")
    for p in pts:
        x = eval_value(spec, p)
        mesh.write(f"v {float(x[1])!r} {float(x[2])!r} {float(x[3])!r}\n")
        side.write(f"{float(x[0])!r}\n")
    for i in range(rows - 1):
        for j in range(cols - 1):
            a = i * cols + j + 1  # OBJ indices are 1-based
            b = a + 1
            c = a + cols + 1
            d = a + cols
            mesh.write(f"f {a} {b} {c} {d}\n")
    return mesh.getvalue(), side.getvalue()
