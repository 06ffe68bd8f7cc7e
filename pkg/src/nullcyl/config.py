"""Tolerance configuration shared across the package."""

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds; all relative unless noted.

    causal      -- causal-character zero test
    sym         -- symmetry test for operators
    gram        -- positive-definiteness margin for Gram matrices
    cone        -- admissibility threshold for the cone constraint
    algebraic   -- pointwise algebra (frame pairings, Weingarten duality)
    classify    -- classification predicates (outer-differencing limited)
    fd_step     -- base step for outer central differences
    """

    causal: float = 1e-9
    sym: float = 1e-9
    gram: float = 1e-9
    cone: float = 1e-8
    algebraic: float = 1e-8
    classify: float = 1e-5
    fd_step: float = 1e-4

    def as_dict(self):
        return asdict(self)


DEFAULT_TOL = Tolerances()

VERSION = "0.1.0"
