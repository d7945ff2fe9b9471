"""Algebraic perspective-three-point pose solver with reference oracles and a benchmark harness."""

from .errors import (
    CandidateRejected,
    ConfigError,
    DegenerateBearings,
    DegenerateCollinearFeatures,
    DegenerateConfiguration,
    DegenerateDenominator,
    DegenerateParallel,
    GeneratorExhausted,
    InvalidPolynomial,
    NonPositiveDepth,
    P3PError,
    RankDeficient,
    SignUndetermined,
)
from .polyroots import QuarticPoly, polish_roots, solve_quartic
from .so3 import rodrigues, rotation_angle_error, skew
from .solver import FeatureTriad, PoseSolution, SolverOptions, build_frame, solve

__all__ = [
    "CandidateRejected", "ConfigError", "DegenerateBearings", "DegenerateCollinearFeatures",
    "DegenerateConfiguration", "DegenerateDenominator", "DegenerateParallel", "GeneratorExhausted",
    "InvalidPolynomial", "NonPositiveDepth", "P3PError", "RankDeficient", "SignUndetermined",
    "QuarticPoly", "polish_roots", "solve_quartic", "rodrigues", "rotation_angle_error", "skew",
    "FeatureTriad", "PoseSolution", "SolverOptions", "build_frame", "solve",
]
