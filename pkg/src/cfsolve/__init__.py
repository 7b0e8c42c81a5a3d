"""Exact real root isolation for integer polynomial systems.

The solver maps sub-boxes of the domain onto the positive orthant with
per-axis homographies, shifts and splits them like a multivariate continued
fraction expansion, and stops on boxes that are proven empty or proven to
hold a single simple root.
"""

__version__ = "0.1.0"

from .homography import AxisMap, DomainBox, Homography, apply_homography, bernstein_coeffs, for_box
from .parse import ParseError, ParsedSystem, format_system, parse_box, parse_system
from .solver import (
    Certificate,
    IsolationResult,
    RootReport,
    SolveConfig,
    SolveStats,
    report_roots,
    solve,
)
from .tensorpoly import Sign, TensorPoly, evaluate
from .unicf import isolate_positive_roots

__all__ = [
    "__version__",
    "AxisMap",
    "DomainBox",
    "Homography",
    "apply_homography",
    "bernstein_coeffs",
    "for_box",
    "ParseError",
    "ParsedSystem",
    "format_system",
    "parse_box",
    "parse_system",
    "Certificate",
    "IsolationResult",
    "RootReport",
    "SolveConfig",
    "SolveStats",
    "report_roots",
    "solve",
    "Sign",
    "TensorPoly",
    "evaluate",
    "isolate_positive_roots",
]
