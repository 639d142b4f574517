"""Exact verification of paracontact metric structures on Lie-algebra models."""

from __future__ import annotations

__version__ = "0.1.0"

from .dsl import ParseError, format_spec, load_spec, parse_spec
from .geometry import GeometryPack, geometry
from .model import AlgebraSpec, CheckResult, ConstraintSet, Verdict
from .suite import run_suite

__all__ = [
    "__version__", "AlgebraSpec", "CheckResult", "ConstraintSet", "GeometryPack", "ParseError",
    "Verdict", "format_spec", "geometry", "load_spec", "parse_spec", "run_suite",
]
