"""Certified bounds on topological complexity from cohomology rings."""

from .builders import AssertionSet, GroupPresentation, MarkSpec, Space, bundled, presentation_complex, product
from .field_linalg import QQ, FieldSpec
from .replay import ReplayFailure, replay
from .tc_engine import Certificate, certify

__all__ = [
    "AssertionSet", "Certificate", "FieldSpec", "GroupPresentation", "MarkSpec", "QQ", "ReplayFailure",
    "Space", "bundled", "certify", "presentation_complex", "product", "replay",
]
__version__ = "0.1.0"
