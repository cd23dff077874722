"""Exact q-series arithmetic, an identity catalog and partition-theorem checks."""

from .catalog import IdentityEntry, build_side
from .engine import VerificationReport, specialize_check, verify, verify_all, verify_limit
from .series import InsufficientTruncation, Monomial, Series, equal_up_to, parse, serialize
from .theorems import gf_cross_check, theorem_check

__all__ = [
    "IdentityEntry", "build_side",
    "VerificationReport", "specialize_check", "verify", "verify_all", "verify_limit",
    "InsufficientTruncation", "Monomial", "Series", "equal_up_to", "parse", "serialize",
    "gf_cross_check", "theorem_check",
]
