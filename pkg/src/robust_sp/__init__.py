"""Minimax (robust) shortest paths on graphs with set-membership successor uncertainty."""

from .graph import DEST, Control, RspGraph
from .errors import (
    AssumptionViolation,
    ImproperPolicyError,
    IndeterminateSum,
    NoProperPolicyError,
    RspError,
)

__all__ = [
    "DEST",
    "Control",
    "RspGraph",
    "RspError",
    "AssumptionViolation",
    "ImproperPolicyError",
    "IndeterminateSum",
    "NoProperPolicyError",
]
