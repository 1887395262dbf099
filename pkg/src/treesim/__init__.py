"""Structural code similarity: normalized tree edit distance plus baselines."""

from .distance import (
    CostConfig,
    EditDistanceResult,
    OracleSizeError,
    UNIT_COSTS,
    brute_force_distance,
    edit_distance,
)
from .tree import BracketParseError, SyntaxTree, TreeNode, from_bracket, node_count, to_bracket

__version__ = "0.1.0"

__all__ = [
    "BracketParseError",
    "CostConfig",
    "EditDistanceResult",
    "OracleSizeError",
    "SyntaxTree",
    "TreeNode",
    "UNIT_COSTS",
    "brute_force_distance",
    "edit_distance",
    "from_bracket",
    "node_count",
    "to_bracket",
]
