"""Tree similarity score: edit distance normalized by the larger tree.

score = max(1 - delta / max_nodes, 0)

where delta is the minimum edit cost and max_nodes the node count of the
bigger tree.  The outer max() is the ramp: once the edit cost exceeds the
size of the larger tree the score pins at 0 instead of going negative.
Identical inputs score exactly 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import parsing
from .distance import UNIT_COSTS, CostConfig, edit_distance
from .tree import SyntaxTree


@dataclass(frozen=True)
class TsedScore:
    value: float
    delta: float
    max_nodes: int
    pred_parse_errors: bool = False
    ref_parse_errors: bool = False


def tsed_from_trees(t1: SyntaxTree, t2: SyntaxTree, costs: CostConfig = UNIT_COSTS) -> TsedScore:
    delta = edit_distance(t1, t2, costs).delta
    max_nodes = max(t1.node_total, t2.node_total)
    value = max(1.0 - delta / max_nodes, 0.0)
    return TsedScore(
        value=value,
        delta=delta,
        max_nodes=max_nodes,
        pred_parse_errors=t1.had_parse_errors,
        ref_parse_errors=t2.had_parse_errors,
    )


def tsed(pred: str, ref: str, language: str, costs: CostConfig = UNIT_COSTS) -> TsedScore:
    """Parse both sides (pred first) and score their structural similarity."""
    t1, t2 = parsing.parse_pair(pred, ref, language)
    return tsed_from_trees(t1, t2, costs)
