"""Token-level baseline metrics: BLEU and Jaccard.

Both run on the same tokenization: maximal alphanumeric/underscore runs are
one token each, every other non-space character is its own token, so
"x==1" -> ["x", "=", "=", "1"].
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+|[^\sA-Za-z0-9_]")


@dataclass(frozen=True)
class BleuConfig:
    max_order: int = 4
    smoothing_epsilon: float = 1e-9
    brevity_penalty_enabled: bool = True

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        if not (self.smoothing_epsilon > 0):
            raise ValueError(f"smoothing_epsilon must be > 0, got {self.smoothing_epsilon}")


DEFAULT_BLEU = BleuConfig()


def tokenize(source: str) -> list[str]:
    return _TOKEN_RE.findall(source)


def _ngrams(tokens, order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(pred, ref, cfg: BleuConfig = DEFAULT_BLEU) -> float:
    """Geometric mean of clipped n-gram precisions, times a brevity penalty.

    Zero precisions are floored at cfg.smoothing_epsilon instead of zeroing
    the whole score.  An empty prediction scores 0.0; an empty reference is
    a caller error.
    """
    pred = list(pred)
    ref = list(ref)
    if not ref:
        raise ValueError("bleu: reference token sequence must be non-empty")
    if not pred:
        return 0.0

    log_sum = []
    for order in range(1, cfg.max_order + 1):
        pred_grams = _ngrams(pred, order)
        ref_grams = _ngrams(ref, order)
        total = sum(pred_grams.values())
        clipped = sum(min(count, ref_grams[gram]) for gram, count in pred_grams.items())
        precision = clipped / total if total else 0.0
        if precision <= 0.0:
            precision = cfg.smoothing_epsilon
        log_sum.append(math.log(precision) / cfg.max_order)
    score = math.exp(math.fsum(log_sum))

    if cfg.brevity_penalty_enabled:
        score *= min(1.0, math.exp(1.0 - len(ref) / len(pred)))
    return score


def jaccard(pred, ref) -> float:
    """Intersection over union of the two token sets; both empty -> 1.0."""
    pred_set = set(pred)
    ref_set = set(ref)
    union = pred_set | ref_set
    if not union:
        return 1.0
    return len(pred_set & ref_set) / len(union)
