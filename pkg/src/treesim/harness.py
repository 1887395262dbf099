"""Batch evaluation: dataset IO, metric vectors, correlations, threshold
search, penalty-weight sweeps, and timing.

Datasets are JSONL, one object per line:
    {"id": str, "language": str, "prediction": str, "reference": str,
     "execution_match": 0|1 (optional)}

Per-sample metric failures are collected on the vector, never fatal; the
caller decides whether a failed sample ends the run.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .distance import UNIT_COSTS, CostConfig
from .llm import ChatTransport, ReplayTransport, score_pair
from .metric import tsed
from .textmetrics import DEFAULT_BLEU, BleuConfig, bleu, jaccard, tokenize

KNOWN_METRICS = ("tsed", "bleu", "jaccard", "llm")
DEFAULT_METRICS = ("tsed", "bleu", "jaccard")


class DatasetSchemaError(ValueError):
    """One or more dataset lines violate the schema; see line_errors."""

    def __init__(self, line_errors: list[str]):
        self.line_errors = line_errors
        super().__init__("; ".join(line_errors))


class ConstantInputError(ValueError):
    """Correlation is undefined for a constant sequence."""


class InsufficientDataError(ValueError):
    """Not enough pairwise-complete rows for a correlation entry."""


@dataclass(frozen=True)
class Sample:
    id: str
    language: str
    prediction: str
    reference: str
    execution_match: int | None = None


@dataclass
class MetricVector:
    sample_id: str
    language: str
    tsed: float | None = None
    bleu: float | None = None
    jaccard: float | None = None
    llm: float | None = None
    execution_match: int | None = None
    timings: dict[str, float] = field(default_factory=dict)  # milliseconds
    errors: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThresholdResult:
    threshold: float
    f1: float
    accuracy: float
    positives_predicted: int


@dataclass(frozen=True)
class CorrelationMatrix:
    metric_names: tuple[str, ...]
    r: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class SweepPoint:
    weight: float
    r: float | None
    error: str | None = None


def load_dataset(path) -> list[Sample]:
    """Read and validate a JSONL dataset; any bad line fails the whole load."""
    samples: list[Sample] = []
    problems: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"line {lineno}: invalid JSON ({exc.msg})")
                continue
            if not isinstance(obj, dict):
                problems.append(f"line {lineno}: expected an object")
                continue
            missing = [k for k in ("id", "language", "prediction", "reference") if k not in obj]
            if missing:
                problems.append(f"line {lineno}: missing field(s) {', '.join(missing)}")
                continue
            bad_type = [
                k for k in ("id", "language", "prediction", "reference")
                if not isinstance(obj[k], str)
            ]
            if bad_type:
                problems.append(f"line {lineno}: non-string field(s) {', '.join(bad_type)}")
                continue
            match = obj.get("execution_match")
            if isinstance(match, bool):
                match = int(match)
            if match is not None and match not in (0, 1):
                problems.append(f"line {lineno}: execution_match must be 0 or 1, got {obj['execution_match']!r}")
                continue
            samples.append(
                Sample(
                    id=obj["id"],
                    language=obj["language"],
                    prediction=obj["prediction"],
                    reference=obj["reference"],
                    execution_match=match,
                )
            )
    if problems:
        raise DatasetSchemaError(problems)
    return samples


def _normalize_metrics(metrics) -> tuple[str, ...]:
    chosen = tuple(metrics)
    unknown = [m for m in chosen if m not in KNOWN_METRICS]
    if unknown:
        raise ValueError(f"unknown metric(s) {unknown}; known: {list(KNOWN_METRICS)}")
    return chosen


def _evaluate_one(
    sample: Sample,
    metrics: tuple[str, ...],
    costs: CostConfig,
    bleu_cfg: BleuConfig,
    transport: ChatTransport | None,
) -> MetricVector:
    vector = MetricVector(
        sample_id=sample.id,
        language=sample.language,
        execution_match=sample.execution_match,
    )
    errors: list[str] = []
    pred_tokens = ref_tokens = None
    for metric in metrics:
        start = time.monotonic()
        try:
            if metric == "tsed":
                score = tsed(sample.prediction, sample.reference, sample.language, costs)
                vector.tsed = score.value
                if score.pred_parse_errors or score.ref_parse_errors:
                    sides = [
                        side
                        for side, flagged in (
                            ("pred", score.pred_parse_errors),
                            ("ref", score.ref_parse_errors),
                        )
                        if flagged
                    ]
                    errors.append(f"tsed: parse errors in {'/'.join(sides)} (scored on recovery tree)")
            elif metric == "bleu":
                if pred_tokens is None:
                    pred_tokens = tokenize(sample.prediction)
                    ref_tokens = tokenize(sample.reference)
                vector.bleu = bleu(pred_tokens, ref_tokens, bleu_cfg)
            elif metric == "jaccard":
                if pred_tokens is None:
                    pred_tokens = tokenize(sample.prediction)
                    ref_tokens = tokenize(sample.reference)
                vector.jaccard = jaccard(pred_tokens, ref_tokens)
            elif metric == "llm":
                result = score_pair(sample.language, sample.prediction, sample.reference, transport)
                vector.llm = result.value
        except Exception as exc:
            errors.append(f"{metric}: {exc}")
        vector.timings[metric] = (time.monotonic() - start) * 1000.0
    vector.errors = tuple(errors)
    return vector


def evaluate(
    samples,
    metrics=DEFAULT_METRICS,
    costs: CostConfig = UNIT_COSTS,
    bleu_cfg: BleuConfig = DEFAULT_BLEU,
    transport: ChatTransport | None = None,
    jobs: int = 1,
) -> list[MetricVector]:
    """One MetricVector per sample, order preserved; failures recorded per
    sample rather than raised."""
    chosen = _normalize_metrics(metrics)
    if "llm" in chosen and transport is None:
        raise ValueError("llm metric selected but no transport given")
    samples = list(samples)
    if jobs > 1 and len(samples) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(
                pool.map(lambda s: _evaluate_one(s, chosen, costs, bleu_cfg, transport), samples)
            )
    return [_evaluate_one(s, chosen, costs, bleu_cfg, transport) for s in samples]


def failed_samples(vectors) -> list[tuple[str, tuple[str, ...]]]:
    """Summary of per-sample failures: (sample_id, errors) for bad ones."""
    return [(v.sample_id, v.errors) for v in vectors if v.errors]


def pearson(xs, ys) -> float:
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        which = "first" if var_x == 0.0 else "second"
        raise ConstantInputError(f"{which} input is constant; correlation undefined")
    return math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)


def _metric_column(vectors, name: str):
    return [getattr(v, name) for v in vectors]


def correlation_matrix(vectors, metric_names=None) -> CorrelationMatrix:
    """Pairwise-complete Pearson matrix over the requested metric columns.

    For each pair, rows missing either value are dropped; fewer than two
    surviving rows is an error naming the pair.
    """
    if metric_names is None:
        metric_names = [
            name
            for name in ("tsed", "bleu", "jaccard", "llm", "execution_match")
            if any(value is not None for value in _metric_column(vectors, name))
        ]
    names = tuple(metric_names)
    columns = {name: _metric_column(vectors, name) for name in names}
    size = len(names)
    matrix = [[1.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            paired = [
                (a, b)
                for a, b in zip(columns[names[i]], columns[names[j]])
                if a is not None and b is not None
            ]
            if len(paired) < 2:
                raise InsufficientDataError(
                    f"fewer than 2 complete rows for pair ({names[i]}, {names[j]})"
                )
            value = pearson([p[0] for p in paired], [p[1] for p in paired])
            matrix[i][j] = value
            matrix[j][i] = value
    return CorrelationMatrix(metric_names=names, r=tuple(tuple(row) for row in matrix))


def _apply_threshold(scores, labels, threshold: float) -> tuple[float, float, int]:
    tp = fp = fn = tn = 0
    for score, label in zip(scores, labels):
        predicted = 1 if score > threshold else 0
        if predicted and label:
            tp += 1
        elif predicted and not label:
            fp += 1
        elif not predicted and label:
            fn += 1
        else:
            tn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    accuracy = (tp + tn) / len(scores)
    return f1, accuracy, tp + fp


def optimize_threshold(scores, labels, step: float = 0.01) -> ThresholdResult:
    """Enumerate T in {0, step, ..., 1}; prediction is 1 iff score > T.

    Maximizes F1; ties prefer higher accuracy, then the smaller threshold.
    """
    scores = [float(s) for s in scores]
    labels = [int(l) for l in labels]
    if len(scores) != len(labels):
        raise ValueError(f"length mismatch: {len(scores)} scores vs {len(labels)} labels")
    if not (0.0 < step <= 0.5):
        raise ValueError(f"step must be in (0, 0.5], got {step}")
    if not any(labels) or all(labels):
        raise ValueError("labels are degenerate: need at least one 0 and one 1")

    steps = int(round(1.0 / step))
    candidates = [i * step for i in range(steps)] + [1.0]
    best: ThresholdResult | None = None
    for threshold in candidates:
        f1, accuracy, positives = _apply_threshold(scores, labels, threshold)
        if (
            best is None
            or f1 > best.f1
            or (f1 == best.f1 and accuracy > best.accuracy)
        ):
            best = ThresholdResult(threshold, f1, accuracy, positives)
    return best


def weight_sweep(samples, vary: str, grid, target, bleu_cfg: BleuConfig = DEFAULT_BLEU) -> list[SweepPoint]:
    """Vary one penalty weight over a grid (other weights at 1.0); correlate
    the resulting scores against the target sequence per grid value."""
    if vary not in ("delete", "insert", "rename"):
        raise ValueError(f"vary must be delete, insert, or rename, got {vary!r}")
    samples = list(samples)
    target = [float(t) for t in target]
    if len(target) != len(samples):
        raise ValueError(f"target length {len(target)} != sample count {len(samples)}")
    points: list[SweepPoint] = []
    for weight in grid:
        if not (weight >= 0):
            raise ValueError(f"grid weights must be >= 0, got {weight!r}")
        kwargs = {f"{vary}_weight": float(weight)}
        costs = CostConfig(**kwargs)
        try:
            scores = [
                tsed(s.prediction, s.reference, s.language, costs).value for s in samples
            ]
            points.append(SweepPoint(weight=float(weight), r=pearson(scores, target)))
        except (ConstantInputError, ValueError) as exc:
            points.append(SweepPoint(weight=float(weight), r=None, error=str(exc)))
    return points


def _round_sig(value: float, digits: int = 4) -> float:
    return float(f"%.{digits}g" % value)


@dataclass(frozen=True)
class TimingStats:
    mean_ms: float
    per_language: dict[str, float]
    measurements: int


def timing_benchmark(
    samples,
    metrics=DEFAULT_METRICS,
    repeats: int = 1,
    costs: CostConfig = UNIT_COSTS,
    bleu_cfg: BleuConfig = DEFAULT_BLEU,
    transport: ChatTransport | None = None,
) -> dict[str, TimingStats]:
    """Mean wall-clock per metric (and per language), single-threaded.

    Times are milliseconds rounded to 4 significant digits.  LLM timing only
    runs against a live transport; replayed responses would time the
    dictionary lookup, not the metric.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    chosen = _normalize_metrics(metrics)
    if "llm" in chosen and isinstance(transport, ReplayTransport):
        chosen = tuple(m for m in chosen if m != "llm")
    samples = list(samples)
    if samples:
        # warm-up: first-use costs (JIT compilation, regex caches) are real
        # but belong to no particular measurement
        _evaluate_one(samples[0], chosen, costs, bleu_cfg, transport)

    durations: dict[str, list[tuple[str, float]]] = {m: [] for m in chosen}
    for _ in range(repeats):
        for sample in samples:
            vector = _evaluate_one(sample, chosen, costs, bleu_cfg, transport)
            for metric in chosen:
                durations[metric].append((sample.language, vector.timings[metric]))
    report = {}
    for metric in chosen:
        rows = durations[metric]
        if not rows:
            report[metric] = TimingStats(0.0, {}, 0)
            continue
        by_language: dict[str, list[float]] = {}
        for language, ms in rows:
            by_language.setdefault(language, []).append(ms)
        report[metric] = TimingStats(
            mean_ms=_round_sig(math.fsum(ms for _, ms in rows) / len(rows)),
            per_language={
                lang: _round_sig(math.fsum(values) / len(values))
                for lang, values in sorted(by_language.items())
            },
            measurements=len(rows),
        )
    return report
