"""Classification metrics, average-precision ranking, threshold tuning,
and paired bootstrap/permutation significance tests.

Ranking ties break by id ascending: average precision is tie-sensitive,
and a documented pessimism-free deterministic order beats an optimistic
one.  Significance resampling derives one child seed per resample index,
so results are independent of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .thresholds import best_accuracy_threshold

MetricFn = Callable[[np.ndarray, np.ndarray | None], float]


class ClassificationMetrics(NamedTuple):
    accuracy: float
    precision: float
    recall: float
    f1: float


class SignificanceResult(NamedTuple):
    bootstrap_p: float
    permutation_p: float
    observed_diff: float


class RankedItem(NamedTuple):
    id: str
    score: float
    label: int


def classification_metrics(gold: Sequence[int],
                           predicted: Sequence[int]) -> ClassificationMetrics:
    """Accuracy, precision, recall, F1 with the zero conventions:
    precision/recall are 0 on an empty denominator, F1 is 0 when
    P + R = 0."""
    g = np.asarray(gold, dtype=bool)
    p = np.asarray(predicted, dtype=bool)
    if g.shape != p.shape or g.ndim != 1:
        raise ValueError(f"gold {g.shape} and predicted {p.shape} must align")
    if len(g) == 0:
        raise ValueError("empty input")
    tp = float(np.sum(g & p))
    fp = float(np.sum(~g & p))
    fn = float(np.sum(g & ~p))
    accuracy = float(np.mean(g == p))
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return ClassificationMetrics(accuracy, precision, recall, f1)


def rank_items(ids: Sequence[str], scores: Sequence[float],
               labels: Sequence[int]) -> list[RankedItem]:
    """Sort score-descending, id-ascending; scores must be finite."""
    if not len(ids) == len(scores) == len(labels):
        raise ValueError("ids, scores, and labels must align")
    if any(not math.isfinite(float(s)) for s in scores):
        raise ValueError("scores must be finite")
    items = [RankedItem(i, float(s), int(bool(y)))
             for i, s, y in zip(ids, scores, labels)]
    return sorted(items, key=lambda item: (-item.score, item.id))


def average_precision(ranked: Sequence[RankedItem]) -> float:
    """Non-interpolated AP: mean of precision@k over positive ranks."""
    n_pos = sum(item.label for item in ranked)
    if n_pos == 0:
        raise ValueError("average precision needs at least one positive")
    hits = 0
    total = 0.0
    for k, item in enumerate(ranked, start=1):
        if item.label:
            hits += 1
            total += hits / k
    return total / n_pos


def ap_score(scores: Sequence[float], labels: Sequence[int],
             ids: Sequence[str] | None = None) -> float:
    """AP from raw columns; default ids are zero-padded indices so the
    tie-break matches input order."""
    if ids is None:
        width = len(str(max(len(list(scores)) - 1, 0)))
        ids = [str(i).zfill(width) for i in range(len(list(scores)))]
    return average_precision(rank_items(ids, scores, labels))


def precision_at_k_curve(ranked: Sequence[RankedItem]) -> list[tuple[int, float]]:
    """(k, precision@k) for every prefix of the ranking."""
    out: list[tuple[int, float]] = []
    hits = 0
    for k, item in enumerate(ranked, start=1):
        hits += item.label
        out.append((k, hits / k))
    return out


def tune_score_threshold(scores: Sequence[float],
                         labels: Sequence[int]) -> float:
    """Accuracy-maximizing cutoff for unbounded model scores; extremes
    sit one unit outside the observed range so all-positive and
    all-negative rules stay reachable."""
    if len(set(int(bool(y)) for y in labels)) < 2:
        raise ValueError("threshold tuning needs both classes")
    lo = min(float(s) for s in scores) - 1.0
    hi = max(float(s) for s in scores) + 1.0
    threshold, _ = best_accuracy_threshold(
        [float(s) for s in scores], [int(bool(y)) for y in labels],
        lower=lo, upper=hi)
    return threshold


# --- paired significance ------------------------------------------------------


def _metric_ap(scores: np.ndarray, labels: np.ndarray | None) -> float:
    assert labels is not None, "ap metric needs labels"
    return ap_score(scores.tolist(), labels.tolist())


def _metric_accuracy(scores: np.ndarray, labels: np.ndarray | None) -> float:
    assert labels is not None, "accuracy metric needs labels"
    return float(np.mean((scores >= 0.5) == labels.astype(bool)))


def _metric_mean(scores: np.ndarray, labels: np.ndarray | None) -> float:
    return float(np.mean(scores))


METRICS: dict[str, MetricFn] = {
    "ap": _metric_ap,
    "accuracy": _metric_accuracy,
    "mean": _metric_mean,
}

_MAX_METRIC_RETRIES = 1000


def _resolve_metric(metric: str | MetricFn) -> MetricFn:
    if callable(metric):
        return metric
    try:
        return METRICS[metric]
    except KeyError:
        raise ValueError(
            f"unknown metric {metric!r}; choose from {sorted(METRICS)}"
        ) from None


def _bootstrap_one(scores_a: np.ndarray, scores_b: np.ndarray,
                   labels: np.ndarray | None, metric: MetricFn,
                   seed: int, index: int) -> float:
    n = len(scores_a)
    for attempt in range(_MAX_METRIC_RETRIES):
        rng = np.random.default_rng((seed, 0, index, attempt))
        rows = rng.integers(0, n, size=n)
        sub_labels = None if labels is None else labels[rows]
        try:
            return (metric(scores_a[rows], sub_labels)
                    - metric(scores_b[rows], sub_labels))
        except ValueError:
            continue
    raise ValueError(
        f"metric undefined on {_MAX_METRIC_RETRIES} consecutive bootstrap "
        f"resamples at index {index}"
    )


def _permutation_one(scores_a: np.ndarray, scores_b: np.ndarray,
                     labels: np.ndarray | None, metric: MetricFn,
                     seed: int, index: int) -> float:
    rng = np.random.default_rng((seed, 1, index))
    flip = rng.integers(0, 2, size=len(scores_a)).astype(bool)
    perm_a = np.where(flip, scores_b, scores_a)
    perm_b = np.where(flip, scores_a, scores_b)
    return metric(perm_a, labels) - metric(perm_b, labels)


def _diff_chunk(args: tuple) -> list[float]:
    phase, scores_a, scores_b, labels, metric_name, seed, indices = args
    metric = METRICS[metric_name]
    one = _bootstrap_one if phase == "bootstrap" else _permutation_one
    return [one(scores_a, scores_b, labels, metric, seed, i) for i in indices]


def _phase_diffs(phase: str, scores_a: np.ndarray, scores_b: np.ndarray,
                 labels: np.ndarray | None, metric: str | MetricFn,
                 n_resamples: int, seed: int, jobs: int | None) -> np.ndarray:
    resolved = _resolve_metric(metric)
    if jobs and jobs > 1 and isinstance(metric, str):
        chunks = [list(range(k, n_resamples, jobs)) for k in range(jobs)]
        payloads = [(phase, scores_a, scores_b, labels, metric, seed, chunk)
                    for chunk in chunks if chunk]
        diffs = np.empty(n_resamples, dtype=np.float64)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for payload, results in zip(payloads, pool.map(_diff_chunk, payloads)):
                diffs[payload[-1]] = results
        return diffs
    one = _bootstrap_one if phase == "bootstrap" else _permutation_one
    return np.asarray([one(scores_a, scores_b, labels, resolved, seed, i)
                       for i in range(n_resamples)], dtype=np.float64)


def paired_significance(scores_a: Sequence[float], scores_b: Sequence[float],
                        labels: Sequence[int] | None = None, *,
                        metric: str | MetricFn = "ap",
                        n_resamples: int = 10_000, seed: int = 0,
                        jobs: int | None = None) -> SignificanceResult:
    """Paired bootstrap and sign-flip permutation tests.

    Bootstrap resamples items with replacement and reports the smoothed
    probability that system A fails to beat system B (``diff <= 0``);
    the permutation test swaps the two systems' scores per item with
    probability 1/2 and reports the smoothed two-sided probability of a
    difference at least as large as observed.  Both use the +1 smoothing
    ``(count + 1) / (n + 1)``, so p-values lie in (0, 1].

    ``jobs`` parallelizes over resample indices for the named metrics;
    per-index derived seeds make results worker-count independent.
    """
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or len(a) == 0:
        raise ValueError(f"misaligned score vectors: {a.shape} vs {b.shape}")
    y = None
    if labels is not None:
        y = np.asarray(labels, dtype=np.int64)
        if y.shape != a.shape:
            raise ValueError(f"labels shape {y.shape} must match scores {a.shape}")
    if n_resamples < 1000:
        raise ValueError(f"n_resamples must be >= 1000, got {n_resamples}")
    resolved = _resolve_metric(metric)
    observed = resolved(a, y) - resolved(b, y)
    boot = _phase_diffs("bootstrap", a, b, y, metric, n_resamples, seed, jobs)
    perm = _phase_diffs("permutation", a, b, y, metric, n_resamples, seed, jobs)
    bootstrap_p = (float(np.sum(boot <= 0.0)) + 1.0) / (n_resamples + 1.0)
    permutation_p = ((float(np.sum(np.abs(perm) >= abs(observed))) + 1.0)
                     / (n_resamples + 1.0))
    return SignificanceResult(bootstrap_p, permutation_p, observed)
