"""Accuracy-maximizing decision thresholds over a finite score sample.

Shared by the entity-coverage feature (scores live in [0, 1]) and by
classifier-output tuning (scores live on whatever scale the model emits).
The candidate set is the two supplied extremes plus the midpoints between
consecutive distinct observed scores, so every achievable labeling of the
sample is considered exactly once.
"""

from __future__ import annotations

from typing import Sequence


def threshold_candidates(scores: Sequence[float], *, lower: float,
                         upper: float) -> list[float]:
    """Candidate cutoffs: ``lower``, midpoints of consecutive distinct
    observed scores, and ``upper`` — ascending, deduplicated."""
    distinct = sorted(set(float(s) for s in scores))
    candidates = [float(lower)]
    candidates.extend((a + b) / 2.0 for a, b in zip(distinct, distinct[1:]))
    candidates.append(float(upper))
    out: list[float] = []
    for c in candidates:
        if not out or c > out[-1]:
            out.append(c)
    return out


def accuracy_at(scores: Sequence[float], labels: Sequence[int],
                threshold: float) -> float:
    """Fraction of items where ``score >= threshold`` matches the label."""
    if len(scores) != len(labels):
        raise ValueError(f"{len(scores)} scores vs {len(labels)} labels")
    if not scores:
        raise ValueError("cannot score an empty sample")
    hits = sum(1 for s, y in zip(scores, labels)
               if (float(s) >= threshold) == bool(y))
    return hits / len(scores)


def best_accuracy_threshold(scores: Sequence[float], labels: Sequence[int], *,
                            lower: float, upper: float) -> tuple[float, float]:
    """Return ``(threshold, accuracy)`` maximizing accuracy of the rule
    ``score >= threshold``; ties go to the smallest candidate threshold."""
    best_t = None
    best_acc = -1.0
    for t in threshold_candidates(scores, lower=lower, upper=upper):
        acc = accuracy_at(scores, labels, t)
        if acc > best_acc:
            best_t, best_acc = t, acc
    assert best_t is not None
    return best_t, best_acc
