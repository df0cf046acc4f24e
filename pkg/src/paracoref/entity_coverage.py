"""Named-entity coverage (NEC) scoring and its tuned decision threshold.

NEC of two entity sets is the larger of the two containment ratios of
their intersection; a tweet pair whose articles mention mostly the same
entities is likely to describe the same event.  A small labeled set of
tweet pairs tunes the cutoff; absent one, the default ``DEFAULT_THRESHOLD``
is used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus, ParaphraseEntry, ParseError, SupportPair
from .thresholds import best_accuracy_threshold

DEFAULT_THRESHOLD = 0.26


@dataclass(frozen=True)
class NECLabeledPair:
    """A tweet pair hand-labeled as coreferring or not, for tuning."""

    left: str
    right: str
    label: bool


def nec(ne1: Iterable[str], ne2: Iterable[str]) -> float:
    """max(|A∩B|/|A|, |A∩B|/|B|); 0.0 when either set is empty."""
    a = frozenset(ne1)
    b = frozenset(ne2)
    if not a or not b:
        return 0.0
    common = len(a & b)
    return max(common / len(a), common / len(b))


def pair_nec(pair: SupportPair) -> float:
    return nec(pair.left.named_entities, pair.right.named_entities)


def tune_threshold(pairs: Sequence[NECLabeledPair], corpus: Corpus) -> float:
    """Accuracy-maximizing NEC cutoff over a labeled tweet-pair set.

    Candidates are 0, midpoints between adjacent distinct observed scores,
    and 1; ties break toward the smaller cutoff.  Requires both label
    values to be present.
    """
    if not pairs:
        raise ValueError("empty labeled set")
    labels = [int(p.label) for p in pairs]
    if len(set(labels)) < 2:
        raise ValueError("labeled set must contain both positive and negative pairs")
    scores = []
    for p in pairs:
        for tweet_id in (p.left, p.right):
            if tweet_id not in corpus.tweets:
                raise KeyError(f"labeled pair references unknown tweet {tweet_id!r}")
        scores.append(nec(corpus.tweets[p.left].named_entities,
                          corpus.tweets[p.right].named_entities))
    threshold, _ = best_accuracy_threshold(scores, labels, lower=0.0, upper=1.0)
    return threshold


def nec_features(entry: ParaphraseEntry, threshold: float) -> tuple[int, float]:
    """(number of support pairs with NEC >= threshold, their mean NEC).

    The mean is 0.0 when no pair clears the threshold.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    above = [s for s in map(pair_nec, entry.support_pairs) if s >= threshold]
    if not above:
        return 0, 0.0
    return len(above), sum(above) / len(above)


def load_nec_labels(path: str | Path) -> list[NECLabeledPair]:
    """Read ``nec_labels.jsonl``: ``{"left": id, "right": id, "label": bool}``."""
    out: list[NECLabeledPair] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                out.append(NECLabeledPair(left=record["left"],
                                          right=record["right"],
                                          label=bool(record["label"])))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParseError(path, line_no, f"bad NEC label record: {exc}") from exc
    return out
