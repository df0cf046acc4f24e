"""Distant supervision from event-cluster annotations and crowd judgments.

Gold event clusters over news documents induce labels for predicate
pairs: two lemmas sharing a cluster anywhere are a positive pair; two
lemmas appearing in different clusters of one topic (and never sharing a
cluster) are a negative pair.  Separately, crowd judgments over up to
three example instantiations per entry aggregate by per-instantiation
majority vote, then OR across instantiations.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, ParseError
from .rng import SplitMix64

MAX_INSTANTIATIONS = 3


@dataclass(frozen=True)
class Mention:
    """One annotated event mention: document, predicate lemma, token span."""

    doc: str
    lemma: str
    span: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "span", tuple(self.span))


@dataclass(frozen=True)
class EventClusterAnnotation:
    """Gold clustering of the event mentions of one topic."""

    topic: str
    clusters: tuple[frozenset[Mention], ...]

    def __post_init__(self):
        object.__setattr__(self, "clusters",
                           tuple(frozenset(c) for c in self.clusters))
        seen: set[Mention] = set()
        for cluster in self.clusters:
            if cluster & seen:
                raise ValueError(
                    f"topic {self.topic!r}: clusters are not disjoint"
                )
            seen |= cluster

    def lemma_sets(self) -> list[frozenset[str]]:
        return [frozenset(m.lemma.casefold() for m in c) for c in self.clusters]


@dataclass(frozen=True)
class Judgment:
    """One worker's vote on one instantiation of an entry."""

    entry_id: str
    instantiation: int
    worker: str
    vote: bool

    def __post_init__(self):
        if not 0 <= self.instantiation < MAX_INSTANTIATIONS:
            raise ValueError(
                f"instantiation index must be in [0, {MAX_INSTANTIATIONS}), "
                f"got {self.instantiation}"
            )


def _entry_lemma_pairs(corpus: Corpus) -> dict[str, frozenset[str]]:
    return {entry.id: entry.lemma_pair for entry in corpus.entries}


def derive_positives(annotations: Sequence[EventClusterAnnotation],
                     corpus: Corpus) -> set[str]:
    """Entry ids whose two lemmas co-occur in some gold event cluster."""
    cluster_lemmas = [ls for ann in annotations for ls in ann.lemma_sets()]
    positives: set[str] = set()
    for entry_id, pair in _entry_lemma_pairs(corpus).items():
        if any(pair <= lemmas for lemmas in cluster_lemmas):
            positives.add(entry_id)
    return positives


def derive_negatives(annotations: Sequence[EventClusterAnnotation],
                     corpus: Corpus) -> set[str]:
    """Entry ids whose lemmas appear in two different clusters of one
    topic, excluding entries that are positive anywhere (positive
    evidence wins)."""
    positives = derive_positives(annotations, corpus)
    negatives: set[str] = set()
    for entry_id, pair in _entry_lemma_pairs(corpus).items():
        if entry_id in positives:
            continue
        lemmas = sorted(pair)
        first, second = lemmas[0], lemmas[-1]
        for ann in annotations:
            sets = ann.lemma_sets()
            cross = any(
                first in sets[i] and second in sets[j]
                for i in range(len(sets)) for j in range(len(sets))
                if i != j
            )
            if cross:
                negatives.add(entry_id)
                break
    return negatives


def derive_labels(annotations: Sequence[EventClusterAnnotation],
                  corpus: Corpus) -> dict[str, bool]:
    """Distant labels for every entry with any evidence; positives win."""
    labels = {entry_id: False
              for entry_id in derive_negatives(annotations, corpus)}
    labels.update({entry_id: True
                   for entry_id in derive_positives(annotations, corpus)})
    return labels


def aggregate_judgments(judgments: Sequence[Judgment]) -> bool:
    """Majority vote per instantiation, OR across instantiations.

    Every instantiation needs an odd number of workers, and all judgments
    must belong to one entry.
    """
    if not judgments:
        raise ValueError("no judgments to aggregate")
    entry_ids = {j.entry_id for j in judgments}
    if len(entry_ids) != 1:
        raise ValueError(f"judgments span multiple entries: {sorted(entry_ids)}")
    by_instantiation: dict[int, list[bool]] = {}
    for j in judgments:
        by_instantiation.setdefault(j.instantiation, []).append(j.vote)
    for idx, votes in sorted(by_instantiation.items()):
        if len(votes) % 2 == 0:
            raise ValueError(
                f"instantiation {idx} has an even worker count ({len(votes)})"
            )
    return any(sum(votes) * 2 > len(votes)
               for votes in by_instantiation.values())


def crowd_labels(judgments: Iterable[Judgment]) -> dict[str, bool]:
    """Aggregate a judgment stream into one label per entry."""
    by_entry: dict[str, list[Judgment]] = {}
    for j in judgments:
        by_entry.setdefault(j.entry_id, []).append(j)
    return {entry_id: aggregate_judgments(group)
            for entry_id, group in by_entry.items()}


def assign_splits(entry_ids: Iterable[str], fractions: Mapping[str, float],
                  seed: int) -> dict[str, str]:
    """Deterministic random split assignment.

    ``fractions`` maps split name to a nonnegative weight summing to 1
    (within 1e-9).  Ids are sorted, shuffled with the seeded generator,
    then cut into contiguous blocks; the last split absorbs rounding.
    """
    names = sorted(fractions)
    total = sum(fractions[n] for n in names)
    if any(fractions[n] < 0 for n in names) or abs(total - 1.0) > 1e-9:
        raise ValueError(f"split fractions must be nonnegative and sum to 1, "
                         f"got {dict(fractions)}")
    ids = sorted(set(entry_ids))
    rng = SplitMix64(seed)
    rng.shuffle(ids)
    out: dict[str, str] = {}
    start = 0
    for i, name in enumerate(names):
        if i == len(names) - 1:
            stop = len(ids)
        else:
            stop = start + int(round(fractions[name] * len(ids)))
            stop = min(stop, len(ids))
        for entry_id in ids[start:stop]:
            out[entry_id] = name
        start = stop
    return out


# --- serialization -----------------------------------------------------------


def load_annotations(path: str | Path) -> list[EventClusterAnnotation]:
    """Read ``annotations.jsonl``::

        {"topic": "36", "clusters": [
            [{"doc": "36_1", "lemma": "talk", "span": [4, 5]}, ...], ...]}
    """
    out: list[EventClusterAnnotation] = []
    seen_topics: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                annotation = EventClusterAnnotation(
                    topic=record["topic"],
                    clusters=tuple(
                        frozenset(Mention(doc=m["doc"], lemma=m["lemma"],
                                          span=tuple(m["span"]))
                                  for m in cluster)
                        for cluster in record["clusters"]
                    ),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, line_no,
                                 f"bad annotation record: {exc}") from exc
            if annotation.topic in seen_topics:
                raise ParseError(path, line_no,
                                 f"duplicate topic {annotation.topic!r}")
            seen_topics.add(annotation.topic)
            out.append(annotation)
    return out


def load_judgments(path: str | Path) -> list[Judgment]:
    """Read ``judgments.csv`` with header
    ``entry_id,instantiation,worker,vote`` (vote in {0, 1})."""
    expected = ("entry_id", "instantiation", "worker", "vote")
    out: list[Judgment] = []
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != expected:
            raise ParseError(path, 1,
                             f"unexpected header {header!r}; expected {expected!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ParseError(path, line_no, f"expected 4 columns, got {len(row)}")
            try:
                out.append(Judgment(entry_id=row[0], instantiation=int(row[1]),
                                    worker=row[2], vote=bool(int(row[3]))))
            except ValueError as exc:
                raise ParseError(path, line_no, f"bad judgment row: {exc}") from exc
    return out


def save_labels(labels: Mapping[str, bool], splits: Mapping[str, str],
                sources: Mapping[str, str], path: str | Path) -> None:
    """Write ``labels.csv``: ``entry_id,label,split,source``, sorted by id."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("entry_id", "label", "split", "source"))
        for entry_id in sorted(labels):
            writer.writerow((entry_id, int(labels[entry_id]),
                             splits.get(entry_id, "train"),
                             sources.get(entry_id, "distant")))


def load_labels(path: str | Path) -> tuple[dict[str, bool], dict[str, str]]:
    """Read ``labels.csv``; returns (labels, splits)."""
    expected = ("entry_id", "label", "split", "source")
    labels: dict[str, bool] = {}
    splits: dict[str, str] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != expected:
            raise ParseError(path, 1,
                             f"unexpected header {header!r}; expected {expected!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ParseError(path, line_no, f"expected 4 columns, got {len(row)}")
            if row[0] in labels:
                raise ParseError(path, line_no, f"duplicate entry id {row[0]!r}")
            labels[row[0]] = bool(int(row[1]))
            splits[row[0]] = row[2]
    return labels, splits
