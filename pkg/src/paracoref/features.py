"""Assembly of the 17-slot feature vector and labeled design matrices.

This module owns the vector layout: six resource counts, three
entity-coverage slots, three graph slots, five clustering-decision
counts.  ``FEATURE_NAMES`` is the frozen slot order; every consumer
(training, CSV serialization, the CLI) indexes through it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .coref_decisions import (DecisionMap, coref_feature_counts,
                              perfectly_clustered_with_nec)
from .corpus import Corpus, CorpusMeta, ParaphraseEntry, base_features
from .entity_coverage import nec_features
from .graph_features import Graph, graph_feature_slots

FEATURE_NAMES: tuple[str, ...] = (
    # resource counts
    "variant_count",
    "support_pair_count",
    "support_day_count",
    "heuristic_score",
    "available_pair_count",
    "available_day_count",
    # entity coverage
    "nec_above_count",
    "nec_above_mean",
    "nec_event_perfect_count",
    # graph structure
    "components_gt2_count",
    "component_size_mean",
    "clique_pair_count",
    # clustering decisions
    "event_perfect_count",
    "event_no_match_count",
    "entity_perfect_count",
    "entity_reversed_count",
    "entity_no_match_count",
)

N_FEATURES = len(FEATURE_NAMES)
assert N_FEATURES == 17

# Slots holding means/scores; all others are counts and must be integral.
_NON_COUNT_SLOTS = frozenset({
    FEATURE_NAMES.index("heuristic_score"),
    FEATURE_NAMES.index("nec_above_mean"),
    FEATURE_NAMES.index("component_size_mean"),
})


def slot_index(name: str) -> int:
    """Position of a named feature; raises ``ValueError`` for unknown names."""
    try:
        return FEATURE_NAMES.index(name)
    except ValueError:
        raise ValueError(f"unknown feature {name!r}") from None


def validate_vector(vector: np.ndarray) -> None:
    """Enforce the layout invariants: length 17, finite, nonnegative."""
    if vector.shape != (N_FEATURES,):
        raise ValueError(f"expected shape ({N_FEATURES},), got {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise ValueError("feature vector contains NaN or infinity")
    if np.any(vector < 0):
        raise ValueError("feature slots must be nonnegative")


def assemble(entry: ParaphraseEntry, meta: CorpusMeta, threshold: float,
             decisions: DecisionMap, global_graph: Graph) -> np.ndarray:
    """Deterministic 17-vector for one entry, in ``FEATURE_NAMES`` order."""
    above_count, above_mean = nec_features(entry, threshold)
    vector = np.array(
        base_features(entry, meta)
        + (
            float(above_count),
            above_mean,
            float(perfectly_clustered_with_nec(entry, decisions, threshold)),
        )
        + graph_feature_slots(entry, global_graph)
        + tuple(float(c) for c in coref_feature_counts(entry, decisions)),
        dtype=np.float64,
    )
    validate_vector(vector)
    return vector


@dataclass(frozen=True)
class LabeledDataset:
    """Design matrix with ids, labels, and train/dev/test tags."""

    entry_ids: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    splits: tuple[str, ...]

    def __post_init__(self):
        n = len(self.entry_ids)
        if self.X.shape != (n, N_FEATURES):
            raise ValueError(f"X shape {self.X.shape} != ({n}, {N_FEATURES})")
        if self.y.shape != (n,) or len(self.splits) != n:
            raise ValueError("ids, X, y, and splits must align")
        for split in sorted(set(self.splits)):
            ids = [i for i, s in zip(self.entry_ids, self.splits) if s == split]
            if len(ids) != len(set(ids)):
                raise ValueError(f"duplicate entry ids within split {split!r}")

    def __len__(self) -> int:
        return len(self.entry_ids)

    def subset(self, split: str) -> "LabeledDataset":
        mask = [i for i, s in enumerate(self.splits) if s == split]
        return LabeledDataset(
            entry_ids=tuple(self.entry_ids[i] for i in mask),
            X=self.X[mask].copy() if mask else np.empty((0, N_FEATURES)),
            y=self.y[mask].copy() if mask else np.empty((0,), dtype=np.int64),
            splits=tuple(self.splits[i] for i in mask),
        )


def build_dataset(corpus: Corpus, labels: Mapping[str, bool], threshold: float,
                  decisions: DecisionMap, global_graph: Graph, *,
                  splits: Mapping[str, str] | None = None,
                  min_support: int = 3) -> LabeledDataset:
    """Assemble rows for every labeled entry with enough support pairs.

    Entries below ``min_support`` pairs are dropped; a label for an id
    missing from the corpus is an error.  Row order follows corpus entry
    order for determinism.
    """
    unknown = set(labels) - {e.id for e in corpus.entries}
    if unknown:
        raise KeyError(f"labels reference unknown entries: {sorted(unknown)[:5]}")
    ids: list[str] = []
    rows: list[np.ndarray] = []
    y: list[int] = []
    tags: list[str] = []
    for entry in corpus.entries:
        if entry.id not in labels:
            continue
        if len(entry.support_pairs) < min_support:
            continue
        ids.append(entry.id)
        rows.append(assemble(entry, corpus.meta, threshold, decisions,
                             global_graph))
        y.append(int(bool(labels[entry.id])))
        tags.append(splits.get(entry.id, "train") if splits else "train")
    X = np.vstack(rows) if rows else np.empty((0, N_FEATURES))
    return LabeledDataset(entry_ids=tuple(ids), X=X,
                          y=np.asarray(y, dtype=np.int64), splits=tuple(tags))


# --- lemma-pair feature table ---------------------------------------------------


def feature_table(corpus: Corpus, threshold: float, decisions: DecisionMap,
                  global_graph: Graph) -> dict[frozenset[str], np.ndarray]:
    """Feature vectors keyed by case-folded lemma pair, for consumers that
    look entries up by predicate pair rather than entry id.  When several
    entries share a lemma pair, the best-supported one wins (ties break
    toward the smaller entry id)."""
    chosen: dict[frozenset[str], ParaphraseEntry] = {}
    for entry in corpus.entries:
        key = entry.lemma_pair
        current = chosen.get(key)
        if (current is None
                or len(entry.support_pairs) > len(current.support_pairs)
                or (len(entry.support_pairs) == len(current.support_pairs)
                    and entry.id < current.id)):
            chosen[key] = entry
    return {key: assemble(entry, corpus.meta, threshold, decisions, global_graph)
            for key, entry in chosen.items()}


def save_feature_table(table: Mapping[frozenset[str], np.ndarray],
                       path: str | Path) -> None:
    """One ``{"lemmas": [...], "features": [...]}`` line per lemma pair."""
    rows = []
    for key in table:
        lemmas = sorted(key)
        if len(lemmas) == 1:
            lemmas = lemmas * 2
        rows.append({"lemmas": lemmas,
                     "features": [float(v) for v in table[key]]})
    rows.sort(key=lambda r: r["lemmas"])
    with Path(path).open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def load_feature_table(path: str | Path) -> dict[frozenset[str], np.ndarray]:
    table: dict[frozenset[str], np.ndarray] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                key = frozenset(str(l).casefold() for l in record["lemmas"])
                vector = np.asarray(record["features"], dtype=np.float64)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad feature-table "
                                 f"record: {exc}") from exc
            validate_vector(vector)
            if key in table:
                raise ValueError(f"{path}:{line_no}: duplicate lemma pair "
                                 f"{sorted(key)}")
            table[key] = vector
    return table


# --- CSV interchange ----------------------------------------------------------

CSV_HEADER: tuple[str, ...] = ("entry_id", "split") + FEATURE_NAMES + ("label",)


def _format_value(value: float, slot: int) -> str:
    if slot not in _NON_COUNT_SLOTS and float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def save_dataset(dataset: LabeledDataset, path: str | Path) -> None:
    """Write the 20-column CSV; floats via ``repr`` for exact round-trips."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for i, entry_id in enumerate(dataset.entry_ids):
            row = [entry_id, dataset.splits[i]]
            row.extend(_format_value(dataset.X[i, j], j)
                       for j in range(N_FEATURES))
            row.append(str(int(dataset.y[i])))
            writer.writerow(row)


def load_dataset(path: str | Path) -> LabeledDataset:
    """Inverse of :func:`save_dataset`; validates the header contract."""
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != CSV_HEADER:
            raise ValueError(
                f"{path}: unexpected header {header!r}; expected {CSV_HEADER!r}"
            )
        ids: list[str] = []
        rows: list[list[float]] = []
        y: list[int] = []
        tags: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}:{line_no}: expected "
                                 f"{len(CSV_HEADER)} columns, got {len(row)}")
            ids.append(row[0])
            tags.append(row[1])
            rows.append([float(v) for v in row[2:2 + N_FEATURES]])
            y.append(int(row[-1]))
    X = np.asarray(rows, dtype=np.float64) if rows else np.empty((0, N_FEATURES))
    return LabeledDataset(entry_ids=tuple(ids), X=X,
                          y=np.asarray(y, dtype=np.int64), splits=tuple(tags))
