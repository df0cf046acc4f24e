"""Per-support-pair clustering decisions from an external coreference model.

For every support pair, the external model clusters the two predicate
mentions (event side) and the four argument mentions (entity side).  This
module ingests those decisions, classifies each one into the categorical
match outcomes, and aggregates per-entry counts — the last five feature
slots plus the "high NEC and perfectly clustered" slot.

Decisions are data, not computation: running a contextual coreference
model is out of scope.  ``lexical_decider`` provides a trivial built-in
stand-in (identical mention surface => same cluster) so synthetic
pipelines can run end to end.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Corpus, ParaphraseEntry, ParseError, SupportPair
from .entity_coverage import pair_nec

EVENT_MENTIONS = ("pred_left", "pred_right")
ENTITY_MENTIONS = ("a0_left", "a1_left", "a0_right", "a1_right")


class EventMatch(enum.Enum):
    PERFECT = "perfect"
    NO_MATCH = "no_match"


class EntityMatch(enum.Enum):
    PERFECT = "perfect"
    REVERSED = "reversed"
    NO_MATCH = "no_match"


def _check_partition(clusters: tuple[frozenset[str], ...],
                     expected: tuple[str, ...], kind: str) -> None:
    seen: set[str] = set()
    for cluster in clusters:
        if not cluster:
            raise ValueError(f"{kind} partition contains an empty cluster")
        if cluster & seen:
            raise ValueError(f"{kind} partition has overlapping clusters")
        seen |= cluster
    if seen != set(expected):
        raise ValueError(
            f"{kind} partition covers {sorted(seen)}, expected {sorted(expected)}"
        )


@dataclass(frozen=True)
class PairDecision:
    """Clustering of one support pair's six mentions.

    ``event_clusters`` partitions ``pred_left``/``pred_right``;
    ``entity_clusters`` partitions ``a0_left``/``a1_left``/``a0_right``/
    ``a1_right``.
    """

    left: str
    right: str
    event_clusters: tuple[frozenset[str], ...]
    entity_clusters: tuple[frozenset[str], ...]

    def __post_init__(self):
        # Canonical cluster order makes equality independent of how the
        # partition was assembled (and matches the serialized form).
        object.__setattr__(self, "event_clusters",
                           tuple(sorted((frozenset(c) for c in
                                         self.event_clusters), key=sorted)))
        object.__setattr__(self, "entity_clusters",
                           tuple(sorted((frozenset(c) for c in
                                         self.entity_clusters), key=sorted)))
        _check_partition(self.event_clusters, EVENT_MENTIONS, "event")
        _check_partition(self.entity_clusters, ENTITY_MENTIONS, "entity")

    @property
    def key(self) -> tuple[str, str]:
        return (self.left, self.right)


DecisionMap = Mapping[tuple[str, str], PairDecision]


def _together(clusters: tuple[frozenset[str], ...], a: str, b: str) -> bool:
    return any(a in c and b in c for c in clusters)


def event_match(decision: PairDecision) -> EventMatch:
    """Perfect iff the two predicates share a cluster, else no match."""
    if _together(decision.event_clusters, "pred_left", "pred_right"):
        return EventMatch.PERFECT
    return EventMatch.NO_MATCH


def entity_match(decision: PairDecision) -> EntityMatch:
    """Perfect: both a0s together and both a1s together, in two distinct
    clusters.  Reversed: some a0 clustered with the opposite tweet's a1.
    Priority Perfect > Reversed (they are mutually exclusive under these
    definitions; asserted defensively)."""
    clusters = decision.entity_clusters
    a0_together = _together(clusters, "a0_left", "a0_right")
    a1_together = _together(clusters, "a1_left", "a1_right")
    crossed = (_together(clusters, "a0_left", "a1_right")
               or _together(clusters, "a0_right", "a1_left"))
    if a0_together and a1_together and not _together(clusters, "a0_left", "a1_left"):
        assert not crossed, "perfect and reversed cannot co-occur"
        return EntityMatch.PERFECT
    if crossed:
        return EntityMatch.REVERSED
    return EntityMatch.NO_MATCH


def coref_feature_counts(entry: ParaphraseEntry,
                         decisions: DecisionMap) -> tuple[int, int, int, int, int]:
    """Per-entry counts over decided support pairs, in slot order:
    (event perfect, event no-match, entity perfect, entity reversed,
    entity no-match).  Undecided pairs count in no bucket."""
    event_perfect = event_none = 0
    ent_perfect = ent_reversed = ent_none = 0
    for pair in entry.support_pairs:
        decision = decisions.get(pair.key)
        if decision is None:
            continue
        if event_match(decision) is EventMatch.PERFECT:
            event_perfect += 1
        else:
            event_none += 1
        outcome = entity_match(decision)
        if outcome is EntityMatch.PERFECT:
            ent_perfect += 1
        elif outcome is EntityMatch.REVERSED:
            ent_reversed += 1
        else:
            ent_none += 1
    return event_perfect, event_none, ent_perfect, ent_reversed, ent_none


def perfectly_clustered_with_nec(entry: ParaphraseEntry, decisions: DecisionMap,
                                 threshold: float) -> int:
    """Support pairs with NEC >= threshold AND an event-perfect decision."""
    count = 0
    for pair in entry.support_pairs:
        decision = decisions.get(pair.key)
        if decision is None:
            continue
        if (pair_nec(pair) >= threshold
                and event_match(decision) is EventMatch.PERFECT):
            count += 1
    return count


# --- built-in fallback decider ----------------------------------------------


def _surface_clusters(mentions: dict[str, str]) -> tuple[frozenset[str], ...]:
    by_surface: dict[str, set[str]] = {}
    for name, surface in mentions.items():
        by_surface.setdefault(" ".join(surface.casefold().split()), set()).add(name)
    return tuple(frozenset(group)
                 for _, group in sorted(by_surface.items()))


def lexical_decider(pair: SupportPair) -> PairDecision:
    """Decide a pair by exact (case-folded) mention surface identity."""
    event = _surface_clusters({
        "pred_left": pair.left.predicate_text,
        "pred_right": pair.right.predicate_text,
    })
    entity = _surface_clusters({
        "a0_left": pair.left.arg0_text,
        "a1_left": pair.left.arg1_text,
        "a0_right": pair.right.arg0_text,
        "a1_right": pair.right.arg1_text,
    })
    return PairDecision(left=pair.left.id, right=pair.right.id,
                        event_clusters=event, entity_clusters=entity)


def decide_all(corpus: Corpus) -> dict[tuple[str, str], PairDecision]:
    """Run the lexical fallback over every support pair of a corpus."""
    out: dict[tuple[str, str], PairDecision] = {}
    for entry in corpus.entries:
        for pair in entry.support_pairs:
            if pair.key not in out:
                out[pair.key] = lexical_decider(pair)
    return out


# --- serialization -----------------------------------------------------------


def load_decisions(path: str | Path) -> dict[tuple[str, str], PairDecision]:
    """Read ``decisions.jsonl``: one decision per line::

        {"left": "t1", "right": "t2",
         "event_clusters": [["pred_left", "pred_right"]],
         "entity_clusters": [["a0_left", "a0_right"], ["a1_left"], ["a1_right"]]}
    """
    out: dict[tuple[str, str], PairDecision] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                decision = PairDecision(
                    left=record["left"],
                    right=record["right"],
                    event_clusters=tuple(frozenset(c)
                                         for c in record["event_clusters"]),
                    entity_clusters=tuple(frozenset(c)
                                          for c in record["entity_clusters"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, line_no, f"bad decision record: {exc}") from exc
            if decision.key in out:
                raise ParseError(path, line_no,
                                 f"duplicate decision for pair {decision.key}")
            out[decision.key] = decision
    return out


def save_decisions(decisions: DecisionMap, path: str | Path) -> None:
    """Inverse of :func:`load_decisions`; keys sorted for stable bytes."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for key in sorted(decisions):
            d = decisions[key]
            record = {
                "left": d.left,
                "right": d.right,
                "event_clusters": sorted(sorted(c) for c in d.event_clusters),
                "entity_clusters": sorted(sorted(c) for c in d.entity_clusters),
            }
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
