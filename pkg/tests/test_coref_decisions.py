"""Pair-decision classification and the per-entry decision counts."""

from __future__ import annotations

import pytest

from paracoref.corpus import ParseError
from paracoref.coref_decisions import (ENTITY_MENTIONS, EVENT_MENTIONS,
                                       EntityMatch, EventMatch, PairDecision,
                                       coref_feature_counts, decide_all,
                                       entity_match, event_match,
                                       lexical_decider, load_decisions,
                                       perfectly_clustered_with_nec,
                                       save_decisions)


def decision(event, entity, left="tL", right="tR"):
    return PairDecision(left=left, right=right,
                        event_clusters=tuple(frozenset(c) for c in event),
                        entity_clusters=tuple(frozenset(c) for c in entity))


EVENT_TOGETHER = ({"pred_left", "pred_right"},)
EVENT_APART = ({"pred_left"}, {"pred_right"})
ENTITY_PERFECT = ({"a0_left", "a0_right"}, {"a1_left", "a1_right"})
ENTITY_REVERSED = ({"a0_left", "a1_right"}, {"a1_left"}, {"a0_right"})
ENTITY_SINGLETONS = ({"a0_left"}, {"a1_left"}, {"a0_right"}, {"a1_right"})


# --- partition validation ----------------------------------------------------


def test_rejects_missing_mention():
    with pytest.raises(ValueError, match="covers"):
        decision((({"pred_left"}),), ENTITY_SINGLETONS)


def test_rejects_overlapping_clusters():
    with pytest.raises(ValueError, match="overlapping"):
        decision(EVENT_TOGETHER + ({"pred_left"},), ENTITY_SINGLETONS)


def test_rejects_empty_cluster():
    with pytest.raises(ValueError, match="empty"):
        decision(EVENT_TOGETHER + (set(),), ENTITY_SINGLETONS)


def test_rejects_foreign_mention():
    with pytest.raises(ValueError, match="covers"):
        decision((EVENT_MENTIONS + ("ghost",),), ENTITY_SINGLETONS)


# --- match classification -----------------------------------------------------


def test_event_match_definitions():
    assert event_match(decision(EVENT_TOGETHER, ENTITY_SINGLETONS)) \
        is EventMatch.PERFECT
    assert event_match(decision(EVENT_APART, ENTITY_SINGLETONS)) \
        is EventMatch.NO_MATCH


def test_entity_match_definitions():
    assert entity_match(decision(EVENT_APART, ENTITY_PERFECT)) \
        is EntityMatch.PERFECT
    assert entity_match(decision(EVENT_APART, ENTITY_REVERSED)) \
        is EntityMatch.REVERSED
    assert entity_match(decision(EVENT_APART, ENTITY_SINGLETONS)) \
        is EntityMatch.NO_MATCH


def test_entity_all_in_one_cluster_counts_reversed():
    # a0 coreferring with the opposite a1 dominates
    merged = (set(ENTITY_MENTIONS),)
    assert entity_match(decision(EVENT_APART, merged)) is EntityMatch.REVERSED


def _all_entity_partitions():
    """Every partition of the four entity mentions (Bell number 15)."""
    mentions = list(ENTITY_MENTIONS)

    def partitions(items):
        if not items:
            yield []
            return
        head, *rest = items
        for sub in partitions(rest):
            for i in range(len(sub)):
                yield sub[:i] + [sub[i] | {head}] + sub[i + 1:]
            yield sub + [{head}]

    return [tuple(frozenset(c) for c in p) for p in partitions(mentions)]


def test_entity_match_total_and_exclusive():
    # every partition classifies, and perfect/reversed never co-fire
    outcomes = [entity_match(decision(EVENT_APART, p))
                for p in _all_entity_partitions()]
    assert len(outcomes) == 15
    assert EntityMatch.PERFECT in outcomes
    assert EntityMatch.REVERSED in outcomes
    assert EntityMatch.NO_MATCH in outcomes


def test_entity_perfect_partitions_enumerated():
    # exactly one of the 15 partitions is Perfect: the two aligned pairs
    perfect = [frozenset(p) for p in _all_entity_partitions()
               if entity_match(decision(EVENT_APART, p)) is EntityMatch.PERFECT]
    assert perfect == [frozenset(frozenset(c) for c in ENTITY_PERFECT)]


# --- per-entry counts -----------------------------------------------------------


def test_counts_uniform_case(tiny_corpus):
    entry = tiny_corpus.entry("e2")
    decisions = {
        pair.key: decision(EVENT_TOGETHER, ENTITY_PERFECT,
                           left=pair.left.id, right=pair.right.id)
        for pair in entry.support_pairs
    }
    assert coref_feature_counts(entry, decisions) == (2, 0, 2, 0, 0)


def test_counts_skip_undecided_pairs(tiny_corpus):
    entry = tiny_corpus.entry("e1")
    assert coref_feature_counts(entry, {}) == (0, 0, 0, 0, 0)
    first = entry.support_pairs[0]
    partial = {first.key: decision(EVENT_APART, ENTITY_REVERSED,
                                   left=first.left.id, right=first.right.id)}
    assert coref_feature_counts(entry, partial) == (0, 1, 0, 1, 0)


def test_counts_mixed_fixture(tiny_corpus):
    decisions = decide_all(tiny_corpus)
    assert coref_feature_counts(tiny_corpus.entry("e1"), decisions) == \
        (0, 3, 2, 0, 1)
    assert coref_feature_counts(tiny_corpus.entry("e3"), decisions) == \
        (1, 1, 0, 2, 0)


def test_nec_and_perfect_conjunction(tiny_corpus):
    decisions = decide_all(tiny_corpus)
    # only e3's (t1, t8) has both NEC 1.0 and an event-perfect decision
    assert perfectly_clustered_with_nec(tiny_corpus.entry("e3"), decisions,
                                        0.26) == 1
    assert perfectly_clustered_with_nec(tiny_corpus.entry("e1"), decisions,
                                        0.26) == 0
    assert perfectly_clustered_with_nec(tiny_corpus.entry("e3"), {}, 0.26) == 0


# --- lexical decider ---------------------------------------------------------------


def test_lexical_decider_surface_identity(tiny_corpus):
    e3 = tiny_corpus.entry("e3")
    d = lexical_decider(e3.support_pairs[0])  # t1 "Chuck died Berry" / t8 "Berry died Chuck"
    assert event_match(d) is EventMatch.PERFECT
    assert entity_match(d) is EntityMatch.REVERSED


def test_lexical_decider_casefolds():
    from paracoref.corpus import SupportPair, TweetDoc

    a = TweetDoc(id="a", text="Chuck DIED Berry", predicate_span=(1, 2),
                 arg0_span=(0, 1), arg1_span=(2, 3), day=0)
    b = TweetDoc(id="b", text="chuck died berry", predicate_span=(1, 2),
                 arg0_span=(0, 1), arg1_span=(2, 3), day=0)
    d = lexical_decider(SupportPair(left=a, right=b, day=0))
    assert event_match(d) is EventMatch.PERFECT
    assert entity_match(d) is EntityMatch.PERFECT


def test_decide_all_covers_every_pair(tiny_corpus):
    decisions = decide_all(tiny_corpus)
    keys = {p.key for e in tiny_corpus.entries for p in e.support_pairs}
    assert set(decisions) == keys


# --- serialization -------------------------------------------------------------------


def test_decisions_round_trip(tmp_path, tiny_corpus):
    decisions = decide_all(tiny_corpus)
    path = tmp_path / "decisions.jsonl"
    save_decisions(decisions, path)
    loaded = load_decisions(path)
    assert loaded == decisions
    save_decisions(loaded, tmp_path / "again.jsonl")
    assert (tmp_path / "again.jsonl").read_bytes() == path.read_bytes()


def test_load_decisions_rejects_duplicates(tmp_path, tiny_corpus):
    decisions = decide_all(tiny_corpus)
    path = tmp_path / "decisions.jsonl"
    save_decisions(decisions, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines + [lines[0]]) + "\n")
    with pytest.raises(ParseError, match="duplicate"):
        load_decisions(path)
