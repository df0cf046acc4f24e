"""NEC scoring, its tuned threshold, and the two NEC feature slots."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paracoref.corpus import (CorpusMeta, ParaphraseEntry, PredicateTemplate,
                              SupportPair, TemplateVariant, TweetDoc)
from paracoref.entity_coverage import (DEFAULT_THRESHOLD, NECLabeledPair, nec,
                                       nec_features, load_nec_labels,
                                       pair_nec, tune_threshold)

from oracles import best_threshold_by_grid

entity_sets = st.frozensets(st.sampled_from("abcdefgh"), max_size=6)


def test_default_threshold_value():
    assert DEFAULT_THRESHOLD == 0.26


def test_nec_worked_examples():
    assert nec({"a", "b"}, {"b", "c"}) == 0.5
    assert nec({"a"}, {"a", "b", "c"}) == 1.0
    assert nec({"a"}, {"b"}) == 0.0


def test_nec_empty_set_convention():
    assert nec(set(), {"a"}) == 0.0
    assert nec({"a"}, set()) == 0.0
    assert nec(set(), set()) == 0.0


@given(entity_sets, entity_sets)
def test_nec_symmetric_and_bounded(a, b):
    assert nec(a, b) == nec(b, a)
    assert 0.0 <= nec(a, b) <= 1.0


@given(entity_sets)
def test_nec_self_coverage(a):
    assert nec(a, a) == (1.0 if a else 0.0)


@given(entity_sets, entity_sets, entity_sets)
def test_nec_monotone_under_shared_additions(a, b, extra):
    # adding the same entities to both sides never lowers the score
    assert nec(a | extra, b | extra) >= nec(a, b)


def _tweet(tweet_id, entities, day=0, available=True):
    return TweetDoc(id=tweet_id, text="a p b", predicate_span=(1, 2),
                    arg0_span=(0, 1), arg1_span=(2, 3), day=day,
                    named_entities=frozenset(entities), available=available)


def _single_variant_entry(entries_by_pair):
    tweets = {}
    support = []
    for i, (left_ents, right_ents) in enumerate(entries_by_pair):
        a = _tweet(f"l{i}", left_ents)
        b = _tweet(f"r{i}", right_ents)
        tweets.update({a.id: a, b.id: b})
        support.append(SupportPair(left=a, right=b, day=0))
    return ParaphraseEntry(
        id="e",
        variants=(TemplateVariant(template1=PredicateTemplate("x"),
                                  template2=PredicateTemplate("y"),
                                  support_pairs=tuple(support)),))


def test_pair_nec_uses_normalized_entities():
    a = _tweet("a", ("Chuck Berry",))
    b = _tweet("b", ("chuck  berry", "other"))
    assert pair_nec(SupportPair(left=a, right=b, day=0)) == 1.0


def test_nec_features_worked_example():
    # NEC scores {0.3, 0.5, 0.1} at T=0.26 -> (2, 0.4)
    entry = _single_variant_entry([
        (tuple("abcdefghij"), tuple("abc") + tuple("xyzwvuk")),   # 3/10
        (tuple("ab"), tuple("a") + ("q",)),                       # 1/2
        (tuple("abcdefghij"), tuple("a") + tuple("qrstuvwxy")),   # 1/10
    ])
    scores = sorted(pair_nec(p) for p in entry.support_pairs)
    assert scores == [pytest.approx(0.1), pytest.approx(0.3), pytest.approx(0.5)]
    count, mean = nec_features(entry, 0.26)
    assert count == 2
    assert mean == pytest.approx(0.4)


def test_nec_features_threshold_extremes():
    entry = _single_variant_entry([(("a",), ("a", "b")), (("c",), ("d",))])
    assert nec_features(entry, 0.0)[0] == len(entry.support_pairs)
    assert nec_features(entry, 1.0) == (1, 1.0)
    mixed = _single_variant_entry([(("a", "z"), ("a", "b"))])
    assert nec_features(mixed, 1.0) == (0, 0.0)


def test_nec_features_rejects_bad_threshold():
    entry = _single_variant_entry([(("a",), ("a",))])
    with pytest.raises(ValueError):
        nec_features(entry, 1.5)
    with pytest.raises(ValueError):
        nec_features(entry, -0.1)


@given(st.lists(st.tuples(entity_sets, entity_sets), min_size=1, max_size=8),
       st.floats(min_value=0.0, max_value=0.5),
       st.floats(min_value=0.0, max_value=0.5))
def test_nec_above_count_monotone_in_threshold(pair_sets, t_low, delta):
    entry = _single_variant_entry(pair_sets)
    low, high = t_low, min(t_low + delta, 1.0)
    assert nec_features(entry, low)[0] >= nec_features(entry, high)[0]


# --- threshold tuning -----------------------------------------------------------


def _labeled_corpus(pair_specs):
    """pair_specs: list of (left_entities, right_entities, label)."""
    from paracoref.corpus import Corpus

    tweets = {}
    entries = []
    labeled = []
    support = []
    for i, (left_ents, right_ents, label) in enumerate(pair_specs):
        a = _tweet(f"l{i}", left_ents)
        b = _tweet(f"r{i}", right_ents)
        tweets.update({a.id: a, b.id: b})
        support.append(SupportPair(left=a, right=b, day=0))
        labeled.append(NECLabeledPair(left=a.id, right=b.id, label=label))
    entries.append(ParaphraseEntry(
        id="e0",
        variants=(TemplateVariant(template1=PredicateTemplate("x"),
                                  template2=PredicateTemplate("y"),
                                  support_pairs=tuple(support)),)))
    corpus = Corpus(entries=tuple(entries), tweets=tweets,
                    meta=CorpusMeta(collection_days=1))
    return corpus, labeled


def test_tune_threshold_separable():
    corpus, labeled = _labeled_corpus([
        (("a", "b"), ("a", "b"), True),     # NEC 1.0
        (("a", "b"), ("a", "b", "c"), True),  # NEC 1.0
        (("a", "x"), ("y", "z"), False),    # NEC 0.0
    ])
    assert tune_threshold(labeled, corpus) == pytest.approx(0.5)


def test_tune_threshold_requires_both_classes():
    corpus, labeled = _labeled_corpus([
        (("a",), ("a",), True),
        (("b",), ("b",), True),
    ])
    with pytest.raises(ValueError, match="both positive and negative"):
        tune_threshold(labeled, corpus)


def test_tune_threshold_unknown_tweet():
    corpus, labeled = _labeled_corpus([
        (("a",), ("a",), True),
        (("b",), ("c",), False),
    ])
    labeled.append(NECLabeledPair(left="nope", right="l0", label=True))
    with pytest.raises(KeyError, match="nope"):
        tune_threshold(labeled, corpus)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(entity_sets, entity_sets, st.booleans()),
                min_size=2, max_size=12))
def test_tune_threshold_matches_grid_oracle(specs):
    labels = [label for _, _, label in specs]
    if len(set(labels)) < 2:
        specs = specs + [(frozenset("a"), frozenset("a"), True),
                         (frozenset("a"), frozenset("b"), False)]
    corpus, labeled = _labeled_corpus(specs)
    scores = [nec(corpus.tweets[p.left].named_entities,
                  corpus.tweets[p.right].named_entities) for p in labeled]
    expected_t, _ = best_threshold_by_grid(scores,
                                           [int(p.label) for p in labeled],
                                           0.0, 1.0)
    assert tune_threshold(labeled, corpus) == expected_t


def test_load_nec_labels(tmp_path):
    path = tmp_path / "nec_labels.jsonl"
    path.write_text(json.dumps({"left": "t1", "right": "t2", "label": True})
                    + "\n"
                    + json.dumps({"left": "t3", "right": "t4", "label": 0})
                    + "\n")
    loaded = load_nec_labels(path)
    assert loaded == [NECLabeledPair("t1", "t2", True),
                      NECLabeledPair("t3", "t4", False)]
