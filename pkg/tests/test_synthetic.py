"""Synthetic data generators: determinism and planted structure."""

from __future__ import annotations

import numpy as np
import pytest

from paracoref.corpus import Corpus, load_corpus, save_corpus
from paracoref.synthetic import (INFORMATIVE_SLOTS, make_classification_data,
                                 make_integration_topics, make_rerank_corpus)


def _corpora_equal(a: Corpus, b: Corpus) -> bool:
    return (a.entries == b.entries and a.tweets == b.tweets
            and a.meta == b.meta)


# --- re-ranking corpus ---------------------------------------------------------------


def test_rerank_corpus_is_deterministic():
    first = make_rerank_corpus(3, n_entries=40)
    second = make_rerank_corpus(3, n_entries=40)
    assert _corpora_equal(first.corpus, second.corpus)
    assert first.labels == second.labels


def test_rerank_corpus_depends_on_seed():
    first = make_rerank_corpus(3, n_entries=40)
    second = make_rerank_corpus(4, n_entries=40)
    assert not _corpora_equal(first.corpus, second.corpus)


def test_rerank_labels_cover_exactly_the_main_entries():
    data = make_rerank_corpus(0, n_entries=50)
    labeled = set(data.labels)
    assert len(labeled) == 50
    assert all(entry_id.startswith("e") for entry_id in labeled)
    all_ids = {entry.id for entry in data.corpus.entries}
    assert labeled <= all_ids
    satellites = {i for i in all_ids if i.startswith("x")}
    assert satellites  # triangle-closing single-pair entries exist
    assert satellites.isdisjoint(labeled)


def test_rerank_satellites_have_single_pairs_and_mains_enough_support():
    data = make_rerank_corpus(1, n_entries=50)
    for entry in data.corpus.entries:
        if entry.id.startswith("x"):
            assert len(entry.support_pairs) == 1
        else:
            assert len(entry.support_pairs) >= 3


def test_rerank_corpus_has_both_labels_and_availability_gaps():
    data = make_rerank_corpus(2, n_entries=60)
    values = set(data.labels.values())
    assert values == {True, False}
    availability = {t.available for t in data.corpus.tweets.values()}
    assert availability == {True, False}


def test_rerank_corpus_survives_serialization(tmp_path):
    data = make_rerank_corpus(5, n_entries=20)
    save_corpus(data.corpus, tmp_path / "corpus")
    loaded = load_corpus(tmp_path / "corpus")
    assert _corpora_equal(data.corpus, loaded)


# --- classification dataset -----------------------------------------------------------


def test_classification_data_shape_and_determinism():
    X, y = make_classification_data(0, n_rows=200)
    assert X.shape == (200, 17)
    assert y.shape == (200,)
    assert set(np.unique(y)) == {0, 1}
    X2, y2 = make_classification_data(0, n_rows=200)
    assert np.array_equal(X, X2)
    assert np.array_equal(y, y2)
    X3, _ = make_classification_data(1, n_rows=200)
    assert not np.array_equal(X, X3)


def test_classification_labels_follow_planted_rule():
    X, y = make_classification_data(4, n_rows=300)
    a, b, c = INFORMATIVE_SLOTS
    expected = (((X[:, a] > 5.0) & (X[:, b] > 3.0))
                | (X[:, c] > 8.0)).astype(np.int64)
    assert np.array_equal(y, expected)
    assert np.all((X >= 0.0) & (X < 10.0))


def test_classification_custom_informative_slots():
    X, y = make_classification_data(4, n_rows=150, informative=(0, 1, 2))
    expected = (((X[:, 0] > 5.0) & (X[:, 1] > 3.0))
                | (X[:, 2] > 8.0)).astype(np.int64)
    assert np.array_equal(y, expected)


# --- integration topics -----------------------------------------------------------


def test_integration_topics_deterministic():
    first = make_integration_topics(7, n_topics=3, mentions_per_topic=6)
    second = make_integration_topics(7, n_topics=3, mentions_per_topic=6)
    assert [m.id for m in first.mentions] == [m.id for m in second.mentions]
    for ma, mb in zip(first.mentions, second.mentions):
        assert np.array_equal(ma.vector, mb.vector)
    assert first.gold == second.gold
    assert set(first.feature_table) == set(second.feature_table)
    for key, value in first.feature_table.items():
        assert np.array_equal(value, second.feature_table[key])


def test_integration_topics_structure():
    world = make_integration_topics(1, n_topics=4, mentions_per_topic=6,
                                    mention_dim=5)
    assert len(world.mentions) == 24
    topics = {m.topic for m in world.mentions}
    assert len(topics) == 4
    assert len({m.id for m in world.mentions}) == 24
    assert len({m.lemma for m in world.mentions}) == 24
    assert world.gold.mentions == {m.id for m in world.mentions}
    for m in world.mentions:
        assert m.vector.shape == (5,)
        assert np.all(np.abs(m.vector) <= 1.0)
    # gold clusters never cross topics, and each topic has 2 or 3
    by_topic: dict[str, set[str]] = {}
    for m in world.mentions:
        by_topic.setdefault(m.topic, set()).add(m.id)
    for cluster in world.gold.clusters:
        assert any(cluster <= members for members in by_topic.values())
    for members in by_topic.values():
        indices = {world.gold.cluster_index(m) for m in members}
        assert 2 <= len(indices) <= 3


def test_integration_full_coverage_matches_gold():
    world = make_integration_topics(2, n_topics=3, mentions_per_topic=5,
                                    coverage=1.0, spurious=0.0)
    lemma_of = {m.id: m.lemma for m in world.mentions}
    by_topic: dict[str, list[str]] = {}
    for m in world.mentions:
        by_topic.setdefault(m.topic, []).append(m.id)
    for members in by_topic.values():
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                key = frozenset((lemma_of[a], lemma_of[b]))
                assert (key in world.feature_table) \
                    == world.gold.same_cluster(a, b)


def test_integration_zero_coverage_empty_table():
    world = make_integration_topics(2, n_topics=2, mentions_per_topic=5,
                                    coverage=0.0, spurious=0.0)
    assert world.feature_table == {}
    assert world.feature_lookup("anything", "else") is None


def test_integration_feature_vectors_are_17_wide():
    world = make_integration_topics(3, n_topics=2, mentions_per_topic=6)
    assert world.feature_table  # default coverage plants entries
    for vector in world.feature_table.values():
        assert vector.shape == (17,)
        assert np.all(np.isfinite(vector))


def test_integration_lookup_reads_table():
    world = make_integration_topics(3, n_topics=2, mentions_per_topic=6)
    key = next(iter(world.feature_table))
    lemma_a, lemma_b = sorted(key)
    assert np.array_equal(world.feature_lookup(lemma_a, lemma_b),
                          world.feature_table[key])
    assert np.array_equal(world.feature_lookup(lemma_b, lemma_a),
                          world.feature_table[key])


def test_integration_tag_prefixes_topics():
    world = make_integration_topics(3, n_topics=2, mentions_per_topic=4,
                                    tag="eval.")
    assert all(m.topic.startswith("eval.") for m in world.mentions)
