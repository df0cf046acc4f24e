"""Deterministic synthetic data for the experiment suites.

Three generators, all driven by the portable seeded generator:

* a paraphrase corpus whose labels follow the entity-coverage and graph
  structure of the entries while the heuristic count score is only weakly
  informative — the re-ranking testbed;
* a plain 17-feature classification dataset with a fixed set of
  informative slots — the forest accuracy testbed;
* topic-grouped mention sets with planted clusters where the resource
  feature table carries the cluster signal and mention vectors are pure
  noise — the integration testbed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .coref_metrics import Clustering
from .corpus import (Corpus, CorpusMeta, ParaphraseEntry, PredicateTemplate,
                     SupportPair, TemplateVariant, TweetDoc, chirps_score)
from .features import N_FEATURES
from .pair_scorer import MentionRecord
from .rng import SplitMix64

_ENTITY_POOL = tuple(f"entity_{k}" for k in range(50))


def _make_tweet(tweet_id: str, lemma: str, day: int,
                entities: frozenset[str], available: bool) -> TweetDoc:
    return TweetDoc(
        id=tweet_id,
        text=f"arg0_{tweet_id} {lemma} arg1_{tweet_id}",
        predicate_span=(1, 2),
        arg0_span=(0, 1),
        arg1_span=(2, 3),
        day=day,
        named_entities=entities,
        available=available,
    )


def _sample_entities(rng: SplitMix64, k: int) -> set[str]:
    return {_ENTITY_POOL[i] for i in rng.sample_indices(len(_ENTITY_POOL), k)}


@dataclass(frozen=True)
class RerankData:
    corpus: Corpus
    labels: dict[str, bool]


def make_rerank_corpus(seed: int, n_entries: int = 600,
                       collection_days: int = 30,
                       label_noise: float = 0.1) -> RerankData:
    """Corpus where coreferring entries look coreferring structurally.

    Coreferring entries share a hub tweet across their support pairs
    (components larger than 2), mostly close a triangle in the global
    graph through two single-pair satellite entries, and have high
    entity overlap within pairs.  Non-coreferring entries are disjoint
    low-overlap two-tweet components.  Support-pair counts differ only
    slightly between the classes, so the count-based heuristic score is
    weakly informative by construction.  Labels flip with probability
    ``label_noise``.  Satellite entries carry a single support pair and
    no label, so the standard minimum-support filter drops them from any
    training set while they still shape the global graph.
    """
    rng = SplitMix64(seed)
    tweets: dict[str, TweetDoc] = {}
    entries: list[ParaphraseEntry] = []
    labels: dict[str, bool] = {}
    next_tweet = 0
    next_aux = 0

    def add_tweet(lemma: str, day: int, entities: set[str]) -> TweetDoc:
        nonlocal next_tweet
        tweet = _make_tweet(f"t{next_tweet:06d}", lemma, day,
                            frozenset(entities),
                            available=rng.next_float() >= 0.1)
        next_tweet += 1
        tweets[tweet.id] = tweet
        return tweet

    def add_entry(entry_id: str, lemma1: str, lemma2: str,
                  pairs: list[tuple[TweetDoc, TweetDoc]]) -> ParaphraseEntry:
        support = tuple(SupportPair(left=a, right=b, day=a.day)
                        for a, b in pairs)
        days = {p.day for p in support}
        entry = ParaphraseEntry(
            id=entry_id,
            variants=(TemplateVariant(
                template1=PredicateTemplate(lemma=lemma1),
                template2=PredicateTemplate(lemma=lemma2),
                support_pairs=support,
            ),),
            original_score=chirps_score(len(support), len(days),
                                        collection_days),
        )
        entries.append(entry)
        return entry

    for i in range(n_entries):
        coreferring = rng.next_float() < 0.5
        label = coreferring
        if rng.next_float() < label_noise:
            label = not label
        lemma1, lemma2 = f"verb{i}a", f"verb{i}b"
        day = rng.next_below(collection_days)
        n_pairs = 3 + rng.next_below(3)
        if coreferring and rng.next_float() < 0.5:
            n_pairs += 1 + rng.next_below(2)  # the weak heuristic signal
        if coreferring:
            event_entities = _sample_entities(rng, 4)
            hub = add_tweet(lemma1, day, {
                e for e in event_entities if rng.next_float() < 0.9
            } or event_entities)
            rights = []
            for _ in range(n_pairs):
                kept = {e for e in event_entities if rng.next_float() < 0.8}
                kept |= _sample_entities(rng, 1) if rng.next_float() < 0.3 else set()
                rights.append(add_tweet(lemma2, day, kept or event_entities))
            entry = add_entry(f"e{i:05d}", lemma1, lemma2,
                              [(hub, r) for r in rights])
            if rng.next_float() < 0.8:
                # satellite entries close a triangle over the first pair
                extra = add_tweet(f"aux{next_aux}", day, _sample_entities(rng, 3))
                add_entry(f"x{next_aux:05d}a", lemma1, f"aux{next_aux}",
                          [(hub, extra)])
                add_entry(f"x{next_aux:05d}b", lemma2, f"aux{next_aux}",
                          [(rights[0], extra)])
                next_aux += 1
        else:
            pairs = []
            for _ in range(n_pairs):
                pair_day = rng.next_below(collection_days)
                left = add_tweet(lemma1, pair_day, _sample_entities(rng, 3))
                right = add_tweet(lemma2, pair_day, _sample_entities(rng, 3))
                pairs.append((left, right))
            entry = add_entry(f"e{i:05d}", lemma1, lemma2, pairs)
        labels[entry.id] = label

    # Canonical entry order (sorted by id, as the on-disk form stores it)
    # so a save/load round trip reproduces the corpus exactly.
    corpus = Corpus(entries=tuple(sorted(entries, key=lambda e: e.id)),
                    tweets=tweets,
                    meta=CorpusMeta(collection_days=collection_days))
    return RerankData(corpus=corpus, labels=labels)


# --- forest testbed -------------------------------------------------------------

INFORMATIVE_SLOTS = (3, 7, 11)


def make_classification_data(seed: int, n_rows: int = 1000,
                             informative: tuple[int, int, int] = INFORMATIVE_SLOTS,
                             ) -> tuple[np.ndarray, np.ndarray]:
    """17-feature matrix where the label is a deterministic axis-aligned
    rule over three informative slots; all other slots are noise.

    The rule ``(x_a > 5 and x_b > 3) or x_c > 8`` gives near-balanced
    classes and is exactly representable by shallow threshold trees.
    """
    rng = SplitMix64(seed)
    X = np.empty((n_rows, N_FEATURES), dtype=np.float64)
    for r in range(n_rows):
        for c in range(N_FEATURES):
            X[r, c] = rng.next_below(10) + rng.next_float()
    a, b, c = informative
    y = (((X[:, a] > 5.0) & (X[:, b] > 3.0)) | (X[:, c] > 8.0)).astype(np.int64)
    return X, y


# --- integration testbed ---------------------------------------------------------

# Feature profiles for covered pairs: the same-cluster profile looks like a
# well-supported entry (entity overlap, big components, in-clique pairs),
# the cross-cluster profile like sparse accidental support.
_POS_PROFILE = np.array(
    [2, 6, 3, 7, 5, 3, 5, 0.8, 4, 1, 4, 4, 4, 1, 3, 0, 1], dtype=np.float64)
_NEG_PROFILE = np.array(
    [1, 3, 2, 3.3, 2, 1, 0, 0, 0, 0, 2, 0, 0, 3, 0, 1, 2], dtype=np.float64)

FeatureTable = Mapping[frozenset[str], np.ndarray]


@dataclass(frozen=True)
class IntegrationTopics:
    mentions: tuple[MentionRecord, ...]
    gold: Clustering
    feature_table: dict[frozenset[str], np.ndarray]

    def feature_lookup(self, lemma_a: str, lemma_b: str) -> np.ndarray | None:
        return self.feature_table.get(frozenset((lemma_a, lemma_b)))


def make_integration_topics(seed: int, n_topics: int = 6,
                            mentions_per_topic: int = 8,
                            mention_dim: int = 8,
                            coverage: float = 0.8,
                            spurious: float = 0.2,
                            tag: str = "") -> IntegrationTopics:
    """Topics with planted clusters; the signal lives in the feature table.

    Every mention gets a unique lemma and document and a pure-noise
    vector.  A same-cluster lemma pair is covered by the resource (with a
    same-event feature profile) with probability ``coverage``; a
    cross-cluster pair is covered with a sparse profile with probability
    ``spurious``.  Uncovered pairs are absent from the table.
    """
    rng = SplitMix64(seed)
    mentions: list[MentionRecord] = []
    assignment: dict[str, str] = {}
    table: dict[frozenset[str], np.ndarray] = {}

    def noisy(profile: np.ndarray) -> np.ndarray:
        noise = np.fromiter((rng.next_float() for _ in range(N_FEATURES)),
                            dtype=np.float64, count=N_FEATURES)
        return profile + 0.5 * noise

    for t in range(n_topics):
        topic = f"{tag}s{seed}.t{t}"
        n_clusters = 2 + rng.next_below(2)
        cluster_of: list[int] = [k % n_clusters
                                 for k in range(mentions_per_topic)]
        rng.shuffle(cluster_of)
        group: list[MentionRecord] = []
        for k in range(mentions_per_topic):
            mention_id = f"{topic}.m{k}"
            vector = np.fromiter(
                (2.0 * rng.next_float() - 1.0 for _ in range(mention_dim)),
                dtype=np.float64, count=mention_dim)
            record = MentionRecord(id=mention_id, topic=topic,
                                   doc=f"{topic}.d{k}", span=(k, k + 1),
                                   lemma=f"{topic}.lem{k}", vector=vector)
            group.append(record)
            mentions.append(record)
            assignment[mention_id] = f"{topic}.c{cluster_of[k]}"
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                same = cluster_of[i] == cluster_of[j]
                key = frozenset((group[i].lemma, group[j].lemma))
                if same and rng.next_float() < coverage:
                    table[key] = noisy(_POS_PROFILE)
                elif not same and rng.next_float() < spurious:
                    table[key] = noisy(_NEG_PROFILE)
    return IntegrationTopics(mentions=tuple(mentions),
                             gold=Clustering(assignment),
                             feature_table=table)
