"""Shared fixtures: a small hand-built corpus with hand-computed features.

The corpus is designed so every feature slot is exercised with a value
derivable on paper:

* entry ``e1`` ({die, pass}): two template variants, a mixed-availability
  pair set spanning two days, one high-NEC pair, and a support graph with
  a 2-node and a 3-node component;
* entry ``e2`` ({die, explode}): its two pairs close a triangle with
  ``e1``'s first pair in the global graph;
* entry ``e3`` ({die, perish}): reversed-argument tweets producing one
  event-perfect and two entity-reversed lexical decisions.
"""

from __future__ import annotations

import pytest

from paracoref.corpus import (Corpus, CorpusMeta, ParaphraseEntry,
                              PredicateTemplate, SupportPair, TemplateVariant,
                              TweetDoc, save_corpus)


def _tweet(tweet_id: str, text: str, day: int, entities: tuple[str, ...],
           available: bool = True) -> TweetDoc:
    return TweetDoc(id=tweet_id, text=text, predicate_span=(1, 2),
                    arg0_span=(0, 1), arg1_span=(2, 3), day=day,
                    named_entities=frozenset(entities), available=available)


def _variant(lemma1: str, lemma2: str, pairs: list[SupportPair],
             pattern1: str = "a0 _ a1",
             pattern2: str = "a0 _ a1") -> TemplateVariant:
    return TemplateVariant(
        template1=PredicateTemplate(lemma=lemma1, arg_pattern=pattern1),
        template2=PredicateTemplate(lemma=lemma2, arg_pattern=pattern2),
        support_pairs=tuple(pairs),
    )


def build_tiny_corpus() -> Corpus:
    t1 = _tweet("t1", "Chuck died Berry", 2, ("Chuck Berry", "St. Louis"))
    t2 = _tweet("t2", "Chuck passed Berry", 2, ("Chuck Berry",))
    t3 = _tweet("t3", "Rock died Roll", 5, ("rock",))
    t4 = _tweet("t4", "Rock passed Roll", 5, ("jazz",), available=False)
    t5 = _tweet("t5", "Sun passed Moon", 5, ())
    t6 = _tweet("t6", "Chuck exploded Berry", 2, ("chuck berry",))
    t8 = _tweet("t8", "Berry died Chuck", 2, ("chuck berry",))
    tweets = {t.id: t for t in (t1, t2, t3, t4, t5, t6, t8)}

    def pair(a: TweetDoc, b: TweetDoc) -> SupportPair:
        return SupportPair(left=a, right=b, day=a.day)

    e1 = ParaphraseEntry(
        id="e1",
        variants=(
            _variant("die", "pass", [pair(t1, t2), pair(t3, t4)]),
            _variant("die", "pass", [pair(t3, t5)], pattern1="_ a0 a1"),
        ),
        original_score=2.4,
    )
    e2 = ParaphraseEntry(
        id="e2",
        variants=(_variant("die", "explode", [pair(t1, t6), pair(t2, t6)]),),
        original_score=2.2,
    )
    e3 = ParaphraseEntry(
        id="e3",
        variants=(_variant("die", "perish", [pair(t1, t8), pair(t2, t8)]),),
        original_score=2.2,
    )
    return Corpus(entries=(e1, e2, e3), tweets=tweets,
                  meta=CorpusMeta(collection_days=10))


# Hand-derived 17-vectors for the tiny corpus at threshold 0.26 with the
# lexical decider and the full global graph (see module tests for the
# slot-by-slot derivations).
TINY_VECTORS = {
    "e1": [2, 3, 2, 2.4, 2, 2, 1, 1.0, 0, 1, 2.5, 1, 0, 3, 2, 0, 1],
    "e2": [1, 2, 1, 2.2, 2, 1, 2, 1.0, 0, 1, 3.0, 2, 0, 2, 2, 0, 0],
    "e3": [1, 2, 1, 2.2, 2, 1, 2, 1.0, 1, 1, 3.0, 2, 1, 1, 0, 2, 0],
}


@pytest.fixture()
def tiny_corpus() -> Corpus:
    return build_tiny_corpus()


@pytest.fixture()
def tiny_corpus_dir(tmp_path):
    target = tmp_path / "corpus"
    save_corpus(build_tiny_corpus(), target)
    return target
