"""Corpus model: validation, the heuristic score, base features, round-trips."""

from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paracoref.corpus import (Corpus, CorpusMeta, IntegrityError,
                              ParaphraseEntry, ParseError, PredicateTemplate,
                              SupportPair, TemplateVariant, TweetDoc,
                              base_features, chirps_score, load_corpus,
                              normalize_entity, save_corpus)

from conftest import build_tiny_corpus


def _tweet(tweet_id="t0", text="A died B", day=0, entities=(),
           available=True, predicate_span=(1, 2), arg0_span=(0, 1),
           arg1_span=(2, 3)):
    return TweetDoc(id=tweet_id, text=text, predicate_span=predicate_span,
                    arg0_span=arg0_span, arg1_span=arg1_span, day=day,
                    named_entities=frozenset(entities), available=available)


# --- TweetDoc ---------------------------------------------------------------


def test_span_texts():
    t = _tweet(text="Chuck died at 90", predicate_span=(1, 3),
               arg0_span=(0, 1), arg1_span=(3, 4))
    assert t.predicate_text == "died at"
    assert t.arg0_text == "Chuck"
    assert t.arg1_text == "90"


def test_entities_normalized_on_construction():
    t = _tweet(entities=("Chuck  Berry", "ST. LOUIS"))
    assert t.named_entities == frozenset({"chuck berry", "st. louis"})


def test_normalize_entity_casefold_and_whitespace():
    assert normalize_entity("  Chuck\tBERRY ") == "chuck berry"


@pytest.mark.parametrize("span", [(2, 2), (3, 2), (-1, 1), (2, 9)])
def test_rejects_bad_spans(span):
    with pytest.raises(ValueError):
        _tweet(predicate_span=span)


def test_rejects_overlapping_spans():
    with pytest.raises(ValueError, match="overlapping"):
        _tweet(predicate_span=(0, 2), arg0_span=(1, 3), arg1_span=(3, 4),
               text="a b c d")


def test_rejects_negative_day():
    with pytest.raises(ValueError, match="negative day"):
        _tweet(day=-1)


# --- SupportPair / entries ---------------------------------------------------


def test_support_pair_rejects_self_pair():
    t = _tweet("t1")
    with pytest.raises(ValueError, match="itself"):
        SupportPair(left=t, right=t, day=0)


def test_support_pair_rejects_day_mismatch():
    a = _tweet("t1", day=1)
    b = _tweet("t2", day=2)
    with pytest.raises(ValueError, match="day"):
        SupportPair(left=a, right=b, day=1)


def test_support_pair_availability_is_conjunction():
    a = _tweet("t1", available=True)
    b = _tweet("t2", available=False)
    assert not SupportPair(left=a, right=b, day=0).available
    c = _tweet("t3", available=True)
    assert SupportPair(left=a, right=c, day=0).available


def test_entry_requires_variants():
    with pytest.raises(ValueError, match="no template variants"):
        ParaphraseEntry(id="e", variants=())


def test_entry_rejects_inconsistent_variant_lemmas():
    v1 = TemplateVariant(template1=PredicateTemplate("die"),
                         template2=PredicateTemplate("pass"),
                         support_pairs=())
    v2 = TemplateVariant(template1=PredicateTemplate("die"),
                         template2=PredicateTemplate("explode"),
                         support_pairs=())
    with pytest.raises(ValueError, match="lemma pair"):
        ParaphraseEntry(id="e", variants=(v1, v2))


def test_entry_lemma_pair_casefolded():
    v = TemplateVariant(template1=PredicateTemplate("Die"),
                        template2=PredicateTemplate("PASS"),
                        support_pairs=())
    entry = ParaphraseEntry(id="e", variants=(v,))
    assert entry.lemma_pair == frozenset({"die", "pass"})


def test_corpus_rejects_duplicate_entry_ids():
    v = TemplateVariant(template1=PredicateTemplate("a"),
                        template2=PredicateTemplate("b"), support_pairs=())
    e = ParaphraseEntry(id="dup", variants=(v,))
    with pytest.raises(IntegrityError):
        Corpus(entries=(e, e), tweets={}, meta=CorpusMeta(collection_days=1))


def test_corpus_entry_lookup(tiny_corpus):
    assert tiny_corpus.entry("e1").id == "e1"
    with pytest.raises(KeyError):
        tiny_corpus.entry("missing")


def test_meta_requires_positive_days():
    with pytest.raises(ValueError):
        CorpusMeta(collection_days=0)


# --- chirps_score -------------------------------------------------------------


def test_chirps_score_worked_examples():
    assert chirps_score(5, 3, 30) == 5.5
    assert chirps_score(0, 0, 100) == 0.0
    assert chirps_score(7, 100, 100) == 14.0


@given(st.integers(0, 10_000), st.integers(1, 365))
def test_chirps_score_bounds(count, collection_days):
    days = min(count, collection_days)
    s = chirps_score(count, days, collection_days)
    assert count <= s <= 2 * count


def test_chirps_score_domain_errors():
    with pytest.raises(ValueError):
        chirps_score(1, 0, 0)
    with pytest.raises(ValueError):
        chirps_score(-1, 0, 10)
    with pytest.raises(ValueError):
        chirps_score(1, 11, 10)


# --- base_features --------------------------------------------------------------


def test_base_features_tiny_corpus(tiny_corpus):
    meta = tiny_corpus.meta
    assert base_features(tiny_corpus.entry("e1"), meta) == \
        (2.0, 3.0, 2.0, 2.4, 2.0, 2.0)
    assert base_features(tiny_corpus.entry("e2"), meta) == \
        (1.0, 2.0, 1.0, 2.2, 2.0, 1.0)


def test_base_features_availability_identity():
    # all tweets available => slots 4/5 equal slots 1/2
    a = _tweet("t1", day=1)
    b = _tweet("t2", day=1)
    c = _tweet("t3", day=4)
    d = _tweet("t4", day=4)
    v = TemplateVariant(
        template1=PredicateTemplate("x"), template2=PredicateTemplate("y"),
        support_pairs=(SupportPair(a, b, 1), SupportPair(c, d, 4),
                       SupportPair(b, a, 1)),
    )
    entry = ParaphraseEntry(id="e", variants=(v,))
    feats = base_features(entry, CorpusMeta(collection_days=10))
    assert feats[4] == feats[1] and feats[5] == feats[2]


def test_base_features_three_pair_fixture():
    # 3 pairs on days {1, 1, 4}, the day-4 pair unavailable, single
    # variant, N=10 -> (1, 3, 2, 3.6, 2, 1)
    a = _tweet("t1", day=1)
    b = _tweet("t2", day=1)
    c = _tweet("t3", day=1)
    d = _tweet("t4", day=4)
    e = _tweet("t5", day=4, available=False)
    v = TemplateVariant(
        template1=PredicateTemplate("x"), template2=PredicateTemplate("y"),
        support_pairs=(SupportPair(a, b, 1), SupportPair(c, b, 1),
                       SupportPair(d, e, 4)),
    )
    entry = ParaphraseEntry(id="e", variants=(v,))
    feats = base_features(entry, CorpusMeta(collection_days=10))
    assert feats == (1.0, 3.0, 2.0, 3 * (1 + 2 / 10), 2.0, 1.0)


def test_heuristic_slot_is_max_over_variants(tiny_corpus):
    # e1: variant 1 scores 2*(1+2/10)=2.4, variant 2 scores 1.1
    assert base_features(tiny_corpus.entry("e1"), tiny_corpus.meta)[3] == 2.4


# --- serialization round-trip -----------------------------------------------------


def test_save_load_round_trip(tmp_path):
    corpus = build_tiny_corpus()
    target = tmp_path / "corpus"
    save_corpus(corpus, target)
    loaded = load_corpus(target)
    assert [e.id for e in loaded.entries] == ["e1", "e2", "e3"]
    assert loaded.meta == corpus.meta
    assert set(loaded.tweets) == set(corpus.tweets)
    for entry in corpus.entries:
        reloaded = loaded.entry(entry.id)
        assert reloaded == entry


def test_save_is_byte_stable(tmp_path):
    corpus = build_tiny_corpus()
    save_corpus(corpus, tmp_path / "a")
    save_corpus(corpus, tmp_path / "b")
    for name in ("tweets.jsonl", "pairs.jsonl", "meta.json"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_load_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path)


def test_load_reports_malformed_line(tiny_corpus_dir):
    tweets = tiny_corpus_dir / "tweets.jsonl"
    lines = tweets.read_text().splitlines()
    lines[2] = "{not json"
    tweets.write_text("\n".join(lines) + "\n")
    with pytest.raises(ParseError) as exc_info:
        load_corpus(tiny_corpus_dir)
    assert exc_info.value.line_no == 3
    assert str(tweets) in str(exc_info.value)


def test_load_rejects_dangling_tweet_reference(tiny_corpus_dir):
    pairs = tiny_corpus_dir / "pairs.jsonl"
    text = pairs.read_text().replace('"t8"', '"t99"')
    pairs.write_text(text)
    with pytest.raises(IntegrityError, match="t99"):
        load_corpus(tiny_corpus_dir)


def test_load_rejects_duplicate_tweet_id(tiny_corpus_dir):
    tweets = tiny_corpus_dir / "tweets.jsonl"
    lines = tweets.read_text().splitlines()
    tweets.write_text("\n".join(lines + [lines[0]]) + "\n")
    with pytest.raises(IntegrityError, match="duplicate tweet"):
        load_corpus(tiny_corpus_dir)


def test_load_rejects_duplicate_entry_id(tiny_corpus_dir):
    pairs = tiny_corpus_dir / "pairs.jsonl"
    lines = pairs.read_text().splitlines()
    pairs.write_text("\n".join(lines + [lines[0]]) + "\n")
    with pytest.raises(IntegrityError, match="duplicate entry"):
        load_corpus(tiny_corpus_dir)


def test_load_rejects_entry_without_support(tiny_corpus_dir):
    pairs = tiny_corpus_dir / "pairs.jsonl"
    record = {
        "id": "e9", "original_score": 0.0,
        "variants": [{"template1": {"lemma": "a"},
                      "template2": {"lemma": "b"},
                      "support_pairs": []}],
    }
    with pairs.open("a", encoding="utf-8") as fh:
        fh.write(json.dumps(record) + "\n")
    with pytest.raises(ParseError, match="no support pairs"):
        load_corpus(tiny_corpus_dir)


def test_load_rejects_day_outside_collection(tiny_corpus_dir):
    meta = tiny_corpus_dir / "meta.json"
    meta.write_text('{"collection_days": 3}\n')
    with pytest.raises(IntegrityError, match="collection period"):
        load_corpus(tiny_corpus_dir)


def test_empty_pairs_file_gives_empty_corpus(tmp_path):
    target = tmp_path / "corpus"
    target.mkdir()
    (target / "tweets.jsonl").write_text("")
    (target / "pairs.jsonl").write_text("")
    (target / "meta.json").write_text('{"collection_days": 5}\n')
    corpus = load_corpus(target)
    assert len(corpus) == 0 and not corpus.tweets
