"""Paraphrase-resource ingestion and the base count features.

A corpus is three UTF-8 files in one directory:

``tweets.jsonl``
    one tweet per line::

        {"id": "t1", "text": "Chuck Berry died at 90", "predicate_span": [2, 4],
         "arg0_span": [0, 2], "arg1_span": [4, 5], "day": 3,
         "named_entities": ["chuck berry"], "available": true}

    Spans are half-open token-index intervals over ``text.split()``.

``pairs.jsonl``
    one paraphrase entry per line, tweets referenced by id::

        {"id": "e1", "original_score": 5.5, "variants": [
            {"template1": {"lemma": "die", "arg_pattern": "a0 _ a1"},
             "template2": {"lemma": "live until", "arg_pattern": "a0 _ a1"},
             "support_pairs": [{"left": "t1", "right": "t2", "day": 3}]}]}

``meta.json``
    ``{"collection_days": 30}``

After loading, support pairs hold resolved ``TweetDoc`` objects, so entries
are self-contained for downstream feature computation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

Span = tuple[int, int]

TWEETS_FILE = "tweets.jsonl"
PAIRS_FILE = "pairs.jsonl"
META_FILE = "meta.json"


class CorpusError(Exception):
    """Base class for corpus ingestion failures."""


class ParseError(CorpusError):
    """A line of an input file is malformed."""

    def __init__(self, path: str | Path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class IntegrityError(CorpusError):
    """A record references an id that does not resolve, or ids collide."""


def normalize_entity(name: str) -> str:
    """Case-fold and collapse whitespace; matching is exact after this."""
    return " ".join(name.casefold().split())


@dataclass(frozen=True)
class TweetDoc:
    """One tweet with its extracted predicate-argument tuple.

    ``named_entities`` covers the tweet and, when the linked article was
    retrievable, its lead paragraph.  ``available`` records whether the
    article could still be downloaded; unavailable tweets keep their
    tweet-only entity set.
    """

    id: str
    text: str
    predicate_span: Span
    arg0_span: Span
    arg1_span: Span
    day: int
    named_entities: frozenset[str] = frozenset()
    available: bool = True

    def __post_init__(self):
        object.__setattr__(self, "predicate_span", tuple(self.predicate_span))
        object.__setattr__(self, "arg0_span", tuple(self.arg0_span))
        object.__setattr__(self, "arg1_span", tuple(self.arg1_span))
        object.__setattr__(
            self, "named_entities",
            frozenset(normalize_entity(e) for e in self.named_entities),
        )
        n_tokens = len(self.text.split())
        spans = (self.predicate_span, self.arg0_span, self.arg1_span)
        for span in spans:
            if len(span) != 2 or not (0 <= span[0] < span[1] <= n_tokens):
                raise ValueError(
                    f"tweet {self.id!r}: span {span} not within [0, {n_tokens})"
                )
        for a, b in itertools.combinations(spans, 2):
            if a[0] < b[1] and b[0] < a[1]:
                raise ValueError(f"tweet {self.id!r}: overlapping spans {a}, {b}")
        if self.day < 0:
            raise ValueError(f"tweet {self.id!r}: negative day {self.day}")

    def _span_text(self, span: Span) -> str:
        tokens = self.text.split()
        return " ".join(tokens[span[0]:span[1]])

    @property
    def predicate_text(self) -> str:
        return self._span_text(self.predicate_span)

    @property
    def arg0_text(self) -> str:
        return self._span_text(self.arg0_span)

    @property
    def arg1_text(self) -> str:
        return self._span_text(self.arg1_span)


@dataclass(frozen=True)
class PredicateTemplate:
    """A predicate lemma plus the ordering of its two argument slots.

    ``arg_pattern`` is an opaque variant discriminator; ``"a0 _ a1"`` puts
    the predicate between the arguments, ``"_ a0 a1"`` in front, and so on.
    """

    lemma: str
    arg_pattern: str = "a0 _ a1"


@dataclass(frozen=True)
class SupportPair:
    """Two same-day tweets whose tuples were aligned as paraphrase evidence."""

    left: TweetDoc
    right: TweetDoc
    day: int

    def __post_init__(self):
        if self.left.id == self.right.id:
            raise ValueError(f"support pair links tweet {self.left.id!r} to itself")
        if not (self.day == self.left.day == self.right.day):
            raise ValueError(
                f"support pair ({self.left.id!r}, {self.right.id!r}) day {self.day} "
                f"!= tweet days ({self.left.day}, {self.right.day})"
            )

    @property
    def key(self) -> tuple[str, str]:
        return (self.left.id, self.right.id)

    @property
    def available(self) -> bool:
        return self.left.available and self.right.available


@dataclass(frozen=True)
class TemplateVariant:
    """One slot-ordering of the entry's template pair, with its evidence."""

    template1: PredicateTemplate
    template2: PredicateTemplate
    support_pairs: tuple[SupportPair, ...]

    def __post_init__(self):
        object.__setattr__(self, "support_pairs", tuple(self.support_pairs))

    @property
    def days(self) -> frozenset[int]:
        return frozenset(p.day for p in self.support_pairs)


@dataclass(frozen=True)
class ParaphraseEntry:
    """A predicate-template pair with all its slot-order variants."""

    id: str
    variants: tuple[TemplateVariant, ...]
    original_score: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        if not self.variants:
            raise ValueError(f"entry {self.id!r} has no template variants")
        key = self.lemma_pair
        for v in self.variants:
            if frozenset({v.template1.lemma.casefold(), v.template2.lemma.casefold()}) != key:
                raise ValueError(
                    f"entry {self.id!r}: variant lemma pair differs from the entry's"
                )

    @property
    def lemma_pair(self) -> frozenset[str]:
        """Unordered case-folded lemma pair; the variant grouping key."""
        first = self.variants[0]
        return frozenset({first.template1.lemma.casefold(),
                          first.template2.lemma.casefold()})

    @property
    def support_pairs(self) -> tuple[SupportPair, ...]:
        return tuple(p for v in self.variants for p in v.support_pairs)


@dataclass(frozen=True)
class CorpusMeta:
    """Global collection properties: the number of collection days."""

    collection_days: int

    def __post_init__(self):
        if self.collection_days < 1:
            raise ValueError(f"collection_days must be >= 1, got {self.collection_days}")


@dataclass(frozen=True, eq=False)
class Corpus:
    """Cross-linked resource: entries, the tweet store, and meta.

    Immutable after load; safe for concurrent reads.
    """

    entries: tuple[ParaphraseEntry, ...]
    tweets: dict[str, TweetDoc]
    meta: CorpusMeta

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        index = {e.id: e for e in self.entries}
        if len(index) != len(self.entries):
            raise IntegrityError("duplicate entry ids in corpus")
        object.__setattr__(self, "_by_id", index)

    def entry(self, entry_id: str) -> ParaphraseEntry:
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise KeyError(f"unknown entry id {entry_id!r}") from None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ParaphraseEntry]:
        return iter(self.entries)


def chirps_score(count: int, days: int, collection_days: int) -> float:
    """Heuristic resource score: pair count scaled by the spread of match days.

    ``count * (1 + days / collection_days)``.  ``days`` is the number of
    distinct days on which supporting pairs were found and may not exceed
    the collection period.
    """
    if collection_days <= 0:
        raise ValueError(f"collection_days must be positive, got {collection_days}")
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    if not 0 <= days <= collection_days:
        raise ValueError(
            f"days must be within [0, {collection_days}], got {days}"
        )
    return count * (1.0 + days / collection_days)


def base_features(entry: ParaphraseEntry, meta: CorpusMeta) -> tuple[float, ...]:
    """The six resource-count features of an entry.

    In order: variant count, total support pairs, distinct match days,
    maximal per-variant heuristic score, support pairs with both tweets
    still available, and distinct days among those.
    """
    pairs = entry.support_pairs
    all_days = {p.day for p in pairs}
    best_score = 0.0
    for variant in entry.variants:
        if not variant.support_pairs:
            continue
        score = chirps_score(
            len(variant.support_pairs), len(variant.days), meta.collection_days
        )
        best_score = max(best_score, score)
    available = [p for p in pairs if p.available]
    available_days = {p.day for p in available}
    return (
        float(len(entry.variants)),
        float(len(pairs)),
        float(len(all_days)),
        best_score,
        float(len(available)),
        float(len(available_days)),
    )


# --- serialization ---------------------------------------------------------


def _tweet_from_record(record: dict) -> TweetDoc:
    return TweetDoc(
        id=record["id"],
        text=record["text"],
        predicate_span=tuple(record["predicate_span"]),
        arg0_span=tuple(record["arg0_span"]),
        arg1_span=tuple(record["arg1_span"]),
        day=record["day"],
        named_entities=frozenset(record.get("named_entities", ())),
        available=record.get("available", True),
    )


def _tweet_to_record(t: TweetDoc) -> dict:
    return {
        "id": t.id,
        "text": t.text,
        "predicate_span": list(t.predicate_span),
        "arg0_span": list(t.arg0_span),
        "arg1_span": list(t.arg1_span),
        "day": t.day,
        "named_entities": sorted(t.named_entities),
        "available": t.available,
    }


def _template_from_record(record: dict) -> PredicateTemplate:
    return PredicateTemplate(lemma=record["lemma"],
                             arg_pattern=record.get("arg_pattern", "a0 _ a1"))


def _entry_from_record(record: dict, tweets: dict[str, TweetDoc],
                       path: str | Path, line_no: int) -> ParaphraseEntry:
    variants = []
    for vrec in record["variants"]:
        pairs = []
        for prec in vrec.get("support_pairs", ()):
            for side in ("left", "right"):
                if prec[side] not in tweets:
                    raise IntegrityError(
                        f"{path}:{line_no}: entry {record.get('id')!r} references "
                        f"unknown tweet {prec[side]!r}"
                    )
            pairs.append(SupportPair(left=tweets[prec["left"]],
                                     right=tweets[prec["right"]],
                                     day=prec["day"]))
        variants.append(TemplateVariant(
            template1=_template_from_record(vrec["template1"]),
            template2=_template_from_record(vrec["template2"]),
            support_pairs=tuple(pairs),
        ))
    return ParaphraseEntry(
        id=record["id"],
        variants=tuple(variants),
        original_score=float(record.get("original_score", 0.0)),
    )


def _entry_to_record(e: ParaphraseEntry) -> dict:
    return {
        "id": e.id,
        "original_score": e.original_score,
        "variants": [
            {
                "template1": {"lemma": v.template1.lemma,
                              "arg_pattern": v.template1.arg_pattern},
                "template2": {"lemma": v.template2.lemma,
                              "arg_pattern": v.template2.arg_pattern},
                "support_pairs": [
                    {"left": p.left.id, "right": p.right.id, "day": p.day}
                    for p in v.support_pairs
                ],
            }
            for v in e.variants
        ],
    }


def _iter_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(record, dict):
                raise ParseError(path, line_no, "expected a JSON object")
            yield line_no, record


def load_corpus(path: str | Path) -> Corpus:
    """Load and cross-link a corpus directory.

    Raises ``ParseError`` (with file and line) for malformed records,
    ``IntegrityError`` for dangling or duplicate ids, ``FileNotFoundError``
    for missing files.
    """
    root = Path(path)
    tweets_path = root / TWEETS_FILE
    pairs_path = root / PAIRS_FILE
    meta_path = root / META_FILE
    for p in (tweets_path, pairs_path, meta_path):
        if not p.is_file():
            raise FileNotFoundError(f"missing corpus file: {p}")

    with meta_path.open("r", encoding="utf-8") as fh:
        try:
            meta_record = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(meta_path, exc.lineno, f"invalid JSON: {exc.msg}") from exc
    try:
        meta = CorpusMeta(collection_days=int(meta_record["collection_days"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(meta_path, 1, f"bad meta record: {exc}") from exc

    tweets: dict[str, TweetDoc] = {}
    for line_no, record in _iter_jsonl(tweets_path):
        try:
            tweet = _tweet_from_record(record)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(tweets_path, line_no, f"bad tweet record: {exc}") from exc
        if tweet.id in tweets:
            raise IntegrityError(
                f"{tweets_path}:{line_no}: duplicate tweet id {tweet.id!r}"
            )
        if tweet.day >= meta.collection_days:
            raise IntegrityError(
                f"{tweets_path}:{line_no}: tweet {tweet.id!r} day {tweet.day} "
                f"outside the {meta.collection_days}-day collection period"
            )
        tweets[tweet.id] = tweet

    entries: list[ParaphraseEntry] = []
    seen: set[str] = set()
    for line_no, record in _iter_jsonl(pairs_path):
        try:
            entry = _entry_from_record(record, tweets, pairs_path, line_no)
        except IntegrityError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(pairs_path, line_no, f"bad entry record: {exc}") from exc
        if not entry.support_pairs:
            raise ParseError(pairs_path, line_no,
                             f"entry {entry.id!r} has no support pairs")
        if entry.id in seen:
            raise IntegrityError(
                f"{pairs_path}:{line_no}: duplicate entry id {entry.id!r}"
            )
        seen.add(entry.id)
        entries.append(entry)

    return Corpus(entries=tuple(entries), tweets=tweets, meta=meta)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus directory in canonical form (ids sorted, keys sorted)."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    with (root / TWEETS_FILE).open("w", encoding="utf-8") as fh:
        for tweet_id in sorted(corpus.tweets):
            fh.write(json.dumps(_tweet_to_record(corpus.tweets[tweet_id]),
                                sort_keys=True, ensure_ascii=False) + "\n")
    with (root / PAIRS_FILE).open("w", encoding="utf-8") as fh:
        for entry in sorted(corpus.entries, key=lambda e: e.id):
            fh.write(json.dumps(_entry_to_record(entry),
                                sort_keys=True, ensure_ascii=False) + "\n")
    with (root / META_FILE).open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"collection_days": corpus.meta.collection_days},
                            sort_keys=True) + "\n")
