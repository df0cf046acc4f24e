"""Coreference evaluation: MUC, B-cubed, CEAF-e, their CoNLL average,
resource coverage of gold coreferring pairs, and pairwise error diffs.

All metrics operate on total partitions over a shared mention universe
(mention identity, not span overlap), use the 0/0 -> 0 convention, and
are invariant to cluster-id renaming and mention order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .assignment import max_assignment
from .corpus import Corpus, ParseError

MentionId = str
Pair = tuple[MentionId, MentionId]


class Clustering:
    """A total partition of a mention universe."""

    __slots__ = ("_assignment", "_clusters", "_index")

    def __init__(self, assignment: Mapping[MentionId, str]):
        self._assignment = dict(assignment)
        by_cluster: dict[str, set[MentionId]] = {}
        for mention, cluster in self._assignment.items():
            by_cluster.setdefault(cluster, set()).add(mention)
        self._clusters = tuple(
            frozenset(members)
            for _, members in sorted(by_cluster.items(),
                                     key=lambda kv: min(kv[1]))
        )
        self._index = {m: i for i, c in enumerate(self._clusters) for m in c}

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[MentionId]]) -> "Clustering":
        assignment: dict[MentionId, str] = {}
        for i, members in enumerate(clusters):
            members = list(members)
            if not members:
                raise ValueError("empty cluster")
            for m in members:
                if m in assignment:
                    raise ValueError(f"mention {m!r} appears in two clusters")
                assignment[m] = str(i)
        return cls(assignment)

    @property
    def mentions(self) -> frozenset[MentionId]:
        return frozenset(self._assignment)

    @property
    def clusters(self) -> tuple[frozenset[MentionId], ...]:
        return self._clusters

    def cluster_of(self, mention: MentionId) -> frozenset[MentionId]:
        return self._clusters[self._index[mention]]

    def cluster_index(self, mention: MentionId) -> int:
        return self._index[mention]

    def same_cluster(self, a: MentionId, b: MentionId) -> bool:
        return self._index[a] == self._index[b]

    def links(self) -> frozenset[frozenset[MentionId]]:
        """All unordered within-cluster mention pairs."""
        out: set[frozenset[MentionId]] = set()
        for cluster in self._clusters:
            members = sorted(cluster)
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    out.add(frozenset((members[i], members[j])))
        return frozenset(out)

    def as_partition(self) -> frozenset[frozenset[MentionId]]:
        return frozenset(self._clusters)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return self.as_partition() == other.as_partition()

    def __hash__(self) -> int:
        return hash(self.as_partition())

    def __len__(self) -> int:
        return len(self._clusters)


def _check_universe(gold: Clustering, sys: Clustering) -> None:
    if gold.mentions != sys.mentions:
        only_gold = sorted(gold.mentions - sys.mentions)[:3]
        only_sys = sorted(sys.mentions - gold.mentions)[:3]
        raise ValueError(
            f"mention universes differ (gold-only {only_gold}, "
            f"sys-only {only_sys})"
        )


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def muc(gold: Clustering, sys: Clustering) -> tuple[float, float, float]:
    """Link-based metric: each gold cluster costs the number of system
    clusters it fragments into; singletons contribute nothing."""
    _check_universe(gold, sys)

    def side(key: Clustering, response: Clustering) -> tuple[float, float]:
        num = 0.0
        den = 0.0
        for cluster in key.clusters:
            partitions = {response.cluster_index(m) for m in cluster}
            num += len(cluster) - len(partitions)
            den += len(cluster) - 1
        return num, den

    r_num, r_den = side(gold, sys)
    p_num, p_den = side(sys, gold)
    recall = _ratio(r_num, r_den)
    precision = _ratio(p_num, p_den)
    return recall, precision, _f1(precision, recall)


def b_cubed(gold: Clustering, sys: Clustering) -> tuple[float, float, float]:
    """Mention-averaged overlap: per mention, the fraction of its gold
    (recall) or system (precision) cluster that the other side agrees on."""
    _check_universe(gold, sys)
    mentions = gold.mentions
    if not mentions:
        return 0.0, 0.0, 0.0
    recall_sum = 0.0
    precision_sum = 0.0
    for m in mentions:
        g = gold.cluster_of(m)
        s = sys.cluster_of(m)
        overlap = len(g & s)
        recall_sum += overlap / len(g)
        precision_sum += overlap / len(s)
    recall = recall_sum / len(mentions)
    precision = precision_sum / len(mentions)
    return recall, precision, _f1(precision, recall)


def phi4(g: frozenset[MentionId], s: frozenset[MentionId]) -> float:
    """Entity-pair similarity: 2|g∩s| / (|g|+|s|)."""
    return 2.0 * len(g & s) / (len(g) + len(s))


def ceaf_e(gold: Clustering, sys: Clustering) -> tuple[float, float, float]:
    """Entity-based CEAF: optimal one-to-one cluster alignment under
    phi4, found by an exact assignment solver."""
    _check_universe(gold, sys)
    if not gold.mentions:
        return 0.0, 0.0, 0.0
    g_clusters = gold.clusters
    s_clusters = sys.clusters
    weights = np.array([[phi4(g, s) for s in s_clusters] for g in g_clusters],
                       dtype=np.float64)
    total, _ = max_assignment(weights)
    recall = _ratio(total, len(g_clusters))
    precision = _ratio(total, len(s_clusters))
    return recall, precision, _f1(precision, recall)


def conll_f1(muc_f1: float, b3_f1: float, ceafe_f1: float) -> float:
    """Arithmetic mean of the three F1 values (any consistent scale)."""
    return (muc_f1 + b3_f1 + ceafe_f1) / 3.0


@dataclass(frozen=True)
class MetricReport:
    """All three metrics as (recall, precision, f1) plus their average."""

    muc: tuple[float, float, float]
    b_cubed: tuple[float, float, float]
    ceaf_e: tuple[float, float, float]
    conll_f1: float

    def as_dict(self) -> dict:
        return {
            "muc": {"recall": self.muc[0], "precision": self.muc[1],
                    "f1": self.muc[2]},
            "b_cubed": {"recall": self.b_cubed[0], "precision": self.b_cubed[1],
                        "f1": self.b_cubed[2]},
            "ceaf_e": {"recall": self.ceaf_e[0], "precision": self.ceaf_e[1],
                       "f1": self.ceaf_e[2]},
            "conll_f1": self.conll_f1,
        }


def score_all(gold: Clustering, sys: Clustering) -> MetricReport:
    m = muc(gold, sys)
    b = b_cubed(gold, sys)
    c = ceaf_e(gold, sys)
    return MetricReport(muc=m, b_cubed=b, ceaf_e=c,
                        conll_f1=conll_f1(m[2], b[2], c[2]))


# --- resource coverage ---------------------------------------------------------


@dataclass(frozen=True)
class CoverageReport:
    covered: int
    total: int

    @property
    def percent(self) -> float:
        return 100.0 * self.covered / self.total if self.total else 0.0


def resource_lemma_pairs(corpus: Corpus) -> frozenset[frozenset[str]]:
    return frozenset(entry.lemma_pair for entry in corpus.entries)


def coverage(gold: Clustering, lemmas: Mapping[MentionId, str],
             resource_pairs: frozenset[frozenset[str]], *,
             verbal: Mapping[MentionId, bool] | None = None,
             verbal_only: bool = False) -> CoverageReport:
    """How many gold coreferring mention pairs the resource knows.

    A pair is covered iff its case-folded lemma pair matches some
    resource entry.  With ``verbal_only``, pairs are restricted to those
    whose two mentions both carry a true ``verbal`` flag.
    """
    missing = sorted(gold.mentions - set(lemmas))
    if missing:
        raise KeyError(f"mentions without a lemma: {missing[:5]}")
    total = 0
    covered = 0
    for link in sorted(gold.links(), key=sorted):
        a, b = sorted(link)
        if verbal_only:
            flags = verbal or {}
            if not (flags.get(a, False) and flags.get(b, False)):
                continue
        total += 1
        key = frozenset((lemmas[a].casefold(), lemmas[b].casefold()))
        if key in resource_pairs:
            covered += 1
    return CoverageReport(covered=covered, total=total)


# --- error-recovery diff -------------------------------------------------------


def diff_errors(gold: Clustering, baseline: Clustering,
                new: Clustering) -> tuple[list[Pair], list[Pair]]:
    """Pairwise links the new system fixed relative to the baseline.

    ``fp_recovered``: pairs linked by the baseline, not coreferring in
    gold, and no longer linked by the new system.  ``fn_recovered``:
    gold-coreferring pairs the baseline split and the new system links.
    """
    _check_universe(gold, baseline)
    _check_universe(gold, new)
    gold_links = gold.links()
    base_links = baseline.links()
    new_links = new.links()
    fp = (base_links - new_links) - gold_links
    fn = (gold_links & new_links) - base_links

    def as_pairs(links: frozenset[frozenset[MentionId]]) -> list[Pair]:
        return sorted(tuple(sorted(link)) for link in links)

    return as_pairs(fp), as_pairs(fn)


# --- input formats -------------------------------------------------------------


def read_clustering_jsonl(path: str | Path) -> Clustering:
    """Read ``{"mention": id, "cluster": id}`` lines."""
    assignment: dict[MentionId, str] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                mention = record["mention"]
                cluster = str(record["cluster"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParseError(path, line_no, f"bad clustering record: {exc}") from exc
            if mention in assignment:
                raise ParseError(path, line_no, f"duplicate mention {mention!r}")
            assignment[mention] = cluster
    return Clustering(assignment)


def write_clustering_jsonl(clustering: Clustering, path: str | Path) -> None:
    """Write sorted ``{"cluster": ..., "mention": ...}`` lines; cluster ids
    are renumbered by smallest member for stable bytes."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for i, cluster in enumerate(clustering.clusters):
            for mention in sorted(cluster):
                fh.write(json.dumps({"cluster": str(i), "mention": mention},
                                    sort_keys=True, ensure_ascii=False) + "\n")


def read_clustering_conll(path: str | Path) -> Clustering:
    """Minimal tab-column format: ``doc<TAB>start<TAB>end<TAB>cluster``
    per mention; the mention id is ``doc:start:end``."""
    assignment: dict[MentionId, str] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(path, line_no,
                                 f"expected 4 tab-separated columns, got {len(parts)}")
            doc, start, end, cluster = parts
            try:
                mention = f"{doc}:{int(start)}:{int(end)}"
            except ValueError as exc:
                raise ParseError(path, line_no, f"bad span column: {exc}") from exc
            if mention in assignment:
                raise ParseError(path, line_no, f"duplicate mention {mention!r}")
            assignment[mention] = cluster
    return Clustering(assignment)
