"""Pairwise mention scorer with a resource-feature side network, plus
average-linkage agglomerative clustering.

The scorer consumes ``[v_i; v_j; v_i o v_j; f(i, j); c_ij]`` where the
``v``s are precomputed mention vectors, ``o`` is the elementwise product,
``f(i, j)`` is a small binary-feature block, and ``c_ij`` is the output
of a one-hidden-layer network over the 17 resource features of the
mention pair's lemma pair — applied to the zero vector when the resource
does not cover the pair, so every uncovered pair shares one constant
component output.  Both networks use tanh activations; the scorer head
is a sigmoid trained with full-batch gradient descent on binary
cross-entropy.  All forward/backward passes are plain numpy with
hand-derived gradients.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .corpus import ParseError
from .coref_metrics import Clustering
from .rng import SplitMix64

SCORER_SCHEMA = "paracoref.scorer.v1"


class TrainingDivergedError(Exception):
    """Loss became non-finite; carries the epoch and learning rate."""


@dataclass(frozen=True)
class ScorerConfig:
    """Dimensions and optimization settings for the pairwise scorer."""

    mention_dim: int = 1024
    binary_dim: int = 2
    feature_dim: int = 17
    component_hidden: int = 50
    component_out: int = 50
    hidden: int = 50
    use_component: bool = True
    learning_rate: float = 0.1
    epochs: int = 200
    seed: int = 0

    def __post_init__(self):
        for name in ("mention_dim", "binary_dim", "feature_dim",
                     "component_hidden", "component_out", "hidden"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.learning_rate < 0 or self.epochs < 0:
            raise ValueError("learning_rate and epochs must be nonnegative")

    @property
    def input_dim(self) -> int:
        base = 3 * self.mention_dim + self.binary_dim
        return base + (self.component_out if self.use_component else 0)


PARAM_ORDER = ("wc1", "bc1", "wc2", "bc2", "w1", "b1", "w2", "b2")

Params = dict[str, np.ndarray]


def init_params(config: ScorerConfig) -> Params:
    """Uniform Xavier init from the portable generator; deterministic."""
    rng = SplitMix64(config.seed)

    def uniform(rows: int, cols: int) -> np.ndarray:
        bound = math.sqrt(6.0 / (rows + cols))
        flat = np.fromiter((rng.next_float() for _ in range(rows * cols)),
                           dtype=np.float64, count=rows * cols)
        return ((2.0 * flat - 1.0) * bound).reshape(rows, cols)

    params: Params = {}
    if config.use_component:
        params["wc1"] = uniform(config.feature_dim, config.component_hidden)
        params["bc1"] = np.zeros(config.component_hidden)
        params["wc2"] = uniform(config.component_hidden, config.component_out)
        params["bc2"] = np.zeros(config.component_out)
    params["w1"] = uniform(config.input_dim, config.hidden)
    params["b1"] = np.zeros(config.hidden)
    params["w2"] = uniform(config.hidden, 1)
    params["b2"] = np.zeros(1)
    return params


@dataclass(frozen=True, eq=False)
class PairInput:
    """One candidate mention pair, fully vectorized."""

    v_i: np.ndarray
    v_j: np.ndarray
    binary: np.ndarray
    features: np.ndarray | None = None


class Batch(NamedTuple):
    v_i: np.ndarray
    v_j: np.ndarray
    binary: np.ndarray
    features: np.ndarray


def make_batch(pairs: Sequence[PairInput], config: ScorerConfig) -> Batch:
    """Stack pairs into matrices; absent resource features become zero
    rows (the shared constant-component convention)."""
    if not pairs:
        raise ValueError("empty pair batch")
    v_i = np.vstack([np.asarray(p.v_i, dtype=np.float64) for p in pairs])
    v_j = np.vstack([np.asarray(p.v_j, dtype=np.float64) for p in pairs])
    binary = np.vstack([np.asarray(p.binary, dtype=np.float64) for p in pairs])
    features = np.vstack([
        np.zeros(config.feature_dim) if p.features is None
        else np.asarray(p.features, dtype=np.float64)
        for p in pairs
    ])
    for name, mat, width in (("mention", v_i, config.mention_dim),
                             ("mention", v_j, config.mention_dim),
                             ("binary", binary, config.binary_dim),
                             ("feature", features, config.feature_dim)):
        if mat.shape[1] != width:
            raise ValueError(f"{name} width {mat.shape[1]} != configured {width}")
        if not np.all(np.isfinite(mat)):
            raise ValueError(f"non-finite {name} values in batch")
    return Batch(v_i, v_j, binary, features)


def chirps_component(features: np.ndarray, params: Params) -> np.ndarray:
    """tanh two-layer map from 17 resource features to the component
    vector; rows of zeros give the shared uncovered-pair output."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if features.shape[1] != params["wc1"].shape[0]:
        raise ValueError(
            f"feature width {features.shape[1]} != {params['wc1'].shape[0]}"
        )
    hidden = np.tanh(features @ params["wc1"] + params["bc1"])
    return np.tanh(hidden @ params["wc2"] + params["bc2"])


def _forward(batch: Batch, params: Params, config: ScorerConfig):
    if config.use_component:
        c_hidden = np.tanh(batch.features @ params["wc1"] + params["bc1"])
        component = np.tanh(c_hidden @ params["wc2"] + params["bc2"])
        z = np.hstack([batch.v_i, batch.v_j, batch.v_i * batch.v_j,
                       batch.binary, component])
    else:
        c_hidden = component = None
        z = np.hstack([batch.v_i, batch.v_j, batch.v_i * batch.v_j,
                       batch.binary])
    if z.shape[1] != config.input_dim:
        raise ValueError(f"input width {z.shape[1]} != {config.input_dim}")
    h = np.tanh(z @ params["w1"] + params["b1"])
    logits = (h @ params["w2"]).ravel() + params["b2"][0]
    prob = np.where(logits >= 0,
                    1.0 / (1.0 + np.exp(-np.abs(logits))),
                    np.exp(-np.abs(logits)) / (1.0 + np.exp(-np.abs(logits))))
    return z, c_hidden, component, h, prob


def score_pairs(pairs: Sequence[PairInput], params: Params,
                config: ScorerConfig) -> np.ndarray:
    """Coreference probabilities for a batch of pairs."""
    batch = make_batch(pairs, config)
    return _forward(batch, params, config)[4]


def score_pair(pair: PairInput, params: Params, config: ScorerConfig) -> float:
    return float(score_pairs([pair], params, config)[0])


_EPS = 1e-12


def loss_and_grads(batch: Batch, labels: np.ndarray, params: Params,
                   config: ScorerConfig) -> tuple[float, Params]:
    """Mean binary cross-entropy and its exact gradients."""
    y = np.asarray(labels, dtype=np.float64)
    n = len(y)
    z, c_hidden, component, h, prob = _forward(batch, params, config)
    clipped = np.clip(prob, _EPS, 1.0 - _EPS)
    loss = float(-np.mean(y * np.log(clipped) + (1 - y) * np.log(1 - clipped)))

    grads: Params = {}
    d_logits = (prob - y) / n
    grads["w2"] = h.T @ d_logits[:, None]
    grads["b2"] = np.array([d_logits.sum()])
    d_h = d_logits[:, None] @ params["w2"].T
    d_z_pre = d_h * (1.0 - h * h)
    grads["w1"] = z.T @ d_z_pre
    grads["b1"] = d_z_pre.sum(axis=0)
    if config.use_component:
        d_z = d_z_pre @ params["w1"].T
        d_component = d_z[:, -config.component_out:]
        d_c2_pre = d_component * (1.0 - component * component)
        grads["wc2"] = c_hidden.T @ d_c2_pre
        grads["bc2"] = d_c2_pre.sum(axis=0)
        d_c_hidden = d_c2_pre @ params["wc2"].T
        d_c1_pre = d_c_hidden * (1.0 - c_hidden * c_hidden)
        grads["wc1"] = batch.features.T @ d_c1_pre
        grads["bc1"] = d_c1_pre.sum(axis=0)
    return loss, grads


class TrainResult(NamedTuple):
    params: Params
    losses: list[float]


def train_scorer(pairs: Sequence[PairInput], labels: Sequence[int],
                 config: ScorerConfig,
                 start: Params | None = None) -> TrainResult:
    """Full-batch gradient descent; deterministic for a fixed config.

    ``start`` warm-starts from given parameters (used by loss-trace
    tests); otherwise parameters come from the seeded initializer.
    """
    y = np.asarray([int(bool(v)) for v in labels], dtype=np.float64)
    if len(pairs) != len(y):
        raise ValueError(f"{len(pairs)} pairs vs {len(y)} labels")
    if len(set(y.tolist())) < 2:
        raise ValueError("training needs both classes")
    batch = make_batch(pairs, config)
    params = ({k: v.copy() for k, v in start.items()} if start is not None
              else init_params(config))
    losses: list[float] = []
    for epoch in range(config.epochs):
        loss, grads = loss_and_grads(batch, y, params, config)
        if not math.isfinite(loss):
            raise TrainingDivergedError(
                f"non-finite loss at epoch {epoch} "
                f"(learning_rate={config.learning_rate}, "
                f"last finite loss={losses[-1] if losses else None})"
            )
        losses.append(loss)
        for key, grad in grads.items():
            params[key] = params[key] - config.learning_rate * grad
    return TrainResult(params=params, losses=losses)


# --- parameter flattening (finite-difference harness) -------------------------


def params_to_vector(params: Params) -> np.ndarray:
    keys = [k for k in PARAM_ORDER if k in params]
    return np.concatenate([params[k].ravel() for k in keys])


def vector_to_params(vector: np.ndarray, template: Params) -> Params:
    keys = [k for k in PARAM_ORDER if k in template]
    expected = sum(template[k].size for k in keys)
    if len(vector) != expected:
        raise ValueError(f"vector length {len(vector)} != parameter count "
                         f"{expected}")
    out: Params = {}
    offset = 0
    for key in keys:
        size = template[key].size
        out[key] = vector[offset:offset + size].reshape(template[key].shape).copy()
        offset += size
    return out


# --- agglomerative clustering --------------------------------------------------


def agglomerative_cluster(mention_ids: Sequence[str],
                          score_fn: Callable[[str, str], float],
                          merge_threshold: float) -> Clustering:
    """Average-linkage merging from singletons.

    At each step the cluster pair with the highest mean pairwise score
    merges, provided that mean is strictly above ``merge_threshold``;
    ties break toward the lexicographically smallest (minimum member,
    second minimum member) pair.  Scores are read once per mention pair
    in canonical (smaller id, larger id) order.
    """
    ids = sorted(mention_ids)
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate mention ids")
    pair_score: dict[tuple[str, str], float] = {}
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            pair_score[(a, b)] = float(score_fn(a, b))
    clusters: list[set[str]] = [{m} for m in ids]

    def linkage(ca: set[str], cb: set[str]) -> float:
        total = 0.0
        for a in ca:
            for b in cb:
                total += pair_score[(a, b) if a < b else (b, a)]
        return total / (len(ca) * len(cb))

    while len(clusters) > 1:
        best_score = -math.inf
        best_key: tuple[str, str] | None = None
        best_pair: tuple[int, int] | None = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                score = linkage(clusters[i], clusters[j])
                lo, hi = sorted((min(clusters[i]), min(clusters[j])))
                key = (lo, hi)
                if (score > best_score
                        or (score == best_score and best_key is not None
                            and key < best_key)):
                    best_score = score
                    best_key = key
                    best_pair = (i, j)
        if best_pair is None or best_score <= merge_threshold:
            break
        i, j = best_pair
        clusters[i] |= clusters[j]
        del clusters[j]
    return Clustering.from_clusters(clusters)


# --- mention data ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MentionRecord:
    """One event mention with its precomputed dense representation.

    ``verbal`` marks verbal (vs nominal/name) mentions; only the coverage
    report reads it.
    """

    id: str
    topic: str
    doc: str
    span: tuple[int, int]
    lemma: str
    vector: np.ndarray
    verbal: bool = True

    def __post_init__(self):
        object.__setattr__(self, "span", tuple(self.span))
        object.__setattr__(self, "vector",
                           np.asarray(self.vector, dtype=np.float64))
        if not np.all(np.isfinite(self.vector)):
            raise ValueError(f"mention {self.id!r} has non-finite vector entries")


def load_mentions(path: str | Path) -> list[MentionRecord]:
    """Read ``mentions.jsonl``: id, topic, doc, span, lemma, vector."""
    out: list[MentionRecord] = []
    seen: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                r = json.loads(line)
                record = MentionRecord(id=r["id"], topic=r["topic"],
                                       doc=r["doc"], span=tuple(r["span"]),
                                       lemma=r["lemma"],
                                       vector=np.asarray(r["vector"]),
                                       verbal=bool(r.get("verbal", True)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, line_no, f"bad mention record: {exc}") from exc
            if record.id in seen:
                raise ParseError(path, line_no, f"duplicate mention {record.id!r}")
            seen.add(record.id)
            out.append(record)
    return out


def save_mentions(mentions: Sequence[MentionRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for m in sorted(mentions, key=lambda m: m.id):
            record = {"id": m.id, "topic": m.topic, "doc": m.doc,
                      "span": list(m.span), "lemma": m.lemma,
                      "vector": [float(v) for v in m.vector],
                      "verbal": m.verbal}
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def binary_features(a: MentionRecord, b: MentionRecord) -> np.ndarray:
    """Default pairwise binary block: lemma match, same document."""
    return np.array([float(a.lemma.casefold() == b.lemma.casefold()),
                     float(a.doc == b.doc)], dtype=np.float64)


FeatureLookup = Callable[[str, str], "np.ndarray | None"]


def make_pair_input(a: MentionRecord, b: MentionRecord,
                    feature_lookup: FeatureLookup | None) -> PairInput:
    """Canonical-order pair construction (smaller mention id first)."""
    if b.id < a.id:
        a, b = b, a
    features = feature_lookup(a.lemma, b.lemma) if feature_lookup else None
    return PairInput(v_i=a.vector, v_j=b.vector,
                     binary=binary_features(a, b), features=features)


def cluster_topics(mentions: Sequence[MentionRecord], params: Params,
                   config: ScorerConfig, merge_threshold: float,
                   feature_lookup: FeatureLookup | None = None) -> Clustering:
    """Cluster each topic independently and combine the partitions."""
    by_topic: dict[str, list[MentionRecord]] = {}
    for m in mentions:
        by_topic.setdefault(m.topic, []).append(m)
    assignment: dict[str, str] = {}
    for topic in sorted(by_topic):
        group = sorted(by_topic[topic], key=lambda m: m.id)
        by_id = {m.id: m for m in group}
        if len(by_id) != len(group):
            raise ValueError(f"duplicate mention ids in topic {topic!r}")
        if len(group) == 1:
            assignment[group[0].id] = f"{topic}.0"
            continue
        pairs = []
        keys = []
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                pairs.append(make_pair_input(a, b, feature_lookup))
                keys.append((a.id, b.id))
        scores = score_pairs(pairs, params, config)
        table = dict(zip(keys, scores))

        def score_fn(x: str, y: str) -> float:
            return float(table[(x, y) if (x, y) in table else (y, x)])

        clustering = agglomerative_cluster([m.id for m in group], score_fn,
                                           merge_threshold)
        for k, cluster in enumerate(clustering.clusters):
            for mention in cluster:
                assignment[mention] = f"{topic}.{k}"
    return Clustering(assignment)


# --- serialization ---------------------------------------------------------------


def save_params(params: Params, config: ScorerConfig, path: str | Path) -> None:
    """JSON with full float precision; byte-stable for fixed inputs."""
    payload = {
        "schema": SCORER_SCHEMA,
        "config": {k: getattr(config, k) for k in (
            "mention_dim", "binary_dim", "feature_dim", "component_hidden",
            "component_out", "hidden", "use_component", "learning_rate",
            "epochs", "seed")},
        "arrays": {k: params[k].tolist() for k in PARAM_ORDER if k in params},
    }
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_params(path: str | Path) -> tuple[Params, ScorerConfig]:
    with Path(path).open("r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema") != SCORER_SCHEMA:
        raise ValueError(f"unknown scorer schema {payload.get('schema')!r}")
    config = ScorerConfig(**payload["config"])
    params = {k: np.asarray(v, dtype=np.float64)
              for k, v in payload["arrays"].items()}
    return params, config
