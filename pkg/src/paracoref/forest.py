"""From-scratch random forest: Gini trees on bootstrap samples.

Structural reproducibility is part of the contract: all randomness flows
from the portable splitmix-style generator in :mod:`paracoref.rng`, so a
(seed, dataset) pair yields bit-identical forests on any platform.  Each
tree draws a bootstrap sample of the full dataset size, then grows
greedily: at every node a random feature subset is inspected, candidate
thresholds are the midpoints between consecutive distinct sorted values,
and the Gini-gain-maximizing (feature, threshold) wins with first-seen
tie-breaking.  Leaves store the positive-class training fraction.

The default hyperparameters are the deployed configuration: 157 trees,
depth cap 8, leaf minimum 1, split minimum 10, and floor(sqrt(17)) = 4
features inspected per split.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .rng import SplitMix64

FOREST_SCHEMA = "paracoref.forest.v1"

DEFAULT_SEARCH_SPACE: dict[str, Sequence[int]] = {
    "n_estimators": range(50, 301),
    "max_depth": range(2, 17),
    "min_samples_leaf": range(1, 9),
    "min_samples_split": range(2, 17),
}


@dataclass(frozen=True)
class ForestHyperparams:
    n_estimators: int = 157
    max_depth: int = 8
    min_samples_leaf: int = 1
    min_samples_split: int = 10
    features_per_split: int = 4
    seed: int = 0

    def __post_init__(self):
        for name in ("n_estimators", "max_depth", "min_samples_leaf",
                     "min_samples_split", "features_per_split"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.min_samples_split < 2:
            raise ValueError(
                f"min_samples_split must be >= 2, got {self.min_samples_split}"
            )


DEFAULT_HYPERPARAMS = ForestHyperparams()


@dataclass(frozen=True)
class Tree:
    """Binary tree as parallel arrays; ``feature == -1`` marks a leaf.

    ``positive[i]`` is the positive-class fraction of the training rows
    that reached node ``i``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    positive: np.ndarray

    def n_nodes(self) -> int:
        return len(self.feature)

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes(), dtype=np.int64)
        for i in range(self.n_nodes()):
            if self.feature[i] >= 0:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
        return int(depths.max()) if self.n_nodes() else 0


@dataclass(frozen=True)
class Forest:
    trees: tuple[Tree, ...]
    hyperparams: ForestHyperparams
    n_features: int


def gini(pos: float, n: float) -> float:
    """Gini impurity of a node with ``pos`` positives among ``n`` rows."""
    if n <= 0:
        return 0.0
    p = pos / n
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def best_split(X: np.ndarray, y: np.ndarray, feature_indices: Sequence[int],
               min_samples_leaf: int) -> tuple[int, float, float] | None:
    """Best (feature, threshold, gain) over the inspected features.

    Candidates are midpoints between consecutive distinct sorted values;
    both children must keep at least ``min_samples_leaf`` rows and the
    gain must be strictly positive.  Ties keep the first feature in
    ``feature_indices`` order, then the smallest threshold.  Returns
    ``None`` when no candidate qualifies.
    """
    m = len(y)
    total_pos = float(y.sum())
    parent = gini(total_pos, m)
    best: tuple[int, float, float] | None = None
    counts = np.arange(1, m, dtype=np.float64)
    for f in feature_indices:
        values = X[:, f]
        order = np.argsort(values, kind="stable")
        v = values[order]
        pos_prefix = np.cumsum(y[order]).astype(np.float64)[:-1]
        left_n = counts
        right_n = m - left_n
        boundary = v[:-1] < v[1:]
        valid = (boundary
                 & (left_n >= min_samples_leaf)
                 & (right_n >= min_samples_leaf))
        if not valid.any():
            continue
        right_pos = total_pos - pos_prefix
        p_left = pos_prefix / left_n
        p_right = right_pos / right_n
        gini_left = 1.0 - p_left ** 2 - (1.0 - p_left) ** 2
        gini_right = 1.0 - p_right ** 2 - (1.0 - p_right) ** 2
        gain = parent - (left_n * gini_left + right_n * gini_right) / m
        gain = np.where(valid, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] <= 0.0:
            continue
        threshold = (v[i] + v[i + 1]) / 2.0
        if threshold >= v[i + 1]:
            # Adjacent floats can make the midpoint collapse onto the
            # upper value; keep the split well-defined by using <= v[i].
            threshold = v[i]
        if best is None or gain[i] > best[2]:
            best = (int(f), float(threshold), float(gain[i]))
    return best


def _grow_tree(X: np.ndarray, y: np.ndarray, hp: ForestHyperparams,
               rng: SplitMix64) -> Tree:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    positive: list[float] = []

    def build(indices: np.ndarray, depth: int) -> int:
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        pos = float(y[indices].sum())
        positive.append(pos / len(indices))
        pure = pos == 0.0 or pos == len(indices)
        if (depth >= hp.max_depth or pure
                or len(indices) < hp.min_samples_split):
            return node
        subset = sorted(rng.sample_indices(X.shape[1], hp.features_per_split))
        split = best_split(X[indices], y[indices], subset, hp.min_samples_leaf)
        if split is None:
            return node
        f, t, _ = split
        go_left = X[indices, f] <= t
        feature[node] = f
        threshold[node] = t
        left[node] = build(indices[go_left], depth + 1)
        right[node] = build(indices[~go_left], depth + 1)
        return node

    n = len(y)
    bootstrap = np.fromiter((rng.next_below(n) for _ in range(n)),
                            dtype=np.int64, count=n)
    build(bootstrap, 0)
    return Tree(feature=np.asarray(feature, dtype=np.int64),
                threshold=np.asarray(threshold, dtype=np.float64),
                left=np.asarray(left, dtype=np.int64),
                right=np.asarray(right, dtype=np.int64),
                positive=np.asarray(positive, dtype=np.float64))


def train(X: np.ndarray, y: np.ndarray,
          hp: ForestHyperparams = DEFAULT_HYPERPARAMS) -> Forest:
    """Fit a forest; deterministic for a fixed (X, y, hp)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError(f"X {X.shape} and y {y.shape} do not align")
    if len(y) == 0:
        raise ValueError("empty training set")
    classes = np.unique(y)
    if not np.all(np.isin(classes, (0, 1))):
        raise ValueError(f"labels must be 0/1, got {classes.tolist()}")
    if len(classes) < 2:
        raise ValueError("training data contains a single class")
    if hp.features_per_split > X.shape[1]:
        raise ValueError(f"features_per_split {hp.features_per_split} exceeds "
                         f"feature count {X.shape[1]}")
    master = SplitMix64(hp.seed)
    trees = tuple(_grow_tree(X, y, hp, master.spawn())
                  for _ in range(hp.n_estimators))
    return Forest(trees=trees, hyperparams=hp, n_features=X.shape[1])


def _tree_scores(tree: Tree, X: np.ndarray) -> np.ndarray:
    node = np.zeros(len(X), dtype=np.int64)
    while True:
        feats = tree.feature[node]
        active = np.nonzero(feats >= 0)[0]
        if len(active) == 0:
            break
        rows = active
        f = feats[rows]
        t = tree.threshold[node[rows]]
        go_left = X[rows, f] <= t
        node[rows] = np.where(go_left, tree.left[node[rows]],
                              tree.right[node[rows]])
    return tree.positive[node]


def predict_proba(forest: Forest, X: np.ndarray) -> np.ndarray:
    """Mean per-tree positive-class probability; accepts one vector or a
    matrix, returns a scalar array of matching leading shape."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != forest.n_features:
        raise ValueError(
            f"expected {forest.n_features} features, got shape {X.shape}"
        )
    scores = np.zeros(len(X), dtype=np.float64)
    for tree in forest.trees:
        scores += _tree_scores(tree, X)
    scores /= len(forest.trees)
    return scores[0] if single else scores


def predict(forest: Forest, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    return (predict_proba(forest, X) >= threshold).astype(np.int64)


# --- randomized hyperparameter search ----------------------------------------


def _make_folds(n: int, folds: int, y: np.ndarray, rng: SplitMix64,
                retry_cap: int = 100) -> list[np.ndarray]:
    """Random contiguous-chunk folds; reshuffle until every fold holds
    both classes, bounded by ``retry_cap``."""
    for _ in range(retry_cap):
        indices = list(range(n))
        rng.shuffle(indices)
        chunks = [np.asarray(indices[k::folds], dtype=np.int64)
                  for k in range(folds)]
        if all(len(np.unique(y[c])) == 2 for c in chunks):
            return chunks
    raise ValueError(
        f"could not build {folds} two-class folds in {retry_cap} attempts"
    )


def randomized_search(X: np.ndarray, y: np.ndarray,
                      space: Mapping[str, Sequence[int]] | None = None,
                      n_iter: int = 20, folds: int = 3,
                      seed: int = 0) -> ForestHyperparams:
    """Uniformly sample ``n_iter`` configurations and return the one with
    the best mean fold accuracy (ties: first sampled)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if space is None:
        space = DEFAULT_SEARCH_SPACE
    if n_iter < 1:
        raise ValueError(f"n_iter must be positive, got {n_iter}")
    rng = SplitMix64(seed)
    fold_indices = _make_folds(len(y), folds, y, rng.spawn())
    sampler = rng.spawn()
    base = ForestHyperparams(seed=seed)
    best_hp: ForestHyperparams | None = None
    best_acc = -1.0
    choices = {name: list(space[name]) for name in sorted(space)}
    for _ in range(n_iter):
        fields = {name: values[sampler.next_below(len(values))]
                  for name, values in choices.items()}
        hp = replace(base, **fields)
        accs = []
        for k in range(folds):
            val = fold_indices[k]
            tr = np.concatenate([fold_indices[j] for j in range(folds) if j != k])
            model = train(X[tr], y[tr], hp)
            predicted = predict(model, X[val])
            accs.append(float(np.mean(predicted == y[val])))
        mean_acc = sum(accs) / folds
        if mean_acc > best_acc:
            best_hp, best_acc = hp, mean_acc
    assert best_hp is not None
    return best_hp


# --- serialization ------------------------------------------------------------


def save_forest(forest: Forest, path: str | Path) -> None:
    """Write the documented JSON schema (``paracoref.forest.v1``)."""
    payload = {
        "schema": FOREST_SCHEMA,
        "n_features": forest.n_features,
        "hyperparams": asdict(forest.hyperparams),
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": t.threshold.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "positive": t.positive.tolist(),
            }
            for t in forest.trees
        ],
    }
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_forest(path: str | Path) -> Forest:
    with Path(path).open("r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("schema") != FOREST_SCHEMA:
        raise ValueError(f"unknown forest schema {payload.get('schema')!r}")
    trees = tuple(
        Tree(feature=np.asarray(t["feature"], dtype=np.int64),
             threshold=np.asarray(t["threshold"], dtype=np.float64),
             left=np.asarray(t["left"], dtype=np.int64),
             right=np.asarray(t["right"], dtype=np.int64),
             positive=np.asarray(t["positive"], dtype=np.float64))
        for t in payload["trees"]
    )
    return Forest(trees=trees,
                  hyperparams=ForestHyperparams(**payload["hyperparams"]),
                  n_features=int(payload["n_features"]))
