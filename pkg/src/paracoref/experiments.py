"""Seeded experiment runners: heuristic-vs-ranker AP and the clustering
synergy comparison.  Both the scripts and the acceptance suite call
these, so experiment logic lives in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import forest as forest_mod
from .coref_metrics import score_all
from .entity_coverage import DEFAULT_THRESHOLD
from .evaluation import ap_score, paired_significance
from .features import build_dataset, slot_index
from .forest import ForestHyperparams
from .graph_features import build_global_graph
from .pair_scorer import ScorerConfig, cluster_topics, make_pair_input, train_scorer
from .supervision import assign_splits
from .synthetic import make_integration_topics, make_rerank_corpus


@dataclass(frozen=True)
class RerankTrial:
    seed: int
    ap_model: float
    ap_heuristic: float

    @property
    def gain(self) -> float:
        return self.ap_model - self.ap_heuristic


def rerank_trial(seed: int, n_entries: int = 600,
                 hyperparams: ForestHyperparams | None = None) -> RerankTrial:
    """Train the forest on synthetic entries and compare test-set AP
    against the count heuristic (the heuristic-score feature slot)."""
    data = make_rerank_corpus(seed, n_entries=n_entries)
    graph = build_global_graph(data.corpus)
    splits = assign_splits(data.labels, {"train": 0.6, "test": 0.4}, seed)
    dataset = build_dataset(data.corpus, data.labels, DEFAULT_THRESHOLD,
                            {}, graph, splits=splits)
    train = dataset.subset("train")
    test = dataset.subset("test")
    hp = hyperparams or ForestHyperparams(seed=seed)
    model = forest_mod.train(train.X, train.y, hp)
    scores_model = forest_mod.predict_proba(model, test.X)
    scores_heuristic = test.X[:, slot_index("heuristic_score")]
    return RerankTrial(
        seed=seed,
        ap_model=ap_score(scores_model.tolist(), test.y.tolist(),
                          ids=test.entry_ids),
        ap_heuristic=ap_score(scores_heuristic.tolist(), test.y.tolist(),
                              ids=test.entry_ids),
    )


@dataclass(frozen=True)
class ExperimentSummary:
    trials: tuple
    mean_a: float
    mean_b: float
    permutation_p: float
    bootstrap_p: float

    @property
    def mean_gain(self) -> float:
        return self.mean_a - self.mean_b


def _summarize(trials: tuple, a: list[float], b: list[float],
               n_resamples: int, seed: int) -> ExperimentSummary:
    result = paired_significance(a, b, metric="mean",
                                 n_resamples=n_resamples, seed=seed)
    return ExperimentSummary(
        trials=trials,
        mean_a=float(np.mean(a)),
        mean_b=float(np.mean(b)),
        permutation_p=result.permutation_p,
        bootstrap_p=result.bootstrap_p,
    )


def rerank_experiment(seeds: tuple[int, ...] = tuple(range(8)),
                      n_entries: int = 600,
                      n_resamples: int = 10_000) -> ExperimentSummary:
    """Per-seed paired AP comparison: trained ranker vs heuristic."""
    trials = tuple(rerank_trial(seed, n_entries=n_entries) for seed in seeds)
    return _summarize(trials,
                      [t.ap_model for t in trials],
                      [t.ap_heuristic for t in trials],
                      n_resamples, seed=0)


@dataclass(frozen=True)
class IntegrationTrial:
    seed: int
    conll_augmented: float
    conll_baseline: float

    @property
    def gain(self) -> float:
        return self.conll_augmented - self.conll_baseline


def integration_trial(seed: int, n_train_topics: int = 6,
                      n_eval_topics: int = 4, mentions_per_topic: int = 8,
                      mention_dim: int = 8, epochs: int = 300,
                      learning_rate: float = 0.5,
                      merge_threshold: float = 0.5) -> IntegrationTrial:
    """Train augmented and unaugmented scorers on one synthetic world and
    compare CoNLL F1 of their clusterings on held-out topics.

    Both systems share the data, seed, and optimization settings; they
    differ only in whether the resource feature component is wired in.
    """
    train_world = make_integration_topics(seed, n_topics=n_train_topics,
                                          mentions_per_topic=mentions_per_topic,
                                          mention_dim=mention_dim, tag="train.")
    eval_world = make_integration_topics(seed + 10_000,
                                         n_topics=n_eval_topics,
                                         mentions_per_topic=mentions_per_topic,
                                         mention_dim=mention_dim, tag="eval.")
    by_topic: dict[str, list] = {}
    for m in train_world.mentions:
        by_topic.setdefault(m.topic, []).append(m)
    pairs = []
    labels = []
    for topic in sorted(by_topic):
        group = sorted(by_topic[topic], key=lambda m: m.id)
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                pairs.append(make_pair_input(group[i], group[j],
                                             train_world.feature_lookup))
                labels.append(int(train_world.gold.same_cluster(
                    group[i].id, group[j].id)))

    results = {}
    for name, use_component in (("augmented", True), ("baseline", False)):
        config = ScorerConfig(mention_dim=mention_dim, use_component=use_component,
                              epochs=epochs, learning_rate=learning_rate,
                              seed=seed)
        trained = train_scorer(pairs, labels, config)
        lookup = eval_world.feature_lookup if use_component else None
        predicted = cluster_topics(eval_world.mentions, trained.params, config,
                                   merge_threshold, feature_lookup=lookup)
        results[name] = score_all(eval_world.gold, predicted).conll_f1
    return IntegrationTrial(seed=seed,
                            conll_augmented=results["augmented"],
                            conll_baseline=results["baseline"])


def integration_experiment(seeds: tuple[int, ...] = tuple(range(10)),
                           n_resamples: int = 10_000,
                           **trial_kwargs) -> ExperimentSummary:
    """Per-seed paired CoNLL F1 comparison: augmented vs unaugmented."""
    trials = tuple(integration_trial(seed, **trial_kwargs) for seed in seeds)
    return _summarize(trials,
                      [t.conll_augmented for t in trials],
                      [t.conll_baseline for t in trials],
                      n_resamples, seed=0)
