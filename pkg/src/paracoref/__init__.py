"""Toolkit for re-scoring predicate-paraphrase resources with
coreference-style features, and for injecting those features into a
pairwise event-coreference scorer.

Submodules:
    corpus          resource ingestion, heuristic score, base count features
    graph_features  support / global tweet graphs, component and clique features
    entity_coverage named-entity coverage score and its threshold
    coref_decisions per-pair clustering decisions and categorical match features
    features        the 17-slot feature vector contract and dataset assembly
    supervision     distant labels from event-cluster annotations, vote aggregation
    forest          from-scratch random forest with randomized CV search
    evaluation      ranking / classification metrics and significance tests
    assignment      exact max-weight bipartite assignment (for CEAF-e)
    coref_metrics   MUC, B3, CEAF-e, CoNLL F1, coverage, error diffs
    pair_scorer     feature-augmented pairwise mention scorer and clustering
    thresholds      accuracy-maximizing cutoff search over score midpoints
    rng             portable 64-bit seeded generator for reproducibility
    synthetic       seeded synthetic corpora for the experiment suites
    experiments     re-ranking and integration experiment runners
    cli             pipeline driver
"""

__version__ = "0.1.0"
