"""Independent brute-force reference implementations.

Everything here trades efficiency for obviousness: exhaustive subset or
permutation enumeration, direct formula evaluation, no shared code with
the package under test beyond input types.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np


def dfs_components(nodes: Iterable, edges: Iterable[tuple]) -> set[frozenset]:
    """Connected components by explicit depth-first search."""
    adjacency: dict = {n: set() for n in nodes}
    for u, v in edges:
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    seen: set = set()
    components: set[frozenset] = set()
    for start in adjacency:
        if start in seen:
            continue
        stack = [start]
        group = set()
        while stack:
            node = stack.pop()
            if node in group:
                continue
            group.add(node)
            stack.extend(adjacency[node] - group)
        seen |= group
        components.add(frozenset(group))
    return components


def all_maximal_cliques(nodes: Sequence, edges: set[frozenset]) -> set[frozenset]:
    """Every maximal clique by checking all vertex subsets (tiny graphs)."""
    nodes = list(nodes)

    def is_clique(subset: tuple) -> bool:
        return all(frozenset((a, b)) in edges
                   for a, b in itertools.combinations(subset, 2))

    cliques: set[frozenset] = set()
    for r in range(1, len(nodes) + 1):
        for subset in itertools.combinations(nodes, r):
            if is_clique(subset):
                cliques.add(frozenset(subset))
    return {c for c in cliques
            if not any(c < other for other in cliques)}


def pair_in_big_clique(u, v, nodes: Sequence, edges: set[frozenset]) -> bool:
    return any(u in c and v in c and len(c) >= 3
               for c in all_maximal_cliques(nodes, edges))


def best_threshold_by_grid(scores: Sequence[float], labels: Sequence[int],
                           lower: float, upper: float) -> tuple[float, float]:
    """Exhaustive candidate-cut search, ties toward the smaller cut."""
    distinct = sorted(set(float(s) for s in scores))
    candidates = ([lower]
                  + [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]
                  + [upper])
    best_t, best_acc = None, -1.0
    for t in candidates:
        acc = sum((float(s) >= t) == bool(y)
                  for s, y in zip(scores, labels)) / len(scores)
        if acc > best_acc or (acc == best_acc and best_t is not None
                              and t < best_t):
            best_t, best_acc = t, acc
    return best_t, best_acc


def gini_of(labels: np.ndarray) -> float:
    if len(labels) == 0:
        return 0.0
    p = float(np.mean(labels))
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def all_split_gains(X: np.ndarray, y: np.ndarray, features: Sequence[int],
                    min_leaf: int) -> list[tuple[int, float, float]]:
    """Every admissible (feature, threshold, gain) by direct evaluation."""
    m = len(y)
    parent = gini_of(y)
    out: list[tuple[int, float, float]] = []
    for f in features:
        values = sorted(set(X[:, f].tolist()))
        for a, b in zip(values, values[1:]):
            t = (a + b) / 2.0
            if t >= b:
                t = a
            left = y[X[:, f] <= t]
            right = y[X[:, f] > t]
            if len(left) < min_leaf or len(right) < min_leaf:
                continue
            weighted = (len(left) * gini_of(left)
                        + len(right) * gini_of(right)) / m
            out.append((f, t, parent - weighted))
    return out


def average_precision_direct(labels_in_rank_order: Sequence[int]) -> float:
    """AP from a ranked 0/1 relevance list by the definition."""
    positives = sum(labels_in_rank_order)
    if positives == 0:
        raise ValueError("no positives")
    total = 0.0
    seen = 0
    for k, rel in enumerate(labels_in_rank_order, start=1):
        if rel:
            seen += 1
            total += seen / k
    return total / positives


def max_assignment_by_permutation(weights: np.ndarray) -> float:
    """Optimal assignment total by trying every permutation."""
    rows, cols = weights.shape
    if rows == 0 or cols == 0:
        return 0.0
    best = 0.0
    if rows <= cols:
        for perm in itertools.permutations(range(cols), rows):
            best = max(best, sum(weights[i, perm[i]] for i in range(rows)))
    else:
        for perm in itertools.permutations(range(rows), cols):
            best = max(best, sum(weights[perm[j], j] for j in range(cols)))
    return float(best)


def pairwise_links(clusters: Iterable[Iterable]) -> set[frozenset]:
    links: set[frozenset] = set()
    for cluster in clusters:
        for a, b in itertools.combinations(sorted(cluster), 2):
            links.add(frozenset((a, b)))
    return links


def muc_by_definition(gold: Sequence[set], system: Sequence[set]) -> tuple:
    """MUC recall/precision/F1 straight from the partition-counting form."""

    def score(key: Sequence[set], response: Sequence[set]) -> tuple[float, float]:
        num = den = 0.0
        for cluster in key:
            touched = {i for m in cluster
                       for i, r in enumerate(response) if m in r}
            num += len(cluster) - len(touched)
            den += len(cluster) - 1
        return num, den

    r_num, r_den = score(gold, system)
    p_num, p_den = score(system, gold)
    recall = r_num / r_den if r_den else 0.0
    precision = p_num / p_den if p_den else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return recall, precision, f1


def b_cubed_by_definition(gold: Sequence[set], system: Sequence[set]) -> tuple:
    mentions = sorted({m for c in gold for m in c})

    def containing(partition: Sequence[set], m) -> set:
        for cluster in partition:
            if m in cluster:
                return cluster
        raise KeyError(m)

    recall = precision = 0.0
    for m in mentions:
        g = containing(gold, m)
        s = containing(system, m)
        overlap = len(g & s)
        recall += overlap / len(g)
        precision += overlap / len(s)
    recall /= len(mentions)
    precision /= len(mentions)
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return recall, precision, f1


def ceaf_e_by_enumeration(gold: Sequence[set], system: Sequence[set]) -> tuple:
    """CEAF-e with the alignment found by permutation enumeration."""
    weights = np.array([[2.0 * len(g & s) / (len(g) + len(s)) for s in system]
                        for g in gold])
    total = max_assignment_by_permutation(weights)
    recall = total / len(gold) if gold else 0.0
    precision = total / len(system) if system else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return recall, precision, f1


def random_partition(rng, items: Sequence, max_clusters: int) -> list[set]:
    """Uniform-ish random partition with no empty clusters."""
    k = 1 + rng.next_below(max_clusters)
    assignment = [rng.next_below(k) for _ in items]
    clusters: dict[int, set] = {}
    for item, c in zip(items, assignment):
        clusters.setdefault(c, set()).add(item)
    return [clusters[c] for c in sorted(clusters)]


def random_graph(rng, n_nodes: int, edge_prob: float) -> tuple[list, set]:
    """Random simple graph as (nodes, undirected edge set)."""
    nodes = [f"n{i}" for i in range(n_nodes)]
    edges: set[frozenset] = set()
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            if rng.next_float() < edge_prob:
                edges.add(frozenset((nodes[i], nodes[j])))
    return nodes, edges
