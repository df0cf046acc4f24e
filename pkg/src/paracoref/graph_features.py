"""Support graphs, the global tweet graph, and the three graph features.

Each paraphrase entry induces a bipartite graph: tweets instantiating the
first predicate on one side, the second on the other, support pairs as
edges.  The union of all entries' edges forms one global tweet graph.
From these we read off connected-component counts/sizes and, per support
pair, whether its endpoints sit inside a clique of at least three tweets
in the global graph.

The in-clique test never enumerates cliques: an edge (u, v) lies inside a
clique of size >= 3 iff u and v share a neighbor, because any such clique
contains a third common member, and conversely a triangle is contained in
some maximal clique.  Full maximal-clique enumeration (pivoting
Bron-Kerbosch over a degeneracy ordering) is still exposed for debugging
dumps and as the oracle target in tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Sequence

from .corpus import Corpus, ParaphraseEntry

Node = Hashable


class CliqueLimitError(Exception):
    """Maximal-clique enumeration exceeded its node cap or time budget."""


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    __slots__ = ("_parent", "_size")

    def __init__(self):
        self._parent: dict[Node, Node] = {}
        self._size: dict[Node, int] = {}

    def add(self, x: Node) -> None:
        if x not in self._parent:
            self._parent[x] = x
            self._size[x] = 1

    def find(self, x: Node) -> Node:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def union(self, x: Node, y: Node) -> None:
        self.add(x)
        self.add(y)
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self._size[rx] < self._size[ry]:
            rx, ry = ry, rx
        self._parent[ry] = rx
        self._size[rx] += self._size[ry]

    def groups(self) -> list[frozenset[Node]]:
        by_root: dict[Node, set[Node]] = {}
        for x in self._parent:
            by_root.setdefault(self.find(x), set()).add(x)
        return [frozenset(g) for g in by_root.values()]


class Graph:
    """Undirected simple graph; duplicate edges collapse, no self-loops."""

    __slots__ = ("_adj",)

    def __init__(self):
        self._adj: dict[Node, set[Node]] = {}

    def add_node(self, u: Node) -> None:
        self._adj.setdefault(u, set())

    def add_edge(self, u: Node, v: Node) -> None:
        if u == v:
            raise ValueError(f"self-loop on node {u!r}")
        self._adj.setdefault(u, set()).add(v)
        self._adj.setdefault(v, set()).add(u)

    def has_edge(self, u: Node, v: Node) -> bool:
        return v in self._adj.get(u, ())

    def neighbors(self, u: Node) -> frozenset[Node]:
        return frozenset(self._adj.get(u, ()))

    @property
    def nodes(self) -> frozenset[Node]:
        return frozenset(self._adj)

    @property
    def edges(self) -> frozenset[frozenset[Node]]:
        return frozenset(frozenset((u, v))
                         for u, nbrs in self._adj.items() for v in nbrs)

    def n_nodes(self) -> int:
        return len(self._adj)

    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def degree(self, u: Node) -> int:
        return len(self._adj.get(u, ()))


@dataclass(frozen=True)
class SupportGraph:
    """Per-entry bipartite graph plus the side each tweet instantiates."""

    graph: Graph
    left_nodes: frozenset[Node]
    right_nodes: frozenset[Node]

    def __post_init__(self):
        if self.left_nodes & self.right_nodes:
            raise ValueError(
                "support graph sides overlap: "
                f"{sorted(self.left_nodes & self.right_nodes)}"
            )


def build_support_graph(entry: ParaphraseEntry) -> SupportGraph:
    """Bipartite graph of an entry's support pairs.

    Only tweets occurring in a support pair become nodes.  A tweet
    appearing on both sides would break bipartiteness and raises.
    """
    g = Graph()
    left: set[Node] = set()
    right: set[Node] = set()
    for pair in entry.support_pairs:
        g.add_edge(pair.left.id, pair.right.id)
        left.add(pair.left.id)
        right.add(pair.right.id)
    return SupportGraph(graph=g, left_nodes=frozenset(left),
                        right_nodes=frozenset(right))


def build_global_graph(corpus: Corpus | Iterable[ParaphraseEntry]) -> Graph:
    """Union of every entry's support pairs; idempotent under duplicates."""
    g = Graph()
    for entry in corpus:
        for pair in entry.support_pairs:
            g.add_edge(pair.left.id, pair.right.id)
    return g


def connected_components(graph: Graph) -> list[frozenset[Node]]:
    """Components sorted by (size desc, smallest node asc) for determinism."""
    uf = UnionFind()
    for node in graph.nodes:
        uf.add(node)
    for edge in graph.edges:
        u, v = tuple(edge)
        uf.union(u, v)
    return sorted(uf.groups(), key=lambda c: (-len(c), min(map(str, c))))


def connected_component_features(sg: SupportGraph | Graph) -> tuple[int, float]:
    """(number of components larger than 2 tweets, mean component size).

    The empty graph yields (0, 0.0).
    """
    graph = sg.graph if isinstance(sg, SupportGraph) else sg
    components = connected_components(graph)
    if not components:
        return 0, 0.0
    count_gt2 = sum(1 for c in components if len(c) > 2)
    avg_size = sum(len(c) for c in components) / len(components)
    return count_gt2, avg_size


def in_clique(graph: Graph, u: Node, v: Node) -> bool:
    """True iff u and v co-occur in some maximal clique of size >= 3.

    Equivalent to: the edge (u, v) exists and closes a triangle.
    """
    if not graph.has_edge(u, v):
        return False
    return not graph.neighbors(u).isdisjoint(graph.neighbors(v) - {u})


def clique_coverage(entry: ParaphraseEntry, global_graph: Graph) -> int:
    """Number of the entry's support pairs lying inside a clique of size
    >= 3 in the global graph.  Counts pair occurrences, so a tweet pair
    repeated across template variants contributes once per occurrence."""
    return sum(1 for p in entry.support_pairs
               if in_clique(global_graph, p.left.id, p.right.id))


def graph_feature_slots(entry: ParaphraseEntry,
                        global_graph: Graph) -> tuple[float, float, float]:
    """The three graph feature slots: components > 2, average component
    size (both on the entry's own support graph), and clique coverage in
    the global graph."""
    count_gt2, avg_size = connected_component_features(build_support_graph(entry))
    return float(count_gt2), avg_size, float(clique_coverage(entry, global_graph))


# --- maximal-clique enumeration (debug/oracle surface) ----------------------


def degeneracy_order(graph: Graph) -> list[Node]:
    """Nodes in degeneracy order (repeatedly peel a minimum-degree node,
    ties to the smallest id)."""
    remaining = {u: set(graph.neighbors(u)) for u in graph.nodes}
    order: list[Node] = []
    by_degree: dict[int, set[Node]] = {}
    for u, nbrs in remaining.items():
        by_degree.setdefault(len(nbrs), set()).add(u)
    degree_of = {u: len(nbrs) for u, nbrs in remaining.items()}
    n = len(remaining)
    for _ in range(n):
        d = min(d for d, bucket in by_degree.items() if bucket)
        u = min(by_degree[d], key=str)
        by_degree[d].discard(u)
        order.append(u)
        for w in remaining[u]:
            if w in degree_of and w != u:
                remaining[w].discard(u)
                old = degree_of[w]
                by_degree[old].discard(w)
                degree_of[w] = old - 1
                by_degree.setdefault(old - 1, set()).add(w)
        del remaining[u], degree_of[u]
    return order


def maximal_cliques(graph: Graph, *, max_nodes: int = 50_000,
                    timeout_s: float | None = None) -> list[tuple[Node, ...]]:
    """All maximal cliques (including isolated nodes and maximal edges).

    Pivoting Bron-Kerbosch over a degeneracy ordering.  Output is a sorted
    list of sorted tuples, independent of node insertion order.  Raises
    ``CliqueLimitError`` beyond ``max_nodes`` nodes or ``timeout_s``
    seconds — enumeration is exponential in the worst case.
    """
    if graph.n_nodes() > max_nodes:
        raise CliqueLimitError(
            f"{graph.n_nodes()} nodes exceeds the cap of {max_nodes}"
        )
    deadline = None if timeout_s is None else time.monotonic() + timeout_s
    adj = {u: set(graph.neighbors(u)) for u in graph.nodes}
    cliques: list[tuple[Node, ...]] = []

    def expand(r: set[Node], p: set[Node], x: set[Node]) -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise CliqueLimitError("clique enumeration timed out")
        if not p and not x:
            cliques.append(tuple(sorted(r, key=str)))
            return
        pivot = max(sorted(p | x, key=str), key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot], key=str):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.discard(v)
            x.add(v)

    order = degeneracy_order(graph)
    position = {u: i for i, u in enumerate(order)}
    for i, v in enumerate(order):
        later = {u for u in adj[v] if position[u] > i}
        earlier = {u for u in adj[v] if position[u] < i}
        expand({v}, later, earlier)
    return sorted(cliques, key=lambda c: (len(c), tuple(map(str, c))))


# --- debug dump --------------------------------------------------------------


def write_edge_list(graph: Graph, path: str | Path) -> None:
    """Dump edges as ``u<TAB>v`` lines (endpoints and lines sorted)."""
    lines = sorted(
        "\t".join(sorted((str(u), str(v))))
        for u, v in (tuple(e) for e in graph.edges)
    )
    Path(path).write_text("".join(line + "\n" for line in lines),
                          encoding="utf-8")


def read_edge_list(path: str | Path) -> Graph:
    """Inverse of :func:`write_edge_list`."""
    g = Graph()
    for line_no, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{line_no}: expected 'u<TAB>v'")
        g.add_edge(parts[0], parts[1])
    return g
