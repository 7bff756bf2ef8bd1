"""Citation and document-word graphs with centrality analytics.

Directed citation edges go citing -> cited. The bipartite document-word
graph projects to a document graph (edge weight = shared words) and a
word graph (edge weight = co-occurrence document count). Centralities are
computed on the unweighted structure; the citation graph uses incoming
distances for closeness and the undirected view for eigenvector scores.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from corpusforge.corpus import PaperRecord
from corpusforge.match import MatchResult


class GraphError(Exception):
    pass


@dataclass
class Graph:
    """Small adjacency-set graph over hashable node ids."""

    directed: bool = False
    nodes: list = field(default_factory=list)
    succ: dict = field(default_factory=dict)  # node -> set of successors
    pred: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)  # (u, v) -> weight

    def add_node(self, u) -> None:
        if u not in self.succ:
            self.nodes.append(u)
            self.succ[u] = set()
            self.pred[u] = set()

    def add_edge(self, u, v, weight: float = 1.0) -> None:
        if u == v:
            raise GraphError(f"self-loop on {u!r}")
        self.add_node(u)
        self.add_node(v)
        self.succ[u].add(v)
        self.pred[v].add(u)
        self.weights[(u, v)] = weight
        if not self.directed:
            self.succ[v].add(u)
            self.pred[u].add(v)
            self.weights[(v, u)] = weight

    def neighbors_undirected(self, u) -> set:
        return self.succ[u] | self.pred[u]

    @property
    def n(self) -> int:
        return len(self.nodes)

    def edge_list(self) -> list[tuple]:
        """Unique edges: directed as-is, undirected once per pair."""
        out = []
        for (u, v), w in self.weights.items():
            if self.directed or (u, v) <= (v, u):
                out.append((u, v, w))
        return sorted(out)

    def undirected_view(self) -> "Graph":
        if not self.directed:
            return self
        g = Graph(directed=False)
        for u in self.nodes:
            g.add_node(u)
        for (u, v), w in self.weights.items():
            if v not in g.succ[u]:
                g.add_edge(u, v, w)
        return g


def build_citation_graph(matches: list[MatchResult], paper_ids: list[str]) -> Graph:
    """Directed citing->cited graph; isolated papers stay as nodes."""
    known = set(paper_ids)
    g = Graph(directed=True)
    for pid in paper_ids:
        g.add_node(pid)
    for m in matches:
        if m.citing_id not in known or m.cited_id not in known:
            raise GraphError(
                f"match references unknown paper id "
                f"{m.citing_id if m.citing_id not in known else m.cited_id!r}"
            )
        if m.cited_id not in g.succ[m.citing_id]:
            g.add_edge(m.citing_id, m.cited_id, float(m.score))
    return g


def build_bipartite(papers: list[PaperRecord]):
    """Document-word bipartite graph as (doc ids, word list, edge set)."""
    doc_nodes = [p.id for p in papers]
    words: set[str] = set()
    edges: set[tuple[str, str]] = set()
    for p in papers:
        for tok in set(p.tokens):
            words.add(tok)
            edges.add((p.id, tok))
    return BipartiteGraph(doc_nodes, sorted(words), edges)


@dataclass(frozen=True)
class BipartiteGraph:
    doc_nodes: list[str]
    word_nodes: list[str]
    edges: set  # (doc_id, word)

    def words_of(self, doc: str) -> set:
        return {w for d, w in self.edges if d == doc}

    def docs_of(self, word: str) -> set:
        return {d for d, w in self.edges if w == word}


def _project(items: list, neighbor_sets: dict) -> Graph:
    g = Graph(directed=False)
    for it in items:
        g.add_node(it)
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            shared = len(neighbor_sets[a] & neighbor_sets[b])
            if shared >= 1:
                g.add_edge(a, b, float(shared))
    return g


def project_documents_graph(b: BipartiteGraph) -> Graph:
    neigh = {d: set() for d in b.doc_nodes}
    for d, w in b.edges:
        neigh[d].add(w)
    return _project(list(b.doc_nodes), neigh)


def project_words_graph(b: BipartiteGraph) -> Graph:
    neigh = {w: set() for w in b.word_nodes}
    for d, w in b.edges:
        neigh[w].add(d)
    return _project(list(b.word_nodes), neigh)


def _bfs_distances(g: Graph, source, reverse: bool) -> dict:
    adj = g.pred if (reverse and g.directed) else g.succ
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def closeness(g: Graph, direction: str = "in") -> dict:
    """Wasserman-Faust closeness; `direction` governs citation-graph use.

    "in": distances along incoming edges (who reaches this node),
    "out": along outgoing edges, "undirected": ignore direction.
    """
    if direction not in ("in", "out", "undirected"):
        raise ValueError(f"unknown direction {direction!r}")
    work = g.undirected_view() if (direction == "undirected" and g.directed) else g
    n = work.n
    out = {}
    for u in work.nodes:
        dist = _bfs_distances(work, u, reverse=(direction == "in"))
        r = len(dist)  # nodes reaching u, incl. u
        total = sum(dist.values())
        if r <= 1 or total == 0 or n <= 1:
            out[u] = 0.0
        else:
            out[u] = ((r - 1) / (n - 1)) * ((r - 1) / total)
    return out


def betweenness(g: Graph) -> dict:
    """Brandes betweenness, endpoints excluded, normalized."""
    n = g.n
    bc = {v: 0.0 for v in g.nodes}
    for s in g.nodes:
        stack = []
        preds: dict = {v: [] for v in g.nodes}
        sigma = {v: 0.0 for v in g.nodes}
        sigma[s] = 1.0
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            stack.append(u)
            for v in g.succ[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = {v: 0.0 for v in g.nodes}
        while stack:
            w = stack.pop()
            for u in preds[w]:
                delta[u] += (sigma[u] / sigma[w]) * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    # undirected traversal counts each unordered pair twice; that factor 2
    # cancels against the (n-1)(n-2)/2 undirected normalizer
    scale = 1.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0
    for v in bc:
        bc[v] *= scale
    return bc


def eigenvector(g: Graph, tol: float = 1e-8, max_iter: int = 1000) -> dict:
    """Power iteration on the undirected adjacency (shifted by +I)."""
    if g.n == 0:
        raise GraphError("empty graph")
    work = g.undirected_view()
    nodes = work.nodes
    index = {u: i for i, u in enumerate(nodes)}
    n = len(nodes)
    a = np.zeros((n, n))
    for (u, v) in work.weights:
        a[index[u], index[v]] = 1.0
    x = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(max_iter):
        nxt = a @ x + x  # +I shift avoids bipartite oscillation
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            break
        nxt /= norm
        if np.max(np.abs(nxt - x)) < tol:
            return {u: float(nxt[index[u]]) for u in nodes}
        x = nxt
    raise GraphError(f"eigenvector centrality did not converge in {max_iter} iterations")


def degree_centrality(g: Graph) -> dict:
    if g.n < 2:
        raise GraphError("degree centrality needs at least 2 nodes")
    work = g.undirected_view()
    return {u: len(work.succ[u]) / (work.n - 1) for u in work.nodes}


def common_neighbors_prediction(g: Graph, top_k: int) -> list[tuple]:
    """Top non-adjacent pairs ranked by shared-neighbor count."""
    work = g.undirected_view()
    nodes = sorted(work.nodes)
    scored = []
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if v in work.succ[u]:
                continue
            score = len(work.succ[u] & work.succ[v])
            if score >= 1:
                scored.append((u, v, score))
    scored.sort(key=lambda t: (-t[2], t[0], t[1]))
    return scored[:top_k]


def export_edge_csv(g: Graph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src", "dst", "weight"])
        for u, v, w in g.edge_list():
            writer.writerow([u, v, w])


def export_metrics_json(g: Graph, path, direction: str = "in") -> None:
    report = {
        "nodes": len(g.nodes),
        "edges": len(g.edge_list()),
        "closeness": closeness(g, direction),
        "betweenness": betweenness(g),
        "degree": degree_centrality(g) if g.n >= 2 else {},
        "eigenvector": eigenvector(g) if g.n >= 1 else {},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
