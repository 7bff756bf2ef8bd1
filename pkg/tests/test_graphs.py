import itertools
import math

import numpy as np
import pytest

from corpusforge.graphs import (
    Graph,
    GraphError,
    betweenness,
    build_bipartite,
    build_citation_graph,
    closeness,
    common_neighbors_prediction,
    degree_centrality,
    eigenvector,
    export_edge_csv,
    project_documents_graph,
    project_words_graph,
)
from corpusforge.match import MatchResult
from tests.test_corpus import make_paper


def undirected(*edges, nodes=()):
    g = Graph(directed=False)
    for n in nodes:
        g.add_node(n)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def directed(*edges, nodes=()):
    g = Graph(directed=True)
    for n in nodes:
        g.add_node(n)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def random_graph(rng, n, is_directed, p=0.35):
    nodes = [f"n{i}" for i in range(n)]
    g = Graph(directed=is_directed)
    for node in nodes:
        g.add_node(node)
    for i in range(n):
        for j in range(n):
            if i != j and (is_directed or i < j) and rng.random() < p:
                g.add_edge(nodes[i], nodes[j])
    return g


# ------------------------------------------------------------ brute oracles

def _all_shortest_paths(g, s, t):
    """All shortest s->t paths by exhaustive BFS-layered enumeration."""
    if s == t:
        return []
    best, paths = None, []
    frontier = [[s]]
    while frontier and best is None:
        nxt = []
        for path in frontier:
            for v in g.succ[path[-1]]:
                if v in path:
                    continue
                if v == t:
                    paths.append(path + [v])
                else:
                    nxt.append(path + [v])
        if paths:
            best = True
        frontier = nxt
    return paths


def oracle_betweenness(g):
    n = g.n
    raw = {v: 0.0 for v in g.nodes}
    for s in g.nodes:
        for t in g.nodes:
            if s == t:
                continue
            paths = _all_shortest_paths(g, s, t)
            if not paths:
                continue
            for v in g.nodes:
                if v in (s, t):
                    continue
                through = sum(1 for p in paths if v in p)
                raw[v] += through / len(paths)
    scale = 1.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0
    return {v: raw[v] * scale for v in g.nodes}


def oracle_closeness(g, direction="in"):
    work = g.undirected_view() if (direction == "undirected" and g.directed) else g
    n = work.n
    out = {}
    for u in work.nodes:
        dists = []
        for v in work.nodes:
            if v == u:
                continue
            if direction == "in":
                paths = _all_shortest_paths(work, v, u)
            else:
                paths = _all_shortest_paths(work, u, v)
            if paths:
                dists.append(len(paths[0]) - 1)
        r = len(dists) + 1
        if r <= 1 or n <= 1 or sum(dists) == 0:
            out[u] = 0.0
        else:
            out[u] = ((r - 1) / (n - 1)) * ((r - 1) / sum(dists))
    return out


def oracle_eigenvector(g):
    work = g.undirected_view()
    nodes = work.nodes
    idx = {u: i for i, u in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)))
    for (u, v) in work.weights:
        a[idx[u], idx[v]] = 1.0
    vals, vecs = np.linalg.eigh(a)
    # Perron vector of a connected graph is single-signed
    vec = np.abs(vecs[:, int(np.argmax(vals))])
    vec = vec / np.linalg.norm(vec)
    return {u: float(vec[idx[u]]) for u in nodes}


def random_connected_graph(rng, n):
    nodes = [f"n{i}" for i in range(n)]
    g = Graph(directed=False)
    for node in nodes:
        g.add_node(node)
    order = list(rng.permutation(n))
    for a, b in zip(order, order[1:]):  # random spanning tree first
        g.add_edge(nodes[a], nodes[b])
    for i in range(n):
        for j in range(i + 1, n):
            if nodes[j] not in g.succ[nodes[i]] and rng.random() < 0.3:
                g.add_edge(nodes[i], nodes[j])
    return g


# ------------------------------------------------------------------- tests

class TestBuildCitationGraph:
    def test_empty_matches_keeps_nodes(self):
        g = build_citation_graph([], ["a", "b", "c"])
        assert g.n == 3 and g.edge_list() == []

    def test_duplicate_edge_deduped(self):
        matches = [MatchResult("a", "b", 100), MatchResult("a", "b", 96)]
        g = build_citation_graph(matches, ["a", "b"])
        assert len(g.edge_list()) == 1

    def test_mutual_citation_cycle_kept(self):
        matches = [MatchResult("a", "b", 100), MatchResult("b", "a", 100)]
        g = build_citation_graph(matches, ["a", "b"])
        assert len(g.edge_list()) == 2

    def test_unknown_id_rejected(self):
        with pytest.raises(GraphError):
            build_citation_graph([MatchResult("a", "zz", 100)], ["a", "b"])


class TestCloseness:
    def test_path_closed_form(self):
        g = undirected(("a", "b"), ("b", "c"))
        c = closeness(g)
        assert c["b"] == pytest.approx(1.0)
        assert c["a"] == pytest.approx(2 / 3)
        assert c["c"] == pytest.approx(2 / 3)

    def test_isolated_node_zero(self):
        g = undirected(("a", "b"), nodes=("z",))
        assert closeness(g)["z"] == 0.0

    def test_star_center(self):
        g = undirected(*[("hub", f"s{i}") for i in range(4)])
        assert closeness(g)["hub"] == pytest.approx(1.0)

    def test_directed_in_distances(self):
        g = directed(("a", "b"))  # a cites b; b is reached by a
        c = closeness(g, direction="in")
        assert c["b"] == pytest.approx(1.0)
        assert c["a"] == 0.0

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            closeness(undirected(("a", "b")), direction="sideways")


class TestBetweenness:
    def test_path_closed_form(self):
        g = undirected(("a", "b"), ("b", "c"))
        b = betweenness(g)
        assert b["b"] == pytest.approx(1.0)
        assert b["a"] == 0.0 and b["c"] == 0.0

    def test_complete_graph_all_zero(self):
        nodes = ["a", "b", "c", "d"]
        g = undirected(*itertools.combinations(nodes, 2))
        assert all(v == 0.0 for v in betweenness(g).values())

    def test_random_digraphs_match_oracle(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            g = random_graph(rng, int(rng.integers(3, 9)), True)
            got = betweenness(g)
            want = oracle_betweenness(g)
            for v in g.nodes:
                assert got[v] == pytest.approx(want[v], abs=1e-9)

    def test_random_undirected_match_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            g = random_graph(rng, int(rng.integers(3, 9)), False)
            got = betweenness(g)
            want = oracle_betweenness(g)
            for v in g.nodes:
                assert got[v] == pytest.approx(want[v], abs=1e-9)


class TestEigenvector:
    def test_triangle_uniform(self):
        g = undirected(("a", "b"), ("b", "c"), ("a", "c"))
        e = eigenvector(g)
        for v in e.values():
            assert v == pytest.approx(1 / math.sqrt(3), abs=1e-6)

    def test_star_closed_form(self):
        g = undirected(*[("hub", f"s{i}") for i in range(4)])
        e = eigenvector(g)
        assert e["hub"] == pytest.approx(1 / math.sqrt(2), abs=1e-6)
        for i in range(4):
            assert e[f"s{i}"] == pytest.approx(1 / (2 * math.sqrt(2)), abs=1e-6)

    def test_random_connected_match_dense_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(3, 9)))
            got = eigenvector(g)
            want = oracle_eigenvector(g)
            for v in g.nodes:
                assert got[v] == pytest.approx(want[v], abs=1e-6)

    def test_ranking_stable_under_weight_scaling(self):
        rng = np.random.default_rng(13)
        g = random_connected_graph(rng, 7)
        scaled = Graph(directed=False)
        for node in g.nodes:
            scaled.add_node(node)
        for u, v, w in g.edge_list():
            scaled.add_edge(u, v, w * 3.0)
        base = eigenvector(g)
        other = eigenvector(scaled)
        rank = sorted(g.nodes, key=lambda u: (-base[u], u))
        rank2 = sorted(g.nodes, key=lambda u: (-other[u], u))
        assert rank == rank2

    def test_empty_graph_errors(self):
        with pytest.raises(GraphError):
            eigenvector(Graph(directed=False))


class TestDegreeCentrality:
    def test_star_center(self):
        g = undirected(*[("hub", f"s{i}") for i in range(4)])
        assert degree_centrality(g)["hub"] == 1.0

    def test_isolated_node_zero(self):
        g = undirected(("a", "b"), nodes=("z",))
        assert degree_centrality(g)["z"] == 0.0

    def test_path(self):
        g = undirected(("a", "b"), ("b", "c"))
        d = degree_centrality(g)
        assert (d["a"], d["b"], d["c"]) == (0.5, 1.0, 0.5)

    def test_too_small(self):
        g = Graph(directed=False)
        g.add_node("only")
        with pytest.raises(GraphError):
            degree_centrality(g)


class TestCommonNeighbors:
    def test_path_endpoints(self):
        g = undirected(("a", "b"), ("b", "c"))
        assert common_neighbors_prediction(g, 5) == [("a", "c", 1)]

    def test_complete_graph_empty(self):
        g = undirected(*itertools.combinations("abcd", 2))
        assert common_neighbors_prediction(g, 5) == []

    def test_disjoint_components_empty(self):
        g = undirected(("a", "b"), ("c", "d"))
        assert common_neighbors_prediction(g, 5) == []

    def test_tie_order(self):
        g = undirected(("x", "a"), ("x", "b"), ("x", "c"))
        got = common_neighbors_prediction(g, 10)
        assert got == [("a", "b", 1), ("a", "c", 1), ("b", "c", 1)]


def fig_papers():
    docs = [
        ("d1-2020-a", "BPM anomalies"),
        ("d2-2020-b", "LLRF cryogenics"),
        ("d3-2020-c", "LLRF anomalies"),
        ("d4-2020-d", "cryogenics anomalies"),
    ]
    return [
        make_paper(pid=pid, year=2020, abstract=text, references=(),
                   tokens=tuple(text.lower().split()))
        for pid, text in docs
    ]


class TestBipartite:
    def test_worked_four_document_example(self):
        b = build_bipartite(fig_papers())
        assert len(b.edges) == 8
        assert set(b.word_nodes) == {"bpm", "anomalies", "llrf", "cryogenics"}

    def test_empty_abstract_isolated_doc(self):
        papers = fig_papers() + [make_paper(pid="d5-2020-e", tokens=(), references=())]
        b = build_bipartite(papers)
        assert "d5-2020-e" in b.doc_nodes
        assert not any(d == "d5-2020-e" for d, _w in b.edges)

    def test_repeated_token_single_edge(self):
        papers = [make_paper(pid="d1-2020-a", tokens=("beam", "beam"), references=())]
        b = build_bipartite(papers)
        assert len(b.edges) == 1


class TestProjections:
    def test_worked_document_projection(self):
        g = project_documents_graph(build_bipartite(fig_papers()))
        got = {(u, v) for u, v, _w in g.edge_list()}
        want = {
            ("d1-2020-a", "d3-2020-c"),  # anomalies
            ("d1-2020-a", "d4-2020-d"),
            ("d3-2020-c", "d4-2020-d"),
            ("d2-2020-b", "d3-2020-c"),  # llrf
            ("d2-2020-b", "d4-2020-d"),  # cryogenics
        }
        assert got == want

    def test_worked_word_projection(self):
        g = project_words_graph(build_bipartite(fig_papers()))
        got = {(u, v) for u, v, _w in g.edge_list()}
        want = {
            ("anomalies", "bpm"),
            ("cryogenics", "llrf"),
            ("anomalies", "llrf"),
            ("anomalies", "cryogenics"),
        }
        assert got == want

    def test_disjoint_vocab_edgeless(self):
        papers = [
            make_paper(pid="a-2020-1", tokens=("x", "y"), references=()),
            make_paper(pid="b-2020-2", tokens=("p", "q"), references=()),
        ]
        assert project_documents_graph(build_bipartite(papers)).edge_list() == []

    def test_identical_token_sets_weight_is_vocab_size(self):
        papers = [
            make_paper(pid="a-2020-1", tokens=("x", "y", "z"), references=()),
            make_paper(pid="b-2020-2", tokens=("z", "x", "y"), references=()),
        ]
        edges = project_documents_graph(build_bipartite(papers)).edge_list()
        assert edges == [("a-2020-1", "b-2020-2", 3.0)]

    def test_cooccurrence_weight_counts_docs(self):
        papers = [
            make_paper(pid=f"p-2020-{i}", tokens=("beam", "loss"), references=())
            for i in range(3)
        ]
        edges = project_words_graph(build_bipartite(papers)).edge_list()
        assert edges == [("beam", "loss", 3.0)]

    def test_random_bipartite_against_bruteforce(self):
        rng = np.random.default_rng(20)
        for _ in range(30):
            n_docs = int(rng.integers(1, 10))
            n_words = int(rng.integers(1, 10))
            words = [f"w{j}" for j in range(n_words)]
            papers = [
                make_paper(
                    pid=f"d-2020-{i}",
                    tokens=tuple(w for w in words if rng.random() < 0.4),
                    references=(),
                )
                for i in range(n_docs)
            ]
            b = build_bipartite(papers)
            gd = project_documents_graph(b)
            gw = project_words_graph(b)
            tok = {p.id: set(p.tokens) for p in papers}
            for i, p in enumerate(papers):
                for q in papers[i + 1:]:
                    shared = len(tok[p.id] & tok[q.id])
                    present = q.id in gd.succ.get(p.id, set())
                    assert present == (shared >= 1)
                    if present:
                        assert gd.weights[(p.id, q.id)] == shared
            for i, w1 in enumerate(b.word_nodes):
                for w2 in b.word_nodes[i + 1:]:
                    shared = sum(1 for p in papers if {w1, w2} <= tok[p.id])
                    present = w2 in gw.succ.get(w1, set())
                    assert present == (shared >= 1)
                    if present:
                        assert gw.weights[(w1, w2)] == shared


class TestExports:
    def test_edge_csv(self, tmp_path):
        g = undirected(("a", "b"), ("b", "c"))
        path = tmp_path / "edges.csv"
        export_edge_csv(g, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "src,dst,weight"
        assert len(lines) == 3

    def test_centralities_do_not_mutate(self):
        g = directed(("a", "b"), ("b", "c"))
        before = (set(g.nodes), dict(g.weights))
        closeness(g)
        betweenness(g)
        eigenvector(g)
        degree_centrality(g)
        common_neighbors_prediction(g, 3)
        assert (set(g.nodes), dict(g.weights)) == before

