"""CLI pipeline orchestration and the HTTP exploration API.

The CLI runs each pipeline stage (extract, match, w2v-train, topics,
graph, search) against files; `serve` builds an immutable snapshot of
every derived structure and exposes it read-only over HTTP/JSON. Reload
swaps in a freshly built snapshot atomically.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from dataclasses import dataclass, replace

import click
import numpy as np

from corpusforge import extract as ex
from corpusforge import graphs as gr
from corpusforge import match as mt
from corpusforge import topics as tp
from corpusforge import vecsearch as vs
from corpusforge.corpus import (
    CorpusError,
    PaperRecord,
    load_blocks,
    load_corpus,
    load_embeddings,
    save_corpus,
)

ENV_PREFIX = "CORPUSFORGE_"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    corpus_path: str = ""
    embeddings_path: str = ""
    vectors_path: str = ""
    topic_model_path: str = ""
    frontend_dir: str = ""
    embedder_url: str = ""
    search_k: int = 10
    match_threshold: int = mt.DEFAULT_THRESHOLD
    min_cluster_size: int = 10
    min_samples: int = 10
    reduction_method: str = "pca"
    n_neighbors: int = 15
    seed: int = 1

    def __post_init__(self):
        if self.search_k < 1:
            raise ValueError("search_k must be >= 1")


def load_config(path: str | None = None, **overrides) -> ServiceConfig:
    """key=value file, then CORPUSFORGE_* env vars, then explicit overrides."""
    values: dict = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, val = line.partition("=")
                values[key.strip()] = val.strip()
    for field_name, field_def in ServiceConfig.__dataclass_fields__.items():
        env = os.environ.get(ENV_PREFIX + field_name.upper())
        if env is not None:
            values[field_name] = env
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = ServiceConfig()
    coerced = {}
    for key, val in values.items():
        if key not in ServiceConfig.__dataclass_fields__:
            raise ValueError(f"unknown config key {key!r}")
        current = getattr(cfg, key)
        coerced[key] = type(current)(val) if not isinstance(val, type(current)) else val
    return replace(cfg, **coerced)


# ---------------------------------------------------------------- snapshot

@dataclass
class Snapshot:
    papers: list[PaperRecord]
    by_id: dict
    embeddings: object  # normalized EmbeddingSet
    word_vectors: vs.WordVectors
    topic_model: tp.TopicModel
    citation_graph: gr.Graph
    doc_graph: gr.Graph
    word_graph: gr.Graph
    config: ServiceConfig


def _ensure_tokens(papers: list[PaperRecord]) -> list[PaperRecord]:
    cfg = ex.TokenizerConfig()
    out = []
    for p in papers:
        if p.tokens:
            out.append(p)
        else:
            out.append(replace(p, tokens=tuple(ex.tokenize(p.abstract, cfg))))
    return out


def build_snapshot(config: ServiceConfig) -> Snapshot:
    papers = _ensure_tokens(load_corpus(config.corpus_path))
    token_corpus = [list(p.tokens) for p in papers]
    if config.vectors_path:
        vectors = vs.WordVectors.load(config.vectors_path)
    else:
        wcfg = vs.W2VConfig(dim=32, min_count=1, epochs=3, seed=config.seed)
        vectors = vs.train_word2vec(token_corpus, wcfg)
    if config.embeddings_path:
        emb = vs.normalize_rows(load_embeddings(config.embeddings_path))
        if set(emb.ids) != {p.id for p in papers}:
            raise CorpusError("embedding ids do not match corpus ids")
    else:
        emb = vs.mean_document_vectors(papers, vectors)
    if config.topic_model_path:
        model = tp.load_topic_model(config.topic_model_path)
    else:
        rcfg = tp.ReductionConfig(
            method=config.reduction_method,
            n_neighbors=config.n_neighbors,
            seed=config.seed,
        )
        ccfg = tp.ClusterParams(
            min_cluster_size=config.min_cluster_size, min_samples=config.min_samples
        )
        model = tp.fit_topics(emb, papers, rcfg, ccfg)
    matches = mt.match_references(papers, config.match_threshold)
    citation = gr.build_citation_graph(matches, [p.id for p in papers])
    bip = gr.build_bipartite(papers)
    return Snapshot(
        papers=papers,
        by_id={p.id: p for p in papers},
        embeddings=emb,
        word_vectors=vectors,
        topic_model=model,
        citation_graph=citation,
        doc_graph=gr.project_documents_graph(bip),
        word_graph=gr.project_words_graph(bip),
        config=config,
    )


def embed_query(snapshot: Snapshot, text: str) -> np.ndarray:
    if snapshot.config.embedder_url:
        import httpx

        resp = httpx.post(snapshot.config.embedder_url, json={"text": text}, timeout=30)
        resp.raise_for_status()
        vec = np.asarray(resp.json()["vector"], dtype=np.float32)
        norm = float(np.linalg.norm(vec))
        return vec / norm if norm > 0 else vec
    tokens = ex.tokenize(text, ex.TokenizerConfig())
    return vs.embed_query_w2v(text, tokens, snapshot.word_vectors)


# ----------------------------------------------------------------- the API

def create_app(snapshot: Snapshot | None = None, config: ServiceConfig | None = None):
    from fastapi import FastAPI, HTTPException, Query

    app = FastAPI(title="corpusforge", version="0.1.0")
    app.state.snapshot = snapshot
    app.state.config = config or (snapshot.config if snapshot else ServiceConfig())

    def snap() -> Snapshot:
        s = app.state.snapshot
        if s is None:
            raise HTTPException(status_code=503, detail="snapshot not ready")
        return s

    def paginate(items, offset: int, limit: int):
        return items[offset: offset + limit]

    def result_entry(s: Snapshot, paper_id: str, score: float) -> dict:
        p = s.by_id[paper_id]
        return {
            "id": p.id,
            "title": p.title,
            "year": p.year,
            "venue": p.venue,
            "score": score,
        }

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/search")
    def search(
        q: str,
        mode: str = "semantic",
        k: int | None = None,
        offset: int = 0,
        limit: int = 50,
    ):
        s = snap()
        k = k if k is not None else s.config.search_k
        if k < 1:
            raise HTTPException(status_code=400, detail="k must be >= 1")
        if mode == "semantic":
            query = embed_query(s, q)
            hits = vs.semantic_topk(query, s.embeddings, k)
        elif mode == "keyword":
            keywords = ex.tokenize(q, ex.TokenizerConfig(stopwords=frozenset()))
            if not keywords:
                raise HTTPException(status_code=400, detail="empty keyword query")
            try:
                hits = vs.keyword_search(keywords, s.papers, s.word_vectors, k)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        else:
            raise HTTPException(status_code=400, detail=f"unknown mode {mode!r}")
        results = [result_entry(s, h.paper_id, h.score) for h in hits]
        return {"query": q, "mode": mode, "results": paginate(results, offset, limit)}

    @app.get("/api/papers/{paper_id}")
    def paper_detail(paper_id: str):
        s = snap()
        if paper_id not in s.by_id:
            raise HTTPException(status_code=404, detail=f"unknown paper {paper_id!r}")
        p = s.by_id[paper_id]
        row = s.embeddings.row_for(paper_id)
        similar = [
            result_entry(s, h.paper_id, h.score)
            for h in vs.semantic_topk(row, s.embeddings, 11)
            if h.paper_id != paper_id
        ][:10]
        g = s.citation_graph
        undirected = g.undirected_view()
        adjacent = undirected.succ[paper_id]
        suggestions = []
        for v in sorted(undirected.nodes):
            if v == paper_id or v in adjacent:
                continue
            shared = len(undirected.succ[paper_id] & undirected.succ[v])
            if shared >= 1:
                suggestions.append({"id": v, "score": shared})
        suggestions.sort(key=lambda d: (-d["score"], d["id"]))
        label = int(s.topic_model.labels[s.papers.index(p)])
        return {
            "paper": p.to_json(),
            "topic_id": label,
            "similar": similar,
            "cites": sorted(g.succ[paper_id]),
            "cited_by": sorted(g.pred[paper_id]),
            "suggested": suggestions[:10],
        }

    @app.get("/api/topics")
    def topics_list(offset: int = 0, limit: int = 50):
        s = snap()
        m = s.topic_model
        items = [
            {
                "topic_id": t,
                "size": m.topic_sizes[t],
                "keywords": [tok for tok, _w in m.keywords.get(t, [])][:10],
            }
            for t in sorted(m.topic_sizes)
        ]
        return paginate(items, offset, limit)

    @app.get("/api/topics/{topic_id}/trend")
    def topic_trend(topic_id: int):
        s = snap()
        if topic_id not in s.topic_model.topic_sizes:
            raise HTTPException(status_code=404, detail=f"unknown topic {topic_id}")
        table = tp.topic_trends(s.topic_model, s.papers)
        col = table.topics.index(topic_id)
        return {
            "topic_id": topic_id,
            "years": list(table.years),
            "shares": [float(row[col]) for row in table.shares],
        }

    @app.get("/api/trends")
    def trends(omit_year: list[int] = Query(default=[]),
               hide_topic: list[int] = Query(default=[])):
        s = snap()
        try:
            table = tp.topic_trends(s.topic_model, s.papers, omit_year, hide_topic)
        except tp.TopicsError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return table.to_json()

    @app.get("/api/map")
    def topic_map(dim: int = 2, offset: int = 0, limit: int = 50):
        s = snap()
        if dim != 2:
            raise HTTPException(status_code=400, detail="only dim=2 is supported")
        m = s.topic_model
        items = [
            {
                "id": p.id,
                "x": float(m.coords2d[i][0]),
                "y": float(m.coords2d[i][1]),
                "topic_id": int(m.labels[i]),
            }
            for i, p in enumerate(s.papers)
        ]
        return paginate(items, offset, limit)

    @app.get("/api/volume")
    def volume(bins: int = 64):
        s = snap()
        if bins < 2:
            raise HTTPException(status_code=400, detail="bins must be >= 2")
        hist = tp.volume_histogram(
            s.embeddings, s.papers, bins,
            tp.ReductionConfig(method=s.config.reduction_method, seed=s.config.seed),
        )
        return {"bins": bins, "years": {str(y): h for y, h in sorted(hist.items())}}

    @app.get("/api/graph/centrality")
    def graph_centrality(
        graph: str = "citation",
        metric: str = "degree",
        top: int = 10,
        offset: int = 0,
        limit: int = 50,
    ):
        s = snap()
        g = {
            "citation": s.citation_graph,
            "docs": s.doc_graph,
            "words": s.word_graph,
        }.get(graph)
        if g is None:
            raise HTTPException(status_code=400, detail=f"unknown graph {graph!r}")
        if top < 1:
            raise HTTPException(status_code=400, detail="top must be >= 1")
        try:
            if metric == "closeness":
                scores = gr.closeness(g)
            elif metric == "betweenness":
                scores = gr.betweenness(g)
            elif metric == "eigenvector":
                scores = gr.eigenvector(g)
            elif metric == "degree":
                scores = gr.degree_centrality(g)
            else:
                raise HTTPException(status_code=400, detail=f"unknown metric {metric!r}")
        except gr.GraphError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
        items = [{"node": node, "score": score} for node, score in ranked]
        return paginate(items, offset, limit)

    @app.get("/api/graph/predictions")
    def graph_predictions(top: int = 10, offset: int = 0, limit: int = 50):
        s = snap()
        if top < 1:
            raise HTTPException(status_code=400, detail="top must be >= 1")
        pairs = gr.common_neighbors_prediction(s.citation_graph, top)
        items = [{"u": u, "v": v, "score": sc} for u, v, sc in pairs]
        return paginate(items, offset, limit)

    @app.post("/api/admin/reload")
    def reload_snapshot():
        new = build_snapshot(app.state.config)
        app.state.snapshot = new  # atomic swap; in-flight reads keep the old one
        return {"status": "reloaded", "papers": len(new.papers)}

    frontend = app.state.config.frontend_dir
    if frontend and os.path.isdir(frontend):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend, html=True), name="ui")

    return app


# ------------------------------------------------------------------- CLI

@click.group()
def cli():
    """Conference-proceedings analytics pipeline."""


def _parse_venue_year(paper_id: str) -> tuple[str, int]:
    parts = paper_id.split("-")
    if len(parts) >= 2 and parts[1].isdigit():
        year = int(parts[1])
        if 1990 <= year <= 2100:
            return parts[0], year
    return "unknown", 2000


@cli.command("extract")
@click.option("--blocks", "blocks_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--english-words", "dict_path", type=click.Path(exists=True))
@click.option("--min-english-ratio", default=0.5, show_default=True)
def extract_cmd(blocks_path, out_path, dict_path, min_english_ratio):
    """Parse text blocks into a corpus JSONL file."""
    dictionary = (
        ex.EnglishDictionary.load(dict_path) if dict_path else ex.EnglishDictionary.bundled()
    )
    tok_cfg = ex.TokenizerConfig()
    blocks_by_id = load_blocks(blocks_path)
    papers = []
    skipped = 0
    for paper_id, blocks in blocks_by_id.items():
        full_text = ex.join_blocks(blocks)
        title = ex.extract_title(blocks) or ""
        abstract = ex.extract_abstract(full_text)
        if abstract is None or ex.english_ratio(abstract, dictionary) < min_english_ratio:
            skipped += 1
            continue
        venue, year = _parse_venue_year(paper_id)
        papers.append(
            PaperRecord(
                id=paper_id,
                venue=venue,
                year=year,
                title=title,
                abstract=abstract,
                references=tuple(ex.extract_references(full_text)),
                tokens=tuple(ex.tokenize(abstract, tok_cfg)),
            )
        )
    save_corpus(papers, out_path)
    click.echo(f"wrote {len(papers)} papers to {out_path} ({skipped} skipped)")


@cli.command("match")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--threshold", default=mt.DEFAULT_THRESHOLD, show_default=True)
def match_cmd(corpus_path, out_path, threshold):
    """Fuzzy-match reference titles into citation edges (CSV)."""
    papers = load_corpus(corpus_path)
    matches = mt.match_references(papers, threshold)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["citing", "cited", "score", "ambiguous"])
        for m in matches:
            writer.writerow([m.citing_id, m.cited_id, m.score, int(m.ambiguous)])
    click.echo(f"wrote {len(matches)} citation edges to {out_path}")


@cli.command("w2v-train")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--dim", default=100, show_default=True)
@click.option("--window", default=5, show_default=True)
@click.option("--negatives", default=5, show_default=True)
@click.option("--min-count", default=5, show_default=True)
@click.option("--epochs", default=5, show_default=True)
@click.option("--seed", default=1, show_default=True)
def w2v_train_cmd(corpus_path, out_path, dim, window, negatives, min_count, epochs, seed):
    """Train word vectors on tokenized abstracts."""
    papers = _ensure_tokens(load_corpus(corpus_path))
    cfg = vs.W2VConfig(
        dim=dim, window=window, negatives=negatives,
        min_count=min_count, epochs=epochs, seed=seed,
    )
    vectors = vs.train_word2vec([list(p.tokens) for p in papers], cfg)
    vectors.save(out_path)
    click.echo(f"trained {len(vectors.vocab)} word vectors -> {out_path}")


def _load_doc_embeddings(corpus_path, embeddings_path, vectors_path, seed):
    papers = _ensure_tokens(load_corpus(corpus_path))
    if embeddings_path:
        emb = vs.normalize_rows(load_embeddings(embeddings_path))
    else:
        if vectors_path:
            vectors = vs.WordVectors.load(vectors_path)
        else:
            vectors = vs.train_word2vec(
                [list(p.tokens) for p in papers],
                vs.W2VConfig(dim=32, min_count=1, epochs=3, seed=seed),
            )
        emb = vs.mean_document_vectors(papers, vectors)
    return papers, emb


@cli.group("topics")
def topics_group():
    """Topic modeling commands."""


@topics_group.command("fit")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True))
@click.option("--vectors", "vectors_path", type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--method", default="pca", show_default=True)
@click.option("--min-cluster-size", default=10, show_default=True)
@click.option("--min-samples", default=10, show_default=True)
@click.option("--n-neighbors", default=15, show_default=True)
@click.option("--seed", default=1, show_default=True)
def topics_fit_cmd(corpus_path, embeddings_path, vectors_path, out_path, method,
                   min_cluster_size, min_samples, n_neighbors, seed):
    papers, emb = _load_doc_embeddings(corpus_path, embeddings_path, vectors_path, seed)
    model = tp.fit_topics(
        emb, papers,
        tp.ReductionConfig(method=method, n_neighbors=n_neighbors, seed=seed),
        tp.ClusterParams(min_cluster_size=min_cluster_size, min_samples=min_samples),
    )
    tp.save_topic_model(model, out_path)
    click.echo(f"fitted {model.n_topics} topics over {len(papers)} papers -> {out_path}")


@topics_group.command("trends")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--omit-year", multiple=True, type=int)
@click.option("--hide-topic", multiple=True, type=int)
def topics_trends_cmd(corpus_path, model_path, omit_year, hide_topic):
    papers = load_corpus(corpus_path)
    model = tp.load_topic_model(model_path)
    table = tp.topic_trends(model, papers, list(omit_year), list(hide_topic))
    click.echo(json.dumps(table.to_json()))


@topics_group.command("volume")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True))
@click.option("--vectors", "vectors_path", type=click.Path(exists=True))
@click.option("--bins", default=64, show_default=True)
@click.option("--method", default="pca", show_default=True)
@click.option("--seed", default=1, show_default=True)
def topics_volume_cmd(corpus_path, embeddings_path, vectors_path, bins, method, seed):
    papers, emb = _load_doc_embeddings(corpus_path, embeddings_path, vectors_path, seed)
    hist = tp.volume_histogram(
        emb, papers, bins, tp.ReductionConfig(method=method, seed=seed)
    )
    click.echo(json.dumps({str(y): h for y, h in sorted(hist.items())}))


def _build_graph(which, corpus_path, threshold):
    papers = _ensure_tokens(load_corpus(corpus_path))
    if which == "citation":
        matches = mt.match_references(papers, threshold)
        return gr.build_citation_graph(matches, [p.id for p in papers])
    bip = gr.build_bipartite(papers)
    if which == "docs":
        return gr.project_documents_graph(bip)
    if which == "words":
        return gr.project_words_graph(bip)
    raise ValueError(f"unknown graph {which!r}")


@cli.group("graph")
def graph_group():
    """Citation and bipartite graph analytics."""


@graph_group.command("centrality")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--graph", "which", default="citation", show_default=True)
@click.option("--metric", default="degree", show_default=True)
@click.option("--direction", default="in", show_default=True,
              type=click.Choice(["in", "out", "undirected"]))
@click.option("--top", default=10, show_default=True)
@click.option("--threshold", default=mt.DEFAULT_THRESHOLD, show_default=True)
def graph_centrality_cmd(corpus_path, which, metric, direction, top, threshold):
    g = _build_graph(which, corpus_path, threshold)
    if metric == "closeness":
        scores = gr.closeness(g, direction)
    elif metric == "betweenness":
        scores = gr.betweenness(g)
    elif metric == "eigenvector":
        scores = gr.eigenvector(g)
    elif metric == "degree":
        scores = gr.degree_centrality(g)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    click.echo(json.dumps([{"node": n, "score": s} for n, s in ranked]))


@graph_group.command("predict")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--top", default=10, show_default=True)
@click.option("--threshold", default=mt.DEFAULT_THRESHOLD, show_default=True)
def graph_predict_cmd(corpus_path, top, threshold):
    g = _build_graph("citation", corpus_path, threshold)
    pairs = gr.common_neighbors_prediction(g, top)
    click.echo(json.dumps([{"u": u, "v": v, "score": s} for u, v, s in pairs]))


@graph_group.command("project")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--which", default="docs", show_default=True,
              type=click.Choice(["docs", "words"]))
@click.option("--out", "out_path", required=True, type=click.Path())
def graph_project_cmd(corpus_path, which, out_path):
    g = _build_graph(which, corpus_path, mt.DEFAULT_THRESHOLD)
    gr.export_edge_csv(g, out_path)
    click.echo(f"wrote {len(g.edge_list())} edges to {out_path}")


@cli.group("search")
def search_group():
    """One-shot search against a corpus."""


@search_group.command("semantic")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True))
@click.option("--vectors", "vectors_path", type=click.Path(exists=True))
@click.option("--q", "query", required=True)
@click.option("--k", default=10, show_default=True)
@click.option("--seed", default=1, show_default=True)
def search_semantic_cmd(corpus_path, embeddings_path, vectors_path, query, k, seed):
    papers, emb = _load_doc_embeddings(corpus_path, embeddings_path, vectors_path, seed)
    if vectors_path:
        vectors = vs.WordVectors.load(vectors_path)
    else:
        vectors = vs.train_word2vec(
            [list(p.tokens) for p in papers],
            vs.W2VConfig(dim=32, min_count=1, epochs=3, seed=seed),
        )
    tokens = ex.tokenize(query, ex.TokenizerConfig())
    qvec = vs.embed_query_w2v(query, tokens, vectors)
    if qvec.shape[0] != emb.dim:
        emb = vs.mean_document_vectors(papers, vectors)
    hits = vs.semantic_topk(qvec, emb, k)
    by_id = {p.id: p for p in papers}
    click.echo(json.dumps([
        {"id": h.paper_id, "title": by_id[h.paper_id].title,
         "year": by_id[h.paper_id].year, "venue": by_id[h.paper_id].venue,
         "score": h.score}
        for h in hits
    ]))


@search_group.command("keyword")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--vectors", "vectors_path", type=click.Path(exists=True))
@click.option("--q", "query", required=True)
@click.option("--k", default=10, show_default=True)
@click.option("--seed", default=1, show_default=True)
def search_keyword_cmd(corpus_path, vectors_path, query, k, seed):
    papers = _ensure_tokens(load_corpus(corpus_path))
    if vectors_path:
        vectors = vs.WordVectors.load(vectors_path)
    else:
        vectors = vs.train_word2vec(
            [list(p.tokens) for p in papers],
            vs.W2VConfig(dim=32, min_count=1, epochs=3, seed=seed),
        )
    keywords = ex.tokenize(query, ex.TokenizerConfig(stopwords=frozenset()))
    hits = vs.keyword_search(keywords, papers, vectors, k)
    by_id = {p.id: p for p in papers}
    click.echo(json.dumps([
        {"id": h.paper_id, "title": by_id[h.paper_id].title,
         "year": by_id[h.paper_id].year, "venue": by_id[h.paper_id].venue,
         "score": h.score}
        for h in hits
    ]))


@cli.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", type=click.Path(exists=True))
@click.option("--vectors", "vectors_path", type=click.Path(exists=True))
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--frontend", "frontend_dir", default=None, type=click.Path())
def serve_cmd(config_path, corpus_path, embeddings_path, vectors_path, host, port,
              frontend_dir):
    """Build a snapshot and serve the HTTP API."""
    import uvicorn

    cfg = load_config(
        config_path,
        corpus_path=corpus_path,
        embeddings_path=embeddings_path,
        vectors_path=vectors_path,
        host=host,
        port=port,
        frontend_dir=frontend_dir,
    )
    if not cfg.corpus_path:
        raise ValueError("corpus_path is required (flag, config file, or env)")
    snapshot = build_snapshot(cfg)
    app = create_app(snapshot, cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:  # --help
        return 0 if exc.exit_code == 0 else exc.exit_code
    except click.UsageError as exc:
        click.echo(exc.format_message(), err=True)
        return 1
    except (CorpusError, gr.GraphError, tp.TopicsError, ValueError,
            FileNotFoundError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        click.echo(f"internal error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
