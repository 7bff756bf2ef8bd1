"""Corpus embedding: abstracts to a unit-normalized EMB1 file."""

from __future__ import annotations

from corpusforge.corpus import load_corpus, save_embeddings
from corpusforge.vecsearch import normalize_rows
from corpusforge.corpus import EmbeddingSet


def embed_texts(texts: list[str], ids: list[str], encoder) -> EmbeddingSet:
    rows = encoder.encode(texts)
    return normalize_rows(EmbeddingSet(ids=tuple(ids), rows=rows))


def embed_corpus(corpus_path, encoder, out_path) -> int:
    papers = load_corpus(corpus_path)
    emb = embed_texts([p.abstract for p in papers], [p.id for p in papers], encoder)
    save_embeddings(emb, out_path)
    return len(papers)
