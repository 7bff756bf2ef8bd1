"""Dense-vector search and word2vec training.

Sentence-level search is a full dot-product scan over unit-normalized
rows. Keyword search scores each paper per keyword by the best cosine
between the (Levenshtein-expanded) keyword vectors and the abstract's
token vectors, then ranks by the product over keywords.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from corpusforge import _kernels
from corpusforge.corpus import CorpusError, EmbeddingSet, load_embeddings, save_embeddings
from corpusforge.corpus import PaperRecord


@dataclass(frozen=True)
class QueryResult:
    paper_id: str
    score: float


@dataclass(frozen=True)
class W2VConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    min_count: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    subsample_t: float = 1e-3
    seed: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        for name in ("window", "negatives", "min_count", "epochs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.initial_lr <= 0 or self.subsample_t <= 0:
            raise ValueError("initial_lr and subsample_t must be positive")


class WordVectors:
    def __init__(self, vocab: dict[str, int], matrix: np.ndarray, counts: dict[str, int]):
        self.vocab = vocab
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self.counts = counts
        if not np.isfinite(self.matrix).all():
            raise ValueError("non-finite word vectors")
        self._tokens = sorted(vocab, key=vocab.get)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __contains__(self, token: str) -> bool:
        return token in self.vocab

    def vector(self, token: str) -> np.ndarray:
        return self.matrix[self.vocab[token]]

    def save(self, path) -> None:
        ids = tuple(f"{tok}\t{self.counts[tok]}" for tok in self._tokens)
        save_embeddings(
            EmbeddingSet(ids=ids, rows=self.matrix.astype(np.float32)), path
        )

    @classmethod
    def load(cls, path) -> "WordVectors":
        emb = load_embeddings(path)
        vocab: dict[str, int] = {}
        counts: dict[str, int] = {}
        for i, entry in enumerate(emb.ids):
            token, _, count = entry.rpartition("\t")
            vocab[token] = i
            counts[token] = int(count)
        return cls(vocab, emb.rows.astype(np.float64), counts)


def normalize_rows(emb: EmbeddingSet) -> EmbeddingSet:
    norms = np.linalg.norm(emb.rows.astype(np.float64), axis=1)
    zero = np.where(norms == 0.0)[0]
    if zero.size:
        raise CorpusError(f"zero embedding row for id {emb.ids[zero[0]]!r}")
    rows = (emb.rows.astype(np.float64) / norms[:, None]).astype(np.float32)
    return EmbeddingSet(ids=emb.ids, rows=rows, normalized=True)


def semantic_topk(query: np.ndarray, emb: EmbeddingSet, k: int) -> list[QueryResult]:
    if k < 1:
        raise ValueError("k must be >= 1")
    query = np.asarray(query, dtype=np.float32)
    if query.shape != (emb.dim,):
        raise CorpusError(f"query dim {query.shape} does not match set dim {emb.dim}")
    scores = emb.rows @ query
    order = sorted(range(len(emb)), key=lambda i: (-scores[i], emb.ids[i]))
    return [QueryResult(emb.ids[i], float(scores[i])) for i in order[:k]]


def train_word2vec(corpus: list[list[str]], cfg: W2VConfig | None = None) -> WordVectors:
    """Skip-gram negative sampling; bit-reproducible for a fixed seed."""
    if cfg is None:
        cfg = W2VConfig()
    raw_counts: dict[str, int] = {}
    for sentence in corpus:
        for tok in sentence:
            raw_counts[tok] = raw_counts.get(tok, 0) + 1
    items = sorted(
        ((tok, c) for tok, c in raw_counts.items() if c >= cfg.min_count),
        key=lambda kv: (-kv[1], kv[0]),
    )
    if not items:
        raise ValueError("empty vocabulary after min_count pruning")
    vocab = {tok: i for i, (tok, _) in enumerate(items)}
    counts = np.array([c for _, c in items], dtype=np.float64)
    total = counts.sum()

    # negative-sampling distribution: unigram^0.75
    pow_counts = counts ** 0.75
    neg_cdf = np.cumsum(pow_counts / pow_counts.sum())
    neg_cdf[-1] = 1.0

    # subsampling keep probability (classic word2vec formula)
    freq = counts / total
    keep_prob = np.minimum(
        (np.sqrt(freq / cfg.subsample_t) + 1.0) * (cfg.subsample_t / freq), 1.0
    )

    flat: list[int] = []
    offsets = [0]
    for sentence in corpus:
        indexed = [vocab[t] for t in sentence if t in vocab]
        if indexed:
            flat.extend(indexed)
            offsets.append(len(flat))
    words = np.array(flat, dtype=np.int32)
    offs = np.array(offsets, dtype=np.int32)

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    syn0 = (rng.random((len(vocab), cfg.dim)) - 0.5) / cfg.dim
    syn1 = np.zeros((len(vocab), cfg.dim))
    _kernels.sgns_train(
        words, offs, syn0, syn1, neg_cdf, keep_prob,
        cfg.window, cfg.negatives, cfg.epochs, cfg.initial_lr, cfg.seed,
    )
    if not (np.isfinite(syn0).all() and np.isfinite(syn1).all()):
        raise ValueError("training diverged to non-finite vectors")
    return WordVectors(vocab, syn0, {tok: int(c) for tok, c in items})


def expand_keyword(keyword: str, vectors: WordVectors, max_dist: int = 1) -> list[str]:
    if max_dist < 0:
        raise ValueError("max_dist must be >= 0")
    hits = []
    for token in vectors.vocab:
        d = _kernels.levenshtein(keyword, token)
        if d <= max_dist:
            hits.append((d, -vectors.counts[token], token))
    return [tok for _, _, tok in sorted(hits)]


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v) / (nu * nv)


def keyword_search(
    keywords: list[str],
    papers: list[PaperRecord],
    vectors: WordVectors,
    k: int = 10,
    max_dist: int = 1,
) -> list[QueryResult]:
    if not keywords:
        raise ValueError("keywords must be non-empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    variant_sets = []
    unresolved = []
    for kw in keywords:
        variants = expand_keyword(kw.lower(), vectors, max_dist)
        if not variants:
            unresolved.append(kw)
        else:
            variant_sets.append([vectors.vector(v) for v in variants])
    if unresolved:
        raise ValueError(f"keywords not resolvable in vocabulary: {unresolved}")

    results = []
    for paper in papers:
        token_vecs = [vectors.vector(t) for t in set(paper.tokens) if t in vectors]
        score = 1.0
        for variants in variant_sets:
            best = 0.0
            for qv in variants:
                for tv in token_vecs:
                    c = _cosine(qv, tv)
                    if c > best:
                        best = c
            score *= min(best, 1.0)
        results.append(QueryResult(paper.id, score))
    results.sort(key=lambda r: (-r.score, r.paper_id))
    return results[:k]


def mean_document_vectors(papers: list[PaperRecord], vectors: WordVectors) -> EmbeddingSet:
    """Fallback document embeddings: re-normalized mean of token vectors.

    Lets semantic search run without an externally produced embedding set.
    Papers with no in-vocabulary tokens get a deterministic unit basis row
    so normalization never hits a zero vector.
    """
    rows = np.zeros((len(papers), vectors.dim), dtype=np.float64)
    for i, paper in enumerate(papers):
        vecs = [vectors.vector(t) for t in paper.tokens if t in vectors]
        if vecs:
            rows[i] = np.mean(vecs, axis=0)
        if not np.any(rows[i]):
            rows[i, 0] = 1.0
    emb = EmbeddingSet(
        ids=tuple(p.id for p in papers), rows=rows.astype(np.float32)
    )
    return normalize_rows(emb)


def embed_query_w2v(text: str, tokens: list[str], vectors: WordVectors) -> np.ndarray:
    """Embed a free-text query the same way `mean_document_vectors` does."""
    vecs = [vectors.vector(t) for t in tokens if t in vectors]
    if not vecs:
        v = np.zeros(vectors.dim)
        v[0] = 1.0
        return v.astype(np.float32)
    v = np.mean(vecs, axis=0)
    n = np.linalg.norm(v)
    if n == 0.0:
        v = np.zeros(vectors.dim)
        v[0] = 1.0
        return v.astype(np.float32)
    return (v / n).astype(np.float32)
