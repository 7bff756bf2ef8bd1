"""Topic modeling: reduction, density clustering, and c-TF-IDF keywords.

The pipeline reduces sentence embeddings to 5 dimensions, clusters them
with a from-scratch HDBSCAN (mutual reachability -> MST -> condensed
hierarchy -> excess-of-mass extraction), and labels each topic with
class-based TF-IDF keywords. A separate 2D reduction supplies map
coordinates and a 1D reduction feeds the per-year volume histograms.

Two reduction backends exist: exact PCA (deterministic reference) and a
UMAP-style stochastic neighbor embedding (seeded, single-threaded).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from corpusforge.corpus import EmbeddingSet, PaperRecord


class TopicsError(Exception):
    pass


@dataclass(frozen=True)
class ReductionConfig:
    method: str = "pca"  # "pca" | "umap"
    target_dim: int = 5
    n_neighbors: int = 15
    min_dist: float = 0.1
    n_epochs: int = 200
    seed: int = 1

    def __post_init__(self):
        if self.method not in ("pca", "umap"):
            raise ValueError(f"unknown reduction method {self.method!r}")
        if self.target_dim < 1:
            raise ValueError("target_dim must be >= 1")
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be >= 2")

    def with_dim(self, target_dim: int) -> "ReductionConfig":
        return ReductionConfig(
            self.method, target_dim, self.n_neighbors,
            self.min_dist, self.n_epochs, self.seed,
        )


@dataclass(frozen=True)
class ClusterParams:
    min_cluster_size: int = 10
    min_samples: int = 10

    def __post_init__(self):
        if self.min_cluster_size < 2 or self.min_samples < 2:
            raise ValueError("min_cluster_size and min_samples must be >= 2")


@dataclass
class TopicModel:
    labels: np.ndarray  # per paper, -1 noise
    keywords: dict  # topic -> [(token, weight), ...]
    coords2d: np.ndarray  # n x 2
    topic_sizes: dict  # topic -> count

    @property
    def n_topics(self) -> int:
        return len(self.topic_sizes)

    def to_json(self) -> dict:
        return {
            "labels": [int(v) for v in self.labels],
            "keywords": {
                str(t): [[tok, w] for tok, w in kws] for t, kws in self.keywords.items()
            },
            "coords2d": [[float(a), float(b)] for a, b in self.coords2d],
            "topic_sizes": {str(t): int(c) for t, c in self.topic_sizes.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TopicModel":
        return cls(
            labels=np.array(obj["labels"], dtype=int),
            keywords={
                int(t): [(tok, float(w)) for tok, w in kws]
                for t, kws in obj["keywords"].items()
            },
            coords2d=np.array(obj["coords2d"], dtype=float).reshape(-1, 2),
            topic_sizes={int(t): int(c) for t, c in obj["topic_sizes"].items()},
        )


@dataclass(frozen=True)
class TrendTable:
    years: tuple[int, ...]
    topics: tuple[int, ...]
    shares: np.ndarray  # len(years) x len(topics)
    omitted_years: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "years": list(self.years),
            "topics": list(self.topics),
            "shares": [[float(v) for v in row] for row in self.shares],
            "omitted_years": list(self.omitted_years),
        }


# ---------------------------------------------------------------- reduction

def _pca(x: np.ndarray, target_dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    centered = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[: min(target_dim, vt.shape[0])]
    # deterministic sign: largest-magnitude loading positive
    for row in comps:
        j = np.argmax(np.abs(row))
        if row[j] < 0:
            row *= -1
    proj = centered @ comps.T
    if proj.shape[1] < target_dim:
        proj = np.hstack([proj, np.zeros((proj.shape[0], target_dim - proj.shape[1]))])
    return proj


def _smooth_knn(dist_knn: np.ndarray, n_iter: int = 64) -> tuple[np.ndarray, np.ndarray]:
    n, k = dist_knn.shape
    target = math.log2(k)
    rho = dist_knn[:, 0].copy()
    sigma = np.ones(n)
    for i in range(n):
        lo, hi = 0.0, np.inf
        mid = 1.0
        d = np.maximum(dist_knn[i] - rho[i], 0.0)
        for _ in range(n_iter):
            val = np.exp(-d / mid).sum()
            if abs(val - target) < 1e-5:
                break
            if val > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = mid
    return rho, sigma


def _fit_ab(min_dist: float) -> tuple[float, float]:
    xv = np.linspace(0.0, 3.0, 300)
    yv = np.where(xv < min_dist, 1.0, np.exp(-(xv - min_dist)))

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2 * b))

    (a, b), _ = curve_fit(curve, xv, yv, p0=(1.0, 1.0), maxfev=5000)
    return float(a), float(b)


def _umap(x: np.ndarray, cfg: ReductionConfig) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    k = cfg.n_neighbors
    if n < k + 1:
        raise TopicsError(f"umap needs at least n_neighbors+1={k + 1} points, got {n}")
    d2 = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1)
    dist = np.sqrt(np.maximum(d2, 0.0))
    order = np.argsort(dist, axis=1, kind="stable")
    knn_idx = np.empty((n, k), dtype=int)
    for i in range(n):
        neigh = [j for j in order[i] if j != i][:k]
        knn_idx[i] = neigh
    knn_dist = dist[np.arange(n)[:, None], knn_idx]

    rho, sigma = _smooth_knn(knn_dist)
    w = np.zeros((n, n))
    for i in range(n):
        w[i, knn_idx[i]] = np.exp(-np.maximum(knn_dist[i] - rho[i], 0.0) / sigma[i])
    p = w + w.T - w * w.T  # fuzzy union symmetrization

    y = _pca(x, cfg.target_dim)
    spread = np.abs(y).max()
    if spread > 0:
        y = y * (10.0 / spread)

    a, b = _fit_ab(cfg.min_dist)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    edges = np.argwhere(p > 0)
    edges = edges[edges[:, 0] < edges[:, 1]]
    weights = p[edges[:, 0], edges[:, 1]]
    if len(edges) == 0:
        return y
    epochs_per_sample = weights.max() / weights
    next_epoch = epochs_per_sample.copy()
    n_neg = 5
    for epoch in range(cfg.n_epochs):
        alpha = 1.0 * (1.0 - epoch / cfg.n_epochs)
        for e in range(len(edges)):
            if next_epoch[e] > epoch + 1:
                continue
            i, j = edges[e]
            diff = y[i] - y[j]
            dsq = float(diff @ diff)
            if dsq > 0.0:
                coeff = (-2.0 * a * b * dsq ** (b - 1.0)) / (1.0 + a * dsq ** b)
                grad = np.clip(coeff * diff, -4.0, 4.0)
                y[i] += alpha * grad
                y[j] -= alpha * grad
            for _ in range(n_neg):
                r = int(rng.integers(0, n))
                if r == i:
                    continue
                diff = y[i] - y[r]
                dsq = float(diff @ diff)
                coeff = (2.0 * b) / ((0.001 + dsq) * (1.0 + a * dsq ** b))
                grad = np.clip(coeff * diff, -4.0, 4.0)
                y[i] += alpha * grad
            next_epoch[e] += epochs_per_sample[e]
    return y


def reduce(emb, cfg: ReductionConfig) -> np.ndarray:
    """Reduce an EmbeddingSet (or raw matrix) to cfg.target_dim columns."""
    x = emb.rows if isinstance(emb, EmbeddingSet) else np.asarray(emb)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] == 0:
        return np.zeros((0, cfg.target_dim))
    if cfg.method == "pca":
        return _pca(x, cfg.target_dim)
    return _umap(x, cfg)


# ----------------------------------------------------------------- hdbscan

def _prim_mst(mr: np.ndarray) -> list[tuple[int, int, float]]:
    n = mr.shape[0]
    visited = np.zeros(n, dtype=bool)
    best = mr[0].copy()
    parent = np.zeros(n, dtype=int)
    visited[0] = True
    best[0] = np.inf
    edges = []
    for _ in range(n - 1):
        j = int(np.argmin(np.where(visited, np.inf, best)))
        edges.append((int(parent[j]), j, float(best[j])))
        visited[j] = True
        improved = mr[j] < best
        best = np.where(improved & ~visited, mr[j], best)
        parent = np.where(improved & ~visited, j, parent)
        best[j] = np.inf
    edges.sort(key=lambda t: (t[2], t[0], t[1]))
    return edges


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.label = list(range(n))  # dendrogram node id of each component

    def find(self, u):
        while self.parent[u] != u:
            self.parent[u] = self.parent[self.parent[u]]
            u = self.parent[u]
        return u


def hdbscan(points: np.ndarray, params: ClusterParams | None = None) -> np.ndarray:
    """Density clustering; returns per-point labels with -1 = noise."""
    if params is None:
        params = ClusterParams()
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    n = points.shape[0]
    mcs = params.min_cluster_size
    if n < mcs:
        return np.full(n, -1, dtype=int)

    d2 = np.sum((points[:, None, :] - points[None, :, :]) ** 2, axis=-1)
    dist = np.sqrt(np.maximum(d2, 0.0))
    k = min(params.min_samples, n)
    core = np.sort(dist, axis=1)[:, k - 1]  # k-th NN incl. self
    mr = np.maximum(dist, np.maximum(core[:, None], core[None, :]))
    np.fill_diagonal(mr, 0.0)

    mst = _prim_mst(mr)

    # single-linkage dendrogram over MST edges
    uf = _UnionFind(n)
    n_nodes = 2 * n - 1
    left = np.zeros(n_nodes, dtype=int)
    right = np.zeros(n_nodes, dtype=int)
    height = np.zeros(n_nodes)
    size = np.ones(n_nodes, dtype=int)
    nxt = n
    for u, v, w in mst:
        ru, rv = uf.find(u), uf.find(v)
        left[nxt] = uf.label[ru]
        right[nxt] = uf.label[rv]
        height[nxt] = w
        size[nxt] = size[uf.label[ru]] + size[uf.label[rv]]
        uf.parent[ru] = rv
        uf.label[rv] = nxt
        nxt += 1
    root = nxt - 1

    def leaves(node):
        stack, out = [node], []
        while stack:
            m = stack.pop()
            if m < n:
                out.append(m)
            else:
                stack.extend((left[m], right[m]))
        return out

    # condense the hierarchy by min_cluster_size
    rows = []  # (parent_cluster, child, lambda, child_size); child < n means point
    root_label = n
    next_label = n + 1
    children_of: dict[int, list[int]] = {root_label: []}
    stack = [(root, root_label)]
    while stack:
        node, label = stack.pop()
        lam = (1.0 / height[node]) if height[node] > 0 else np.inf
        l, r = left[node], right[node]
        sl, sr = size[l], size[r]
        if sl >= mcs and sr >= mcs:
            for child in (l, r):
                new = next_label
                next_label += 1
                rows.append((label, new, lam, size[child]))
                children_of.setdefault(label, []).append(new)
                children_of[new] = []
                stack.append((child, new))
        elif sl < mcs and sr < mcs:
            for child in (l, r):
                for point in leaves(child):
                    rows.append((label, point, lam, 1))
        else:
            big, small = (l, r) if sl >= sr else (r, l)
            for point in leaves(small):
                rows.append((label, point, lam, 1))
            if big < n:
                rows.append((label, big, lam, 1))
            else:
                stack.append((big, label))

    # stability = sum over members of (lambda_leave - lambda_birth)
    birth = {root_label: 0.0}
    for parent, child, lam, _sz in rows:
        if child >= n:
            birth[child] = lam
    stability = {c: 0.0 for c in children_of}
    for parent, child, lam, sz in rows:
        delta = lam - birth[parent]
        if not np.isfinite(delta):
            delta = 0.0 if lam == birth[parent] else np.inf
        stability[parent] += delta * sz

    # excess-of-mass cluster selection, root excluded
    is_cluster = {c: False for c in children_of}
    for c in sorted(children_of, reverse=True):
        if c == root_label:
            continue
        kids = children_of[c]
        child_sum = sum(stability[ch] for ch in kids)
        if kids and child_sum > stability[c]:
            stability[c] = child_sum
            is_cluster[c] = False
        else:
            is_cluster[c] = True
            drop = list(kids)
            while drop:
                sub = drop.pop()
                is_cluster[sub] = False
                drop.extend(children_of[sub])

    selected = [c for c, flag in is_cluster.items() if flag]
    if not selected and size[root] >= mcs:
        selected = [root_label]  # lone flat cluster (e.g. all-duplicate input)
        is_cluster[root_label] = True

    parent_of = {}
    for parent, child, _lam, _sz in rows:
        parent_of[child] = parent
    labels = np.full(n, -1, dtype=int)
    remap = {c: i for i, c in enumerate(sorted(selected))}
    for parent, child, _lam, _sz in rows:
        if child < n:
            anc = parent
            while anc is not None:
                if is_cluster.get(anc, False):
                    labels[child] = remap[anc]
                    break
                anc = parent_of.get(anc)
    return labels


# ----------------------------------------------------------------- c-TF-IDF

def ctfidf_keywords(docs_by_topic: dict[int, list[str]], top_n: int = 10) -> dict:
    """weight(t, c) = tf(t, c) * log(1 + A / f(t)).

    A is the mean token count per class, f(t) the total count of token t
    across all classes.
    """
    classes = sorted(docs_by_topic)
    if not classes:
        return {}
    tf: dict[int, dict[str, int]] = {}
    f: dict[str, int] = {}
    total_tokens = 0
    for c in classes:
        counts: dict[str, int] = {}
        for tok in docs_by_topic[c]:
            counts[tok] = counts.get(tok, 0) + 1
            f[tok] = f.get(tok, 0) + 1
            total_tokens += 1
        tf[c] = counts
    a = total_tokens / len(classes)
    out = {}
    for c in classes:
        weighted = [
            (tok, cnt * math.log(1.0 + a / f[tok])) for tok, cnt in tf[c].items()
        ]
        weighted.sort(key=lambda kv: (-kv[1], kv[0]))
        out[c] = weighted[:top_n]
    return out


# ----------------------------------------------------------------- pipeline

def fit_topics(
    emb: EmbeddingSet,
    papers: list[PaperRecord],
    reduction: ReductionConfig | None = None,
    cluster: ClusterParams | None = None,
    top_n: int = 10,
) -> TopicModel:
    if reduction is None:
        reduction = ReductionConfig()
    if cluster is None:
        cluster = ClusterParams()
    if len(emb) != len(papers):
        raise TopicsError(f"{len(emb)} embeddings for {len(papers)} papers")
    ids = tuple(p.id for p in papers)
    if ids != emb.ids:
        raise TopicsError("embedding ids do not align with papers")

    reduced = reduce(emb, reduction.with_dim(min(5, emb.dim)))
    raw_labels = hdbscan(reduced, cluster)

    # dense relabel ordered by size descending (topic 0 = largest)
    uniq = [int(t) for t in np.unique(raw_labels) if t != -1]
    sizes = {t: int(np.sum(raw_labels == t)) for t in uniq}
    order = sorted(uniq, key=lambda t: (-sizes[t], t))
    remap = {t: i for i, t in enumerate(order)}
    labels = np.array([remap.get(int(t), -1) for t in raw_labels], dtype=int)

    docs_by_topic: dict[int, list[str]] = {remap[t]: [] for t in uniq}
    for paper, lab in zip(papers, labels):
        if lab != -1:
            docs_by_topic[int(lab)].extend(paper.tokens)
    keywords = ctfidf_keywords(docs_by_topic, top_n) if docs_by_topic else {}

    coords2d = reduce(emb, reduction.with_dim(2))
    topic_sizes = {remap[t]: sizes[t] for t in uniq}
    return TopicModel(labels=labels, keywords=keywords,
                      coords2d=coords2d, topic_sizes=topic_sizes)


def topic_trends(
    model: TopicModel,
    papers: list[PaperRecord],
    omit_years: list[int] = (),
    hide_topics: list[int] = (),
) -> TrendTable:
    shown = [t for t in sorted(model.topic_sizes) if t not in set(hide_topics)]
    if model.topic_sizes and not shown:
        raise TopicsError("no topics remain after hiding")
    counts: dict[int, dict[int, int]] = {}
    for paper, lab in zip(papers, model.labels):
        if lab == -1 or paper.year in set(omit_years):
            continue
        counts.setdefault(paper.year, {})
        counts[paper.year][int(lab)] = counts[paper.year].get(int(lab), 0) + 1
    years = []
    rows = []
    for year in sorted(counts):
        row = np.array([counts[year].get(t, 0) for t in shown], dtype=float)
        total = row.sum()
        if total == 0:
            continue  # only hidden-topic papers that year
        years.append(year)
        rows.append(row / total)
    shares = np.array(rows) if rows else np.zeros((0, len(shown)))
    return TrendTable(
        years=tuple(years),
        topics=tuple(shown),
        shares=shares,
        omitted_years=tuple(sorted(set(omit_years))),
    )


def volume_histogram(
    emb: EmbeddingSet,
    papers: list[PaperRecord],
    bins: int,
    reduction: ReductionConfig | None = None,
) -> dict[int, list[int]]:
    """Per-year histograms of globally binned 1D projections."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if reduction is None:
        reduction = ReductionConfig(target_dim=1)
    proj = reduce(emb, reduction.with_dim(1))[:, 0]
    lo, hi = float(proj.min()), float(proj.max())
    if hi <= lo:
        idx = np.zeros(len(proj), dtype=int)
    else:
        idx = np.minimum(((proj - lo) / (hi - lo) * bins).astype(int), bins - 1)
    out: dict[int, list[int]] = {}
    for paper, b in zip(papers, idx):
        hist = out.setdefault(paper.year, [0] * bins)
        hist[int(b)] += 1
    return out


def save_topic_model(model: TopicModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_json(), fh)


def load_topic_model(path) -> TopicModel:
    with open(path, encoding="utf-8") as fh:
        return TopicModel.from_json(json.load(fh))
