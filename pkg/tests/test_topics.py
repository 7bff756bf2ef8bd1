import math

import numpy as np
import pytest

from corpusforge.corpus import EmbeddingSet
from corpusforge.topics import (
    ClusterParams,
    ReductionConfig,
    TopicModel,
    TopicsError,
    ctfidf_keywords,
    fit_topics,
    hdbscan,
    load_topic_model,
    reduce,
    save_topic_model,
    topic_trends,
    volume_histogram,
)
from tests.test_corpus import make_paper


def blobs(rng, centers, n_per=100, sigma=0.1, dim=2):
    pts, labels = [], []
    for label, center in enumerate(centers):
        pts.append(rng.normal(size=(n_per, dim)) * sigma + np.asarray(center))
        labels.extend([label] * n_per)
    return np.vstack(pts), np.array(labels)


def agreement(found, truth):
    """Best label-permutation agreement fraction (noise counts as miss)."""
    from itertools import permutations

    uniq = [u for u in np.unique(found) if u != -1]
    best = 0.0
    for perm in permutations(range(len(np.unique(truth))), len(uniq)):
        mapping = {u: perm[i] for i, u in enumerate(uniq)}
        hits = sum(
            1 for f, t in zip(found, truth) if f != -1 and mapping[f] == t
        )
        best = max(best, hits / len(truth))
    return best


class TestPCA:
    def test_subspace_distances_preserved(self):
        rng = np.random.default_rng(0)
        # points in a 2D affine subspace of R^6
        basis = rng.normal(size=(2, 6))
        coords = rng.normal(size=(40, 2))
        x = coords @ basis + rng.normal(size=6)
        y = reduce(x, ReductionConfig(method="pca", target_dim=2))
        dx = np.linalg.norm(x[:, None] - x[None, :], axis=-1)
        dy = np.linalg.norm(y[:, None] - y[None, :], axis=-1)
        assert np.allclose(dx, dy, atol=1e-6)

    def test_two_identical_points_map_to_origin(self):
        x = np.ones((2, 4))
        y = reduce(x, ReductionConfig(method="pca", target_dim=2))
        assert np.allclose(y, 0.0)

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(30, 5))
        a = reduce(x, ReductionConfig(method="pca", target_dim=3))
        b = reduce(x, ReductionConfig(method="pca", target_dim=3))
        assert np.array_equal(a, b)

    def test_reconstruction_beats_random_projections(self):
        # PCA residual must match the optimal singular-value tail bound
        rng = np.random.default_rng(2)
        low = rng.normal(size=(50, 3)) @ rng.normal(size=(3, 8))
        x = low + 0.01 * rng.normal(size=(50, 8))
        centered = x - x.mean(axis=0)
        target = 3
        y = reduce(x, ReductionConfig(method="pca", target_dim=target))
        s = np.linalg.svd(centered, compute_uv=False)
        captured = float(np.sum(y ** 2))
        total = float(np.sum(centered ** 2))
        pca_err = total - captured
        tail = float(np.sum(s[target:] ** 2))
        assert pca_err == pytest.approx(tail, abs=1e-8)
        for _ in range(10):
            q, _ = np.linalg.qr(rng.normal(size=(8, target)))
            rand_err = total - float(np.sum((centered @ q) ** 2))
            assert pca_err <= rand_err + 1e-8


class TestUMAP:
    def test_two_blobs_linearly_separable(self):
        rng = np.random.default_rng(3)
        x, truth = blobs(rng, [(0.0, 0.0), (20.0, 0.0)], n_per=100, sigma=1.0)
        cfg = ReductionConfig(method="umap", target_dim=2, n_neighbors=10,
                              n_epochs=60, seed=5)
        y = reduce(x, cfg)
        m0 = y[truth == 0].mean(axis=0)
        m1 = y[truth == 1].mean(axis=0)
        axis = m1 - m0
        proj = (y - (m0 + m1) / 2) @ axis
        side = proj > 0
        assert np.all(side[truth == 1]) and not np.any(side[truth == 0])

    def test_deterministic_for_seed(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(40, 6))
        cfg = ReductionConfig(method="umap", target_dim=2, n_neighbors=8,
                              n_epochs=20, seed=7)
        assert np.array_equal(reduce(x, cfg), reduce(x, cfg))

    def test_too_few_points(self):
        with pytest.raises(TopicsError):
            reduce(np.zeros((5, 3)), ReductionConfig(method="umap", n_neighbors=15))


class TestHDBSCAN:
    def test_three_blobs_recovered(self):
        rng = np.random.default_rng(6)
        x, truth = blobs(rng, [(0, 0), (10, 0), (0, 10)], n_per=100, sigma=0.1)
        labels = hdbscan(x, ClusterParams(min_cluster_size=10, min_samples=10))
        found = [u for u in np.unique(labels) if u != -1]
        assert len(found) == 3
        assert agreement(labels, truth) >= 0.95

    def test_too_few_points_all_noise(self):
        labels = hdbscan(np.zeros((5, 2)), ClusterParams(min_cluster_size=10))
        assert list(labels) == [-1] * 5

    def test_all_duplicates_single_cluster(self):
        pts = np.ones((30, 3))
        labels = hdbscan(pts, ClusterParams(min_cluster_size=10, min_samples=5))
        assert set(labels) == {0}

    def test_scale_invariance(self):
        rng = np.random.default_rng(7)
        x, _ = blobs(rng, [(0, 0), (10, 0)], n_per=60, sigma=0.3)
        params = ClusterParams(min_cluster_size=10, min_samples=10)
        assert np.array_equal(hdbscan(x, params), hdbscan(x * 3.0, params))

    def test_labels_dense_from_zero(self):
        rng = np.random.default_rng(8)
        x, _ = blobs(rng, [(0, 0), (12, 0), (0, 12)], n_per=50, sigma=0.2)
        labels = hdbscan(x, ClusterParams(min_cluster_size=10, min_samples=10))
        found = sorted(u for u in np.unique(labels) if u != -1)
        assert found == list(range(len(found)))

    def test_bad_params(self):
        with pytest.raises(ValueError):
            ClusterParams(min_cluster_size=1)


def ctfidf_oracle(docs_by_topic):
    classes = sorted(docs_by_topic)
    f = {}
    total = 0
    for c in classes:
        for t in docs_by_topic[c]:
            f[t] = f.get(t, 0) + 1
            total += 1
    a = total / len(classes)
    out = {}
    for c in classes:
        tf = {}
        for t in docs_by_topic[c]:
            tf[t] = tf.get(t, 0) + 1
        out[c] = {t: cnt * math.log(1 + a / f[t]) for t, cnt in tf.items()}
    return out


class TestCTFIDF:
    def test_single_class_hand_example(self):
        got = ctfidf_keywords({0: ["beam", "beam", "beam"]}, top_n=5)
        assert got[0] == [("beam", pytest.approx(3 * math.log(2)))]

    def test_exclusive_token_outweighs_shared(self):
        docs = {
            0: ["alpha", "shared", "x", "y"],
            1: ["shared", "p", "q", "r"],
        }
        got = dict(ctfidf_keywords(docs, top_n=10)[0])
        assert got["alpha"] > got["shared"]

    def test_empty_class_empty_keywords(self):
        got = ctfidf_keywords({0: [], 1: ["beam"]}, top_n=5)
        assert got[0] == []

    def test_random_micro_corpora_match_oracle(self):
        rng = np.random.default_rng(9)
        vocab = [f"t{i}" for i in range(8)]
        for _ in range(100):
            docs = {
                c: [vocab[int(i)] for i in rng.integers(0, 8, rng.integers(0, 12))]
                for c in range(int(rng.integers(1, 4)))
            }
            if not any(docs.values()):
                continue
            got = ctfidf_keywords(docs, top_n=100)
            want = ctfidf_oracle(docs)
            for c in docs:
                for tok, w in got[c]:
                    assert w == pytest.approx(want[c][tok], abs=1e-9)
                assert len(got[c]) == len(want[c])

    def test_weights_positive_for_present_tokens(self):
        got = ctfidf_keywords({0: ["a", "b"], 1: ["a"]}, top_n=10)
        for _c, kws in got.items():
            for _tok, w in kws:
                assert w > 0.0


def blob_corpus(rng, n_topics=3, n_per=40, dim=6):
    centers = [np.eye(n_topics, dim)[i] * 15 for i in range(n_topics)]
    x, truth = blobs(rng, centers, n_per=n_per, sigma=0.1, dim=dim)
    vocab = [["alpha", "beat"], ["gamma", "delta"], ["eps", "zeta"]]
    papers = [
        make_paper(
            pid=f"v-{2010 + int(t)}-{i}", year=2010 + int(t),
            tokens=tuple(vocab[int(t)] * 3), references=(),
        )
        for i, t in enumerate(truth)
    ]
    emb = EmbeddingSet(
        ids=tuple(p.id for p in papers), rows=x.astype(np.float32)
    )
    return emb, papers, truth


class TestFitTopics:
    def test_three_blob_pipeline(self):
        rng = np.random.default_rng(10)
        emb, papers, truth = blob_corpus(rng)
        model = fit_topics(
            emb, papers,
            ReductionConfig(method="pca"),
            ClusterParams(min_cluster_size=10, min_samples=10),
        )
        assert model.n_topics == 3
        assert agreement(model.labels, truth) >= 0.95
        assert sum(model.topic_sizes.values()) + int(np.sum(model.labels == -1)) \
            == len(papers)
        for t, kws in model.keywords.items():
            assert kws and all(w > 0 for _tok, w in kws)

    def test_single_blob(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(60, 4)) * 0.1
        papers = [make_paper(pid=f"v-2010-{i}", year=2010, tokens=("beam",),
                             references=()) for i in range(60)]
        emb = EmbeddingSet(ids=tuple(p.id for p in papers),
                           rows=x.astype(np.float32))
        model = fit_topics(emb, papers, ReductionConfig(method="pca"),
                           ClusterParams(min_cluster_size=10, min_samples=10))
        assert model.n_topics == 1
        assert model.topic_sizes[0] == 60 - int(np.sum(model.labels == -1))

    def test_label_conservation(self):
        rng = np.random.default_rng(12)
        emb, papers, _ = blob_corpus(rng)
        model = fit_topics(emb, papers, ReductionConfig(method="pca"),
                           ClusterParams(min_cluster_size=10, min_samples=10))
        assert len(model.labels) == len(papers)
        assert all(lab == -1 or 0 <= lab < model.n_topics for lab in model.labels)
        assert model.coords2d.shape == (len(papers), 2)

    def test_misaligned_ids_rejected(self):
        rng = np.random.default_rng(13)
        emb, papers, _ = blob_corpus(rng)
        with pytest.raises(TopicsError):
            fit_topics(emb, list(reversed(papers)))

    def test_model_json_roundtrip(self, tmp_path):
        rng = np.random.default_rng(14)
        emb, papers, _ = blob_corpus(rng)
        model = fit_topics(emb, papers, ReductionConfig(method="pca"),
                           ClusterParams(min_cluster_size=10, min_samples=10))
        path = tmp_path / "model.json"
        save_topic_model(model, path)
        back = load_topic_model(path)
        assert np.array_equal(back.labels, model.labels)
        assert back.topic_sizes == model.topic_sizes
        assert np.allclose(back.coords2d, model.coords2d)


def trend_model(labels, years):
    papers = [
        make_paper(pid=f"v-{y}-{i}", year=y, tokens=("beam",), references=())
        for i, y in enumerate(years)
    ]
    labels = np.array(labels)
    sizes = {int(t): int(np.sum(labels == t)) for t in np.unique(labels) if t != -1}
    model = TopicModel(labels=labels, keywords={t: [] for t in sizes},
                       coords2d=np.zeros((len(labels), 2)), topic_sizes=sizes)
    return model, papers


class TestTrends:
    def test_hand_counts(self):
        model, papers = trend_model([0, 0, 0, 1], [2015] * 4)
        table = topic_trends(model, papers)
        assert table.years == (2015,)
        assert table.shares[0].tolist() == [0.75, 0.25]

    def test_omit_only_year_empty(self):
        model, papers = trend_model([0, 1], [2015, 2015])
        table = topic_trends(model, papers, omit_years=[2015])
        assert table.years == ()

    def test_hide_all_topics_errors(self):
        model, papers = trend_model([0, 1], [2015, 2015])
        with pytest.raises(TopicsError, match="no topics remain"):
            topic_trends(model, papers, hide_topics=[0, 1])

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(15)
        labels = rng.integers(-1, 4, size=80)
        years = rng.integers(2010, 2016, size=80)
        model, papers = trend_model(labels, years)
        table = topic_trends(model, papers, hide_topics=[0])
        for row in table.shares:
            assert float(row.sum()) == pytest.approx(1.0, abs=1e-9)

    def test_noise_excluded(self):
        model, papers = trend_model([-1, -1, 0], [2015] * 3)
        table = topic_trends(model, papers)
        assert table.shares[0].tolist() == [1.0]


class TestVolume:
    def make(self, rows, years):
        papers = [
            make_paper(pid=f"v-{y}-{i}", year=y, tokens=(), references=())
            for i, y in enumerate(years)
        ]
        emb = EmbeddingSet(ids=tuple(p.id for p in papers),
                           rows=np.asarray(rows, dtype=np.float32))
        return emb, papers

    def test_identical_embeddings_one_bin(self):
        emb, papers = self.make(np.ones((6, 3)), [2010] * 3 + [2011] * 3)
        hist = volume_histogram(emb, papers, bins=8)
        for year in (2010, 2011):
            assert sum(hist[year]) == 3
            assert sum(1 for c in hist[year] if c > 0) == 1

    def test_two_bin_hand_partition(self):
        rows = np.array([[0.0], [1.0], [10.0], [9.0]])
        emb, papers = self.make(rows, [2010] * 4)
        hist = volume_histogram(emb, papers, bins=2)
        assert hist[2010] == [2, 2]

    def test_per_year_count_conservation(self):
        rng = np.random.default_rng(16)
        years = [int(y) for y in rng.integers(2010, 2015, size=50)]
        emb, papers = self.make(rng.normal(size=(50, 4)), years)
        hist = volume_histogram(emb, papers, bins=16)
        for year in set(years):
            assert sum(hist[year]) == years.count(year)

    def test_bad_bins(self):
        emb, papers = self.make(np.ones((2, 2)), [2010, 2010])
        with pytest.raises(ValueError):
            volume_histogram(emb, papers, bins=1)
