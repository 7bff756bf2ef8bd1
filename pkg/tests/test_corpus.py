import json

import numpy as np
import pytest

from corpusforge.corpus import (
    CorpusError,
    EmbeddingSet,
    PaperRecord,
    TextBlock,
    load_blocks,
    load_corpus,
    load_embeddings,
    save_blocks,
    save_corpus,
    save_embeddings,
)


def make_paper(pid="ipac-2013-x", **kw):
    defaults = dict(
        id=pid, venue="ipac", year=2013, title="STATUS OF X",
        abstract="We present X.", references=("A. B, “T1”, IPAC.",),
        tokens=("present",),
    )
    defaults.update(kw)
    return PaperRecord(**defaults)


class TestPaperRecord:
    def test_year_bounds(self):
        with pytest.raises(CorpusError):
            make_paper(year=1980)
        with pytest.raises(CorpusError):
            make_paper(year=2150)

    def test_empty_id_rejected(self):
        with pytest.raises(CorpusError):
            make_paper(pid="")


class TestTextBlock:
    def test_inverted_bbox_rejected(self):
        with pytest.raises(CorpusError):
            TextBlock(page=0, bbox=(10, 0, 5, 5), text="x")

    def test_empty_text_rejected(self):
        with pytest.raises(CorpusError):
            TextBlock(page=0, bbox=(0, 0, 1, 1), text="   ")


class TestCorpusIO:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text("")
        assert load_corpus(path) == []

    def test_single_record_roundtrip(self, tmp_path):
        path = tmp_path / "c.jsonl"
        papers = [make_paper()]
        save_corpus(papers, path)
        loaded = load_corpus(path)
        assert loaded == papers
        # second save is byte-identical
        path2 = tmp_path / "c2.jsonl"
        save_corpus(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        line = json.dumps(make_paper(pid="a").to_json())
        path.write_text(line + "\n" + line + "\n")
        with pytest.raises(CorpusError, match="'a'"):
            load_corpus(path)

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(make_paper().to_json()) + "\n{not json\n")
        with pytest.raises(CorpusError, match=":2:"):
            load_corpus(path)

    def test_semantic_roundtrip_random(self, tmp_path):
        rng = np.random.default_rng(7)
        papers = [
            make_paper(pid=f"ipac-{2000 + i}-p{i}", year=2000 + i,
                       abstract=f"abstract {rng.integers(1000)}")
            for i in range(20)
        ]
        path = tmp_path / "c.jsonl"
        save_corpus(papers, path)
        assert load_corpus(path) == papers


class TestBlocksIO:
    def test_roundtrip(self, tmp_path):
        blocks = {
            "ipac-2013-x": [
                TextBlock(page=0, bbox=(0.0, 0.0, 100.0, 20.0), text="TITLE HERE"),
                TextBlock(page=0, bbox=(0.0, 25.0, 100.0, 50.0), text="Abstract body"),
            ]
        }
        path = tmp_path / "b.jsonl"
        save_blocks(blocks, path)
        assert load_blocks(path) == blocks


class TestEmbeddingIO:
    def test_zero_matrix_roundtrip(self, tmp_path):
        emb = EmbeddingSet(ids=("a", "b"), rows=np.zeros((2, 3), dtype=np.float32))
        path = tmp_path / "e.emb"
        save_embeddings(emb, path)
        back = load_embeddings(path)
        assert back.ids == ("a", "b")
        assert back.rows.tobytes() == emb.rows.tobytes()
        assert back.normalized is False

    def test_unit_vector_roundtrip_preserves_flag(self, tmp_path):
        row = np.zeros((1, 768), dtype=np.float32)
        row[0, 5] = 1.0
        emb = EmbeddingSet(ids=("p",), rows=row, normalized=True)
        path = tmp_path / "e.emb"
        save_embeddings(emb, path)
        back = load_embeddings(path)
        assert back.normalized is True
        assert back.rows.tobytes() == row.tobytes()

    def test_bit_exact_random_float32(self, tmp_path):
        rng = np.random.default_rng(3)
        rows = rng.standard_normal((17, 9)).astype(np.float32)
        emb = EmbeddingSet(ids=tuple(f"p{i}" for i in range(17)), rows=rows)
        path = tmp_path / "e.emb"
        save_embeddings(emb, path)
        back = load_embeddings(path)
        assert back.rows.tobytes() == rows.tobytes()
        assert back.ids == emb.ids

    def test_wrong_magic(self, tmp_path):
        path = tmp_path / "e.emb"
        path.write_bytes(b"NOPE" + b"\x00" * 16)
        with pytest.raises(CorpusError, match="magic"):
            load_embeddings(path)

    def test_truncated_payload(self, tmp_path):
        emb = EmbeddingSet(ids=("a", "b"), rows=np.ones((2, 4), dtype=np.float32))
        path = tmp_path / "e.emb"
        save_embeddings(emb, path)
        data = path.read_bytes()
        path.write_bytes(data[:-5])
        with pytest.raises(CorpusError, match="truncated"):
            load_embeddings(path)

    def test_row_id_bijection(self):
        emb = EmbeddingSet(ids=("a", "b"), rows=np.eye(2, 3, dtype=np.float32))
        assert emb.row_for("b")[1] == 1.0
        with pytest.raises(KeyError):
            emb.row_for("zzz")
        with pytest.raises(CorpusError):
            EmbeddingSet(ids=("a", "a"), rows=np.zeros((2, 2), dtype=np.float32))

    def test_row_count_mismatch(self):
        with pytest.raises(CorpusError):
            EmbeddingSet(ids=("a",), rows=np.zeros((2, 2), dtype=np.float32))
