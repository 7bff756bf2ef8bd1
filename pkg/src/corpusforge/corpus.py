"""Data model and on-disk formats for papers, text blocks, and embeddings.

Corpus files are JSON Lines (one paper per line). Embedding matrices use
the EMB1 binary layout: magic ``EMB1``, u32-le count, u32-le dim, u8
normalized flag, then count*dim little-endian float32 values row-major,
with the row ids in a ``<path>.ids`` JSONL sidecar.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

EMB_MAGIC = b"EMB1"


class CorpusError(Exception):
    """Malformed corpus, block, or embedding input."""


@dataclass(frozen=True)
class TextBlock:
    page: int
    bbox: tuple[float, float, float, float]
    text: str

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if self.page < 0:
            raise CorpusError(f"negative page {self.page}")
        if x0 > x1 or y0 > y1:
            raise CorpusError(f"inverted bbox {self.bbox}")
        if not self.text.strip():
            raise CorpusError("empty text block")


@dataclass(frozen=True)
class PaperRecord:
    id: str
    venue: str
    year: int
    title: str
    abstract: str
    references: tuple[str, ...] = ()
    tokens: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise CorpusError("paper id must be non-empty")
        if not 1990 <= self.year <= 2100:
            raise CorpusError(f"paper {self.id}: year {self.year} outside [1990, 2100]")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "venue": self.venue,
            "year": self.year,
            "title": self.title,
            "abstract": self.abstract,
            "references": list(self.references),
            "tokens": list(self.tokens),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PaperRecord":
        return cls(
            id=obj["id"],
            venue=obj.get("venue", ""),
            year=int(obj["year"]),
            title=obj.get("title", ""),
            abstract=obj.get("abstract", ""),
            references=tuple(obj.get("references", [])),
            tokens=tuple(obj.get("tokens", [])),
        )


@dataclass(frozen=True)
class EmbeddingSet:
    ids: tuple[str, ...]
    rows: np.ndarray  # |ids| x dim, float32
    normalized: bool = False

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float32)
        if rows.ndim != 2:
            raise CorpusError(f"embedding matrix must be 2-D, got shape {rows.shape}")
        if rows.shape[0] != len(self.ids):
            raise CorpusError(
                f"{rows.shape[0]} rows for {len(self.ids)} ids"
            )
        if len(set(self.ids)) != len(self.ids):
            raise CorpusError("duplicate ids in embedding set")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ids", tuple(self.ids))
        if self.normalized:
            norms = np.linalg.norm(rows, axis=1)
            if rows.shape[0] and not np.allclose(norms, 1.0, atol=1e-5):
                raise CorpusError("normalized flag set but rows are not unit-norm")

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return len(self.ids)

    def row_for(self, paper_id: str) -> np.ndarray:
        try:
            return self.rows[self.ids.index(paper_id)]
        except ValueError:
            raise KeyError(paper_id) from None


@dataclass(frozen=True)
class CorpusManifest:
    venues: tuple[tuple[str, tuple[int, int]], ...]
    counts: dict = field(default_factory=dict)  # (venue, year) -> count

    @classmethod
    def from_papers(cls, papers: list[PaperRecord]) -> "CorpusManifest":
        counts: dict = {}
        spans: dict = {}
        for p in papers:
            counts[(p.venue, p.year)] = counts.get((p.venue, p.year), 0) + 1
            lo, hi = spans.get(p.venue, (p.year, p.year))
            spans[p.venue] = (min(lo, p.year), max(hi, p.year))
        venues = tuple(sorted((v, yr) for v, yr in spans.items()))
        return cls(venues=venues, counts=counts)


def load_corpus(path) -> list[PaperRecord]:
    """Read a JSONL corpus file; rejects malformed lines and duplicate ids."""
    papers: list[PaperRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record = PaperRecord.from_json(obj)
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusError(f"{path}:{lineno}: malformed record: {exc}") from exc
            if record.id in seen:
                raise CorpusError(f"{path}:{lineno}: duplicate paper id {record.id!r}")
            seen.add(record.id)
            papers.append(record)
    return papers


def save_corpus(papers: list[PaperRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in papers:
            fh.write(json.dumps(p.to_json(), ensure_ascii=False) + "\n")


def load_blocks(path) -> dict[str, list[TextBlock]]:
    """Read per-paper text blocks: JSONL of {"id":…, "blocks":[…]}."""
    out: dict[str, list[TextBlock]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                paper_id = obj["id"]
                blocks = [
                    TextBlock(page=b["page"], bbox=tuple(b["bbox"]), text=b["text"])
                    for b in obj["blocks"]
                ]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusError(f"{path}:{lineno}: malformed block record: {exc}") from exc
            if paper_id in out:
                raise CorpusError(f"{path}:{lineno}: duplicate paper id {paper_id!r}")
            out[paper_id] = blocks
    return out


def save_blocks(blocks_by_id: dict[str, list[TextBlock]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for paper_id, blocks in blocks_by_id.items():
            obj = {
                "id": paper_id,
                "blocks": [
                    {"page": b.page, "bbox": list(b.bbox), "text": b.text}
                    for b in blocks
                ],
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def save_embeddings(emb: EmbeddingSet, path) -> None:
    """Write the EMB1 binary plus the `<path>.ids` manifest sidecar."""
    path = Path(path)
    count, dim = emb.rows.shape
    with open(path, "wb") as fh:
        fh.write(EMB_MAGIC)
        fh.write(struct.pack("<II", count, dim))
        fh.write(struct.pack("<B", 1 if emb.normalized else 0))
        fh.write(np.ascontiguousarray(emb.rows, dtype="<f4").tobytes())
    with open(str(path) + ".ids", "w", encoding="utf-8") as fh:
        for paper_id in emb.ids:
            fh.write(json.dumps(paper_id, ensure_ascii=False) + "\n")


def load_embeddings(path) -> EmbeddingSet:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != EMB_MAGIC:
            raise CorpusError(f"{path}: bad magic {magic!r}, expected {EMB_MAGIC!r}")
        header = fh.read(9)
        if len(header) != 9:
            raise CorpusError(f"{path}: truncated header")
        count, dim = struct.unpack("<II", header[:8])
        normalized = bool(header[8])
        payload = fh.read()
    expected = count * dim * 4
    if len(payload) < expected:
        raise CorpusError(
            f"{path}: truncated payload ({len(payload)} bytes, expected {expected})"
        )
    rows = np.frombuffer(payload[:expected], dtype="<f4").reshape(count, dim).copy()
    ids_path = str(path) + ".ids"
    ids = []
    with open(ids_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                ids.append(json.loads(line))
    if len(ids) != count:
        raise CorpusError(f"{ids_path}: {len(ids)} ids for {count} rows")
    return EmbeddingSet(ids=tuple(ids), rows=rows, normalized=normalized)
