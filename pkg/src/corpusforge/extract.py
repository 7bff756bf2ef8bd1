"""Title/abstract/reference extraction heuristics and tokenization.

All functions are pure. The title rule takes the first text block whose
alphabetic characters are all uppercase; the abstract is the span between
"Abstract" and "INTRODUCTION"; references are the segments after the last
"REFERENCE" keyword split on "[n]" markers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from corpusforge.corpus import TextBlock

_ABSTRACT_RE = re.compile(r"Abstract(.*?)(?:INTRODUCTION)", re.DOTALL)
_REF_SPLIT_RE = re.compile(r"\[\d+\]")
# opening/closing quotes may be straight or typographic
_REF_TITLE_RE = re.compile(r'["“](.*?)["”]')
_NON_ALNUM_RE = re.compile(r"[^0-9a-zA-Z]+")

MIN_TITLE_BLOCK_LEN = 8


def _default_stopwords() -> frozenset[str]:
    text = resources.files("corpusforge.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    min_token_len: int = 2
    strip_punctuation: bool = True
    stopwords: frozenset[str] = field(default_factory=_default_stopwords)

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")


class EnglishDictionary:
    """Word set loaded from a one-word-per-line UTF-8 file."""

    def __init__(self, words):
        self.words = frozenset(w.lower() for w in words if w.strip())
        if not self.words:
            raise ValueError("empty dictionary")

    @classmethod
    def load(cls, path) -> "EnglishDictionary":
        return cls(Path(path).read_text("utf-8").splitlines())

    @classmethod
    def bundled(cls) -> "EnglishDictionary":
        text = resources.files("corpusforge.data").joinpath("english_words.txt").read_text("utf-8")
        return cls(text.splitlines())

    def __contains__(self, word: str) -> bool:
        return word in self.words


def extract_title(blocks: list[TextBlock]) -> str | None:
    for block in blocks:
        text = block.text.strip()
        if len(text) < MIN_TITLE_BLOCK_LEN:
            continue
        alpha = [c for c in text if c.isalpha()]
        if alpha and all(c.isupper() for c in alpha):
            return text
    return None


def join_blocks(blocks: list[TextBlock]) -> str:
    return " ".join(b.text for b in blocks)


def extract_abstract(full_text: str) -> str | None:
    m = _ABSTRACT_RE.search(full_text)
    if m is None:
        return None
    return m.group(1).strip()


def english_ratio(text: str, dictionary: EnglishDictionary) -> float:
    words = [_NON_ALNUM_RE.sub("", w).lower() for w in text.split()]
    words = [w for w in words if w]
    if not words:
        return 0.0
    hits = sum(1 for w in words if w in dictionary)
    return hits / len(words)


def tokenize(text: str, cfg: TokenizerConfig | None = None) -> list[str]:
    if cfg is None:
        cfg = TokenizerConfig()
    if cfg.lowercase:
        text = text.lower()
    if cfg.strip_punctuation:
        text = _NON_ALNUM_RE.sub(" ", text)
    return [
        tok
        for tok in text.split()
        if len(tok) >= cfg.min_token_len and tok not in cfg.stopwords
    ]


def extract_references(full_text: str) -> list[str]:
    idx = full_text.rfind("REFERENCE")
    if idx < 0:
        return []
    suffix = full_text[idx + len("REFERENCE"):]
    segments = _REF_SPLIT_RE.split(suffix)
    if len(segments) <= 1:
        return []
    # segments[0] is the leftover of the keyword line before the first [n]
    return [seg.strip() for seg in segments[1:] if seg.strip()]


def extract_ref_title(reference: str) -> str | None:
    m = _REF_TITLE_RE.search(reference)
    if m is None:
        return None
    return m.group(1)
