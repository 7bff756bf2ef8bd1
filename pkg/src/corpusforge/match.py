"""Edit-distance primitives and fuzzy reference-title matching.

`token_sort_ratio` tolerates word reordering and case, which is what lets
a quoted reference title match a paper title that is only a sub-phrase of
the full reference string.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from corpusforge import _kernels
from corpusforge.corpus import PaperRecord
from corpusforge.extract import extract_ref_title

DEFAULT_THRESHOLD = 95

_NON_ALNUM_RE = re.compile(r"[^0-9a-z]+")


@dataclass(frozen=True)
class MatchResult:
    citing_id: str
    cited_id: str
    score: int
    ambiguous: bool = False


def levenshtein(a: str, b: str) -> int:
    return _kernels.levenshtein(a, b)


def indel_ratio(a: str, b: str) -> int:
    """100 * (|a|+|b| - indel_distance) / (|a|+|b|), rounded half-up."""
    total = len(a) + len(b)
    if total == 0:
        return 100
    matched = total - _kernels.indel_distance(a, b)
    # round-half-up with integer arithmetic: round(100*matched/total)
    return (200 * matched + total) // (2 * total)


def _normalize(s: str) -> str:
    tokens = _NON_ALNUM_RE.sub(" ", s.lower()).split()
    return " ".join(sorted(tokens))


def token_sort_ratio(a: str, b: str) -> int:
    return indel_ratio(_normalize(a), _normalize(b))


def match_references(
    papers: list[PaperRecord], threshold: int = DEFAULT_THRESHOLD
) -> list[MatchResult]:
    """Link each citing paper's reference titles to corpus papers.

    Emits the best-scoring candidate per reference when it clears the
    threshold; ties at the best score are flagged ambiguous and broken by
    earliest year, then lexicographic id.
    """
    if not 0 <= threshold <= 100:
        raise ValueError(f"threshold {threshold} outside [0, 100]")
    results: list[MatchResult] = []
    for citing in papers:
        for reference in citing.references:
            ref_title = extract_ref_title(reference)
            if ref_title is None:
                continue
            best_score = -1
            candidates: list[PaperRecord] = []
            for other in papers:
                if other.id == citing.id or not other.title:
                    continue
                score = token_sort_ratio(ref_title, other.title)
                if score > best_score:
                    best_score = score
                    candidates = [other]
                elif score == best_score:
                    candidates.append(other)
            if best_score < threshold or not candidates:
                continue
            winner = min(candidates, key=lambda p: (p.year, p.id))
            results.append(
                MatchResult(
                    citing_id=citing.id,
                    cited_id=winner.id,
                    score=best_score,
                    ambiguous=len(candidates) > 1,
                )
            )
    return results
