"""Minimal PDF text extraction: content streams to positioned blocks.

Parses plain, FlateDecode, or ASCII85+Flate content streams and interprets the
text operators (BT/ET, Tm, Td/TD, Tj, ', TJ). Each BT..ET span becomes
one TextBlock with a bbox from the text positions seen inside it.
Encrypted or undecodable files are skipped with a logged reason.
"""

from __future__ import annotations

import base64
import logging
import re
import zlib
from pathlib import Path

from corpusforge.corpus import TextBlock

log = logging.getLogger(__name__)

_STREAM_RE = re.compile(rb"(?<!end)stream\r?\n")
_NUMBER_RE = re.compile(rb"[+-]?\d*\.?\d+")

_ESCAPES = {
    b"n": "\n", b"r": "\r", b"t": "\t", b"b": "\b", b"f": "\f",
    b"(": "(", b")": ")", b"\\": "\\",
}


class PdfError(Exception):
    pass


def _literal_string(data: bytes, i: int) -> tuple[str, int]:
    """Parse a (...) string starting at the opening parenthesis."""
    out = []
    depth = 1
    i += 1
    while i < len(data) and depth:
        c = data[i : i + 1]
        if c == b"\\":
            nxt = data[i + 1 : i + 2]
            if nxt.isdigit():
                j = i + 1
                digits = b""
                while j < len(data) and len(digits) < 3 and data[j : j + 1] in b"01234567":
                    digits += data[j : j + 1]
                    j += 1
                out.append(chr(int(digits, 8)))
                i = j
            else:
                out.append(_ESCAPES.get(nxt, nxt.decode("latin-1")))
                i += 2
        elif c == b"(":
            depth += 1
            out.append("(")
            i += 1
        elif c == b")":
            depth -= 1
            if depth:
                out.append(")")
            i += 1
        else:
            out.append(c.decode("latin-1"))
            i += 1
    return "".join(out), i


def _text_blocks(content: bytes, page: int) -> list[TextBlock]:
    blocks = []
    i = 0
    stack: list[object] = []
    x = y = 0.0
    in_text = False
    chunks: list[str] = []
    points: list[tuple[float, float]] = []

    def flush():
        nonlocal chunks, points
        text = "".join(chunks)
        if text.strip():
            xs = [p[0] for p in points] or [0.0]
            ys = [p[1] for p in points] or [0.0]
            blocks.append(TextBlock(
                page=page,
                bbox=(min(xs), min(ys), max(xs) + 1.0, max(ys) + 1.0),
                text=text,
            ))
        chunks, points = [], []

    while i < len(content):
        c = content[i : i + 1]
        if c in b" \t\r\n\x00":
            i += 1
        elif c == b"(":
            s, i = _literal_string(content, i)
            stack.append(s)
        elif c == b"<" and content[i + 1 : i + 2] != b"<":
            end = content.index(b">", i)
            hex_digits = re.sub(rb"\s", b"", content[i + 1 : end])
            if len(hex_digits) % 2:
                hex_digits += b"0"
            stack.append(bytes.fromhex(hex_digits.decode("ascii")).decode("latin-1"))
            i = end + 1
        elif c == b"[" or c == b"]":
            i += 1  # TJ arrays: strings already accumulate on the stack
        elif c == b"/":
            m = re.match(rb"/[^\s()<>\[\]{}/%]*", content[i:])
            stack.append(m.group().decode("latin-1"))
            i += m.end()
        elif _NUMBER_RE.match(content, i):
            m = _NUMBER_RE.match(content, i)
            stack.append(float(m.group()))
            i = m.end()
        else:
            m = re.match(rb"[A-Za-z'\"*]+", content[i:])
            if m is None:
                i += 1
                continue
            op = m.group()
            i += m.end()
            if op == b"BT":
                in_text = True
                x = y = 0.0
            elif op == b"ET":
                if in_text:
                    flush()
                in_text = False
            elif op in (b"Td", b"TD") and len(stack) >= 2:
                x += float(stack[-2])
                y += float(stack[-1])
            elif op == b"Tm" and len(stack) >= 6:
                x, y = float(stack[-2]), float(stack[-1])
            elif op in (b"Tj", b"'") and stack and isinstance(stack[-1], str):
                if in_text:
                    chunks.append(stack[-1])
                    points.append((x, y))
            elif op == b"TJ":
                if in_text:
                    strings = [s for s in stack if isinstance(s, str)]
                    chunks.extend(strings)
                    if strings:
                        points.append((x, y))
            stack = []
    if in_text:
        flush()
    return blocks


def extract_pdf_blocks(path) -> list[TextBlock]:
    data = Path(path).read_bytes()
    if not data.startswith(b"%PDF"):
        raise PdfError("not a PDF file")
    if b"/Encrypt" in data:
        raise PdfError("encrypted")
    blocks = []
    page = 0
    for m in _STREAM_RE.finditer(data):
        end = data.find(b"endstream", m.end())
        if end < 0:
            continue
        raw = data[m.end() : end]
        params = data[max(0, m.start() - 400) : m.start()]
        try:
            if b"/ASCII85Decode" in params:
                text = re.sub(rb"\s", b"", raw)
                text = text.removeprefix(b"<~").removesuffix(b"~>")
                raw = base64.a85decode(text)
            if b"/FlateDecode" in params:
                raw = zlib.decompress(raw.strip(b"\r\n"))
        except (zlib.error, ValueError):
            continue  # image or font stream; not text content
        if b"BT" not in raw:
            continue
        try:
            page_blocks = _text_blocks(raw, page)
        except (ValueError, IndexError):
            continue  # malformed stream; treat as non-text
        if page_blocks:
            blocks.extend(page_blocks)
            page += 1
    if not blocks:
        raise PdfError("no extractable text")
    return blocks


def pdf_to_blocks(paths) -> tuple[dict[str, list[TextBlock]], list[tuple[str, str]]]:
    """Extract every readable PDF; return (blocks by stem, skipped files)."""
    out: dict[str, list[TextBlock]] = {}
    skipped: list[tuple[str, str]] = []
    for path in paths:
        path = Path(path)
        try:
            out[path.stem] = extract_pdf_blocks(path)
        except (PdfError, OSError) as exc:
            log.warning("skipping %s: %s", path, exc)
            skipped.append((str(path), str(exc)))
    return out, skipped
