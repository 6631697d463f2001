"""Sentence segmentation shared by corpus conversion and the HTTP service.

Two views of the same rule set: one splitter walks raw text and returns
character spans, the other walks pre-tokenized token streams and returns
token index ranges. Both split after sentence-final ``. ! ?`` (plus the
CJK full-width terminators), skip a period that sits between digits, and
honour a stop-list of abbreviations that end in a period.
"""

from __future__ import annotations

# Joining separator used when an abstract is reconstructed from its sentences.
SENTENCE_SEPARATOR = " "

TERMINATORS = {".", "!", "?", "。", "！", "？"}

# Lowercased, without the trailing period. "e.g" keeps its internal dot so
# that reading back from the final period of "e.g." matches.
ABBREVIATIONS = {
    "vs",
    "e.g",
    "i.e",
    "dr",
    "prof",
    "fig",
    "figs",
    "al",  # "et al."
    "etc",
    "ca",
    "cf",
    "approx",
    "resp",
    "no",
    "st",
    "mr",
    "mrs",
}


def _preceding_word(text: str, dot_index: int) -> str:
    """Word (letters and internal dots) ending right before text[dot_index]."""
    j = dot_index
    while j > 0 and (text[j - 1].isalpha() or text[j - 1] == "."):
        j -= 1
    return text[j:dot_index].rstrip(".").lower()


_ASCII_TERMINATORS = {".", "!", "?"}


def split_text(text: str) -> list[tuple[int, int]]:
    """Split raw text into sentence spans.

    Returns half-open character ranges into ``text``, trimmed of
    surrounding whitespace, in document order. The spans never overlap and
    everything between consecutive spans is whitespace. An ASCII
    terminator only ends a sentence when followed by whitespace or the end
    of input, so decimals and dotted abbreviations stay intact; the CJK
    terminators split unconditionally (no space follows them in running
    CJK text).
    """
    spans: list[tuple[int, int]] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        ch = text[i]
        if ch in TERMINATORS:
            # consume the full terminator run ("?!", "...")
            end = i + 1
            while end < n and text[end] in TERMINATORS:
                end += 1
            ascii_only = all(c in _ASCII_TERMINATORS for c in text[i:end])
            if ascii_only and end < n and not text[end].isspace():
                i = end
                continue
            if text[i:end] == "." and _preceding_word(text, i) in ABBREVIATIONS:
                i = end
                continue
            spans.append((start, end))
            start = end
            i = end
            continue
        i += 1
    if start < n:
        spans.append((start, n))

    trimmed: list[tuple[int, int]] = []
    for s, e in spans:
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if s < e:
            trimmed.append((s, e))
    return trimmed


def _is_number(token: str) -> bool:
    return bool(token) and all(c.isdigit() or c in ".,%" for c in token) and any(c.isdigit() for c in token)


def split_token_stream(tokens: list[str]) -> list[tuple[int, int]]:
    """Split a token stream into sentence ranges.

    Returns half-open ``(start, end)`` token index ranges covering every
    token exactly once, in order. A boundary falls after a terminator
    token unless the abbreviation stop-list or the digit rule suppresses
    it.
    """
    ranges: list[tuple[int, int]] = []
    start = 0
    for i, tok in enumerate(tokens):
        if tok in TERMINATORS:
            if tok == ".":
                prev_tok = tokens[i - 1] if i > 0 else ""
                next_tok = tokens[i + 1] if i + 1 < len(tokens) else ""
                if _is_number(prev_tok) and _is_number(next_tok):
                    continue
                if prev_tok.rstrip(".").lower() in ABBREVIATIONS:
                    continue
            ranges.append((start, i + 1))
            start = i + 1
        elif len(tok) > 1 and tok[-1] in TERMINATORS:
            # tokenizations that keep the period attached ("treatment.")
            if tok[:-1].rstrip(".").lower() in ABBREVIATIONS:
                continue
            if tok[-1] == "." and _is_number(tok[:-1]):
                continue
            ranges.append((start, i + 1))
            start = i + 1
    if start < len(tokens):
        ranges.append((start, len(tokens)))
    return ranges
