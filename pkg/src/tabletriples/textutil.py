"""Shared text normalization: word tokens and sentence segmentation.

One tokenizer for everything (vocabulary, token counts, table signatures) so
reported statistics stay comparable across modules.
"""

from __future__ import annotations

import re

_WORD = re.compile(r"\w+", re.UNICODE)
# sentence-final punctuation followed by whitespace or end of text
_SENT_BREAK = re.compile(r"[.!?]+(?=\s|$)")


def word_tokens(text: str) -> list[str]:
    """Lowercase word tokens; punctuation is separated out and dropped."""
    return _WORD.findall(text.lower())


def sentence_count(text: str) -> int:
    """Number of sentence segments; a segment must contain a word character."""
    return sum(1 for seg in _SENT_BREAK.split(text) if _WORD.search(seg))
