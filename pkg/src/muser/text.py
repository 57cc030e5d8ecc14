"""Shared text utilities: normalization, tokenization, sentence splitting.

Tokenization is deliberately simple and deterministic: lower-cased word
tokens for alphabetic scripts, one token per CJK character. Chinese text
therefore gets character unigrams, the usual convention for Chinese ROUGE.
"""

from __future__ import annotations

import re
import unicodedata

# CJK unified ideographs plus the extension-A block covers the corpus text
# we handle; full punctuation-aware segmentation is out of scope.
_CJK = r"一-鿿㐀-䶿"

_TOKEN_RE = re.compile(rf"[{_CJK}]|[0-9A-Za-z_']+")

# Sentence terminators: ASCII and full-width CJK forms. A newline also ends
# a sentence so list-like article bodies split sanely.
_SENT_RE = re.compile(r"[^.!?。！？\n]+[.!?。！？]*")


def normalize(text: str) -> str:
    """NFC-normalize and collapse whitespace runs to single spaces."""
    return re.sub(r"\s+", " ", unicodedata.normalize("NFC", text)).strip()


def tokenize(text: str) -> list[str]:
    """Lower-cased tokens: words for alphabetic text, characters for CJK."""
    return _TOKEN_RE.findall(text.lower())


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation (. ! ? 。 ！ ？) and newlines."""
    return [m.group().strip() for m in _SENT_RE.finditer(text) if m.group().strip()]
