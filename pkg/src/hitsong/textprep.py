"""Token normalization for song titles and lyrics.

Titles and lyrics go through the same pipeline: lowercase, split on
anything that is not a letter, drop tokens shorter than 4 characters,
drop stopwords.  The stopword list shipped with the package is a fixed
snapshot (data/stopwords.txt) so tokenization is bit-stable across
installs; a file override is supported for experiments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import ConfigError

# Letter runs only: digits, punctuation and apostrophes all act as separators,
# so "don't" yields "don" and "t" (both removed by the length filter).
_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)

MIN_TOKEN_LENGTH = 4


@dataclass(frozen=True)
class TokenDoc:
    """Normalized token list for one document."""

    doc_id: int
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """Return the stopword set: the embedded list, or a one-word-per-line override file."""
    if path is None:
        text = resources.files("hitsong.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read stopword file {path!r}: {exc}") from exc
    return frozenset(w for w in (line.strip() for line in text.splitlines()) if w)


def tokenize_normalize(text: str, stopwords: frozenset[str] | set[str], doc_id: int = 0) -> TokenDoc:
    """Lowercase, split on non-letters, drop tokens under 4 chars and stopwords."""
    tokens = tuple(
        tok
        for tok in _WORD_RE.findall(text.lower())
        if len(tok) >= MIN_TOKEN_LENGTH and tok not in stopwords
    )
    return TokenDoc(doc_id=doc_id, tokens=tokens)


def tokenize_corpus(texts: list[str], stopwords: frozenset[str] | set[str]) -> list[TokenDoc]:
    """Tokenize a list of documents, doc_id = position in the list."""
    return [tokenize_normalize(t, stopwords, doc_id=i) for i, t in enumerate(texts)]
