# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import unicodedata

from dataclasses import dataclass
from typing import Iterable, Sequence

import regex

from ._errors import InvalidArgumentError

DEFAULT_ARTIFACTS = ("&gt", "x200b", "&amp")

# Note: Unicode punctuation plus the ASCII symbols that are not in a P* class
_PUNCT = r"\p{P}$+<=>^`|~"
_PUNCT_RUN = regex.compile(f"[{_PUNCT}]+")
# Entity prefixes stay attached so "&gt;" trims to "&gt"
_EDGE_PUNCT = regex.compile(f"(?V1)^[[{_PUNCT}]--[&#]]+|[[{_PUNCT}]--[&#]]+$")
_DASH = regex.compile(r"\p{Pd}+")
# "&amp;" prefixes cover entities that were escaped twice
_ENTITY = regex.compile(r"&(?:amp;)*#?\w+;")

_ZERO_WIDTH = str.maketrans({"\u200b": " ", "\ufeff": " "})


@dataclass(frozen=True)
class CleaningConfig:
    """Options for `clean_text`.

    Attributes
    ----------
    artifacts : tuple[str, ...]
        HTML artifacts removed as whole tokens (compared lower-case).
    split_hyphens : bool
        If `True`, dashes split a token in two ("well-known" -> "well",
        "known"); otherwise they are removed like other punctuation
        ("wellknown").
    """

    artifacts: tuple[str, ...] = DEFAULT_ARTIFACTS
    split_hyphens: bool = False

    def __post_init__(self):
        object.__setattr__(self, "artifacts", tuple(a.lower() for a in self.artifacts))


@dataclass(frozen=True, slots=True)
class TokenStream:
    tokens: tuple[str, ...]
    comment_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)


def clean_tokens(body: str, config: CleaningConfig = CleaningConfig()) -> list[str]:
    """Lower-case, split and strip a comment body into word tokens.

    The body is NFKC-normalized before lower-casing, so compatibility
    letters without a lowercase form (ℍ, ϒ, fullwidth Ｈ) fold to their
    plain equivalents. The rules, applied to each whitespace-separated
    token in order:

    1. tokens containing "http" are dropped (links);
    2. complete HTML entities ("&gt;", "&#39;", double-escaped
       "&amp;nbsp;") are deleted wherever they occur;
    3. tokens equal to an artifact, either as-is or with surrounding
       punctuation trimmed ("&gt" left by a truncated entity), are dropped;
    4. all punctuation is deleted in place, so "don't" becomes "dont";
    5. tokens left empty, equal to an artifact or now containing "http"
       ("ht.tp") are dropped.

    The zero-width space codepoint is treated as whitespace, so both the
    literal "x200b" and U+200B disappear.
    """
    artifacts = config.artifacts
    body = unicodedata.normalize("NFKC", body.translate(_ZERO_WIDTH)).lower()
    out = []
    for token in body.split():
        # Note: Fast path, most tokens carry no punctuation at all
        if token.isalnum():
            if token not in artifacts and "http" not in token:
                out.append(token)
            continue

        if "http" in token:
            continue
        if "&" in token:
            token = _ENTITY.sub("", token)
            if not token:
                continue
        if token in artifacts or _EDGE_PUNCT.sub("", token) in artifacts:
            continue

        parts = _DASH.split(token) if config.split_hyphens else (token,)
        for part in parts:
            part = _PUNCT_RUN.sub("", part)
            if part and part not in artifacts and "http" not in part:
                out.append(part)
    return out


def clean_text(
    body: str, config: CleaningConfig = CleaningConfig(), comment_id: str = ""
) -> TokenStream:
    """Clean a comment body into a `TokenStream` (see `clean_tokens`)."""
    return TokenStream(tuple(clean_tokens(body, config)), comment_id)


def extract_ngrams(tokens: Sequence[str] | TokenStream, n: int) -> list[str]:
    """Return the space-joined n-grams of one comment, in order.

    Parameters
    ----------
    tokens : Sequence[str] | TokenStream
        Tokens of a single comment; n-grams never span comments.
    n : int
        N-gram order, at least 1.

    Returns
    -------
    list[str]
        `max(0, len(tokens) - n + 1)` n-grams.

    Raises
    ------
    InvalidArgumentError
        If `n` is smaller than 1.
    """
    if isinstance(tokens, TokenStream):
        tokens = tokens.tokens
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"n-gram order must be an integer >= 1, got {n!r}")
    if n == 1:
        return list(tokens)
    return [" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def iter_ngrams(streams: Iterable[Sequence[str]], n: int) -> Iterable[str]:
    """Chain `extract_ngrams` over many comments."""
    for tokens in streams:
        yield from extract_ngrams(tokens, n)
