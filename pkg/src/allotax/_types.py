# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from enum import Enum
from typing import Iterable

Month = tuple[int, int]

TermSet = str | Iterable[str]


class Direction(str, Enum):
    """Which system a type is biased toward in a pairwise comparison."""

    A = "A"
    B = "B"
    NONE = "none"

    def flipped(self) -> "Direction":
        if self is Direction.A:
            return Direction.B
        if self is Direction.B:
            return Direction.A
        return Direction.NONE


def as_term_set(terms: TermSet) -> frozenset[str]:
    """Normalize a single term, a comma-separated group ("incel,incels") or an
    iterable of terms into a frozen set of tokens."""
    if isinstance(terms, str):
        parts = terms.split(",")
    else:
        parts = list(terms)
    return frozenset(p.strip() for p in parts if p.strip())


def month_add(month: Month, offset: int) -> Month:
    """Shift a (year, month) pair by `offset` calendar months."""
    index = month[0] * 12 + (month[1] - 1) + offset
    return index // 12, index % 12 + 1


def month_label(month: Month) -> str:
    return f"{month[0]:04d}-{month[1]:02d}"
