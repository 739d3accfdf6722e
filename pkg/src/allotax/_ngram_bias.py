# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from dataclasses import dataclass
from typing import Literal

from ._errors import InvalidArgumentError
from ._frequency import FrequencyTable
from ._rank import rank_pair
from ._rtd import DEFAULT_ALPHA, DivergenceConfig, check_alpha, divergence_report
from ._types import Direction, TermSet, as_term_set

Scope = Literal["filtered", "full"]


@dataclass(frozen=True)
class BiasQuery:
    """Which n-grams to look for and how to rank them.

    Attributes
    ----------
    term : str | frozenset[str]
        A single token or a group of tokens ("roastie,roasties"); an n-gram
        matches when any of its tokens is in the group.
    order : int
        2 for bigrams, 3 for trigrams.
    k : int
        Maximum number of n-grams returned.
    alpha : float
        Divergence tuning.
    target : Direction
        System the returned n-grams must be biased toward.
    scope : {"filtered", "full"}
        Rank over the sub-lexicon of matching n-grams ("filtered") or over
        the full tables and then keep matching n-grams ("full").
    """

    term: TermSet
    order: int = 2
    k: int = 10
    alpha: float = DEFAULT_ALPHA
    target: Direction = Direction.A
    scope: Scope = "filtered"

    def __post_init__(self):
        object.__setattr__(self, "term", check_terms(self.term))
        object.__setattr__(self, "target", Direction(self.target))
        if self.order not in (2, 3):
            raise InvalidArgumentError(f"order must be 2 or 3, got {self.order}")
        if self.k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {self.k}")
        if self.target is Direction.NONE:
            raise InvalidArgumentError("target must be system A or B")
        if self.scope not in ("filtered", "full"):
            raise InvalidArgumentError(f"unknown scope {self.scope!r}")
        check_alpha(self.alpha)


@dataclass(frozen=True, slots=True)
class BiasEntry:
    ngram: str
    rank_a: float
    rank_b: float
    contribution: float


def check_terms(term: TermSet) -> frozenset[str]:
    terms = as_term_set(term)
    if not terms:
        raise InvalidArgumentError("at least one term is required")
    for t in terms:
        if len(t.split()) != 1 or t != t.strip() or any(c.isspace() for c in t):
            raise InvalidArgumentError(f"term {t!r} must be a single token")
    return terms


def filter_ngrams_containing(table: FrequencyTable, term: TermSet) -> FrequencyTable:
    """Keep the n-grams having `term` (or any term of a group) as one of
    their tokens. Matching is on whole tokens, never substrings.

    Raises
    ------
    InvalidArgumentError
        If a term contains whitespace.
    """
    terms = check_terms(term)
    kept = {
        ngram: count
        for ngram, count in table.counts.items()
        if not terms.isdisjoint(ngram.split(" "))
    }
    return FrequencyTable(table.order, kept, label=table.label)


def top_biased(table_a: FrequencyTable, table_b: FrequencyTable, query: BiasQuery) -> list[BiasEntry]:
    """Top n-grams containing the query term that are biased toward the
    query's target system.

    Both tables are filtered first; in the default "filtered" scope the
    combined lexicon and tie-averaged ranks are then built over the matching
    n-grams only. Results are ordered by descending contribution, ties
    lexicographically. An empty filtered lexicon gives an empty list.

    Raises
    ------
    InvalidArgumentError
        If the tables differ in order or do not hold `query.order`-grams.
    """
    if table_a.order != table_b.order:
        raise InvalidArgumentError(
            f"cannot compare tables of orders {table_a.order} and {table_b.order}"
        )
    if table_a.order != query.order:
        raise InvalidArgumentError(
            f"query asks for order {query.order} but tables hold order {table_a.order}"
        )

    sub_a = filter_ngrams_containing(table_a, query.term)
    sub_b = filter_ngrams_containing(table_b, query.term)
    if not len(sub_a) and not len(sub_b):
        return []

    if query.scope == "filtered":
        ranked_a, ranked_b = rank_pair(sub_a, sub_b)
    else:
        ranked_a, ranked_b = rank_pair(table_a, table_b)

    report = divergence_report(ranked_a, ranked_b, DivergenceConfig(query.alpha))

    out = []
    for entry in report.entries:
        if entry.direction is not query.target:
            continue
        if query.scope == "full" and entry.type not in sub_a and entry.type not in sub_b:
            continue
        out.append(BiasEntry(entry.type, entry.rank_a, entry.rank_b, entry.contribution))
        if len(out) == query.k:
            break
    return out
