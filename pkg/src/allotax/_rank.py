# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from scipy.stats import rankdata

from ._artifacts import Meta, write_tsv
from ._errors import InvalidArgumentError
from ._frequency import FrequencyTable
from ._records import Comment


@dataclass(frozen=True, eq=False)
class RankedLexicon:
    """Tie-averaged descending ranks of every type of a combined lexicon.

    `types`, `frequencies` and `ranks` are aligned. Ranks are 64-bit floats
    (ties produce halves) and frequencies 64-bit integers; types absent from
    the corpus carry frequency 0 and share the rank of the zero tie block.
    """

    types: tuple[str, ...]
    frequencies: np.ndarray
    ranks: np.ndarray
    label: str = ""
    order: int = 1
    _index: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        self.frequencies.setflags(write=False)
        self.ranks.setflags(write=False)
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.types)})

    @property
    def lexicon_size(self) -> int:
        return len(self.types)

    def __len__(self) -> int:
        return len(self.types)

    def __contains__(self, type_: str) -> bool:
        return type_ in self._index

    def index_of(self, type_: str) -> int:
        return self._index[type_]

    def rank(self, type_: str) -> float:
        return float(self.ranks[self._index[type_]])

    def frequency(self, type_: str) -> int:
        return int(self.frequencies[self._index[type_]])

    @cached_property
    def entries(self) -> dict[str, tuple[int, float]]:
        return {
            t: (int(f), float(r))
            for t, f, r in zip(self.types, self.frequencies, self.ranks)
        }

    def align(self, types: Sequence[str]) -> np.ndarray:
        """Return the ranks of `types` in the given order."""
        return np.fromiter(
            (self.ranks[self._index[t]] for t in types), dtype=np.float64, count=len(types)
        )


def combined_lexicon(a: FrequencyTable, b: FrequencyTable) -> tuple[str, ...]:
    """Union of the types of two tables.

    Ordered by descending count in `a`, then descending count in `b`, then
    lexicographically, so the result is deterministic.

    Raises
    ------
    InvalidArgumentError
        If the tables hold n-grams of different orders.
    """
    if a.order != b.order:
        raise InvalidArgumentError(
            f"cannot combine tables of orders {a.order} and {b.order}"
        )
    union = set(a.counts).union(b.counts)
    return tuple(sorted(union, key=lambda t: (-a.get(t), -b.get(t), t)))


def tie_averaged_ranks(table: FrequencyTable, lexicon: Sequence[str]) -> RankedLexicon:
    """Rank every lexicon type by its frequency in `table`.

    The most frequent type has rank 1; `n` types sharing a frequency share
    the mean of the `n` positions they occupy. With `k` observed types in a
    lexicon of `W`, the exclusive (zero-frequency) types all receive
    ``k + (W - k + 1) / 2``.

    Parameters
    ----------
    table : FrequencyTable
        Counts of one system.
    lexicon : Sequence[str]
        The combined lexicon; must contain every key of `table`.

    Returns
    -------
    RankedLexicon
        Ranks aligned with `lexicon`.

    Raises
    ------
    InvalidArgumentError
        If `lexicon` repeats a type or misses a key of `table`.
    """
    types = tuple(lexicon)
    if len(set(types)) != len(types):
        raise InvalidArgumentError("lexicon contains duplicate types")

    missing = set(table.counts).difference(types)
    if missing:
        example = sorted(missing)[0]
        raise InvalidArgumentError(
            f"lexicon is missing {len(missing)} type(s) of table {table.label!r}, "
            f"e.g. {example!r}"
        )

    frequencies = np.fromiter(
        (table.counts.get(t, 0) for t in types), dtype=np.int64, count=len(types)
    )
    if len(types):
        ranks = rankdata(-frequencies, method="average").astype(np.float64)
    else:
        ranks = np.empty(0, dtype=np.float64)

    return RankedLexicon(types, frequencies, ranks, label=table.label, order=table.order)


def rank_pair(a: FrequencyTable, b: FrequencyTable) -> tuple[RankedLexicon, RankedLexicon]:
    """Rank two tables over their combined lexicon."""
    lexicon = combined_lexicon(a, b)
    return tie_averaged_ranks(a, lexicon), tie_averaged_ranks(b, lexicon)


def zipf_distribution(values: Iterable[int]) -> list[tuple[int, int]]:
    """Pair values sorted in descending order with ordinal ranks 1..N.

    Unlike `tie_averaged_ranks`, ties keep distinct ordinal ranks, which is
    the plotting convention for Zipf curves.

    Raises
    ------
    InvalidArgumentError
        If `values` is empty or holds a value below 1, which has no place
        on a log-log plot.
    """
    ordered = sorted(values, reverse=True)
    if not ordered:
        raise InvalidArgumentError("zipf distribution needs at least one value")
    if ordered[-1] < 1:
        raise InvalidArgumentError(f"zipf distribution needs positive values, got {ordered[-1]}")
    return [(rank, value) for rank, value in enumerate(ordered, start=1)]


def utc_date(timestamp: int) -> date:
    return datetime.fromtimestamp(timestamp, tz=timezone.utc).date()


def comments_per_day(comments: Iterable[Comment | int]) -> dict[date, int]:
    """Count comments per UTC calendar date.

    Every date between the first and last comment is present; days without
    comments (e.g. a community under quarantine) are reported as 0.
    """
    counts = Counter(
        utc_date(c.created_utc if isinstance(c, Comment) else c) for c in comments
    )
    if not counts:
        return {}

    day, last = min(counts), max(counts)
    series = {}
    while day <= last:
        series[day] = counts.get(day, 0)
        day += timedelta(days=1)
    return series


def write_ranked_lexicon(ranked: RankedLexicon, path: str | Path, meta: Meta | None = None) -> Path:
    """Write `type<TAB>frequency<TAB>rank`, by ascending rank then type."""
    order = sorted(range(len(ranked)), key=lambda i: (ranked.ranks[i], ranked.types[i]))
    rows = (
        (ranked.types[i], int(ranked.frequencies[i]), float(ranked.ranks[i])) for i in order
    )
    return write_tsv(path, rows, header=("type", "frequency", "rank"), meta=meta)
