# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import logging

from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

from ._artifacts import Meta, iter_data_lines, read_metadata, write_tsv
from ._clean import CleaningConfig, clean_tokens
from ._errors import InsufficientSpanError, InvalidArgumentError, MissingMonthError, ParseError
from ._frequency import FrequencyTable
from ._rank import rank_pair
from ._records import Comment
from ._rtd import DEFAULT_ALPHA, check_alpha, contributions
from ._types import Month, TermSet, as_term_set, month_add, month_label

logger = logging.getLogger(__name__)

MONTH_ABBR = ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")

DOMINANCE_MODES: dict[str, Callable[[np.ndarray, np.ndarray, float], np.ndarray]] = {}


def register_mode(*names: str):
    """Decorator to register a scoring function for `dominant_term`.

    A scoring function receives the earlier ranks, the later ranks (aligned
    over one combined lexicon) and alpha, and returns one score per type;
    the highest score among the types that rose wins.
    """

    def decorator(func):
        for name in names:
            DOMINANCE_MODES[name] = func
        return func

    return decorator


@register_mode("divergence")
def divergence_score(ranks_earlier: np.ndarray, ranks_later: np.ndarray, alpha: float) -> np.ndarray:
    return contributions(ranks_later, ranks_earlier, alpha)


@register_mode("raw-rank-gain")
def rank_gain_score(ranks_earlier: np.ndarray, ranks_later: np.ndarray, alpha: float) -> np.ndarray:
    return ranks_earlier - ranks_later


def utc_month(timestamp: int) -> Month:
    moment = datetime.fromtimestamp(timestamp, tz=timezone.utc)
    return moment.year, moment.month


@dataclass(frozen=True)
class MonthlyPanel:
    """Per-month 1-gram tables over a contiguous range of UTC months.

    Months without comments hold empty tables and are listed in
    `empty_months`.
    """

    tables: Mapping[Month, FrequencyTable]
    label: str = ""

    def __post_init__(self):
        months = sorted(self.tables)
        if months:
            first, last = months[0], months[-1]
            span = (last[0] - first[0]) * 12 + last[1] - first[1] + 1
            if span != len(months):
                raise InvalidArgumentError("panel months must be contiguous")
        for month, table in self.tables.items():
            if table.order != 1:
                raise InvalidArgumentError(
                    f"panel table {month_label(month)} has order {table.order}, expected 1"
                )
        object.__setattr__(self, "tables", {m: self.tables[m] for m in months})

    @property
    def months(self) -> list[Month]:
        return list(self.tables)

    @property
    def totals(self) -> dict[Month, int]:
        return {m: t.total for m, t in self.tables.items()}

    @property
    def empty_months(self) -> list[Month]:
        return [m for m, t in self.tables.items() if t.total == 0]

    def __len__(self) -> int:
        return len(self.tables)

    def __contains__(self, month: Month) -> bool:
        return month in self.tables

    def table(self, month: Month) -> FrequencyTable:
        if month not in self.tables:
            raise MissingMonthError(month)
        return self.tables[month]

    def write(self, path: str | Path, meta: Meta | None = None) -> Path:
        """Write `month<TAB>ngram<TAB>count` rows; an empty month is one row
        with an empty n-gram and count 0."""

        def rows():
            for month, table in self.tables.items():
                if not len(table):
                    yield month_label(month), "", 0
                    continue
                for ngram, count in table.sorted_items():
                    yield month_label(month), ngram, count

        meta = dict(meta or {})
        meta.setdefault("label", self.label)
        return write_tsv(path, rows(), header=("month", "ngram", "count"), meta=meta)


def panel_from_counts(month_counts: Mapping[Month, Counter], label: str = "") -> MonthlyPanel:
    """Build a contiguous panel from per-month token counters."""
    if not month_counts:
        return MonthlyPanel({}, label)

    month, last = min(month_counts), max(month_counts)
    tables = {}
    while month <= last:
        tables[month] = FrequencyTable(1, month_counts.get(month, {}), label=label)
        month = month_add(month, 1)

    panel = MonthlyPanel(tables, label)
    if panel.empty_months:
        logger.warning(
            "panel %r has %d empty month(s): %s",
            label,
            len(panel.empty_months),
            ", ".join(month_label(m) for m in panel.empty_months),
        )
    return panel


def monthly_panels(
    comments: Iterable[Comment], cleaning: CleaningConfig = CleaningConfig(), label: str = ""
) -> MonthlyPanel:
    """Bucket cleaned comments by UTC calendar month into 1-gram tables."""
    month_counts = defaultdict(Counter)
    for comment in comments:
        month_counts[utc_month(comment.created_utc)].update(clean_tokens(comment.body, cleaning))
    return panel_from_counts(month_counts, label)


def _parse_month(value: str, path: str, number: int) -> Month:
    try:
        year, month = value.split("-")
        parsed = int(year), int(month)
    except ValueError:
        raise ParseError(f"malformed month {value!r}", path, number)
    if not 1 <= parsed[1] <= 12:
        raise ParseError(f"malformed month {value!r}", path, number)
    return parsed


def load_panel(path: str | Path) -> MonthlyPanel:
    """Read a panel written by `MonthlyPanel.write`."""
    path = str(path)
    label = read_metadata(path).get("label", "")
    month_counts = {}
    lines = iter_data_lines(path)
    for number, line in lines:
        if line == "month\tngram\tcount":
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected 'month<TAB>ngram<TAB>count'", path, number)
        month = _parse_month(parts[0], path, number)
        counts = month_counts.setdefault(month, Counter())
        try:
            count = int(parts[2])
        except ValueError:
            raise ParseError(f"count {parts[2]!r} is not an integer", path, number)
        if parts[1] == "" and count == 0:
            continue
        if count < 1 or not parts[1]:
            raise ParseError("n-gram rows need a token and a count >= 1", path, number)
        counts[parts[1]] += count

    if not month_counts:
        return MonthlyPanel({}, label)

    month, last = min(month_counts), max(month_counts)
    while month <= last:
        if month not in month_counts:
            raise ParseError(f"month {month_label(month)} is missing from the panel", path)
        month = month_add(month, 1)
    return MonthlyPanel(
        {m: FrequencyTable(1, c, label=label) for m, c in month_counts.items()}, label
    )


@dataclass(frozen=True, slots=True)
class DominanceEntry:
    """The narratively dominant term of one month compared with a lagged month."""

    later: Month
    earlier: Month
    term: str
    rank_earlier: float
    rank_later: float
    score: float
    mode: str


def dominant_term(
    panel: MonthlyPanel,
    later: Month,
    lag_months: int = 12,
    mode: str = "divergence",
    alpha: float = DEFAULT_ALPHA,
) -> DominanceEntry | None:
    """Find the term that rose most from `lag_months` before `later` to `later`.

    Both months are ranked over their combined lexicon. Only terms whose
    rank improved (rank_later < rank_earlier) are candidates. In
    "divergence" mode the candidate with the largest divergence
    contribution wins; in "raw-rank-gain" mode the largest rank gain wins.
    Ties go to the lexicographically smallest term.

    Returns
    -------
    DominanceEntry | None
        `None` when no term rose (e.g. identical months).

    Raises
    ------
    MissingMonthError
        If either month is outside the panel.
    InvalidArgumentError
        If the lag is below 1 or the mode is unknown.
    """
    if lag_months < 1:
        raise InvalidArgumentError(f"lag must be >= 1 month, got {lag_months}")
    if mode not in DOMINANCE_MODES:
        raise InvalidArgumentError(
            f"unknown mode {mode!r}, expected one of {sorted(DOMINANCE_MODES)}"
        )
    alpha = check_alpha(alpha)

    earlier = month_add(later, -lag_months)
    earlier_table = panel.table(earlier)
    later_table = panel.table(later)

    ranked_earlier, ranked_later = rank_pair(earlier_table, later_table)
    if not len(ranked_earlier):
        return None

    ranks_earlier = np.asarray(ranked_earlier.ranks)
    ranks_later = np.asarray(ranked_later.ranks)
    rose = ranks_later < ranks_earlier
    if not rose.any():
        return None

    scores = DOMINANCE_MODES[mode](ranks_earlier, ranks_later, alpha)
    types = ranked_earlier.types
    best = min(np.flatnonzero(rose), key=lambda i: (-scores[i], types[i]))

    return DominanceEntry(
        later=later,
        earlier=earlier,
        term=types[best],
        rank_earlier=float(ranks_earlier[best]),
        rank_later=float(ranks_later[best]),
        score=float(scores[best]),
        mode=mode,
    )


@dataclass(frozen=True)
class DominanceTable:
    """Dominant terms for every month that has a lagged partner.

    `cells` holds `(earlier, later, entry)` in chronological order; `entry`
    is `None` when no term rose between the two months.
    """

    lag_months: int
    mode: str
    cells: tuple[tuple[Month, Month, DominanceEntry | None], ...]

    def __len__(self) -> int:
        return len(self.cells)

    def row_label(self, earlier: Month, later: Month) -> str:
        if self.lag_months % 12 == 0:
            return MONTH_ABBR[later[1] - 1]
        return f"{MONTH_ABBR[earlier[1] - 1]}-{MONTH_ABBR[later[1] - 1]}"

    def column_label(self, earlier: Month, later: Month) -> str:
        if self.lag_months >= 12:
            return f"{earlier[0]}-{later[0]}"
        # Note: a half-year lag spans a year pair even when both months share a year
        if self.lag_months >= 6:
            return f"{earlier[0]}-{earlier[0] + 1}"
        return str(earlier[0])

    def grid(self) -> tuple[list[str], list[str], dict[tuple[str, str], str]]:
        """Lay the cells out with one row per month of the year (ordered by
        the earlier month) and one column per year pair."""
        rows = {}
        columns = {}
        values = {}
        for earlier, later, entry in self.cells:
            row = self.row_label(earlier, later)
            column = self.column_label(earlier, later)
            rows.setdefault(row, earlier[1])
            columns.setdefault(column, earlier[0])
            values[(row, column)] = entry.term if entry is not None else ""
        row_labels = sorted(rows, key=rows.get)
        column_labels = sorted(columns, key=columns.get)
        return row_labels, column_labels, values

    def to_tsv(self, path: str | Path, meta: Meta | None = None) -> Path:
        def rows():
            for earlier, later, entry in self.cells:
                if entry is None:
                    yield month_label(earlier), month_label(later), "", "", "", "", self.mode
                    continue
                yield (
                    month_label(earlier),
                    month_label(later),
                    entry.term,
                    entry.rank_earlier,
                    entry.rank_later,
                    entry.score,
                    entry.mode,
                )

        return write_tsv(
            path,
            rows(),
            header=("earlier", "later", "term", "rank_earlier", "rank_later", "score", "mode"),
            meta=meta,
        )

    def to_text(self) -> str:
        """Render the grid as aligned plain text."""
        row_labels, column_labels, values = self.grid()
        header = ["Month"] + column_labels
        body = [[r] + [values.get((r, c), "") for c in column_labels] for r in row_labels]
        widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in [header] + body]
        return "\n".join(lines) + "\n"


def dominance_table(
    panel: MonthlyPanel,
    lag_months: int = 12,
    mode: str = "divergence",
    alpha: float = DEFAULT_ALPHA,
) -> DominanceTable:
    """Compute `dominant_term` for every month with a lagged partner.

    Raises
    ------
    InsufficientSpanError
        If the panel covers fewer than `lag_months + 1` months.
    """
    if lag_months < 1:
        raise InvalidArgumentError(f"lag must be >= 1 month, got {lag_months}")
    if len(panel) < lag_months + 1:
        raise InsufficientSpanError(
            f"panel spans {len(panel)} month(s), a lag of {lag_months} needs at least "
            f"{lag_months + 1}"
        )

    cells = []
    for later in panel.months[lag_months:]:
        earlier = month_add(later, -lag_months)
        entry = dominant_term(panel, later, lag_months, mode, alpha)
        cells.append((earlier, later, entry))
    return DominanceTable(lag_months, mode, tuple(cells))


def relative_frequency_series(panel: MonthlyPanel, term: TermSet) -> list[tuple[Month, float]]:
    """Monthly count of a term (or summed term group) over the month's total.

    Months where the term is absent, or that are empty, give 0.
    """
    terms = as_term_set(term)
    if not terms:
        raise InvalidArgumentError("at least one term is required")
    series = []
    for month, table in panel.tables.items():
        count = sum(table.get(t) for t in terms)
        series.append((month, count / table.total if table.total else 0.0))
    return series


def write_series(series: list[tuple[Month, float]], path: str | Path, meta: Meta | None = None) -> Path:
    return write_tsv(
        path,
        ((month_label(m), v) for m, v in series),
        header=("month", "relative_frequency"),
        meta=meta,
    )
