# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import math

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._artifacts import Meta, write_tsv
from ._errors import InvalidArgumentError
from ._frequency import FrequencyTable
from ._rank import RankedLexicon, rank_pair
from ._rtd import DivergenceConfig, DivergenceEntry, DivergenceReport, divergence_report, top_contributors

Cell = tuple[int, int]

DEFAULT_BINS_PER_DECADE = 15
DEFAULT_LABEL_MIN_RANK = 100
SHIFT_SIZE = 40


def rank_bin(rank: float | np.ndarray, bins_per_decade: int) -> int | np.ndarray:
    """Logarithmic bin of a rank: ``floor(bins_per_decade * log10(rank))``."""
    return np.floor(bins_per_decade * np.log10(rank)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class HistogramGrid:
    """Counts of rank-rank pairs in logarithmic bins.

    `counts[i, j]` is the number of types whose rank in A falls in bin `i`
    and whose rank in B falls in bin `j`. The counts sum to the size of the
    combined lexicon.
    """

    counts: np.ndarray
    bins_per_decade: int
    max_rank: int
    members: dict[Cell, tuple[str, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.counts.setflags(write=False)

    @property
    def n_bins(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def nonempty(self) -> list[tuple[Cell, int]]:
        cells = np.argwhere(self.counts > 0)
        return [((int(i), int(j)), int(self.counts[i, j])) for i, j in cells]

    def bin_floor(self, index: int) -> float:
        """Smallest rank that falls in bin `index`."""
        return 10 ** (index / self.bins_per_decade)

    def to_tsv(self, path: str | Path, meta: Meta | None = None) -> Path:
        rows = ((i, j, count) for (i, j), count in self.nonempty())
        return write_tsv(path, rows, header=("cell_x", "cell_y", "count"), meta=meta)


def _check_same_lexicon(ranked_a: RankedLexicon, ranked_b: RankedLexicon) -> None:
    if len(ranked_a) != len(ranked_b) or any(t not in ranked_b for t in ranked_a.types):
        raise InvalidArgumentError("both systems must be ranked over the same lexicon")


def build_histogram(
    ranked_a: RankedLexicon,
    ranked_b: RankedLexicon,
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
) -> HistogramGrid:
    """Bin the rank-rank pair of every lexicon type.

    Parameters
    ----------
    ranked_a, ranked_b : RankedLexicon
        Ranks over the same combined lexicon.
    bins_per_decade : int
        Number of logarithmic bins per factor of ten in rank.

    Returns
    -------
    HistogramGrid
        Square grid large enough for the largest rank in either system,
        together with the types falling in each cell.

    Raises
    ------
    InvalidArgumentError
        If `bins_per_decade` is below 1 or the lexicons differ.
    """
    if isinstance(bins_per_decade, bool) or not isinstance(bins_per_decade, int) or bins_per_decade < 1:
        raise InvalidArgumentError(f"bins_per_decade must be an integer >= 1, got {bins_per_decade!r}")
    _check_same_lexicon(ranked_a, ranked_b)

    types = ranked_a.types
    ranks_a = np.asarray(ranked_a.ranks)
    ranks_b = ranked_b.align(types)

    if not len(types):
        return HistogramGrid(np.zeros((1, 1), dtype=np.int64), bins_per_decade, 0, {})

    max_rank = int(math.ceil(max(ranks_a.max(), ranks_b.max())))
    n_bins = int(rank_bin(max_rank, bins_per_decade)) + 1

    bins_a = rank_bin(ranks_a, bins_per_decade)
    bins_b = rank_bin(ranks_b, bins_per_decade)

    counts = np.zeros((n_bins, n_bins), dtype=np.int64)
    np.add.at(counts, (bins_a, bins_b), 1)

    members = defaultdict(list)
    for t, i, j in zip(types, bins_a, bins_b):
        members[(int(i), int(j))].append(t)

    return HistogramGrid(
        counts,
        bins_per_decade,
        max_rank,
        {cell: tuple(sorted(ts)) for cell, ts in sorted(members.items())},
    )


def outer_cells(grid: HistogramGrid, min_rank: float = DEFAULT_LABEL_MIN_RANK) -> list[Cell]:
    """Cells on the outer envelope of the histogram.

    Cells are grouped into bands of equal ``i + j`` (rows of the rotated
    diamond). In each band, the non-empty cell farthest from the diagonal on
    the A side (``j - i`` largest, positive) and on the B side (``i - j``
    largest, positive) are kept, provided the cell lies beyond `min_rank`
    in at least one system.
    """
    bands = {}
    for (i, j), _ in grid.nonempty():
        if i == j:
            continue
        if max(grid.bin_floor(i), grid.bin_floor(j)) <= min_rank:
            continue
        side = "A" if j > i else "B"
        key = (i + j, side)
        best = bands.get(key)
        if best is None or abs(i - j) > abs(best[0] - best[1]):
            bands[key] = (i, j)
    return sorted(bands.values())


def select_bin_labels(
    grid: HistogramGrid,
    members: dict[Cell, tuple[str, ...]] | None = None,
    seed: int = 0,
    min_rank: float = DEFAULT_LABEL_MIN_RANK,
) -> list[tuple[Cell, str]]:
    """Pick one type, uniformly at random, to label each outer cell.

    Parameters
    ----------
    grid : HistogramGrid
        Histogram to label.
    members : dict
        Types per cell; defaults to the membership recorded in `grid`.
    seed : int
        Seed of the generator; the same seed gives the same labels.
    min_rank : float
        Cells entirely within the top `min_rank` ranks of both systems are
        not labelled.

    Returns
    -------
    list[tuple[Cell, str]]
        `(cell, type)` pairs sorted by cell.
    """
    members = grid.members if members is None else members
    rng = np.random.default_rng(seed)
    labels = []
    for cell in outer_cells(grid, min_rank):
        candidates = sorted(members.get(cell, ()))
        if not candidates:
            continue
        labels.append((cell, candidates[int(rng.integers(len(candidates)))]))
    return labels


@dataclass(frozen=True, slots=True)
class BalanceBars:
    """Three (A, B) percentage pairs describing the two systems.

    Attributes
    ----------
    word_count : tuple[float, float]
        Share of the combined token total held by each system (sums to 100).
    lexicon : tuple[float, float]
        Share of the combined lexicon each system contains.
    exclusive : tuple[float, float]
        Share of the combined lexicon found only in that system.
    """

    word_count: tuple[float, float]
    lexicon: tuple[float, float]
    exclusive: tuple[float, float]

    def as_rows(self) -> list[tuple[str, float, float]]:
        return [
            ("word_count", *self.word_count),
            ("lexicon", *self.lexicon),
            ("exclusive", *self.exclusive),
        ]


def balance_bars(table_a: FrequencyTable, table_b: FrequencyTable) -> BalanceBars:
    """Compute the system balances shown between histogram and shift list.

    Raises
    ------
    InvalidArgumentError
        If the tables differ in order or both are empty.
    """
    if table_a.order != table_b.order:
        raise InvalidArgumentError(
            f"cannot compare tables of orders {table_a.order} and {table_b.order}"
        )
    grand_total = table_a.total + table_b.total
    if grand_total == 0:
        raise InvalidArgumentError("both corpora are empty")

    keys_a = set(table_a.counts)
    keys_b = set(table_b.counts)
    size = len(keys_a | keys_b)

    return BalanceBars(
        word_count=(100.0 * table_a.total / grand_total, 100.0 * table_b.total / grand_total),
        lexicon=(100.0 * len(keys_a) / size, 100.0 * len(keys_b) / size),
        exclusive=(100.0 * len(keys_a - keys_b) / size, 100.0 * len(keys_b - keys_a) / size),
    )


@dataclass(frozen=True, eq=False)
class AllotaxSpec:
    """Everything needed to draw an allotaxonograph."""

    grid: HistogramGrid
    bin_labels: list[tuple[Cell, str]]
    shift: list[DivergenceEntry]
    balance: BalanceBars
    seed: int
    alpha: float
    label_a: str = "A"
    label_b: str = "B"
    report: DivergenceReport | None = field(default=None, repr=False)

    def write_bundle(self, directory: str | Path, stem: str, meta: Meta | None = None) -> list[Path]:
        """Write the grid, shift list, balance bars and bin labels as TSV,
        plus the full divergence report as JSON when it is attached."""
        directory = Path(directory)
        shift_rows = (
            (e.type, e.rank_a, e.rank_b, e.contribution, e.direction.value) for e in self.shift
        )
        label_rows = ((i, j, t) for (i, j), t in self.bin_labels)
        paths = [
            self.grid.to_tsv(directory / f"{stem}.grid.tsv", meta),
            write_tsv(
                directory / f"{stem}.shift.tsv",
                shift_rows,
                header=("type", "rank_a", "rank_b", "contribution", "direction"),
                meta=meta,
            ),
            write_tsv(
                directory / f"{stem}.balance.tsv",
                self.balance.as_rows(),
                header=("bar", self.label_a, self.label_b),
                meta=meta,
            ),
            write_tsv(
                directory / f"{stem}.labels.tsv",
                label_rows,
                header=("cell_x", "cell_y", "type"),
                meta=meta,
            ),
        ]
        if self.report is not None:
            paths.append(self.report.to_json(directory / f"{stem}.divergence.json", meta))
        return paths


def build_allotax_spec(
    table_a: FrequencyTable,
    table_b: FrequencyTable,
    config: DivergenceConfig = DivergenceConfig(),
    bins_per_decade: int = DEFAULT_BINS_PER_DECADE,
    seed: int = 0,
    label_min_rank: float = DEFAULT_LABEL_MIN_RANK,
) -> AllotaxSpec:
    """Rank two tables and assemble a render-ready `AllotaxSpec`."""
    ranked_a, ranked_b = rank_pair(table_a, table_b)
    grid = build_histogram(ranked_a, ranked_b, bins_per_decade)
    report = divergence_report(ranked_a, ranked_b, config)
    return AllotaxSpec(
        grid=grid,
        bin_labels=select_bin_labels(grid, seed=seed, min_rank=label_min_rank),
        shift=top_contributors(report, SHIFT_SIZE),
        balance=balance_bars(table_a, table_b),
        seed=seed,
        alpha=config.alpha,
        label_a=table_a.label or "A",
        label_b=table_b.label or "B",
        report=report,
    )
