# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import math

from dataclasses import dataclass
from pathlib import Path
from typing import Annotated

import numpy as np

from annotated_types import Gt

from ._artifacts import Meta, write_json, write_tsv
from ._errors import InvalidArgumentError
from ._rank import RankedLexicon
from ._types import Direction

DEFAULT_ALPHA = 1 / 3


@dataclass(frozen=True)
class DivergenceConfig:
    """Tuning of rank-turbulence divergence.

    `alpha` damps the weight of the highest-ranked types as it approaches 0;
    1/3 gives moderate damping.
    """

    alpha: Annotated[float, Gt(0)] = DEFAULT_ALPHA

    def __post_init__(self):
        check_alpha(self.alpha)


def check_alpha(alpha: float) -> float:
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
        raise InvalidArgumentError(f"alpha must be a real number, got {alpha!r}")
    if not math.isfinite(alpha) or alpha <= 0:
        raise InvalidArgumentError(f"alpha must be finite and > 0, got {alpha}")
    return float(alpha)


def contribution(rank_a: float, rank_b: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Divergence contribution of one type ranked `rank_a` and `rank_b`.

    Computes ``|rank_a^-alpha - rank_b^-alpha| ** (1 / (alpha + 1))``; at
    alpha = 1/3 the outer exponent is exactly 3/4. The difference of powers
    is evaluated as ``lo^-alpha * (1 - (hi/lo)^-alpha)`` through `expm1` and
    `log1p`, so close ranks keep full relative precision.

    Raises
    ------
    InvalidArgumentError
        If a rank is below 1 or alpha is not a finite positive number.
    """
    alpha = check_alpha(alpha)
    if rank_a < 1 or rank_b < 1:
        raise InvalidArgumentError(f"ranks must be >= 1, got {rank_a} and {rank_b}")
    if rank_a == rank_b:
        return 0.0
    lo, hi = min(rank_a, rank_b), max(rank_a, rank_b)
    diff = lo**-alpha * -math.expm1(-alpha * math.log1p((hi - lo) / lo))
    return diff ** (1.0 / (alpha + 1.0))


def contributions(ranks_a: np.ndarray, ranks_b: np.ndarray, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
    """Vectorized `contribution` over aligned rank arrays."""
    alpha = check_alpha(alpha)
    ranks_a = np.asarray(ranks_a, dtype=np.float64)
    ranks_b = np.asarray(ranks_b, dtype=np.float64)
    if ranks_a.size and (ranks_a.min() < 1 or ranks_b.min() < 1):
        raise InvalidArgumentError("ranks must be >= 1")
    lo = np.minimum(ranks_a, ranks_b)
    hi = np.maximum(ranks_a, ranks_b)
    diff = lo**-alpha * -np.expm1(-alpha * np.log1p((hi - lo) / lo))
    values = diff ** (1.0 / (alpha + 1.0))
    # Note: equal ranks are exactly zero whatever the float path produced
    values[ranks_a == ranks_b] = 0.0
    return values


@dataclass(frozen=True, slots=True)
class DivergenceEntry:
    type: str
    rank_a: float
    rank_b: float
    contribution: float
    direction: Direction


@dataclass(frozen=True)
class DivergenceReport:
    """Per-type contributions to the divergence between systems A and B.

    Entries are sorted by descending contribution, ties lexicographically.
    `total` is the plain, unnormalized sum of contributions.
    """

    alpha: float
    entries: tuple[DivergenceEntry, ...]
    total: float
    label_a: str = "A"
    label_b: str = "B"

    def __len__(self) -> int:
        return len(self.entries)

    def by_type(self) -> dict[str, DivergenceEntry]:
        return {e.type: e for e in self.entries}

    def to_tsv(self, path: str | Path, meta: Meta | None = None) -> Path:
        rows = (
            (e.type, e.rank_a, e.rank_b, e.contribution, e.direction.value)
            for e in self.entries
        )
        return write_tsv(
            path,
            rows,
            header=("type", "rank_a", "rank_b", "contribution", "direction"),
            meta=meta,
        )

    def to_json(self, path: str | Path, meta: Meta | None = None) -> Path:
        payload = {
            "alpha": self.alpha,
            "label_a": self.label_a,
            "label_b": self.label_b,
            "total_unnormalized": self.total,
            "entries": [
                {
                    "type": e.type,
                    "rank_a": e.rank_a,
                    "rank_b": e.rank_b,
                    "contribution": e.contribution,
                    "direction": e.direction.value,
                }
                for e in self.entries
            ],
        }
        return write_json(path, payload, meta=meta)


def _direction(rank_a: float, rank_b: float) -> Direction:
    if rank_a < rank_b:
        return Direction.A
    if rank_b < rank_a:
        return Direction.B
    return Direction.NONE


def divergence_report(
    ranked_a: RankedLexicon,
    ranked_b: RankedLexicon,
    config: DivergenceConfig = DivergenceConfig(),
) -> DivergenceReport:
    """Build the rank-turbulence divergence report of two ranked systems.

    Parameters
    ----------
    ranked_a, ranked_b : RankedLexicon
        Ranks over the same combined lexicon (any type order).
    config : DivergenceConfig
        Divergence tuning.

    Returns
    -------
    DivergenceReport
        One entry per lexicon type. A type is biased toward A when its rank
        in A is smaller (more frequent) than in B.

    Raises
    ------
    InvalidArgumentError
        If the two systems were not ranked over the same lexicon.
    """
    types = ranked_a.types
    if len(types) != len(ranked_b.types) or any(t not in ranked_b for t in types):
        raise InvalidArgumentError("both systems must be ranked over the same lexicon")

    ranks_a = np.asarray(ranked_a.ranks)
    ranks_b = ranked_b.align(types)
    values = contributions(ranks_a, ranks_b, config.alpha)

    order = sorted(range(len(types)), key=lambda i: (-values[i], types[i]))
    entries = tuple(
        DivergenceEntry(
            types[i],
            float(ranks_a[i]),
            float(ranks_b[i]),
            float(values[i]),
            _direction(ranks_a[i], ranks_b[i]),
        )
        for i in order
    )

    return DivergenceReport(
        alpha=config.alpha,
        entries=entries,
        total=float(math.fsum(values)),
        label_a=ranked_a.label or "A",
        label_b=ranked_b.label or "B",
    )


def top_contributors(
    report: DivergenceReport, k: int = 40, direction: Direction | str | None = None
) -> list[DivergenceEntry]:
    """Return the first `k` report entries, optionally only those biased
    toward one system. Fewer are returned when the report runs out.

    Raises
    ------
    InvalidArgumentError
        If `k` is smaller than 1.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    if direction is not None:
        direction = Direction(direction)

    out = []
    for entry in report.entries:
        if direction is not None and entry.direction is not direction:
            continue
        out.append(entry)
        if len(out) == k:
            break
    return out
