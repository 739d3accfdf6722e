# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

from dataclasses import dataclass
from typing import Literal

import numpy as np

from scipy.stats import ks_2samp

from .._errors import InvalidArgumentError

KsMode = Literal["asymptotic", "subsampled"]

DEFAULT_SUBSAMPLE_SIZE = 1000
DEFAULT_REPETITIONS = 100


@dataclass(frozen=True, slots=True)
class KsResult:
    """Two-sample Kolmogorov-Smirnov outcome.

    `statistic` is always computed on the full samples. In "subsampled"
    mode `p_value` is the median over seeded equal-size subsamples.
    """

    statistic: float
    p_value: float
    n: int
    m: int
    mode: KsMode


def _ks(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    result = ks_2samp(x, y, alternative="two-sided", method="asymp")
    return float(result.statistic), float(result.pvalue)


def ks_two_sample(
    x,
    y,
    mode: KsMode = "asymptotic",
    subsample_size: int = DEFAULT_SUBSAMPLE_SIZE,
    repetitions: int = DEFAULT_REPETITIONS,
    seed: int = 0,
) -> KsResult:
    """Two-sided two-sample Kolmogorov-Smirnov test.

    Parameters
    ----------
    x, y : array-like
        Samples to compare.
    mode : {"asymptotic", "subsampled"}
        "asymptotic" runs `scipy.stats.ks_2samp` with its asymptotic
        p-value on the full samples. "subsampled" repeats that test on
        `repetitions` pairs of subsamples of at most `subsample_size`
        points, drawn without replacement, and reports the median p-value;
        with very large samples the plain test rejects on negligible gaps.
    subsample_size, repetitions : int
        Subsampling parameters.
    seed : int
        Seed of the subsampling generator.

    Raises
    ------
    InvalidArgumentError
        If a sample is empty or a parameter is out of range.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if not len(x) or not len(y):
        raise InvalidArgumentError("both samples must be non-empty")
    if mode not in ("asymptotic", "subsampled"):
        raise InvalidArgumentError(f"unknown mode {mode!r}")

    n, m = len(x), len(y)
    d, p_value = _ks(x, y)

    if mode == "asymptotic":
        return KsResult(d, p_value, n, m, mode)

    if subsample_size < 1 or repetitions < 1:
        raise InvalidArgumentError("subsample_size and repetitions must be >= 1")

    rng = np.random.default_rng(seed)
    sx, sy = min(subsample_size, n), min(subsample_size, m)
    p_values = np.empty(repetitions)
    for r in range(repetitions):
        xs = rng.choice(x, size=sx, replace=False)
        ys = rng.choice(y, size=sy, replace=False)
        p_values[r] = _ks(xs, ys)[1]

    return KsResult(d, float(np.median(p_values)), n, m, mode)
