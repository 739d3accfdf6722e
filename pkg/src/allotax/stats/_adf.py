# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import logging
import math

from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Pool
from typing import Callable, Literal

import numpy as np

from statsmodels.tsa.stattools import adfuller

from .._errors import InvalidArgumentError

logger = logging.getLogger(__name__)

Regression = Literal["c", "ct"]

MIN_OBSERVATIONS = 10

GENERATORS: dict[str, Callable[[np.random.Generator, int], np.ndarray]] = {}


def register_generator(name: str):
    """Register a simulated-series generator for `rejection_rate`."""

    def decorator(fn):
        GENERATORS[name] = fn
        return fn

    return decorator


@register_generator("random-walk")
def random_walk(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.cumsum(rng.standard_normal(n))


@register_generator("white-noise")
def white_noise(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n)


@dataclass(frozen=True)
class AdfResult:
    """Outcome of an augmented Dickey-Fuller test.

    Attributes
    ----------
    statistic : float
        t-statistic of the lagged level coefficient.
    p_value : float
        MacKinnon approximate p-value; small values reject the unit root.
    lags_used : int
        Number of lagged differences in the final regression.
    n_obs : int
        Observations in the final regression.
    regression : {"c", "ct"}
        Deterministic terms: constant, or constant and linear trend.
    critical_values : dict[str, float]
        Finite-sample critical values at 1%, 5% and 10%.
    """

    statistic: float
    p_value: float
    lags_used: int
    n_obs: int
    regression: Regression = "c"
    critical_values: dict[str, float] = field(default_factory=dict)

    def stars(self) -> str:
        if self.p_value < 0.05:
            return "*"
        if self.p_value < 0.10:
            return "**"
        return ""


def schwert_maxlag(n: int, regression: Regression = "c") -> int:
    """Default maximum lag ``floor(12 * (n / 100) ** 0.25)``, capped so the
    largest regression still has more observations than regressors."""
    ntrend = 1 if regression == "c" else 2
    return min(int(math.floor(12.0 * (n / 100.0) ** 0.25)), n // 2 - ntrend - 1)


def adf_test(series, max_lags: int | None = None, regression: Regression = "c") -> AdfResult:
    """Augmented Dickey-Fuller test of the unit-root null.

    Runs `statsmodels.tsa.stattools.adfuller`, which fits
    ``dy_t = c [+ b t] + g y_{t-1} + sum_i phi_i dy_{t-i} + e`` by OLS. The
    lag order starts at `max_lags` (the Schwert rule by default) and drops
    the highest lag while its |t| is below the one-sided 5% normal quantile
    (``autolag="t-stat"``); the search uses a common sample and the chosen
    order is then refitted on all available observations.

    Parameters
    ----------
    series : array-like
        Observations in time order.
    max_lags : int
        Largest lag order considered.
    regression : {"c", "ct"}
        Deterministic terms of the regression.

    Returns
    -------
    AdfResult

    Raises
    ------
    InvalidArgumentError
        If the series is constant, contains non-finite values or is too short
        for the requested lags.
    """
    if regression not in ("c", "ct"):
        raise InvalidArgumentError(f"regression must be 'c' or 'ct', got {regression!r}")

    y = np.asarray(series, dtype=np.float64)
    if y.ndim != 1:
        raise InvalidArgumentError("series must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise InvalidArgumentError("series contains non-finite values")

    n = len(y)
    if n < MIN_OBSERVATIONS:
        raise InvalidArgumentError(f"series of length {n} is too short (need >= {MIN_OBSERVATIONS})")
    if np.ptp(y) == 0:
        raise InvalidArgumentError("series is constant")

    ntrend = 1 if regression == "c" else 2
    if max_lags is None:
        max_lags = max(min(schwert_maxlag(n, regression), n - MIN_OBSERVATIONS), 0)
    elif max_lags < 0:
        raise InvalidArgumentError(f"max_lags must be >= 0, got {max_lags}")
    if max_lags < 0 or n < MIN_OBSERVATIONS + max_lags or max_lags > n // 2 - ntrend - 1:
        raise InvalidArgumentError(f"series of length {n} is too short for {max_lags} lags")

    try:
        statistic, p_value, lags, nobs, critical, _ = adfuller(
            y, maxlag=max_lags, regression=regression, autolag="t-stat"
        )
    except (ValueError, np.linalg.LinAlgError) as e:
        raise InvalidArgumentError(f"adf regression failed: {e}") from None
    if not np.isfinite(statistic):
        raise InvalidArgumentError("regressors are collinear; the series is degenerate")

    logger.debug("adf: n=%d maxlag=%d usedlag=%d stat=%.4f", n, max_lags, lags, statistic)

    return AdfResult(
        statistic=float(statistic),
        p_value=float(p_value),
        lags_used=int(lags),
        n_obs=int(nobs),
        regression=regression,
        critical_values={level: float(v) for level, v in critical.items()},
    )


def _trial(seed: np.random.SeedSequence, generator: str, n: int, level: float, regression: Regression) -> bool:
    rng = np.random.default_rng(seed)
    return adf_test(GENERATORS[generator](rng, n), regression=regression).p_value < level


def rejection_rate(
    generator: str,
    n_trials: int = 2000,
    n: int = 500,
    level: float = 0.05,
    seed: int = 0,
    threads: int = 1,
    regression: Regression = "c",
) -> float:
    """Share of simulated series on which the unit root is rejected.

    Each trial draws from its own child of ``SeedSequence(seed)``, so the
    rate depends only on the arguments, never on `threads`.

    Raises
    ------
    InvalidArgumentError
        If the generator is unknown or a count is not positive.
    """
    if generator not in GENERATORS:
        raise InvalidArgumentError(f"unknown generator {generator!r}; choose from {sorted(GENERATORS)}")
    if n_trials < 1 or threads < 1:
        raise InvalidArgumentError("n_trials and threads must be >= 1")
    if not 0 < level < 1:
        raise InvalidArgumentError(f"level must be in (0, 1), got {level}")

    seeds = np.random.SeedSequence(seed).spawn(n_trials)
    work = partial(_trial, generator=generator, n=n, level=level, regression=regression)

    if threads > 1:
        with Pool(threads) as pool:
            rejected = pool.map(work, seeds)
    else:
        rejected = [work(s) for s in seeds]

    return sum(rejected) / n_trials
