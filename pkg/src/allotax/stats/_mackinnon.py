# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

"""MacKinnon response surfaces for the single-series Dickey-Fuller tau.

Thin wrappers over `statsmodels.tsa.adfvalues`: approximate p-values follow
MacKinnon (1994) and finite-sample critical values MacKinnon (2010), both
for one integrated series (N = 1).
"""

import numpy as np

from statsmodels.tsa.adfvalues import mackinnoncrit, mackinnonp

from .._errors import InvalidArgumentError

REGRESSIONS = ("c", "ct")

CRIT_LEVELS = ("1%", "5%", "10%")


def _check(regression: str) -> str:
    if regression not in REGRESSIONS:
        raise InvalidArgumentError(f"regression must be one of {list(REGRESSIONS)}, got {regression!r}")
    return regression


def mackinnon_p(statistic: float, regression: str = "c") -> float:
    """Approximate p-value of a Dickey-Fuller tau statistic."""
    return float(mackinnonp(statistic, regression=_check(regression), N=1))


def mackinnon_crit(regression: str = "c", nobs: float = np.inf) -> dict[str, float]:
    """Critical values at 1%, 5% and 10% for a sample of `nobs` observations."""
    values = mackinnoncrit(N=1, regression=_check(regression), nobs=nobs)
    return {level: float(v) for level, v in zip(CRIT_LEVELS, values)}
