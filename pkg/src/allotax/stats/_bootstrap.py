# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import math

from dataclasses import dataclass

import numpy as np

from .._errors import InvalidArgumentError


@dataclass(frozen=True)
class BootstrapResult:
    means: tuple[float, ...]
    n_samples: int = 1000
    fraction: float = 0.10
    seed: int = 0

    @property
    def center(self) -> float:
        return float(np.mean(self.means))

    @property
    def spread(self) -> float:
        return float(np.std(self.means, ddof=1)) if len(self.means) > 1 else 0.0


def bootstrap_means(values, n_samples: int = 1000, fraction: float = 0.10, seed: int = 0) -> BootstrapResult:
    """Means of `n_samples` resamples, drawn with replacement, each of size
    ``ceil(fraction * len(values))``.

    Raises
    ------
    InvalidArgumentError
        If `values` is empty, `fraction` is outside (0, 1] or `n_samples`
        is not positive.
    """
    data = np.asarray(values, dtype=np.float64).ravel()
    if not len(data):
        raise InvalidArgumentError("cannot bootstrap an empty sample")
    if not 0 < fraction <= 1:
        raise InvalidArgumentError(f"fraction must be in (0, 1], got {fraction}")
    if n_samples < 1:
        raise InvalidArgumentError(f"n_samples must be >= 1, got {n_samples}")

    rng = np.random.default_rng(seed)
    size = math.ceil(fraction * len(data))
    means = tuple(
        float(np.mean(rng.choice(data, size=size, replace=True))) for _ in range(n_samples)
    )
    return BootstrapResult(means, n_samples, fraction, seed)
