"""Estimate records and sample-size arithmetic shared by samplers and estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ValidationError

__all__ = [
    "SpectralEstimate",
    "EntropyReport",
    "hoeffding_sample_count",
    "hoeffding_epsilon",
    "require_seed",
    "derive_seeds",
]


@dataclass(frozen=True)
class SpectralEstimate:
    """A sampled (or polynomial) spectral quantity with its confidence metadata.

    ``value`` is the estimate, ``epsilon`` the additive precision target,
    ``mu`` the success probability it was budgeted for, ``M`` the number of
    samples (or probe vectors) drawn, and ``cost`` the accounting figure for
    the run (sample count for sampling estimators, ``degree * probes * nnz``
    for the matrix-vector baseline).
    """

    value: float
    epsilon: float | None
    mu: float | None
    M: int
    seed: int
    method: str
    cost: int
    details: dict[str, Any] = field(default_factory=dict)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "epsilon": self.epsilon,
            "mu": self.mu,
            "M": self.M,
            "seed": self.seed,
            "method": self.method,
            "matvec_or_sample_count": self.cost,
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class EntropyReport:
    """Spectral entropy value. ``alpha == 1.0`` marks the von Neumann limit."""

    entropy: float
    alpha: float
    method: str
    base: str = "nats"
    M: int | None = None
    seed: int | None = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "entropy": self.entropy,
            "alpha": self.alpha,
            "method": self.method,
            "base": self.base,
            "M": self.M,
            "seed": self.seed,
        }

    def in_bits(self) -> "EntropyReport":
        if self.base == "bits":
            return self
        return EntropyReport(
            entropy=self.entropy / math.log(2.0),
            alpha=self.alpha,
            method=self.method,
            base="bits",
            M=self.M,
            seed=self.seed,
        )


def hoeffding_sample_count(epsilon: float, mu: float) -> int:
    """Smallest M whose two-sided Hoeffding failure probability is at most 1 - mu.

    Instantiates the order-eps^-2 repetition count as an explicit constant:
    M = ceil(ln(2 / (1 - mu)) / (2 eps^2)).
    """
    if not (epsilon > 0.0) or not math.isfinite(epsilon):
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    if not (0.0 < mu < 1.0):
        raise ValidationError(f"mu must lie in (0, 1), got {mu}")
    return math.ceil(math.log(2.0 / (1.0 - mu)) / (2.0 * epsilon * epsilon))


def hoeffding_epsilon(m: int, mu: float) -> float:
    """Additive precision that M samples buy at success probability mu."""
    if m < 1:
        raise ValidationError(f"sample count must be at least 1, got {m}")
    if not (0.0 < mu < 1.0):
        raise ValidationError(f"mu must lie in (0, 1), got {mu}")
    return math.sqrt(math.log(2.0 / (1.0 - mu)) / (2.0 * m))


def require_seed(seed) -> int:
    """Coerce ``seed`` to a nonnegative int; reproducibility demands one."""
    try:
        value = int(seed)
    except (TypeError, ValueError):
        raise ValidationError(f"an integer seed is required, got {seed!r}") from None
    if value < 0:
        raise ValidationError(f"seed must be nonnegative, got {value}")
    return value


def derive_seeds(seed, count: int) -> list[int]:
    """Deterministic child seeds for independent sub-tasks of one run."""
    master = require_seed(seed)
    state = np.random.SeedSequence(master).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]
