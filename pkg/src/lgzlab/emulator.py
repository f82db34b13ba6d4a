"""Distribution-level emulation of phase-estimation readout, uniform and
trace-weighted eigenvalue sampling, and the full Betti-estimation loop.

The emulation works at the level of output distributions: the operator is
eigendecomposed exactly, an eigenvalue index is drawn from the input-state
weights (uniform for a maximally mixed register, trace-weighted otherwise),
and a t-bit readout is drawn from the exact phase-estimation kernel of the
rescaled eigenphase. This reproduces the outcome statistics of the circuit
without simulating gates, and is what all estimator contracts are tested
against.

Sampling happens under an explicit integer seed; batches draw through a
fixed schedule (eigenvalue indices first, then outcomes grouped by distinct
phase), so runs are reproducible and independent batches may be generated
concurrently from child seeds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .complexes import Graph, enumerate_cliques
from .errors import InfeasibleError, ValidationError
from .estimates import SpectralEstimate, hoeffding_epsilon, require_seed
from .homology import combinatorial_laplacian
from .operators import SparseHermitian

__all__ = [
    "T_EMULATION_CAP",
    "NoiseModel",
    "EigenSample",
    "qpe_outcome_distribution",
    "sues_sample",
    "sues_samples",
    "swes_sample",
    "swes_samples",
    "amplification_cost",
    "emulated_outcome_distribution",
    "tv_distance",
    "lgz_run",
    "write_samples_csv",
]

# Largest phase register the emulator will materialize (2^t outcome bins).
T_EMULATION_CAP = 20

# Default guard band, in bins, between the largest rescaled phase and the
# wrap-around point at phase 1.
_DEFAULT_MARGIN_BINS = 8


@dataclass(frozen=True)
class NoiseModel:
    """Phase-estimation discretization channel: t readout bits, claimed
    eigenvalue precision delta, readout error probability mu, and the factor
    by which the operator is scaled down before simulation.

    ``delta`` is expressed in (unscaled) eigenvalue units and cannot beat the
    channel's own resolution of 2^-t / scale. The scale must keep every
    eigenphase strictly below 1; that is validated against each operator at
    sampling time.
    """

    t: int
    delta: float
    mu: float
    scale: float

    def __post_init__(self):
        if int(self.t) != self.t or self.t < 1:
            raise ValidationError(f"t must be a positive integer, got {self.t}")
        if not (0.0 < self.mu < 1.0):
            raise ValidationError(f"mu must lie in (0, 1), got {self.mu}")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValidationError(f"scale must be a positive real, got {self.scale}")
        if self.delta < self.resolution * (1.0 - 1e-12):
            raise ValidationError(
                f"delta={self.delta} is below the channel resolution "
                f"{self.resolution} at t={self.t}"
            )

    @property
    def resolution(self) -> float:
        """One readout bin, in eigenvalue units."""
        return 2.0 ** (-self.t) / self.scale

    @classmethod
    def for_operator(
        cls,
        h: SparseHermitian,
        t: int,
        *,
        delta_bins: int = 4,
        mu: float = 0.25,
        margin_bins: int = _DEFAULT_MARGIN_BINS,
    ) -> "NoiseModel":
        """Model rescaling ``h`` by (almost) the inverse of its Gershgorin bound.

        A guard band of ``margin_bins`` readout bins is left below phase 1 so
        that an eigenvalue meeting the bound never wraps past the zero bin.
        """
        if t < 1:
            raise ValidationError(f"t must be a positive integer, got {t}")
        guard = margin_bins * 2.0 ** (-t)
        if not (0.0 < guard < 1.0):
            raise ValidationError(
                f"margin of {margin_bins} bins does not fit a {t}-bit register"
            )
        bound = h.norm_bound if h.norm_bound > 0 else 1.0
        scale = (1.0 - guard) / bound
        delta = delta_bins * 2.0 ** (-t) / scale
        return cls(t=t, delta=delta, mu=mu, scale=scale)


@dataclass(frozen=True)
class EigenSample:
    """One emulated eigenvalue estimate: the rescaled value, the raw t-bit
    readout, the sampler that produced it, and the master seed of its batch."""

    value: float
    outcome: int
    source: str
    seed: int


def qpe_outcome_distribution(phase: float, t: int) -> np.ndarray:
    """Exact t-bit readout distribution for an eigenstate of phase ``phase``.

    Pr(m) = | 2^-t * sum_x exp(2 pi i x (phase - m / 2^t)) |^2, the squared
    geometric sum, evaluated in closed form. The distribution sums to one
    and is periodic in the phase with period 1.
    """
    t = int(t)
    if t < 1:
        raise ValidationError(f"t must be a positive integer, got {t}")
    if t > T_EMULATION_CAP:
        raise InfeasibleError(
            f"t={t} exceeds the emulation cap of {T_EMULATION_CAP} phase bits"
        )
    phase = float(phase)
    if not math.isfinite(phase):
        raise ValidationError(f"phase must be finite, got {phase}")
    phase %= 1.0
    n = 1 << t
    d = phase - np.arange(n) / n
    frac = d - np.rint(d)
    exact = np.abs(frac) < 1e-14
    out = np.empty(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.sin(np.pi * n * d)
        den = n * np.sin(np.pi * d)
        ratio = np.where(exact, 1.0, num / np.where(exact, 1.0, den))
    out[:] = ratio * ratio
    out[exact] = 1.0
    return out


def _spectrum_and_weights(h: SparseHermitian, weighting: str) -> tuple[np.ndarray, np.ndarray | None]:
    eigs = h.eigenvalues()
    if eigs.size == 0:
        raise ValidationError("cannot sample from an empty operator")
    floor = -1e-8 * max(1.0, h.norm_bound)
    if eigs[0] < floor:
        raise ValidationError(
            f"operator is not positive semidefinite (min eigenvalue {eigs[0]:.3e})"
        )
    if weighting == "uniform":
        return eigs, None
    if weighting == "trace":
        if eigs[-1] > 1.0 + 1e-9:
            raise ValidationError(
                f"norm violation: largest eigenvalue {eigs[-1]:.6g} exceeds 1"
            )
        lam = np.clip(eigs, 0.0, None)
        total = lam.sum()
        if total <= 1e-14 * max(1.0, h.norm_bound):
            raise ValidationError("zero trace: trace-weighted sampling undefined")
        return eigs, lam / total
    raise ValidationError(f"unknown weighting {weighting!r}")


def _check_scale(h: SparseHermitian, model: NoiseModel, eigs: np.ndarray) -> None:
    top = max(float(eigs[-1]), 0.0)
    if model.scale * top >= 1.0:
        raise ValidationError(
            f"scale violation: scale * lambda_max = {model.scale * top:.6g} >= 1"
        )


def _draw_outcomes(
    h: SparseHermitian,
    model: NoiseModel,
    rng: np.random.Generator,
    size: int,
    weighting: str,
) -> tuple[np.ndarray, np.ndarray]:
    """(outcomes, values) for ``size`` emulated measurements."""
    eigs, weights = _spectrum_and_weights(h, weighting)
    _check_scale(h, model, eigs)
    if weights is None:
        idx = rng.integers(0, eigs.size, size=size)
    else:
        idx = rng.choice(eigs.size, size=size, p=weights)
    phases = np.clip(eigs[idx] * model.scale, 0.0, None)
    n = 1 << model.t
    outcomes = np.empty(size, dtype=np.int64)
    uniq, inverse = np.unique(phases, return_inverse=True)
    for u, phase in enumerate(uniq):
        positions = np.nonzero(inverse == u)[0]
        dist = qpe_outcome_distribution(float(phase), model.t)
        dist = dist / dist.sum()
        outcomes[positions] = rng.choice(n, size=positions.size, p=dist)
    values = outcomes / (n * model.scale)
    if h.norm_bound > 0:
        np.minimum(values, h.norm_bound, out=values)
    return outcomes, values


def _batch(h, model, seed, size, weighting, source) -> list[EigenSample]:
    seed = require_seed(seed)
    if size < 1:
        raise ValidationError(f"sample count must be at least 1, got {size}")
    rng = np.random.default_rng(seed)
    outcomes, values = _draw_outcomes(h, model, rng, size, weighting)
    return [
        EigenSample(value=float(v), outcome=int(o), source=source, seed=seed)
        for v, o in zip(values, outcomes)
    ]


def sues_sample(h: SparseHermitian, model: NoiseModel, seed) -> EigenSample:
    """One eigenvalue estimate with the eigenstate drawn uniformly.

    A maximally mixed eigenvector register weights every eigenpair equally,
    so the emulation picks an eigenvalue uniformly with multiplicity and
    pushes its rescaled phase through the readout kernel. The resulting
    value distribution is a (delta, mu)-approximation of the uniform
    distribution over the spectrum for any feasible model.
    """
    return _batch(h, model, seed, 1, "uniform", "sues")[0]


def sues_samples(h: SparseHermitian, model: NoiseModel, seed, size: int) -> list[EigenSample]:
    return _batch(h, model, seed, size, "uniform", "sues")


def swes_sample(h: SparseHermitian, model: NoiseModel, seed) -> EigenSample:
    """One eigenvalue estimate with eigenvalues weighted by magnitude.

    Requires the operator normalized to unit spectral norm with positive
    trace; eigenvalue lambda is drawn with probability lambda / trace
    (multiplicity included), then passed through the readout kernel. Zero
    eigenvalues carry no weight and are never drawn.
    """
    return _batch(h, model, seed, 1, "trace", "swes")[0]


def swes_samples(h: SparseHermitian, model: NoiseModel, seed, size: int) -> list[EigenSample]:
    return _batch(h, model, seed, size, "trace", "swes")


def amplification_cost(h: SparseHermitian) -> float:
    """Fixed-point amplitude-amplification cost figure sqrt(dim / trace)."""
    tr = h.trace()
    if tr <= 0.0:
        raise ValidationError("zero trace: amplification cost undefined")
    return math.sqrt(h.dim / tr)


def emulated_outcome_distribution(
    h: SparseHermitian, model: NoiseModel, weighting: str = "uniform"
) -> np.ndarray:
    """Exact channel output over the 2^t readouts (mixture over eigenpairs).

    Diagnostic companion to the samplers, e.g. for total-variation
    comparisons against empirical frequencies or other devices.
    """
    eigs, weights = _spectrum_and_weights(h, weighting)
    _check_scale(h, model, eigs)
    if weights is None:
        weights = np.full(eigs.size, 1.0 / eigs.size)
    out = np.zeros(1 << model.t)
    for lam, w in zip(eigs, weights):
        if w == 0.0:
            continue
        out += w * qpe_outcome_distribution(max(float(lam), 0.0) * model.scale, model.t)
    return out


def tv_distance(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValidationError(f"shape mismatch {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def lgz_run(
    g: Graph, k: int, model: NoiseModel, M: int, seed, *, confidence: float = 0.95
) -> SpectralEstimate:
    """Full Betti-estimation loop: M mixed-clique-state eigenvalue readouts
    of the k-th Laplacian, returning the frequency of all-zero readouts.

    The maximally mixed state over the clique basis weights the Laplacian's
    eigenpairs uniformly, so the emulation draws eigenvalues uniformly. A
    readout counts as zero exactly when its t-bit integer is 0; with the
    resolution below the spectral gap the frequency estimates
    betti_k / chi_k to the usual order-M^-1/2 precision.
    """
    seed = require_seed(seed)
    if M < 1:
        raise ValidationError(f"M must be at least 1, got {M}")
    chi = enumerate_cliques(g, k).chi
    if chi == 0:
        raise ValidationError(f"empty clique set: no cliques of {k + 1} vertices")
    lap = combinatorial_laplacian(g, k)
    rng = np.random.default_rng(seed)
    outcomes, _ = _draw_outcomes(lap, model, rng, M, "uniform")
    value = float(np.mean(outcomes == 0))
    return SpectralEstimate(
        value=value,
        epsilon=hoeffding_epsilon(M, confidence),
        mu=confidence,
        M=M,
        seed=seed,
        method="lgz",
        cost=M,
        details={
            "k": k,
            "chi": chi,
            "t": model.t,
            "scale": model.scale,
            "resolution": model.resolution,
        },
    )


def write_samples_csv(samples, file) -> None:
    """Stream samples as CSV rows (iteration, raw t-bit outcome, rescaled value)."""
    own = isinstance(file, (str, bytes)) or hasattr(file, "__fspath__")
    fh = open(file, "w", newline="") if own else file
    try:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "outcome", "value"])
        for i, s in enumerate(samples):
            writer.writerow([i, s.outcome, repr(s.value)])
    finally:
        if own:
            fh.close()
