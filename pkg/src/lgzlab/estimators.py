"""Eigenvalue counting, low-lying spectral density, numerical rank, padded
Betti estimation, the histogram subtrace reduction, spectral entropies, and
the matrix-vector classical baseline.

Sampling estimators size their batches with the explicit Hoeffding rule
M = ceil(ln(2 / (1 - mu)) / (2 eps^2)). Eigenvalue counts are normalized by
the operator's own dimension and thresholds are closed (a <= lambda <= b).
"""

from __future__ import annotations

import math

import numpy as np

from .complexes import Graph, enumerate_cliques
from .emulator import (
    T_EMULATION_CAP,
    NoiseModel,
    _draw_outcomes,
)
from .errors import InfeasibleError, ValidationError
from .estimates import (
    SpectralEstimate,
    EntropyReport,
    derive_seeds,
    hoeffding_sample_count,
    require_seed,
)
from .homology import pad_laplacian
from .operators import SparseHermitian

__all__ = [
    "eigencount_exact",
    "llsd_estimate",
    "numerical_rank",
    "abne_estimate",
    "subtrace_estimate",
    "spectral_entropy",
    "renyi_entropy",
    "eigencount_stochastic",
]

# Density below which the padding correction amplifies error enough to warn.
_LOW_DENSITY_WARNING = 0.1


def eigencount_exact(h: SparseHermitian, a: float, b: float) -> float:
    """Dimension-normalized count of eigenvalues in the closed interval [a, b].

    Dense eigendecomposition; this is the trusted oracle all sampling
    estimators are judged against. The interval boundaries carry a guard of
    1e-10 relative to the norm bound so that eigensolver rounding cannot
    push an exact-boundary eigenvalue (a zero mode in particular) off the
    closed interval.
    """
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValidationError("thresholds must be finite")
    if a > b:
        raise ValidationError(f"need a <= b, got a={a}, b={b}")
    eigs = h.eigenvalues()
    if eigs.size == 0:
        raise ValidationError("empty operator has no eigenvalue count")
    guard = 1e-10 * max(1.0, h.norm_bound)
    return float(np.count_nonzero((eigs >= a - guard) & (eigs <= b + guard)) / h.dim)


def _choose_t(h: SparseHermitian, delta: float) -> int:
    """Smallest feasible register size whose resolution meets ``delta``."""
    for t in range(4, T_EMULATION_CAP + 1):
        model = NoiseModel.for_operator(h, t, mu=0.5)
        if model.resolution <= delta:
            return t
    raise InfeasibleError(
        f"delta={delta} is below the resolution achievable with "
        f"{T_EMULATION_CAP} emulated phase bits"
    )


def _llsd_model(h: SparseHermitian, delta: float, t: int | None) -> NoiseModel:
    if t is None:
        t = _choose_t(h, delta)
    model = NoiseModel.for_operator(h, t, mu=0.5)
    if model.resolution > delta * (1.0 + 1e-12):
        raise InfeasibleError(
            f"delta={delta} is below the QPE resolution {model.resolution} at t={t}"
        )
    bins = int(delta / model.resolution)
    mu_phase = min(0.5, 1.0 / (2.0 * max(1, bins - 1)))
    return NoiseModel(t=t, delta=delta, mu=mu_phase, scale=model.scale)


def _validate_llsd_params(b, delta, epsilon, mu):
    if not (b >= 0.0 and math.isfinite(b)):
        raise ValidationError(f"threshold b must be a nonnegative real, got {b}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise ValidationError(f"delta must be positive, got {delta}")
    if not (0.0 < epsilon < 1.0):
        raise ValidationError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not (0.5 < mu < 1.0):
        raise ValidationError(f"success probability mu must lie in (1/2, 1), got {mu}")


def llsd_estimate(
    h: SparseHermitian,
    b: float,
    delta: float,
    epsilon: float,
    mu: float,
    seed,
    *,
    t: int | None = None,
) -> SpectralEstimate:
    """Low-lying spectral density: frequency of uniform eigenvalue estimates
    at or below ``b``.

    With probability at least ``mu`` the value chi satisfies the two-sided
    contract N(0, b) - epsilon <= chi <= N(0, b + delta) + epsilon, where N
    is the normalized eigenvalue count: the readout may displace an
    eigenvalue by at most delta, and Hoeffding sampling error accounts for
    the epsilon slack.
    """
    b, delta, epsilon, mu = float(b), float(delta), float(epsilon), float(mu)
    _validate_llsd_params(b, delta, epsilon, mu)
    seed = require_seed(seed)
    model = _llsd_model(h, delta, t)
    m = hoeffding_sample_count(epsilon, mu)
    rng = np.random.default_rng(seed)
    _, values = _draw_outcomes(h, model, rng, m, "uniform")
    value = float(np.mean(values <= b))
    return SpectralEstimate(
        value=value,
        epsilon=epsilon,
        mu=mu,
        M=m,
        seed=seed,
        method="llsd",
        cost=m,
        details={
            "b": b,
            "delta": delta,
            "t": model.t,
            "scale": model.scale,
            "resolution": model.resolution,
        },
    )


def numerical_rank(
    h: SparseHermitian,
    b: float,
    delta: float,
    epsilon: float,
    mu: float,
    seed,
    *,
    t: int | None = None,
) -> SpectralEstimate:
    """Normalized count of eigenvalues above ``b``: one minus the low-lying
    density, from the same sample stream, with the same error scaling."""
    low = llsd_estimate(h, b, delta, epsilon, mu, seed, t=t)
    details = dict(low.details)
    details["llsd_value"] = low.value
    return SpectralEstimate(
        value=1.0 - low.value,
        epsilon=low.epsilon,
        mu=low.mu,
        M=low.M,
        seed=low.seed,
        method="rank",
        cost=low.cost,
        details=details,
    )


def abne_estimate(
    g: Graph,
    k: int,
    b: float,
    delta: float,
    epsilon: float,
    mu: float,
    seed,
    *,
    t: int | None = None,
) -> SpectralEstimate:
    """Approximate Betti number from the padded Laplacian.

    Runs the low-lying density estimator on the zero-padded Laplacian (built
    without forming the clique-basis Laplacian) and removes the padding
    nullity: N_delta = (C / chi) * N_gamma - (C - chi) / chi with
    C = C(n, k+1). The correction amplifies sampling error by C / chi, so a
    low clique density is flagged.
    """
    chi = enumerate_cliques(g, k).chi
    if chi == 0:
        raise ValidationError(f"empty basis: no cliques of {k + 1} vertices")
    gamma = pad_laplacian(g, k)
    inner = llsd_estimate(gamma, b, delta, epsilon, mu, seed, t=t)
    space = math.comb(g.n, k + 1)
    amplification = space / chi
    density = chi / space
    raw = amplification * inner.value - (space - chi) / chi
    details = dict(inner.details)
    details.update(
        {
            "k": k,
            "chi": chi,
            "search_space": space,
            "density": density,
            "amplification": amplification,
            "epsilon_effective": epsilon * amplification,
            "raw_value": raw,
            "low_density_warning": density < _LOW_DENSITY_WARNING,
        }
    )
    return SpectralEstimate(
        value=min(1.0, max(0.0, raw)),
        epsilon=epsilon,
        mu=mu,
        M=inner.M,
        seed=inner.seed,
        method="abne",
        cost=inner.cost,
        details=details,
    )


def subtrace_estimate(
    h: SparseHermitian,
    b: float,
    bins: int,
    delta: float,
    epsilon: float,
    mu: float,
    seed,
    *,
    t: int | None = None,
) -> SpectralEstimate:
    """Normalized sum of eigenvalues in (0, b] via a histogram of low-lying
    densities.

    The density is estimated at the bin boundaries 0, b/bins, ..., b;
    adjacent differences give bin masses (so readout imprecision displaces
    an eigenvalue by at most one bin), and the estimate is the sum of bin
    midpoints weighted by masses. Exact zero eigenvalues cancel in the first
    difference and contribute nothing, matching the target sum.
    """
    if int(bins) != bins or bins < 1:
        raise ValidationError(f"bins must be a positive integer, got {bins}")
    b = float(b)
    if not (b > 0.0 and math.isfinite(b)):
        raise ValidationError(f"b must be a positive real, got {b}")
    seed = require_seed(seed)
    bins = int(bins)
    boundaries = [b * i / bins for i in range(bins + 1)]
    child_seeds = derive_seeds(seed, bins + 1)
    estimates = [
        llsd_estimate(h, boundary, delta, epsilon, mu, child, t=t)
        for boundary, child in zip(boundaries, child_seeds)
    ]
    counts = [e.value for e in estimates]
    masses = np.diff(counts)
    midpoints = np.asarray(
        [(boundaries[i] + boundaries[i + 1]) / 2.0 for i in range(bins)]
    )
    value = float(np.dot(midpoints, masses))
    total_m = sum(e.M for e in estimates)
    bin_width = b / bins
    return SpectralEstimate(
        value=value,
        epsilon=epsilon,
        mu=mu,
        M=total_m,
        seed=seed,
        method="subtrace",
        cost=total_m,
        details={
            "b": b,
            "bins": bins,
            "bin_width": bin_width,
            "delta": delta,
            "boundary_counts": [float(c) for c in counts],
            "error_budget": bin_width + b * (bins + 1) * epsilon,
        },
    )


def _spectral_weights(h: SparseHermitian) -> np.ndarray:
    eigs = np.clip(h.eigenvalues(), 0.0, None)
    total = eigs.sum()
    if total <= 1e-14 * max(1.0, h.norm_bound):
        raise ValidationError("zero trace: spectral weights undefined")
    return eigs / total


def _sampled_weights(
    h: SparseHermitian, budget, seed, model: NoiseModel | None
) -> tuple[np.ndarray, int, int]:
    """Empirical readout distribution from trace-weighted sampling.

    The operator is normalized to unit spectral-norm bound first; the
    eigenvalue weights are scale-invariant so the entropy target is
    unchanged.
    """
    if budget is None or int(budget) < 1:
        raise ValidationError(f"sampled mode needs a positive budget, got {budget}")
    budget = int(budget)
    seed = require_seed(seed)
    hs = h if h.norm_bound <= 1.0 else h.scaled(1.0 / h.norm_bound)
    if model is None:
        model = NoiseModel.for_operator(hs, t=12)
    rng = np.random.default_rng(seed)
    outcomes, _ = _draw_outcomes(hs, model, rng, budget, "trace")
    freqs = np.bincount(outcomes, minlength=1 << model.t) / budget
    return freqs, budget, seed


def spectral_entropy(
    h: SparseHermitian,
    method: str = "exact",
    budget: int | None = None,
    seed=None,
    *,
    model: NoiseModel | None = None,
) -> EntropyReport:
    """Shannon entropy of the eigenvalue weights lambda / trace, in nats.

    Exact mode uses the dense spectrum (the von Neumann entropy of the
    trace-normalized operator). Sampled mode is the plug-in estimate over
    the empirical readout distribution of trace-weighted eigenvalue
    sampling; it resolves eigenvalues only down to the readout resolution,
    so distinct eigenvalues must be separated for convergence.
    """
    if method == "exact":
        weights = _spectral_weights(h)
        positive = weights[weights > 0.0]
        entropy = float(-(positive * np.log(positive)).sum())
        return EntropyReport(entropy=entropy, alpha=1.0, method="exact")
    if method == "sampled":
        freqs, budget, seed = _sampled_weights(h, budget, seed, model)
        positive = freqs[freqs > 0.0]
        entropy = float(-(positive * np.log(positive)).sum())
        return EntropyReport(
            entropy=entropy, alpha=1.0, method="sampled", M=budget, seed=seed
        )
    raise ValidationError(f"unknown entropy method {method!r}")


def renyi_entropy(
    h: SparseHermitian,
    alpha: float,
    method: str = "exact",
    budget: int | None = None,
    seed=None,
    *,
    model: NoiseModel | None = None,
) -> EntropyReport:
    """Order-alpha Renyi entropy of the eigenvalue weights, in nats.

    S_alpha = log(sum p^alpha) / (1 - alpha) for alpha >= 0, alpha != 1;
    the alpha -> 1 limit is the Shannon case served by
    :func:`spectral_entropy`.
    """
    alpha = float(alpha)
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise ValidationError(f"alpha must be a nonnegative real, got {alpha}")
    if abs(alpha - 1.0) < 1e-12:
        raise ValidationError(
            "alpha = 1 is the von Neumann limit; use spectral_entropy"
        )
    if method == "exact":
        weights = _spectral_weights(h)
        sample_count = None
        seed_used = None
    elif method == "sampled":
        weights, sample_count, seed_used = _sampled_weights(h, budget, seed, model)
    else:
        raise ValidationError(f"unknown entropy method {method!r}")
    positive = weights[weights > 0.0]
    entropy = float(np.log((positive**alpha).sum()) / (1.0 - alpha))
    return EntropyReport(
        entropy=entropy, alpha=alpha, method=method, M=sample_count, seed=seed_used
    )


def _jackson_damping(degree: int) -> np.ndarray:
    big = degree + 1
    k = np.arange(degree + 1)
    return (
        (big - k) * np.cos(np.pi * k / big)
        + np.sin(np.pi * k / big) / np.tan(np.pi / big)
    ) / big


def eigencount_stochastic(
    h: SparseHermitian, b: float, degree: int, probes: int, seed
) -> SpectralEstimate:
    """Matrix-vector baseline for the normalized count of eigenvalues in [0, b].

    Jackson-damped Chebyshev expansion of the interval indicator, with the
    trace estimated by Rademacher probes; the honest classical competitor,
    whose cost is linear in the number of nonzero entries. The reported cost
    is degree * probes * nnz.
    """
    b = float(b)
    if not (b >= 0.0 and math.isfinite(b)):
        raise ValidationError(f"threshold b must be a nonnegative real, got {b}")
    if int(degree) != degree or degree < 1:
        raise ValidationError(f"degree must be a positive integer, got {degree}")
    if int(probes) != probes or probes < 1:
        raise ValidationError(f"probes must be a positive integer, got {probes}")
    seed = require_seed(seed)
    degree, probes = int(degree), int(probes)
    bound = h.norm_bound
    if bound == 0.0:
        return SpectralEstimate(
            value=1.0,
            epsilon=None,
            mu=None,
            M=probes,
            seed=seed,
            method="kpm",
            cost=0,
            details={"b": b, "degree": degree, "probes": probes, "degenerate": True},
        )
    # Map the spectrum into [-1, 1] and expand the indicator of [-1, x_b].
    x_b = min(max(2.0 * min(b, bound) / bound - 1.0, -1.0), 1.0)
    theta_b = math.acos(x_b)
    k = np.arange(1, degree + 1)
    coeffs = np.empty(degree + 1)
    coeffs[0] = 1.0 - theta_b / math.pi
    coeffs[1:] = -2.0 * np.sin(k * theta_b) / (np.pi * k)
    coeffs *= _jackson_damping(degree)

    matrix = h.matrix.astype(np.float64)
    dim = h.dim
    rng = np.random.default_rng(seed)
    probes_block = rng.integers(0, 2, size=(dim, probes)).astype(np.float64) * 2.0 - 1.0

    def mapped(vec_block):
        return (2.0 / bound) * (matrix @ vec_block) - vec_block

    prev = probes_block
    current = mapped(probes_block)
    acc = coeffs[0] * np.einsum("ij,ij->j", probes_block, prev)
    acc += coeffs[1] * np.einsum("ij,ij->j", probes_block, current)
    for order in range(2, degree + 1):
        prev, current = current, 2.0 * mapped(current) - prev
        acc += coeffs[order] * np.einsum("ij,ij->j", probes_block, current)
    value = float(np.clip(acc.mean() / dim, 0.0, 1.0))
    return SpectralEstimate(
        value=value,
        epsilon=None,
        mu=None,
        M=probes,
        seed=seed,
        method="kpm",
        cost=degree * probes * h.nnz,
        details={
            "b": b,
            "degree": degree,
            "probes": probes,
            "matvecs": degree * probes,
            "nnz": h.nnz,
        },
    )
