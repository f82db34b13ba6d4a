"""Barcode profiles over scale grids, qubit resource estimates, and the
benchmark orchestrator comparing sampled estimators against exact oracles."""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .complexes import (
    Graph,
    PointCloud,
    build_epsilon_graph,
    clique_density,
    enumerate_cliques,
    grover_cost_model,
    load_edge_list,
)
from .emulator import NoiseModel, lgz_run
from .errors import ValidationError
from .estimates import derive_seeds, hoeffding_sample_count
from .estimators import eigencount_exact, eigencount_stochastic, llsd_estimate
from .homology import betti_exact, combinatorial_laplacian
from .operators import DENSE_CEILING, spectral_extrema

__all__ = [
    "ResourceReport",
    "RESOURCE_MODES",
    "resource_estimate",
    "t_for_threshold",
    "BarcodeProfile",
    "barcode_profile",
    "RunConfig",
    "benchmark",
    "named_graph",
    "random_graph",
]


# ---------------------------------------------------------------------------
# Qubit resource estimates.

RESOURCE_MODES = (
    "sparse_access",
    "lcu",
    "local_trotter",
    "counter_register",
    "single_qubit_register",
)


@dataclass(frozen=True)
class ResourceReport:
    """Qubit count for one simulation-plus-readout layout."""

    n: int
    mode: str
    qubit_count: int
    r: int | None = None
    t: int | None = None
    m: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "qubit_count": self.qubit_count,
            "r": self.r,
            "t": self.t,
            "m": self.m,
        }


def _positive(name: str, value) -> int:
    if value is None:
        raise ValidationError(f"mode requires {name}")
    if int(value) != value or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value}")
    return int(value)


def resource_estimate(
    n: int,
    mode: str,
    *,
    r: int | None = None,
    t: int | None = None,
    m: int | None = None,
) -> ResourceReport:
    """Qubit count for simulating a 2^n-dimensional operator and reading
    phases.

    Modes: ``sparse_access`` needs r entry bits and a t-bit readout
    (2n + r + 1 + t); ``lcu`` trades the access register for a unitary
    decomposition of m terms (n + ceil(log2 m) + t); ``local_trotter``
    needs no ancillas (n + t); ``counter_register`` compresses the readout
    to a counter (n + ceil(log2 t)); ``single_qubit_register`` reads out
    through one qubit (n + 1).
    """
    n = _positive("n", n)
    if mode not in RESOURCE_MODES:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {RESOURCE_MODES}")
    if mode == "sparse_access":
        r = _positive("r", r)
        t = _positive("t", t)
        count = 2 * n + r + 1 + t
    elif mode == "lcu":
        if m is None:
            raise ValidationError("missing m for lcu mode")
        m = _positive("m", m)
        t = _positive("t", t)
        count = n + math.ceil(math.log2(m)) + t
    elif mode == "local_trotter":
        t = _positive("t", t)
        count = n + t
    elif mode == "counter_register":
        t = _positive("t", t)
        count = n + math.ceil(math.log2(t))
    else:  # single_qubit_register
        count = n + 1
    return ResourceReport(n=n, mode=mode, qubit_count=count, r=r, t=t, m=m)


def t_for_threshold(threshold: float) -> int:
    """Readout bits needed to resolve eigenvalues down to ``threshold``
    (e.g. 1e-9 gives t = 30)."""
    threshold = float(threshold)
    if not (0.0 < threshold < 1.0):
        raise ValidationError(f"threshold must lie in (0, 1), got {threshold}")
    return math.ceil(math.log2(1.0 / threshold))


# ---------------------------------------------------------------------------
# Barcode profiles: per-scale Betti tables (no persistence pairing).


@dataclass(frozen=True)
class BarcodeProfile:
    """Exact Betti numbers per grouping scale; ``None`` marks a skipped cell
    whose clique basis lay beyond the dense ceiling."""

    epsilons: tuple[float, ...]
    k_max: int
    edge_counts: tuple[int, ...]
    betti: tuple[tuple[int | None, ...], ...]

    def rows_as_dicts(self) -> list[dict]:
        out = []
        for eps, edges, row in zip(self.epsilons, self.edge_counts, self.betti):
            record: dict = {"epsilon": eps, "edges": edges}
            for k, value in enumerate(row):
                record[f"betti_{k}"] = value
            out.append(record)
        return out

    def to_csv(self, file) -> None:
        own = isinstance(file, (str, bytes)) or hasattr(file, "__fspath__")
        fh = open(file, "w", newline="") if own else file
        try:
            writer = csv.writer(fh)
            writer.writerow(
                ["epsilon", "edges"] + [f"betti_{k}" for k in range(self.k_max + 1)]
            )
            for eps, edges, row in zip(self.epsilons, self.edge_counts, self.betti):
                writer.writerow(
                    [repr(eps), edges]
                    + ["skipped" if v is None else v for v in row]
                )
        finally:
            if own:
                fh.close()


def barcode_profile(
    cloud: PointCloud,
    epsilons,
    k_max: int,
    *,
    max_basis: int = DENSE_CEILING,
) -> BarcodeProfile:
    """Exact Betti numbers of the clique complex at each grouping scale.

    Scales must be sorted ascending. A dimension with no cliques has Betti
    number zero; a clique basis larger than ``max_basis`` is skipped rather
    than computed.
    """
    eps_list = [float(e) for e in epsilons]
    if not eps_list:
        raise ValidationError("need at least one scale")
    if any(b < a for a, b in zip(eps_list, eps_list[1:])):
        raise ValidationError("scales must be sorted ascending")
    if int(k_max) != k_max or k_max < 0:
        raise ValidationError(f"k_max must be a nonnegative integer, got {k_max}")
    k_max = int(k_max)
    edge_counts = []
    table = []
    for eps in eps_list:
        g = build_epsilon_graph(cloud, eps)
        edge_counts.append(g.edge_count)
        row: list[int | None] = []
        for k in range(k_max + 1):
            if k > g.n - 1:
                row.append(0)
                continue
            chi = enumerate_cliques(g, k).chi
            if chi == 0:
                row.append(0)
            elif chi > max_basis:
                row.append(None)
            else:
                row.append(betti_exact(g, k).betti)
        table.append(tuple(row))
    return BarcodeProfile(
        epsilons=tuple(eps_list),
        k_max=k_max,
        edge_counts=tuple(edge_counts),
        betti=tuple(table),
    )


# ---------------------------------------------------------------------------
# Named and random instances used by the benchmark and the CLI.

_NAMED_RE = re.compile(r"^([ckpe])(\d+)$")


def named_graph(spec: str) -> Graph:
    """Small standard instances: cN cycle, kN complete, pN path, eN empty."""
    match = _NAMED_RE.match(spec.strip().lower())
    if not match:
        raise ValidationError(
            f"unknown graph name {spec!r}; expected cN, kN, pN or eN"
        )
    kind, n = match.group(1), int(match.group(2))
    if n < 1:
        raise ValidationError(f"graph size must be positive in {spec!r}")
    if kind == "c":
        if n < 3:
            raise ValidationError("a cycle needs at least 3 vertices")
        edges = [(i, (i + 1) % n) for i in range(n)]
    elif kind == "k":
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif kind == "p":
        edges = [(i, i + 1) for i in range(n - 1)]
    else:
        edges = []
    return Graph.from_edges(n, edges)


def random_graph(n: int, p: float, seed) -> Graph:
    """Erdos-Renyi G(n, p) with a dedicated seed."""
    if not (0.0 <= p <= 1.0):
        raise ValidationError(f"edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# Run configuration: one flat record shared by the CLI commands; it must
# round-trip through its JSON file format.


@dataclass(frozen=True)
class RunConfig:
    command: str = "bench"
    graph_files: tuple[str, ...] = ()
    named_graphs: tuple[str, ...] = ()
    random_n: int | None = None
    random_p: float = 0.5
    random_count: int = 0
    point_file: str | None = None
    matrix_file: str | None = None
    k_values: tuple[int, ...] = (1,)
    epsilon_grid: tuple[float, ...] = ()
    t: int = 8
    delta: float | None = None
    mu_phase: float = 0.25
    epsilon_target: float = 0.05
    mu_target: float = 0.9
    b: float | None = None
    bins: int = 8
    alpha: float | None = None
    entropy_method: str = "exact"
    budget: int = 10000
    M: int | None = None
    degree: int = 200
    probes: int = 32
    seed: int = 0
    output: str | None = None

    _TUPLE_FIELDS = {
        "graph_files": str,
        "named_graphs": str,
        "k_values": int,
        "epsilon_grid": float,
    }

    def to_json(self) -> str:
        payload = asdict(self)
        for name in self._TUPLE_FIELDS:
            payload[name] = list(payload[name])
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed config JSON: {exc}") from None
        if not isinstance(payload, dict):
            raise ValidationError("config JSON must be an object")
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        coerced = {}
        for key, value in payload.items():
            if key in cls._TUPLE_FIELDS and value is not None:
                kind = cls._TUPLE_FIELDS[key]
                coerced[key] = tuple(kind(v) for v in value)
            else:
                coerced[key] = value
        return cls(**coerced)

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_json(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)


def _config_instances(config: RunConfig) -> list[tuple[str, Graph]]:
    instances: list[tuple[str, Graph]] = []
    for name in config.named_graphs:
        instances.append((name, named_graph(name)))
    for path in config.graph_files:
        instances.append((Path(path).name, load_edge_list(path)))
    if config.random_n is not None and config.random_count > 0:
        seeds = derive_seeds(config.seed, config.random_count)
        for i, s in enumerate(seeds):
            instances.append(
                (
                    f"g({config.random_n},{config.random_p})#{i}",
                    random_graph(config.random_n, config.random_p, s),
                )
            )
    if not instances:
        raise ValidationError("benchmark config names no instances")
    return instances


def benchmark(config: RunConfig) -> dict:
    """Run the sampled estimators against exact oracles on each instance.

    Every (instance, k) cell reports clique statistics and sampling-cost
    figures, the exact Betti target, the mixed-state estimate with its
    error, the low-lying density estimate next to the exact count, and the
    matrix-vector baseline with its cost. Cell seeds derive from the master
    seed, so reruns are byte-identical.
    """
    instances = _config_instances(config)
    m_samples = config.M or hoeffding_sample_count(
        config.epsilon_target, config.mu_target
    )
    cells = []
    cell_seeds = derive_seeds(config.seed + 1, len(instances) * len(config.k_values))
    seed_iter = iter(cell_seeds)
    for name, g in instances:
        for k in config.k_values:
            cell_seed = next(seed_iter)
            cell: dict = {"instance": name, "n": g.n, "k": k}
            if k > g.n - 1 or enumerate_cliques(g, k).chi == 0:
                cell["status"] = "empty"
                cells.append(cell)
                continue
            chi = enumerate_cliques(g, k).chi
            cost = grover_cost_model(g.n, k, chi)
            lap = combinatorial_laplacian(g, k)
            extrema = spectral_extrema(lap)
            model = NoiseModel.for_operator(lap, config.t, mu=config.mu_phase)
            delta = config.delta if config.delta is not None else model.delta
            b = config.b if config.b is not None else model.resolution / 2.0
            betti = betti_exact(g, k).betti
            target = betti / chi
            lgz = lgz_run(g, k, model, m_samples, cell_seed, confidence=config.mu_target)
            exact_low = eigencount_exact(lap, 0.0, b)
            exact_high = eigencount_exact(lap, 0.0, b + delta)
            llsd = llsd_estimate(
                lap, b, delta, config.epsilon_target, config.mu_target, cell_seed
            )
            kpm = eigencount_stochastic(lap, b, config.degree, config.probes, cell_seed)
            cell.update(
                {
                    "status": "ok",
                    "chi": chi,
                    "density": clique_density(g, k),
                    "grover_queries": cost.grover_queries,
                    "rejection_expected_trials": cost.rejection_expected_trials,
                    "lambda_max": extrema.lambda_max,
                    "lambda_min_nonzero": None
                    if extrema.all_zero
                    else extrema.lambda_min_nonzero,
                    "resolution": model.resolution,
                    "betti": betti,
                    "betti_ratio": target,
                    "lgz_estimate": lgz.value,
                    "lgz_error": abs(lgz.value - target),
                    "lgz_within_target": abs(lgz.value - target) <= config.epsilon_target,
                    "lgz_samples": lgz.M,
                    "b": b,
                    "delta": delta,
                    "eigencount_exact": exact_low,
                    "eigencount_exact_upper": exact_high,
                    "llsd_estimate": llsd.value,
                    "llsd_within_contract": (
                        exact_low - config.epsilon_target
                        <= llsd.value
                        <= exact_high + config.epsilon_target
                    ),
                    "llsd_samples": llsd.M,
                    "kpm_estimate": kpm.value,
                    "kpm_error_vs_exact": abs(kpm.value - exact_low),
                    "kpm_matvec_cost": kpm.cost,
                    "seed": cell_seed,
                }
            )
            cells.append(cell)
    usable = [c for c in cells if c.get("status") == "ok"]
    summary = {
        "cells": len(cells),
        "usable_cells": len(usable),
        "lgz_within_target_fraction": (
            sum(c["lgz_within_target"] for c in usable) / len(usable) if usable else None
        ),
        "llsd_within_contract_fraction": (
            sum(c["llsd_within_contract"] for c in usable) / len(usable)
            if usable
            else None
        ),
        "epsilon_target": config.epsilon_target,
        "mu_target": config.mu_target,
        "samples_per_cell": m_samples,
        "seed": config.seed,
    }
    return {"summary": summary, "cells": cells}
