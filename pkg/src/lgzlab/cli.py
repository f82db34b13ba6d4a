"""Command-line surface.

Outputs are machine-first (JSON to stdout, CSV for tables and sample
streams); ``--table`` renders a human-readable view instead. Options can be
preloaded from a JSON config file with ``--config``; explicit flags win.
Exit codes: 0 success, 2 validation error, 3 infeasible instance.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from .complexes import (
    PointCloud,
    build_epsilon_graph,
    clique_density,
    enumerate_cliques,
    grover_cost_model,
    load_edge_list,
    load_point_cloud,
)
from .emulator import (
    NoiseModel,
    amplification_cost,
    lgz_run,
    swes_samples,
    write_samples_csv,
)
from .errors import InfeasibleError, ValidationError
from .estimates import hoeffding_sample_count
from .estimators import (
    llsd_estimate,
    numerical_rank,
    renyi_entropy,
    spectral_entropy,
    subtrace_estimate,
)
from .homology import betti_exact, combinatorial_laplacian, hodge_nullity
from .operators import SparseHermitian, spectral_extrema
from .oracles import load_triple_list
from .pipeline import (
    RESOURCE_MODES,
    RunConfig,
    barcode_profile,
    benchmark,
    named_graph,
    resource_estimate,
    t_for_threshold,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    parser.add_argument("--config", default=None, help="JSON config file with defaults")
    parser.add_argument("--out", default=None, help="write output to this file")
    parser.add_argument(
        "--table", action="store_true", help="human-readable output instead of JSON"
    )


def _add_graph_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", default=None, help="edge-list file ('n <count>' header)")
    parser.add_argument("--points", default=None, help="point-cloud CSV file")
    parser.add_argument("--epsilon", type=float, default=None, help="grouping scale")
    parser.add_argument("--named", default=None, help="named instance (cN, kN, pN, eN)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgzlab",
        description=(
            "Clique complexes, combinatorial Laplacians, and emulated "
            "quantum spectral sampling at desk scale."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complex", help="build the clique complex and report statistics")
    _add_graph_inputs(p)
    p.add_argument("--k-max", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("betti", help="exact Betti numbers")
    _add_graph_inputs(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument(
        "--method", choices=("rank", "hodge", "both"), default="rank",
        help="integer elimination, spectral nullity, or both",
    )
    p.add_argument("--tol", type=float, default=None, help="hodge zero tolerance")
    _add_common(p)

    p = sub.add_parser("lgz", help="mixed-clique-state Betti estimation loop")
    _add_graph_inputs(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--samples", type=int, default=None, help="iterations M")
    p.add_argument("--epsilon-target", type=float, default=None)
    p.add_argument("--mu-target", type=float, default=None)
    p.add_argument("--check-exact", action="store_true", help="report betti_exact too")
    _add_common(p)

    p = sub.add_parser("llsd", help="low-lying spectral density estimate")
    p.add_argument("--matrix", default=None, help="triple-list matrix file")
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--epsilon-target", type=float, default=None)
    p.add_argument("--mu-target", type=float, default=None)
    p.add_argument("--t", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("rank", help="numerical rank estimate")
    p.add_argument("--matrix", default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--epsilon-target", type=float, default=None)
    p.add_argument("--mu-target", type=float, default=None)
    p.add_argument("--t", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("swes", help="trace-weighted eigenvalue sample stream")
    p.add_argument("--matrix", default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--scale", type=float, default=None, help="explicit phase scale")
    p.add_argument("--stream", default=None, help="write sample CSV to this file")
    _add_common(p)

    p = sub.add_parser("entropy", help="spectral entropy (Shannon or Renyi)")
    p.add_argument("--matrix", default=None)
    _add_graph_inputs(p)
    p.add_argument("--k", type=int, default=None, help="use the k-th Laplacian of the graph")
    p.add_argument("--alpha", type=float, default=None, help="Renyi order; omit for Shannon")
    p.add_argument("--method", choices=("exact", "sampled"), default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--bits", action="store_true", help="report bits instead of nats")
    _add_common(p)

    p = sub.add_parser("subtrace", help="histogram estimate of the low-lying subtrace")
    p.add_argument("--matrix", default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--epsilon-target", type=float, default=None)
    p.add_argument("--mu-target", type=float, default=None)
    p.add_argument("--t", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("barcode", help="per-scale Betti table for a point cloud")
    p.add_argument("--points", default=None)
    p.add_argument("--epsilons", default=None, help="comma-separated ascending scales")
    p.add_argument("--k-max", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("resources", help="qubit-count estimates")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--mode", choices=RESOURCE_MODES + ("all",), default=None)
    p.add_argument(
        "--threshold", type=float, default=None,
        help="derive t from an eigenvalue threshold (e.g. 1e-9 gives t=30)",
    )
    _add_common(p)

    p = sub.add_parser("bench", help="estimators versus exact oracles on a suite")
    p.add_argument("--named", default=None, help="comma-separated named instances")
    p.add_argument("--graph", action="append", default=None, help="edge-list file (repeatable)")
    p.add_argument("--random-n", type=int, default=None)
    p.add_argument("--random-p", type=float, default=None)
    p.add_argument("--random-count", type=int, default=None)
    p.add_argument("--k", default=None, help="comma-separated dimensions")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--epsilon-target", type=float, default=None)
    p.add_argument("--mu-target", type=float, default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--probes", type=int, default=None)
    _add_common(p)

    return parser


# ---------------------------------------------------------------------------
# Option resolution: flag > config file > built-in default.


class _Options:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: RunConfig | None = None
        if getattr(args, "config", None):
            self.config = RunConfig.load(args.config)

    def get(self, flag: str, config_field: str | None, default=None):
        value = getattr(self.args, flag, None)
        if value is not None and value is not False:
            return value
        if self.config is not None and config_field is not None:
            config_value = getattr(self.config, config_field)
            if config_value is not None:
                return config_value
        return default

    def seed(self) -> int:
        return int(self.get("seed", "seed", 0))


def _load_graph(opts: _Options):
    args = opts.args
    named = opts.get("named", None)
    if named:
        return named_graph(named), {"source": f"named:{named}"}
    graph_path = opts.get("graph", None)
    if graph_path:
        return load_edge_list(graph_path), {"source": str(graph_path)}
    points_path = opts.get("points", "point_file")
    if points_path:
        epsilon = opts.get("epsilon", None)
        if epsilon is None:
            raise ValidationError("building a graph from points needs --epsilon")
        cloud = load_point_cloud(points_path)
        g = build_epsilon_graph(cloud, float(epsilon))
        return g, {"source": str(points_path), "epsilon": float(epsilon)}
    raise ValidationError("no graph input: pass --graph, --named, or --points with --epsilon")


def _load_matrix(opts: _Options) -> SparseHermitian:
    path = opts.get("matrix", "matrix_file")
    if not path:
        raise ValidationError("no matrix input: pass --matrix FILE (triple list)")
    store = load_triple_list(path)
    return SparseHermitian.from_store(store)


def _render_table(payload, indent: str = "") -> str:
    lines = []
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{indent}{key}:")
                lines.append(_render_table(value, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {value}")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                lines.append(_render_table(item, indent + "  "))
                lines.append("")
            else:
                lines.append(f"{indent}- {item}")
    else:
        lines.append(f"{indent}{payload}")
    return "\n".join(line for line in lines if line is not None)


def _emit(opts: _Options, payload: dict) -> None:
    if opts.args.table:
        text = _render_table(payload)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    out = opts.get("out", "output")
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# Command handlers.


def _cmd_complex(opts: _Options) -> int:
    g, source = _load_graph(opts)
    k_max = int(opts.get("k_max", None, min(g.n - 1, 3)))
    per_k = []
    for k in range(k_max + 1):
        if k > g.n - 1:
            break
        cs = enumerate_cliques(g, k)
        record = {"k": k, "chi": cs.chi, "density": clique_density(g, k)}
        if cs.chi >= 1:
            cost = grover_cost_model(g.n, k, cs.chi)
            record["grover_queries"] = cost.grover_queries
            record["rejection_expected_trials"] = cost.rejection_expected_trials
        per_k.append(record)
    _emit(opts, {"input": source, "n": g.n, "edges": g.edge_count, "cliques": per_k})
    return EXIT_OK


def _cmd_betti(opts: _Options) -> int:
    g, source = _load_graph(opts)
    method = opts.get("method", None, "rank")
    k_flag = opts.get("k", None)
    k_max = opts.get("k_max", None)
    if k_flag is None and k_max is None:
        k_max = min(g.n - 1, 3)
    ks = [int(k_flag)] if k_flag is not None else list(range(int(k_max) + 1))
    tol = opts.get("tol", None)
    rows = []
    for k in ks:
        if k > g.n - 1 or enumerate_cliques(g, k).chi == 0:
            rows.append({"k": k, "betti": 0, "dim_hk": 0, "method": "empty"})
            continue
        record: dict = {"k": k}
        if method in ("rank", "both"):
            report = betti_exact(g, k)
            record.update(betti=report.betti, dim_hk=report.dim_hk, method=report.method)
        if method in ("hodge", "both"):
            report = hodge_nullity(g, k, tol)
            record.setdefault("dim_hk", report.dim_hk)
            record["hodge_betti"] = report.betti
            record["gap_violated"] = report.gap_violated
            record.setdefault("method", "hodge")
            if method == "both":
                record["agree"] = record["betti"] == report.betti
        rows.append(record)
    _emit(opts, {"input": source, "n": g.n, "betti": rows})
    return EXIT_OK


def _cmd_lgz(opts: _Options) -> int:
    g, source = _load_graph(opts)
    k = opts.get("k", None)
    if k is None:
        raise ValidationError("lgz needs --k")
    k = int(k)
    t = int(opts.get("t", "t", 8))
    epsilon = float(opts.get("epsilon_target", "epsilon_target", 0.05))
    mu = float(opts.get("mu_target", "mu_target", 0.9))
    m_samples = opts.get("samples", "M")
    if m_samples is None:
        m_samples = hoeffding_sample_count(epsilon, mu)
    lap = combinatorial_laplacian(g, k)
    model = NoiseModel.for_operator(lap, t)
    estimate = lgz_run(g, k, model, int(m_samples), opts.seed(), confidence=mu)
    payload = {"input": source, "estimate": estimate.to_json_dict()}
    if opts.args.check_exact:
        report = betti_exact(g, k)
        payload["betti_exact"] = report.betti
        payload["betti_ratio"] = report.betti / report.dim_hk
    _emit(opts, payload)
    return EXIT_OK


def _estimator_params(opts: _Options):
    b = opts.get("b", "b")
    if b is None:
        raise ValidationError("need --b (eigenvalue threshold)")
    delta = opts.get("delta", "delta")
    epsilon = float(opts.get("epsilon_target", "epsilon_target", 0.05))
    mu = float(opts.get("mu_target", "mu_target", 0.9))
    t = opts.get("t", None)
    return float(b), delta, epsilon, mu, (int(t) if t is not None else None)


def _cmd_llsd(opts: _Options, rank_mode: bool = False) -> int:
    h = _load_matrix(opts)
    b, delta, epsilon, mu, t = _estimator_params(opts)
    if delta is None:
        delta = max(b / 4.0, 1e-12) if b > 0 else h.norm_bound * 2.0**-8
    fn = numerical_rank if rank_mode else llsd_estimate
    estimate = fn(h, b, float(delta), epsilon, mu, opts.seed(), t=t)
    _emit(opts, {"estimate": estimate.to_json_dict()})
    return EXIT_OK


def _cmd_swes(opts: _Options) -> int:
    h = _load_matrix(opts)
    size = int(opts.get("samples", "budget", 1000))
    t = int(opts.get("t", "t", 8))
    scale = opts.get("scale", None)
    if scale is not None:
        model = NoiseModel(t=t, delta=2.0 ** (-t) / float(scale), mu=0.25, scale=float(scale))
    else:
        model = NoiseModel.for_operator(h, t)
    samples = swes_samples(h, model, opts.seed(), size)
    stream = opts.get("stream", None)
    payload = {
        "samples": size,
        "t": t,
        "scale": model.scale,
        "amplification_cost": amplification_cost(h),
        "mean_value": sum(s.value for s in samples) / size,
    }
    if stream:
        write_samples_csv(samples, stream)
        payload["stream"] = str(stream)
    else:
        payload["values"] = [s.value for s in samples]
        payload["outcomes"] = [s.outcome for s in samples]
    _emit(opts, payload)
    return EXIT_OK


def _cmd_entropy(opts: _Options) -> int:
    k = opts.get("k", None)
    if opts.get("matrix", "matrix_file") is not None:
        h = _load_matrix(opts)
        source = {"source": "matrix"}
    else:
        g, source = _load_graph(opts)
        if k is None:
            raise ValidationError("entropy on a graph needs --k for the Laplacian")
        h = combinatorial_laplacian(g, int(k))
    alpha = opts.get("alpha", "alpha")
    method = opts.get("method", "entropy_method", "exact")
    budget = opts.get("budget", "budget")
    t = opts.get("t", None)
    model = None
    if method == "sampled" and t is not None:
        hs = h if h.norm_bound <= 1.0 else h.scaled(1.0 / h.norm_bound)
        model = NoiseModel.for_operator(hs, int(t))
    seed = opts.seed() if method == "sampled" else None
    if alpha is None:
        report = spectral_entropy(h, method, budget, seed, model=model)
    else:
        report = renyi_entropy(h, float(alpha), method, budget, seed, model=model)
    if opts.args.bits:
        report = report.in_bits()
    _emit(opts, {"input": source, "entropy": report.to_json_dict()})
    return EXIT_OK


def _cmd_subtrace(opts: _Options) -> int:
    h = _load_matrix(opts)
    b, delta, epsilon, mu, t = _estimator_params(opts)
    bins = int(opts.get("bins", "bins", 8))
    if delta is None:
        delta = max(b / (4.0 * bins), 1e-12)
    estimate = subtrace_estimate(h, b, bins, float(delta), epsilon, mu, opts.seed(), t=t)
    _emit(opts, {"estimate": estimate.to_json_dict()})
    return EXIT_OK


def _cmd_barcode(opts: _Options) -> int:
    points_path = opts.get("points", "point_file")
    if not points_path:
        raise ValidationError("barcode needs --points FILE")
    eps_raw = opts.get("epsilons", None)
    if eps_raw:
        epsilons = [float(x) for x in str(eps_raw).split(",") if x.strip()]
    elif opts.config is not None and opts.config.epsilon_grid:
        epsilons = list(opts.config.epsilon_grid)
    else:
        raise ValidationError("barcode needs --epsilons (comma-separated)")
    k_max = int(opts.get("k_max", None, 2))
    cloud = load_point_cloud(points_path)
    profile = barcode_profile(cloud, epsilons, k_max)
    out = opts.get("out", "output")
    if out:
        profile.to_csv(out)
        print(json.dumps({"rows": len(profile.epsilons), "written": str(out)}, sort_keys=True))
    else:
        profile.to_csv(sys.stdout)
    return EXIT_OK


def _cmd_resources(opts: _Options) -> int:
    n = opts.get("n", None)
    if n is None:
        raise ValidationError("resources needs --n")
    n = int(n)
    t = opts.get("t", None)
    threshold = opts.get("threshold", None)
    if t is None and threshold is not None:
        t = t_for_threshold(float(threshold))
    t = int(t) if t is not None else None
    r = opts.get("r", None)
    m = opts.get("m", None)
    mode = opts.get("mode", None, "all")
    payload: dict = {"n": n, "t": t}
    if threshold is not None:
        payload["threshold"] = float(threshold)
    if mode == "all":
        reports = []
        for candidate in RESOURCE_MODES:
            try:
                reports.append(
                    resource_estimate(
                        n,
                        candidate,
                        r=int(r) if r is not None else None,
                        t=t,
                        m=int(m) if m is not None else None,
                    ).to_json_dict()
                )
            except ValidationError as exc:
                reports.append({"mode": candidate, "skipped": str(exc)})
        payload["reports"] = reports
    else:
        payload["report"] = resource_estimate(
            n,
            mode,
            r=int(r) if r is not None else None,
            t=t,
            m=int(m) if m is not None else None,
        ).to_json_dict()
    _emit(opts, payload)
    return EXIT_OK


def _cmd_bench(opts: _Options) -> int:
    base = opts.config if opts.config is not None else RunConfig()
    overrides: dict = {"command": "bench", "seed": opts.seed()}
    named = opts.get("named", None)
    if named:
        overrides["named_graphs"] = tuple(x.strip() for x in str(named).split(",") if x.strip())
    graphs = getattr(opts.args, "graph", None)
    if graphs:
        overrides["graph_files"] = tuple(graphs)
    k_raw = opts.get("k", None)
    if k_raw is not None:
        overrides["k_values"] = tuple(int(x) for x in str(k_raw).split(",") if x.strip())
    for flag, field_name in (
        ("random_n", "random_n"),
        ("random_p", "random_p"),
        ("random_count", "random_count"),
        ("t", "t"),
        ("epsilon_target", "epsilon_target"),
        ("mu_target", "mu_target"),
        ("degree", "degree"),
        ("probes", "probes"),
    ):
        value = getattr(opts.args, flag, None)
        if value is not None:
            overrides[field_name] = value
    config = base.with_overrides(**overrides)
    _emit(opts, benchmark(config))
    return EXIT_OK


_HANDLERS = {
    "complex": _cmd_complex,
    "betti": _cmd_betti,
    "lgz": _cmd_lgz,
    "llsd": lambda opts: _cmd_llsd(opts, rank_mode=False),
    "rank": lambda opts: _cmd_llsd(opts, rank_mode=True),
    "swes": _cmd_swes,
    "entropy": _cmd_entropy,
    "subtrace": _cmd_subtrace,
    "barcode": _cmd_barcode,
    "resources": _cmd_resources,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _Options(args)
        return _HANDLERS[args.command](opts)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
