"""Neighborhood graphs, clique enumeration, and clique-sampling cost figures.

Cliques are encoded as n-bit integers: bit p (counting from the least
significant bit) is set when vertex p belongs to the clique, so a set of
(k+1)-cliques is a sorted tuple of integers of Hamming weight k+1. All
operations are pure functions of their inputs plus an explicit seed.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import InfeasibleError, ValidationError
from .estimates import require_seed

__all__ = [
    "PointCloud",
    "Graph",
    "CliqueSet",
    "CliqueSamplingCost",
    "build_epsilon_graph",
    "enumerate_cliques",
    "clique_density",
    "sample_clique_rejection",
    "grover_cost_model",
    "load_point_cloud",
    "load_edge_list",
    "save_edge_list",
    "REJECTION_TRIAL_CAP",
]

# Give up on rejection sampling after this many draws; bounds runtime on
# clique-free inputs.
REJECTION_TRIAL_CAP = 10**6


class PointCloud:
    """Finite list of points in R^m under the Euclidean metric.

    Coincident points are kept as distinct vertices at distance zero.
    """

    def __init__(self, points):
        rows = list(points)
        if not rows:
            arr = np.empty((0, 0), dtype=float)
        else:
            try:
                arr = np.asarray(rows, dtype=float)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"malformed point cloud: {exc}") from None
            if arr.ndim == 1:
                arr = arr.reshape(-1, 1)
            if arr.ndim != 2:
                raise ValidationError("points must all share one dimension")
            if not np.isfinite(arr).all():
                raise ValidationError("point coordinates must be finite")
        self.points = arr
        self.metric = "euclidean"

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def distance_matrix(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt((diff * diff).sum(axis=2))

    def __repr__(self):
        return f"PointCloud(n={self.n}, dim={self.dim})"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    ``epsilon`` records the grouping scale when the graph came from a point
    cloud; it plays no role in any computation.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    epsilon: float | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"vertex count must be nonnegative, got {self.n}")
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValidationError(f"edge ({u}, {v}) out of range for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges, epsilon: float | None = None) -> "Graph":
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u > v:
                u, v = v, u
            canon.add((u, v))
        return cls(n=n, edges=frozenset(canon), epsilon=epsilon)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@lru_cache(maxsize=1024)
def _adjacency(g: Graph) -> tuple[int, ...]:
    """Per-vertex neighbor bitmasks."""
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return tuple(masks)


@dataclass(frozen=True)
class CliqueSet:
    """All (k+1)-cliques of a graph, as ascending Hamming-weight-(k+1) bitmasks."""

    k: int
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        weight = self.k + 1
        prev = -1
        for m in self.members:
            if m <= prev:
                raise ValidationError("clique members must be strictly ascending")
            if m.bit_count() != weight:
                raise ValidationError(
                    f"member {m:#x} has Hamming weight {m.bit_count()}, expected {weight}"
                )
            prev = m

    @property
    def chi(self) -> int:
        return len(self.members)

    def index_of(self, mask: int) -> int:
        pos = bisect_left(self.members, mask)
        if pos == len(self.members) or self.members[pos] != mask:
            raise KeyError(f"{mask:#x} is not a member")
        return pos

    def bitstrings(self) -> list[str]:
        """Members as n-character binary strings, most significant bit first."""
        return [format(m, f"0{self.n}b") for m in self.members]


def build_epsilon_graph(cloud: PointCloud, epsilon: float) -> Graph:
    """Connect every pair of points at distance <= epsilon.

    Comparisons are made on squared distances, which is exact for the
    threshold rule and avoids a square root.
    """
    if cloud.n == 0:
        raise ValidationError("empty input")
    epsilon = float(epsilon)
    if not (epsilon >= 0.0) or not math.isfinite(epsilon):
        raise ValidationError(f"epsilon must be a nonnegative real, got {epsilon}")
    pts = cloud.points
    diff = pts[:, None, :] - pts[None, :, :]
    sq = (diff * diff).sum(axis=2)
    thresh = epsilon * epsilon
    edges = set()
    for i in range(cloud.n):
        for j in range(i + 1, cloud.n):
            if sq[i, j] <= thresh:
                edges.add((i, j))
    return Graph(n=cloud.n, edges=frozenset(edges), epsilon=epsilon)


def _check_k(g: Graph, k: int) -> None:
    if not (0 <= k <= g.n - 1):
        raise ValidationError(f"k={k} out of range for a graph on {g.n} vertices")


def enumerate_cliques(g: Graph, k: int) -> CliqueSet:
    """All (k+1)-cliques of ``g``, by ascending-order backtracking.

    Candidates for extending a partial clique are kept as the bitset
    intersection of the chosen vertices' neighborhoods, restricted to
    vertices above the largest chosen one, so every clique is generated
    exactly once.
    """
    _check_k(g, k)
    adj = _adjacency(g)
    size = k + 1
    members: list[int] = []

    def grow(mask: int, cand: int, depth: int) -> None:
        if depth == size:
            members.append(mask)
            return
        remaining = cand
        while remaining:
            low = remaining & -remaining
            remaining ^= low
            v = low.bit_length() - 1
            grow(mask | low, cand & adj[v] & -(low << 1), depth + 1)

    grow(0, (1 << g.n) - 1, 0)
    members.sort()
    return CliqueSet(k=k, n=g.n, members=tuple(members))


def clique_density(g: Graph, k: int) -> float:
    """Fraction of (k+1)-subsets of vertices that are cliques."""
    _check_k(g, k)
    return enumerate_cliques(g, k).chi / math.comb(g.n, k + 1)


def _is_clique(adj: tuple[int, ...], vertices) -> bool:
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    for v in vertices:
        v = int(v)
        if adj[v] & mask != mask ^ (1 << v):
            return False
    return True


def sample_clique_rejection(
    g: Graph, k: int, seed, *, max_trials: int = REJECTION_TRIAL_CAP
) -> tuple[int, int]:
    """Uniform (k+1)-clique by rejection over Hamming-weight-(k+1) strings.

    Returns ``(bitmask, trials)`` where ``trials`` counts the rejections
    plus the accepted draw. Raises :class:`InfeasibleError` once
    ``max_trials`` draws were all rejected.
    """
    _check_k(g, k)
    rng = np.random.default_rng(require_seed(seed))
    adj = _adjacency(g)
    size = k + 1
    for trial in range(1, max_trials + 1):
        verts = rng.choice(g.n, size=size, replace=False)
        if _is_clique(adj, verts):
            mask = 0
            for v in verts:
                mask |= 1 << int(v)
            return mask, trial
    raise InfeasibleError(
        f"no clique of {size} vertices found in {max_trials} trials; "
        "the graph may have none at this dimension"
    )


@dataclass(frozen=True)
class CliqueSamplingCost:
    """Query-cost figures for preparing the uniform clique distribution.

    ``grover_queries`` is the asymptotic amplitude-amplification figure
    k^2 * sqrt(C(n, k+1) / chi_k); ``rejection_expected_trials`` is the
    expected number of uniform subset draws until acceptance.
    """

    n: int
    k: int
    chi: int
    search_space: int
    grover_queries: float
    rejection_expected_trials: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "chi": self.chi,
            "search_space": self.search_space,
            "grover_queries": self.grover_queries,
            "rejection_expected_trials": self.rejection_expected_trials,
        }


def grover_cost_model(n: int, k: int, chi_k: int) -> CliqueSamplingCost:
    if not (0 <= k <= n - 1):
        raise ValidationError(f"k={k} out of range for n={n}")
    space = math.comb(n, k + 1)
    if chi_k < 1:
        raise ValidationError("chi_k must be at least 1; no cliques to sample")
    if chi_k > space:
        raise ValidationError(f"chi_k={chi_k} exceeds C({n},{k + 1})={space}")
    ratio = space / chi_k
    return CliqueSamplingCost(
        n=n,
        k=k,
        chi=chi_k,
        search_space=space,
        grover_queries=k * k * math.sqrt(ratio),
        rejection_expected_trials=ratio,
    )


# ---------------------------------------------------------------------------
# File formats: point-cloud CSV (one point per row) and edge lists with a
# "n <count>" header line followed by "u v" lines, 0-indexed.


def load_point_cloud(path) -> PointCloud:
    text = Path(path).read_text()
    rows: list[list[float]] = []
    width = None
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        fields = [f.strip() for f in record if f.strip()]
        if not fields:
            continue
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: non-numeric field") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(
                f"{path}:{lineno}: expected {width} coordinates, got {len(row)}"
            )
        rows.append(row)
    return PointCloud(rows)


def load_edge_list(path) -> Graph:
    lines = Path(path).read_text().splitlines()
    body = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not body:
        raise ValidationError(f"{path}: empty edge-list file")
    lineno, header = body[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise ValidationError(f"{path}:{lineno}: expected header 'n <count>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise ValidationError(f"{path}:{lineno}: bad vertex count {parts[1]!r}") from None
    edges = set()
    for lineno, line in body[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"{path}:{lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: non-integer endpoint") from None
        if u == v:
            raise ValidationError(f"{path}:{lineno}: self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"{path}:{lineno}: endpoint out of range for n={n}")
        key = (u, v) if u < v else (v, u)
        if key in edges:
            raise ValidationError(f"{path}:{lineno}: duplicate edge {key}")
        edges.add(key)
    return Graph(n=n, edges=frozenset(edges))


def save_edge_list(g: Graph, path) -> None:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    Path(path).write_text("\n".join(lines) + "\n")
