"""Independent brute-force oracles used to validate library output.

Everything here is deliberately implemented over vertex tuples with
itertools, or by direct summation, taking a different route than the
library's bitset and closed-form code paths.
"""

from itertools import combinations

import numpy as np


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def brute_force_cliques(n, edges, k):
    """All (k+1)-cliques as sorted bitmasks, by scanning every subset."""
    edge_set = {tuple(sorted(e)) for e in edges}
    out = []
    for combo in combinations(range(n), k + 1):
        if all(tuple(sorted(p)) in edge_set for p in combinations(combo, 2)):
            out.append(mask_of(combo))
    return sorted(out)


def dense_boundary(n, edges, k):
    """Dense k-th boundary matrix built from vertex tuples.

    The face deleting the i-th vertex (ascending order) gets sign (-1)^i,
    mirroring the alternating-sum rule without any bit twiddling.
    """
    edge_set = {tuple(sorted(e)) for e in edges}

    def cliques(size):
        out = []
        for combo in combinations(range(n), size):
            if all(tuple(sorted(p)) in edge_set for p in combinations(combo, 2)):
                out.append(combo)
        return sorted(out, key=mask_of)

    rows = cliques(k)
    cols = cliques(k + 1)
    row_index = {c: i for i, c in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for c, clique in enumerate(cols):
        for i in range(len(clique)):
            face = clique[:i] + clique[i + 1 :]
            mat[row_index[face], c] = (-1) ** i
    return mat


def dense_laplacian(n, edges, k):
    """Dense k-th combinatorial Laplacian from the dense boundary oracle."""
    down = dense_boundary(n, edges, k) if k >= 1 else np.zeros((0, 0), dtype=np.int64)
    up = dense_boundary(n, edges, k + 1)
    if k >= 1:
        lap = down.T @ down
    else:
        lap = np.zeros((up.shape[0], up.shape[0]), dtype=np.int64)
    if up.size or up.shape[0]:
        lap = lap + up @ up.T
    return lap


def qpe_reference(phase, t):
    """Readout distribution by direct summation of the geometric series."""
    n = 1 << t
    xs = np.arange(n)
    probs = np.empty(n)
    for m in range(n):
        amps = np.exp(2j * np.pi * xs * (phase - m / n)) / n
        probs[m] = abs(amps.sum()) ** 2
    return probs


def subsets_by_weight(n, w):
    """All weight-w bitmasks of n bits in ascending integer order."""
    return sorted(mask_of(c) for c in combinations(range(n), w))


def exact_subtrace(eigenvalues, b):
    """(1/dim) * sum of eigenvalues lying in [0, b]."""
    lam = np.asarray(eigenvalues)
    return float(lam[(lam >= 0) & (lam <= b)].sum() / lam.size)


def all_graphs(n):
    """Every labelled graph on n vertices as an edge list."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
