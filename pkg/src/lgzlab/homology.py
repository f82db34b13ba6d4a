"""Boundary maps, combinatorial Laplacians, the Dirac operator, exact Betti numbers.

Sign convention: the basis label of a clique is its bitmask, and the face
obtained by deleting the i-th set bit (counting set bits from the least
significant end) carries sign (-1)^i. Homology dimensions are invariant to
this choice; fixing it makes matrices reproducible.

Homology is unreduced: the boundary map at dimension 0 is the zero map, so
the 0-th Laplacian is the ordinary graph Laplacian and the 0-th Betti number
counts connected components. Exact Betti numbers come from fraction-free
integer elimination, never from floating-point rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sparse

from .complexes import CliqueSet, Graph, enumerate_cliques
from .errors import ValidationError
from .operators import SparseHermitian, spectral_extrema

__all__ = [
    "BoundaryMatrix",
    "BettiReport",
    "boundary_matrix",
    "combinatorial_laplacian",
    "dirac_operator",
    "betti_exact",
    "hodge_nullity",
    "pad_laplacian",
    "bareiss_rank",
    "subset_rank",
    "spectral_extrema",
]


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Boundary map from (k+1)-clique basis vectors to their signed k-faces.

    For k = 0 this is the explicit zero-map marker: a 0 x chi_0 matrix whose
    row basis is the formal empty set.
    """

    k: int
    rows: CliqueSet
    cols: CliqueSet
    matrix: sparse.csc_matrix

    @property
    def is_zero_map(self) -> bool:
        return self.k == 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def _iter_set_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def boundary_matrix(g: Graph, k: int) -> BoundaryMatrix:
    """Matrix of the k-th boundary map restricted to the clique bases of ``g``."""
    if not (0 <= k <= g.n - 1):
        raise ValidationError(f"k={k} out of range for a graph on {g.n} vertices")
    cols = enumerate_cliques(g, k)
    if k == 0:
        rows = CliqueSet(k=-1, n=g.n, members=())
        matrix = sparse.csc_matrix((0, cols.chi), dtype=np.int8)
        return BoundaryMatrix(k=0, rows=rows, cols=cols, matrix=matrix)
    rows = enumerate_cliques(g, k - 1)
    row_index = {mask: r for r, mask in enumerate(rows.members)}
    data, r_idx, c_idx = [], [], []
    for c, mask in enumerate(cols.members):
        for i, bit in enumerate(_iter_set_bits(mask)):
            data.append(1 - 2 * (i & 1))
            r_idx.append(row_index[mask ^ bit])
            c_idx.append(c)
    matrix = sparse.csc_matrix(
        (np.asarray(data, dtype=np.int8), (r_idx, c_idx)),
        shape=(rows.chi, cols.chi),
        dtype=np.int8,
    )
    return BoundaryMatrix(k=k, rows=rows, cols=cols, matrix=matrix)


def _boundary_int64(g: Graph, k: int) -> sparse.csc_matrix:
    return boundary_matrix(g, k).matrix.astype(np.int64)


def combinatorial_laplacian(g: Graph, k: int) -> SparseHermitian:
    """The k-th combinatorial Laplacian on the (k+1)-clique basis.

    Assembled as the down-term (adjoint of the k-th boundary composed with
    it) plus the up-term from dimension k+1; positive semidefinite by
    construction.
    """
    if not (0 <= k <= g.n - 1):
        raise ValidationError(f"k={k} out of range for a graph on {g.n} vertices")
    chi = enumerate_cliques(g, k).chi
    if chi == 0:
        raise ValidationError(f"empty basis: no cliques of {k + 1} vertices")
    down = _boundary_int64(g, k)
    lap = (down.T @ down).astype(np.int64)
    if k + 1 <= g.n - 1:
        up = _boundary_int64(g, k + 1)
        lap = lap + up @ up.T
    return SparseHermitian(lap.astype(np.float64), check=False)


def dirac_operator(g: Graph) -> SparseHermitian:
    """Block-tridiagonal Hermitian operator whose square is the Laplacian block sum.

    The basis is the concatenation of the clique bases for k = 0 up to the
    largest dimension with any cliques; off-diagonal blocks are the boundary
    maps. Faces of cliques are cliques, so the nonempty dimensions form a
    prefix and the blocks are contiguous.
    """
    sets = []
    for k in range(0, g.n):
        cs = enumerate_cliques(g, k)
        if cs.chi == 0:
            break
        sets.append(cs)
    if not sets:
        return SparseHermitian(sparse.csr_matrix((0, 0), dtype=np.float64), check=False)
    if len(sets) == 1:
        n0 = sets[0].chi
        return SparseHermitian(sparse.csr_matrix((n0, n0), dtype=np.float64), check=False)
    blocks = [[None] * len(sets) for _ in range(len(sets))]
    for k in range(1, len(sets)):
        upper = _boundary_int64(g, k).astype(np.float64)
        blocks[k - 1][k] = upper
        blocks[k][k - 1] = upper.T
    full = sparse.bmat(blocks, format="csr")
    return SparseHermitian(full, check=False)


def bareiss_rank(rows) -> int:
    """Exact rank of an integer matrix by fraction-free (Bareiss) elimination.

    Works on Python integers, so no overflow; every intermediate division is
    exact. Rows and columns are both swapped to find pivots, which preserves
    the fraction-free property.
    """
    mat = [[int(x) for x in row] for row in rows]
    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    rank = 0
    prev = 1
    limit = min(nr, nc)
    for step in range(limit):
        pr = pc = -1
        for i in range(step, nr):
            row = mat[i]
            for j in range(step, nc):
                if row[j]:
                    pr, pc = i, j
                    break
            if pr >= 0:
                break
        if pr < 0:
            break
        if pr != step:
            mat[step], mat[pr] = mat[pr], mat[step]
        if pc != step:
            for row in mat:
                row[step], row[pc] = row[pc], row[step]
        pivot_row = mat[step]
        pivot = pivot_row[step]
        for i in range(step + 1, nr):
            row = mat[i]
            factor = row[step]
            for j in range(step + 1, nc):
                row[j] = (row[j] * pivot - factor * pivot_row[j]) // prev
            row[step] = 0
        prev = pivot
        rank += 1
    return rank


@lru_cache(maxsize=4096)
def _boundary_rank(g: Graph, k: int) -> int:
    bm = boundary_matrix(g, k)
    if bm.shape[0] == 0 or bm.shape[1] == 0:
        return 0
    return bareiss_rank(bm.matrix.toarray())


@dataclass(frozen=True)
class BettiReport:
    """Betti number of dimension k together with the chain-space dimension chi_k."""

    k: int
    betti: int
    dim_hk: int
    method: str
    gap_violated: bool = False

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "betti": self.betti,
            "dim_hk": self.dim_hk,
            "method": self.method,
            "gap_violated": self.gap_violated,
        }


def betti_exact(g: Graph, k: int) -> BettiReport:
    """Exact k-th Betti number: nullity of the k-th boundary minus the
    rank of the (k+1)-th, both over the integers."""
    if not (0 <= k <= g.n - 1):
        raise ValidationError(f"k={k} out of range for a graph on {g.n} vertices")
    chi = enumerate_cliques(g, k).chi
    if chi == 0:
        raise ValidationError(f"empty basis: no cliques of {k + 1} vertices")
    rank_down = 0 if k == 0 else _boundary_rank(g, k)
    rank_up = _boundary_rank(g, k + 1) if k + 1 <= g.n - 1 else 0
    betti = chi - rank_down - rank_up
    return BettiReport(k=k, betti=betti, dim_hk=chi, method="rank")


def hodge_nullity(g: Graph, k: int, tol: float | None = None) -> BettiReport:
    """Betti number as the count of Laplacian eigenvalues below ``tol``.

    The default tolerance is 1e-8 times the Gershgorin bound of the
    Laplacian. The report flags ``gap_violated`` when ``tol`` reaches the
    smallest genuinely nonzero eigenvalue, in which case the count absorbs
    nonzero modes.
    """
    lap = combinatorial_laplacian(g, k)
    if tol is None:
        tol = 1e-8 * lap.norm_bound if lap.norm_bound > 0 else 1e-8
    tol = float(tol)
    if not (tol > 0.0):
        raise ValidationError(f"tol must be positive, got {tol}")
    extrema = spectral_extrema(lap)
    eigs = lap.eigenvalues()
    betti = int(np.count_nonzero(eigs < tol))
    gap_violated = (not extrema.all_zero) and tol >= extrema.lambda_min_nonzero
    return BettiReport(
        k=k, betti=betti, dim_hk=lap.dim, method="hodge", gap_violated=gap_violated
    )


def subset_rank(mask: int) -> int:
    """Position of ``mask`` among all bitmasks of its Hamming weight, in
    ascending integer order (the combinatorial number system)."""
    rank = 0
    i = 0
    while mask:
        low = mask & -mask
        mask ^= low
        i += 1
        rank += math.comb(low.bit_length() - 1, i)
    return rank


def _padded_boundary(g: Graph, k: int) -> sparse.csc_matrix:
    """The k-th boundary map embedded in the full Hamming-weight bases.

    Rows run over all C(n, k) weight-k masks, columns over all C(n, k+1)
    weight-(k+1) masks; only clique columns carry entries. Nothing of size
    chi x chi is ever materialized.
    """
    n_rows = math.comb(g.n, k)
    n_cols = math.comb(g.n, k + 1)
    if k == 0 or k > g.n - 1:
        return sparse.csc_matrix((0 if k == 0 else n_rows, n_cols), dtype=np.int64)
    cliques = enumerate_cliques(g, k)
    data, r_idx, c_idx = [], [], []
    for mask in cliques.members:
        col = subset_rank(mask)
        for i, bit in enumerate(_iter_set_bits(mask)):
            data.append(1 - 2 * (i & 1))
            r_idx.append(subset_rank(mask ^ bit))
            c_idx.append(col)
    return sparse.csc_matrix(
        (np.asarray(data, dtype=np.int64), (r_idx, c_idx)),
        shape=(n_rows, n_cols),
        dtype=np.int64,
    )


def pad_laplacian(g: Graph, k: int) -> SparseHermitian:
    """The k-th Laplacian padded with all-zero rows and columns onto the
    full C(n, k+1)-dimensional weight-(k+1) basis.

    Built directly from padded boundary maps, so the clique-basis Laplacian
    is never formed on its own. Its spectrum is the Laplacian spectrum plus
    C(n, k+1) - chi_k extra zeros.
    """
    if not (0 <= k <= g.n - 1):
        raise ValidationError(f"k={k} out of range for a graph on {g.n} vertices")
    down = _padded_boundary(g, k)
    gamma = (down.T @ down).astype(np.int64)
    if k + 1 <= g.n - 1:
        up = _padded_boundary(g, k + 1)
        gamma = gamma + up @ up.T
    return SparseHermitian(gamma.astype(np.float64), check=False)
