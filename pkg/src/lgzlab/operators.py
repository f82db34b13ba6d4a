"""Hermitian operators behind entry/location oracles, with dense spectra on demand.

Dense eigendecomposition is limited to ``DENSE_CEILING``; larger operators
can still be built and queried through their stores, but spectrum requests
raise :class:`InfeasibleError`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sparse

from .errors import InfeasibleError, ValidationError
from .oracles import LocationResult, TripleListStore

__all__ = [
    "DENSE_CEILING",
    "SparseHermitian",
    "SpectralExtrema",
    "gershgorin_bound",
    "spectral_extrema",
    "export_dense_csv",
]

DENSE_CEILING = 4096

_HERMITIAN_ATOL = 1e-10


def gershgorin_bound(matrix) -> float:
    """Largest row sum of absolute values; dominates every |eigenvalue|."""
    m = sparse.csr_matrix(matrix)
    if m.shape[0] == 0:
        return 0.0
    return float(np.abs(m).sum(axis=1).max())


class SparseHermitian:
    """A Hermitian matrix kept sparse, with cached spectrum and store access."""

    def __init__(self, matrix, *, norm_bound: float | None = None, check: bool = True):
        m = sparse.csr_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValidationError(f"operator must be square, got shape {m.shape}")
        m.eliminate_zeros()
        m.sort_indices()
        if check and m.nnz:
            defect = abs(m - m.getH()).max()
            scale = max(1.0, abs(m).max())
            if defect > _HERMITIAN_ATOL * scale:
                raise ValidationError(
                    f"operator is not Hermitian (max asymmetry {defect:.3e})"
                )
        if np.iscomplexobj(m.data) and m.nnz and np.abs(m.data.imag).max() == 0.0:
            m = m.real
        self.matrix = m
        self.norm_bound = float(norm_bound) if norm_bound is not None else gershgorin_bound(m)
        self._eigenvalues: np.ndarray | None = None
        self._store: TripleListStore | None = None

    @classmethod
    def from_dense(cls, array, **kwargs) -> "SparseHermitian":
        return cls(np.asarray(array), **kwargs)

    @classmethod
    def from_store(cls, store: TripleListStore, **kwargs) -> "SparseHermitian":
        return cls(store.to_csc(), **kwargs)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def trace(self) -> float:
        return float(np.real(self.matrix.diagonal().sum()))

    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues, ascending, by dense symmetric eigendecomposition."""
        if self._eigenvalues is None:
            if self.dim > DENSE_CEILING:
                raise InfeasibleError(
                    f"dim {self.dim} exceeds the dense eigendecomposition "
                    f"ceiling {DENSE_CEILING}"
                )
            if self.dim == 0:
                self._eigenvalues = np.empty(0)
            else:
                self._eigenvalues = np.sort(np.linalg.eigvalsh(self.toarray()))
        return self._eigenvalues

    def store(self) -> TripleListStore:
        if self._store is None:
            self._store = TripleListStore.from_matrix(self.matrix, require_hermitian=False)
        return self._store

    def entry(self, i: int, j: int):
        return self.store().entry(i, j)

    def locate(self, j: int, ell: int) -> LocationResult:
        return self.store().locate(j, ell)

    def nonzero_location(self, j: int, ell: int) -> int:
        return self.store().nonzero_location(j, ell)

    @property
    def row_sparsity_bound(self) -> int:
        return self.store().row_sparsity_bound

    def scaled(self, factor: float) -> "SparseHermitian":
        out = SparseHermitian(self.matrix * factor, check=False)
        if self._eigenvalues is not None:
            out._eigenvalues = np.sort(self._eigenvalues * factor)
        return out

    def __repr__(self):
        return (
            f"SparseHermitian(dim={self.dim}, nnz={self.nnz}, "
            f"norm_bound={self.norm_bound:g})"
        )


@dataclass(frozen=True)
class SpectralExtrema:
    """Gershgorin bound and spectral endpoints of a PSD operator.

    ``all_zero`` flags an operator with no eigenvalue above the zero
    tolerance, in which case ``lambda_min_nonzero`` is NaN.
    """

    gershgorin_bound: float
    lambda_min_nonzero: float
    lambda_max: float
    all_zero: bool

    def to_json_dict(self) -> dict:
        return {
            "gershgorin_bound": self.gershgorin_bound,
            "lambda_min_nonzero": None if self.all_zero else self.lambda_min_nonzero,
            "lambda_max": self.lambda_max,
            "all_zero": self.all_zero,
        }


def spectral_extrema(h: SparseHermitian, zero_tol: float | None = None) -> SpectralExtrema:
    """Gershgorin bound, smallest eigenvalue above the zero tolerance, largest.

    The default zero tolerance is 1e-8 times the Gershgorin bound; relative
    scaling keeps the threshold meaningful across operator sizes.
    """
    bound = h.norm_bound
    if zero_tol is None:
        zero_tol = 1e-8 * bound if bound > 0 else 1e-8
    eigs = h.eigenvalues()
    lam_max = float(eigs[-1]) if eigs.size else 0.0
    above = eigs[eigs > zero_tol]
    if above.size == 0:
        return SpectralExtrema(bound, math.nan, lam_max, True)
    return SpectralExtrema(bound, float(above[0]), lam_max, False)


def export_dense_csv(h: SparseHermitian, path) -> None:
    """Dense CSV dump for debugging; floats use repr for exact round-trips."""
    arr = h.toarray()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in arr:
            if np.iscomplexobj(arr):
                writer.writerow([repr(complex(v)) for v in row])
            else:
                writer.writerow([repr(float(v)) for v in row])
