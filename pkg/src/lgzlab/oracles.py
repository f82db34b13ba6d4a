"""Sparse-access input models: sorted triple-list stores and log-local term sums.

A :class:`TripleListStore` keeps the nonzero entries of a Hermitian matrix as
triples (row, col, value) sorted lexicographically by column and then row, so
column lookups run in O(log nnz) comparisons by binary search. The
comparison count of each location query is reported for cost accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Protocol, runtime_checkable

import numpy as np
import scipy.sparse as sparse

from .errors import ValidationError

__all__ = [
    "SparseAccessOracle",
    "LocationResult",
    "TripleListStore",
    "LocalTerm",
    "LocalTermSum",
    "LocalTermOracle",
    "from_local_terms",
    "validate",
    "OracleValidationReport",
    "load_triple_list",
    "save_triple_list",
]

_HERMITIAN_ATOL = 1e-12


class LocationResult(NamedTuple):
    row: int
    comparisons: int


@runtime_checkable
class SparseAccessOracle(Protocol):
    """Entry/location access to a Hermitian matrix, one query at a time."""

    dim: int

    @property
    def row_sparsity_bound(self) -> int: ...

    def entry(self, i: int, j: int) -> complex: ...

    def nonzero_location(self, j: int, ell: int) -> int: ...

    def locate(self, j: int, ell: int) -> LocationResult: ...


def _check_index(dim: int, name: str, value: int) -> int:
    value = int(value)
    if not (0 <= value < dim):
        raise ValidationError(f"{name}={value} out of range for dim={dim}")
    return value


class TripleListStore:
    """Sorted, duplicate-free triple list with per-column counts precomputed.

    Values are stored as float64 or complex128; the number of bits per entry
    is a hardware parameter that appears only in resource accounting, never
    in the data model.
    """

    def __init__(self, dim, rows, cols, values):
        self.dim = int(dim)
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values)
        self.is_complex = np.iscomplexobj(values)
        self.values = values.astype(np.complex128 if self.is_complex else np.float64)
        if not (len(self.rows) == len(self.cols) == len(self.values)):
            raise ValidationError("triple arrays must have equal length")
        self.column_counts = np.bincount(self.cols, minlength=self.dim).astype(np.int64)
        self.column_starts = np.concatenate(([0], np.cumsum(self.column_counts)))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_triples(cls, dim, triples, *, require_hermitian: bool = True):
        dim = int(dim)
        if dim < 1:
            raise ValidationError(f"dim must be at least 1, got {dim}")
        items = []
        for i, j, v in triples:
            i = _check_index(dim, "row", i)
            j = _check_index(dim, "col", j)
            v = complex(v)
            if v == 0:
                raise ValidationError(f"explicit zero value at ({i}, {j})")
            items.append((j, i, v))
        items.sort(key=lambda t: (t[0], t[1]))
        for a, b in zip(items, items[1:]):
            if a[0] == b[0] and a[1] == b[1]:
                raise ValidationError(f"duplicate triple at ({a[1]}, {a[0]})")
        cols = [t[0] for t in items]
        rows = [t[1] for t in items]
        vals = [t[2] for t in items]
        if all(v.imag == 0.0 for v in vals):
            vals = [v.real for v in vals]
        store = cls(dim, rows, cols, vals)
        if require_hermitian:
            problem = store._hermitian_defect()
            if problem is not None:
                raise ValidationError(problem)
        return store

    @classmethod
    def from_matrix(cls, matrix, *, require_hermitian: bool = True):
        m = sparse.csc_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValidationError(f"matrix must be square, got shape {m.shape}")
        m.eliminate_zeros()
        m.sort_indices()
        dim = m.shape[0]
        cols = np.repeat(np.arange(dim, dtype=np.int64), np.diff(m.indptr))
        store = cls(dim, m.indices.astype(np.int64), cols, m.data)
        if require_hermitian:
            problem = store._hermitian_defect()
            if problem is not None:
                raise ValidationError(problem)
        return store

    def _hermitian_defect(self) -> str | None:
        table = {
            (int(i), int(j)): v
            for i, j, v in zip(self.rows, self.cols, self.values)
        }
        for (i, j), v in table.items():
            partner = table.get((j, i))
            if partner is None:
                return f"hermitian closure missing: ({i}, {j}) stored without ({j}, {i})"
            if abs(partner - np.conj(v)) > _HERMITIAN_ATOL * max(1.0, abs(v)):
                return f"hermitian violation at ({i}, {j}): {v} vs conj({partner})"
        return None

    # -- oracle queries ----------------------------------------------------

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def row_sparsity_bound(self) -> int:
        if self.dim == 0 or self.nnz == 0:
            return 0
        return int(self.column_counts.max())

    def column_nnz(self, j: int) -> int:
        j = _check_index(self.dim, "col", j)
        return int(self.column_counts[j])

    def entry(self, i: int, j: int) -> complex | float:
        i = _check_index(self.dim, "row", i)
        j = _check_index(self.dim, "col", j)
        lo, hi = self.column_starts[j], self.column_starts[j + 1]
        pos = lo + np.searchsorted(self.rows[lo:hi], i)
        if pos < hi and self.rows[pos] == i:
            value = self.values[pos]
            return complex(value) if self.is_complex else float(value)
        return 0j if self.is_complex else 0.0

    def locate(self, j: int, ell: int) -> LocationResult:
        """Row of the ell-th nonzero of column j, with the comparison count.

        The column start is found by binary search over the full sorted
        triple list, so the count stays within ceil(log2 nnz) + O(1).
        """
        j = _check_index(self.dim, "col", j)
        ell = int(ell)
        count = int(self.column_counts[j])
        if not (0 <= ell < count):
            raise ValidationError(
                f"exhausted column: column {j} has {count} nonzeros, requested ell={ell}"
            )
        lo, hi, comparisons = 0, self.nnz, 0
        cols = self.cols
        while lo < hi:
            mid = (lo + hi) // 2
            comparisons += 1
            if cols[mid] < j:
                lo = mid + 1
            else:
                hi = mid
        return LocationResult(row=int(self.rows[lo + ell]), comparisons=comparisons)

    def nonzero_location(self, j: int, ell: int) -> int:
        return self.locate(j, ell).row

    # -- conversions ---------------------------------------------------------

    def to_csc(self) -> sparse.csc_matrix:
        return sparse.csc_matrix(
            (self.values, (self.rows, self.cols)), shape=(self.dim, self.dim)
        )

    def toarray(self) -> np.ndarray:
        return self.to_csc().toarray()

    def triples(self) -> list[tuple[int, int, complex]]:
        return [
            (int(i), int(j), complex(v) if self.is_complex else float(v))
            for i, j, v in zip(self.rows, self.cols, self.values)
        ]

    def __eq__(self, other):
        if not isinstance(other, TripleListStore):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.is_complex == other.is_complex
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        kind = "complex" if self.is_complex else "real"
        return f"TripleListStore(dim={self.dim}, nnz={self.nnz}, {kind})"


# ---------------------------------------------------------------------------
# Log-local term sums, evaluated entry-by-entry without materializing 2^n.


class LocalTerm:
    """A Hermitian block acting on a small, ordered subset of qubits.

    Bit ``ell`` of a block index addresses ``qubits[ell]`` of the global
    basis index, with qubit q mapped to bit q of the index (least
    significant bit first).
    """

    def __init__(self, qubits, block):
        self.qubits = tuple(int(q) for q in qubits)
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError(f"repeated qubit in {self.qubits}")
        block = np.asarray(block, dtype=np.complex128)
        side = 1 << len(self.qubits)
        if block.shape != (side, side):
            raise ValidationError(
                f"block for {len(self.qubits)} qubits must be {side}x{side}, "
                f"got {block.shape}"
            )
        if not np.allclose(block, block.conj().T, atol=_HERMITIAN_ATOL, rtol=0.0):
            raise ValidationError("non-Hermitian block")
        self.block = block

    @property
    def mask(self) -> int:
        m = 0
        for q in self.qubits:
            m |= 1 << q
        return m

    def sub_index(self, i: int) -> int:
        s = 0
        for ell, q in enumerate(self.qubits):
            s |= ((i >> q) & 1) << ell
        return s

    def spread(self, pattern: int, base: int) -> int:
        """Global index with this term's qubits set from ``pattern`` over ``base``."""
        out = base & ~self.mask
        for ell, q in enumerate(self.qubits):
            out |= ((pattern >> ell) & 1) << q
        return out


class LocalTermSum:
    """Hamiltonian given as a sum of blocks, each on at most ~log n qubits."""

    def __init__(self, n: int, terms, *, max_terms: int = 4096, max_locality: int | None = None):
        self.n = int(n)
        if self.n < 1:
            raise ValidationError(f"qubit count must be at least 1, got {n}")
        self.terms = tuple(
            t if isinstance(t, LocalTerm) else LocalTerm(*t) for t in terms
        )
        if len(self.terms) > max_terms:
            raise ValidationError(
                f"{len(self.terms)} terms exceeds the configured cap {max_terms}"
            )
        if max_locality is None:
            max_locality = max(1, math.ceil(math.log2(max(self.n, 2)))) + 1
        for t in self.terms:
            if len(t.qubits) > max_locality:
                raise ValidationError(
                    f"term on {len(t.qubits)} qubits exceeds locality cap {max_locality}"
                )
            for q in t.qubits:
                if not (0 <= q < self.n):
                    raise ValidationError(f"qubit {q} out of range for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.terms)


class LocalTermOracle:
    """On-demand entry/location oracle for a log-local term sum."""

    def __init__(self, term_sum: LocalTermSum):
        self.term_sum = term_sum
        self.dim = 1 << term_sum.n

    @property
    def row_sparsity_bound(self) -> int:
        return min(self.dim, sum(1 << len(t.qubits) for t in self.term_sum.terms))

    def entry(self, i: int, j: int) -> complex:
        i = _check_index(self.dim, "row", i)
        j = _check_index(self.dim, "col", j)
        total = 0j
        for term in self.term_sum.terms:
            if (i ^ j) & ~term.mask == 0:
                total += term.block[term.sub_index(i), term.sub_index(j)]
        return total

    def _column_rows(self, j: int) -> list[int]:
        candidates = set()
        for term in self.term_sum.terms:
            for pattern in range(1 << len(term.qubits)):
                candidates.add(term.spread(pattern, j))
        return sorted(i for i in candidates if self.entry(i, j) != 0)

    def locate(self, j: int, ell: int) -> LocationResult:
        j = _check_index(self.dim, "col", j)
        rows = self._column_rows(j)
        if not (0 <= int(ell) < len(rows)):
            raise ValidationError(
                f"exhausted column: column {j} has {len(rows)} nonzeros, "
                f"requested ell={ell}"
            )
        return LocationResult(row=rows[int(ell)], comparisons=len(rows))

    def nonzero_location(self, j: int, ell: int) -> int:
        return self.locate(j, ell).row


def from_local_terms(term_sum: LocalTermSum) -> LocalTermOracle:
    """Oracle computing entries by summing contributing local terms on demand."""
    return LocalTermOracle(term_sum)


# ---------------------------------------------------------------------------
# Store validation report.


@dataclass(frozen=True)
class OracleValidationReport:
    dim: int
    nnz: int
    max_column_nnz: int
    hermitian: bool
    sorted_ok: bool
    duplicate_free: bool
    psd: bool | None
    violations: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "nnz": self.nnz,
            "max_column_nnz": self.max_column_nnz,
            "hermitian": self.hermitian,
            "sorted": self.sorted_ok,
            "duplicate_free": self.duplicate_free,
            "psd": self.psd,
            "violations": list(self.violations),
        }


def validate(store: TripleListStore, *, expect_psd: bool = False) -> OracleValidationReport:
    """Check sortedness, duplicates, Hermiticity and (optionally) PSD.

    Violations are reported, not raised, so the report can describe broken
    stores built programmatically.
    """
    violations: list[str] = []
    cols, rows = store.cols, store.rows
    if store.nnz > 1:
        col_step = cols[1:] > cols[:-1]
        same_col = cols[1:] == cols[:-1]
        sorted_ok = bool(np.all(col_step | (same_col & (rows[1:] >= rows[:-1]))))
        order = np.lexsort((rows, cols))
        sc, sr = cols[order], rows[order]
        duplicate_free = not bool(np.any((sc[1:] == sc[:-1]) & (sr[1:] == sr[:-1])))
    else:
        sorted_ok = duplicate_free = True
    if not sorted_ok:
        violations.append("triples are not sorted by (column, row)")
    if not duplicate_free:
        violations.append("duplicate (row, column) pairs present")
    defect = store._hermitian_defect()
    hermitian = defect is None
    if not hermitian:
        violations.append(defect)
    psd: bool | None = None
    if expect_psd:
        if hermitian:
            from .operators import DENSE_CEILING

            if store.dim > DENSE_CEILING:
                violations.append(
                    f"cannot confirm PSD: dim {store.dim} beyond dense ceiling"
                )
            else:
                eigs = np.linalg.eigvalsh(store.toarray())
                scale = max(1.0, float(np.abs(store.values).max(initial=0.0)))
                psd = bool(eigs.min(initial=0.0) >= -1e-9 * scale)
                if not psd:
                    violations.append(f"claimed PSD but min eigenvalue {eigs.min():.3e}")
        else:
            violations.append("cannot confirm PSD: store is not Hermitian")
    return OracleValidationReport(
        dim=store.dim,
        nnz=store.nnz,
        max_column_nnz=store.row_sparsity_bound,
        hermitian=hermitian,
        sorted_ok=sorted_ok,
        duplicate_free=duplicate_free,
        psd=psd,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# Triple-list file format: header "dim <d> nnz <count>", then "i j re [im]"
# lines sorted by (column, row). Floats are written with repr so values
# round-trip bit-exactly.


def _format_value(v, is_complex: bool) -> str:
    if is_complex:
        return f"{float(v.real)!r} {float(v.imag)!r}"
    return repr(float(v))


def save_triple_list(store: TripleListStore, path) -> None:
    lines = [f"dim {store.dim} nnz {store.nnz}"]
    for i, j, v in zip(store.rows, store.cols, store.values):
        lines.append(f"{i} {j} {_format_value(v, store.is_complex)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_triple_list(path, *, require_hermitian: bool = True) -> TripleListStore:
    lines = Path(path).read_text().splitlines()
    body = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not body:
        raise ValidationError(f"{path}: empty triple-list file")
    lineno, header = body[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "dim" or parts[2] != "nnz":
        raise ValidationError(f"{path}:{lineno}: expected header 'dim <d> nnz <count>'")
    try:
        dim, nnz = int(parts[1]), int(parts[3])
    except ValueError:
        raise ValidationError(f"{path}:{lineno}: malformed header") from None
    triples: list[tuple[int, int, complex]] = []
    arity: int | None = None
    prev_key: tuple[int, int] | None = None
    for lineno, line in body[1:]:
        parts = line.split()
        if len(parts) not in (3, 4):
            raise ValidationError(f"{path}:{lineno}: expected 'i j re [im]'")
        if arity is None:
            arity = len(parts)
        elif len(parts) != arity:
            raise ValidationError(f"{path}:{lineno}: mixed real/complex lines")
        try:
            i, j = int(parts[0]), int(parts[1])
            re = float(parts[2])
            im = float(parts[3]) if len(parts) == 4 else 0.0
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: malformed triple") from None
        key = (j, i)
        if prev_key is not None and key <= prev_key:
            raise ValidationError(
                f"{path}:{lineno}: triples must be strictly sorted by (column, row)"
            )
        prev_key = key
        triples.append((i, j, complex(re, im) if arity == 4 else re))
    if len(triples) != nnz:
        raise ValidationError(
            f"{path}: header promises nnz={nnz} but file holds {len(triples)}"
        )
    store = TripleListStore.from_triples(dim, triples, require_hermitian=require_hermitian)
    if arity == 4 and not store.is_complex:
        # keep the declared complex dtype even when all imaginary parts are zero
        store = TripleListStore(dim, store.rows, store.cols, store.values.astype(np.complex128))
    return store
