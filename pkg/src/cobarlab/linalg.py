"""Exact sparse linear algebra over :data:`~cobarlab.fields.F2` and :data:`~cobarlab.fields.Q`.

Matrices are stored as lists of sparse row dictionaries.  Everything here is
deterministic: reduced row echelon forms are unique for a given row space, and
the pivot rule (first nonzero entry in column order) makes transform records
and cycle representatives reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .fields import Field, Scalar
from .vectors import add_into, add_term

SparseRow = Dict[int, Scalar]


class CompositionNonzeroError(ValueError):
    """Raised when ``d_n o d_{n+1}`` is not the zero map."""


class SparseMatrix:
    """An immutable ``rows x cols`` matrix with exact entries."""

    __slots__ = ("rows", "cols", "field", "_rows")

    def __init__(self, rows: int, cols: int, field: Field, row_dicts: Optional[List[SparseRow]] = None):
        self.rows = rows
        self.cols = cols
        self.field = field
        if row_dicts is None:
            row_dicts = [{} for _ in range(rows)]
        if len(row_dicts) != rows:
            raise ValueError("row count mismatch")
        clean = []
        for r in row_dicts:
            d = {}
            for c, v in r.items():
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range for {cols} columns")
                v = field.reduce(v)
                if v:
                    d[c] = v
            clean.append(d)
        self._rows = clean

    @classmethod
    def from_entries(cls, rows: int, cols: int, field: Field, entries: Iterable[Tuple[int, int, Scalar]]):
        row_dicts: List[SparseRow] = [{} for _ in range(rows)]
        for r, c, v in entries:
            add_term(field, row_dicts[r], c, v)
        return cls(rows, cols, field, row_dicts)

    @classmethod
    def from_dense(cls, field: Field, dense: Sequence[Sequence]):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, field, [{c: v for c, v in enumerate(r) if field.reduce(v)} for r in dense])

    @classmethod
    def from_columns(cls, rows: int, field: Field, columns: Sequence[Dict[int, Scalar]]):
        """Build a matrix whose ``j``-th column is the sparse vector ``columns[j]``."""
        row_dicts: List[SparseRow] = [{} for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                add_term(field, row_dicts[i], j, v)
        return cls(rows, len(columns), field, row_dicts)

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field):
        return cls(rows, cols, field)

    @classmethod
    def identity(cls, n: int, field: Field):
        return cls(n, n, field, [{i: 1} for i in range(n)])

    @property
    def entries(self) -> List[Tuple[int, int, Scalar]]:
        """Canonical entry list sorted by ``(row, col)``."""
        return [(i, j, r[j]) for i, r in enumerate(self._rows) for j in sorted(r)]

    def row(self, i: int) -> SparseRow:
        return dict(self._rows[i])

    def column(self, j: int) -> Dict[int, Scalar]:
        return {i: r[j] for i, r in enumerate(self._rows) if j in r}

    def columns(self) -> List[Dict[int, Scalar]]:
        cols: List[Dict[int, Scalar]] = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def to_dense(self) -> List[List[Scalar]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.field, self.columns())

    def is_zero(self) -> bool:
        return not any(self._rows)

    def apply(self, vec: Dict[int, Scalar]) -> Dict[int, Scalar]:
        """Matrix-vector product on a sparse column vector."""
        out: Dict[int, Scalar] = {}
        f = self.field
        for i, r in enumerate(self._rows):
            s = 0
            for j, v in r.items():
                x = vec.get(j)
                if x:
                    s += v * x
            s = f.reduce(s)
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        out = []
        for r in self._rows:
            acc: SparseRow = {}
            for k, v in r.items():
                add_into(f, acc, other._rows[k], v)
            out.append(acc)
        return SparseMatrix(self.rows, other.cols, f, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.shape == other.shape
            and self.field is other.field
            and self._rows == other._rows
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, {self.field}, nnz={sum(map(len, self._rows))})"


def _reduce_against(field: Field, vec: SparseRow, pivots: Dict[int, SparseRow],
                    track: Optional[SparseRow] = None, transforms: Optional[Dict[int, SparseRow]] = None) -> None:
    """Eliminate every pivot column of ``pivots`` from ``vec`` in place.

    ``pivots`` maps a pivot column to a fully reduced row with leading entry 1.
    """
    hits = [c for c in vec if c in pivots]
    for c in hits:
        coeff = vec.get(c)
        if not coeff:
            continue
        add_into(field, vec, pivots[c], -coeff)
        if track is not None:
            add_into(field, track, transforms[c], -coeff)


def _echelon(field: Field, rows: Sequence[SparseRow], track: bool):
    """Incremental Gauss-Jordan elimination.

    Returns ``(pivot_rows, transforms)`` where ``pivot_rows`` maps pivot column to a
    row of the RREF and ``transforms[c]`` expresses that row in the input rows.
    """
    pivots: Dict[int, SparseRow] = {}
    transforms: Dict[int, SparseRow] = {}
    for idx, r in enumerate(rows):
        vec = {c: v for c, v in r.items() if field.reduce(v)}
        tr = {idx: 1} if track else None
        _reduce_against(field, vec, pivots, tr, transforms)
        if not vec:
            continue
        lead = min(vec)
        inv = field.inv(vec[lead])
        if inv != 1:
            vec = {c: field.reduce(v * inv) for c, v in vec.items()}
            if track:
                tr = {c: field.reduce(v * inv) for c, v in tr.items()}
        # back-substitute the new pivot into earlier rows to keep full reduction
        for c, prow in pivots.items():
            coeff = prow.get(lead)
            if coeff:
                add_into(field, prow, vec, -coeff)
                if track:
                    add_into(field, transforms[c], tr, -coeff)
        pivots[lead] = vec
        if track:
            transforms[lead] = tr
    return pivots, transforms


def rref(m: SparseMatrix):
    """Reduced row echelon form.

    Returns ``(R, pivot_columns, transform)``: ``R`` has the same shape as ``m``
    with the nonzero rows first, and ``transform[i]`` is a sparse row over the
    original row indices with ``R.row(i) == sum transform[i][j] * m.row(j)``.
    """
    pivots, transforms = _echelon(m.field, m._rows, track=True)
    order = sorted(pivots)
    rows = [pivots[c] for c in order] + [{} for _ in range(m.rows - len(order))]
    transform = [transforms[c] for c in order]
    return SparseMatrix(m.rows, m.cols, m.field, rows), order, transform


def rank(m: SparseMatrix) -> int:
    pivots, _ = _echelon(m.field, m._rows, track=False)
    return len(pivots)


def kernel_basis(m: SparseMatrix) -> List[Dict[int, Scalar]]:
    """Basis of the null space ``{x : m x = 0}``, one vector per free column.

    The vector for free column ``f`` is ``e_f - sum_r R[r, f] e_{pivot(r)}``.
    """
    f = m.field
    pivots, _ = _echelon(f, m._rows, track=False)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = {fc: 1}
        for pc, prow in pivots.items():
            v = prow.get(fc)
            if v:
                vec[pc] = f.neg(v)
        basis.append(dict(sorted(vec.items())))
    return basis


class ColumnSpaceSolver:
    """Solve ``m x = b`` for many right-hand sides ``b``."""

    def __init__(self, m: SparseMatrix):
        self.matrix = m
        self.field = m.field
        self._pivots, self._transforms = _echelon(m.field, m.columns(), track=True)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solve(self, b: Dict[int, Scalar]) -> Optional[Dict[int, Scalar]]:
        """Some ``x`` with ``m x = b`` (sparse over columns), or ``None``."""
        vec = {k: v for k, v in b.items() if self.field.reduce(v)}
        x: SparseRow = {}
        f = self.field
        for c in [c for c in vec if c in self._pivots]:
            coeff = vec.get(c)
            if not coeff:
                continue
            add_into(f, vec, self._pivots[c], -coeff)
            add_into(f, x, self._transforms[c], coeff)
        if vec:
            return None
        return x


@dataclass
class Homology:
    """Homology of ``C_{n+1} -> C_n -> C_{n-1}`` at ``C_n``.

    ``representatives`` are echelon cycles (fully reduced modulo boundaries).
    """

    field: Field
    size: int
    dimension: int
    representatives: List[Dict[int, Scalar]]
    boundary_rank: int
    cycle_rank: int
    _boundary_pivots: Dict[int, SparseRow] = dc_field(repr=False)
    _class_pivots: List[int] = dc_field(repr=False)
    _dn: SparseMatrix = dc_field(repr=False)

    @property
    def class_pivots(self) -> List[int]:
        """Basis index at which each representative has its leading entry."""
        return list(self._class_pivots)

    def is_cycle(self, z: Dict[int, Scalar]) -> bool:
        return not self._dn.apply(z)

    def coordinates(self, z: Dict[int, Scalar]) -> List[Scalar]:
        """Coordinates of the class of the cycle ``z`` in the representative basis."""
        f = self.field
        vec = {k: f.reduce(v) for k, v in z.items() if f.reduce(v)}
        for c in [c for c in vec if c in self._boundary_pivots]:
            coeff = vec.get(c)
            if coeff:
                add_into(f, vec, self._boundary_pivots[c], -coeff)
        coords = []
        for rep, c in zip(self.representatives, self._class_pivots):
            coeff = vec.get(c, 0)
            coords.append(coeff)
            if coeff:
                add_into(f, vec, rep, -coeff)
        if vec:
            raise ValueError("vector is not a cycle")
        return coords

    def is_boundary(self, z: Dict[int, Scalar]) -> bool:
        try:
            return not any(self.coordinates(z))
        except ValueError:
            return False


def homology(dn_plus_1: SparseMatrix, dn: SparseMatrix) -> Homology:
    """Homology at the middle space of ``dn_plus_1`` followed by ``dn``.

    Raises :class:`CompositionNonzeroError` if ``dn @ dn_plus_1 != 0``.
    """
    if dn.cols != dn_plus_1.rows:
        raise ValueError("incompatible shapes")
    f = dn.field
    size = dn.cols
    if dn.rows and dn_plus_1.cols and not (dn @ dn_plus_1).is_zero():
        raise CompositionNonzeroError("d o d is nonzero")
    bpivots, _ = _echelon(f, dn_plus_1.columns(), track=False)
    cycles = kernel_basis(dn)
    reduced = []
    for z in cycles:
        z = dict(z)
        _reduce_against(f, z, bpivots)
        reduced.append(z)
    hpivots, _ = _echelon(f, reduced, track=False)
    order = sorted(hpivots)
    reps = [dict(sorted(hpivots[c].items())) for c in order]
    return Homology(
        field=f,
        size=size,
        dimension=len(reps),
        representatives=reps,
        boundary_rank=len(bpivots),
        cycle_rank=len(cycles),
        _boundary_pivots=bpivots,
        _class_pivots=order,
        _dn=dn,
    )
