"""
Exact rational linear algebra.

Everything is computed over ``fractions.Fraction``; there is no rounding anywhere. Dense ``Matrix``
values back the public operations (rref, det, kernel_basis, in_span); ``SpanBasis`` is an incremental
sparse row reducer used by the algebra code for span membership and coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatch, NonSquare

Scalar = Fraction
Vector = Tuple[Fraction, ...]
SparseVector = Dict[int, Fraction]
Number = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(value: Union[int, str, Fraction]) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def format_scalar(value: Fraction) -> str:
    """Canonical ``p/q`` text, always with a denominator."""
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "Matrix":
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise DimensionMismatch("rows of unequal length")
        return cls(len(rows), width, tuple(as_scalar(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def apply(self, vector: Sequence[Number]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vector)} against {self.cols} columns")
        return tuple(sum((self[i, j] * vector[j] for j in range(self.cols)), ZERO) for i in range(self.rows))


class RREF(NamedTuple):
    reduced: Matrix
    rank: int
    pivot_columns: List[int]


def rref(m: Matrix) -> RREF:
    """Reduced row echelon form with pivots normalised to 1."""
    rows = m.to_rows()
    pivots: List[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        pivot_row = next((i for i in range(r, m.rows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return RREF(Matrix(m.rows, m.cols, tuple(x for row in rows for x in row)), len(pivots), pivots)


def det(m: Matrix) -> Fraction:
    """
    Exact determinant by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; the scaling is divided out at the end.
    """
    if m.rows != m.cols:
        raise NonSquare(m.rows, m.cols)
    n = m.rows
    if n == 0:
        return ONE
    scale = ONE
    a: List[List[int]] = []
    for row in m.to_rows():
        denom = lcm(*(x.denominator for x in row))
        scale *= denom
        a.append([int(x * denom) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1]) / scale


def kernel_basis(m: Matrix) -> List[Vector]:
    """Basis of the right null space, one vector per free column of the RREF."""
    reduced, _, pivots = rref(m)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [ZERO] * m.cols
        vec[free] = ONE
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r, free]
        basis.append(tuple(vec))
    return basis


def _check_lengths(vectors: Sequence[Sequence[Number]], length: Optional[int] = None) -> int:
    widths = {len(v) for v in vectors}
    if length is not None:
        widths.add(length)
    if len(widths) > 1:
        raise DimensionMismatch(f"vectors of different lengths {sorted(widths)}")
    return widths.pop() if widths else 0


def rank(vectors: Sequence[Sequence[Number]]) -> int:
    if not vectors:
        return 0
    _check_lengths(vectors)
    return rref(Matrix.from_rows(vectors)).rank


def in_span(vectors: Sequence[Sequence[Number]], v: Sequence[Number]) -> bool:
    _check_lengths(vectors, len(v))
    if all(x == 0 for x in v):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [v]) == rank(vectors)


def to_sparse(vector: Iterable[Number]) -> SparseVector:
    return {i: as_scalar(x) for i, x in enumerate(vector) if x != 0}


def to_dense(vector: SparseVector, length: int) -> Vector:
    out = [ZERO] * length
    for i, x in vector.items():
        out[i] = x
    return tuple(out)


def _axpy(target: SparseVector, factor: Fraction, source: SparseVector) -> None:
    """target += factor * source, dropping entries that cancel."""
    for i, x in source.items():
        value = target.get(i, ZERO) + factor * x
        if value:
            target[i] = value
        else:
            target.pop(i, None)


class SpanBasis:
    """
    Incrementally maintained reduced row echelon basis of a span of sparse vectors.

    Every accepted row remembers which combination of the added vectors produced it, so
    ``coordinates`` can express a member of the span in terms of the vectors passed to ``add``.
    """

    def __init__(self) -> None:
        self._pivots: List[int] = []
        self._rows: List[SparseVector] = []
        self._tracks: List[SparseVector] = []
        self._added = 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return list(self._pivots)

    def _reduce(self, vector: SparseVector) -> Tuple[SparseVector, SparseVector]:
        residue = dict(vector)
        track: SparseVector = {}
        for p, row, row_track in zip(self._pivots, self._rows, self._tracks):
            c = residue.get(p)
            if c:
                _axpy(residue, -c, row)
                _axpy(track, c, row_track)
        return residue, track

    def add(self, vector: SparseVector) -> bool:
        """Add a vector; returns True when it enlarged the span."""
        index = self._added
        self._added += 1
        residue, track = self._reduce(vector)
        if not residue:
            return False
        # residue = vector - track·(added); record the new row as a combination of added vectors
        new_track = {i: -x for i, x in track.items()}
        new_track[index] = ONE
        pivot = min(residue)
        inv = 1 / residue[pivot]
        row = {i: x * inv for i, x in residue.items()}
        row_track = {i: x * inv for i, x in new_track.items()}
        for k, other in enumerate(self._rows):
            c = other.get(pivot)
            if c:
                _axpy(other, -c, row)
                _axpy(self._tracks[k], -c, row_track)
        position = next((k for k, p in enumerate(self._pivots) if p > pivot), len(self._pivots))
        self._pivots.insert(position, pivot)
        self._rows.insert(position, row)
        self._tracks.insert(position, row_track)
        return True

    def contains(self, vector: SparseVector) -> bool:
        residue, _ = self._reduce(vector)
        return not residue

    def coordinates(self, vector: SparseVector) -> Optional[SparseVector]:
        """Coefficients over the added vectors (by insertion index), or None outside the span."""
        residue, track = self._reduce(vector)
        if residue:
            return None
        return track

    def rows(self) -> List[SparseVector]:
        """The canonical (fully reduced, pivots 1) basis rows, ordered by pivot."""
        return [dict(row) for row in self._rows]
