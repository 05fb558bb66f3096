"""Exact sparse linear algebra over Q.

Matrices are stored as sparse rows of :class:`fractions.Fraction`. Vectors
are plain ``dict`` objects mapping an index to a nonzero ``Fraction``; this
is the currency used by every other module in the package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Vec = Dict[int, Fraction]


class LinearAlgebraError(ValueError):
    pass


class DimensionMismatch(LinearAlgebraError):
    pass


class CompositionNotZero(LinearAlgebraError):
    """Raised when two consecutive differentials do not compose to zero."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RatMatrix:
    """Immutable sparse matrix with exact rational entries.

    >>> m = RatMatrix.from_dense([[1, 2], [2, 4]])
    >>> rank(m)
    1
    """

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries: Iterable[Tuple[int, int, object]] = ()):
        if rows < 0 or cols < 0:
            raise DimensionMismatch(f"negative shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        data: Dict[int, Vec] = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = _frac(v)
            if not v:
                continue
            row = data.setdefault(i, {})
            if j in row:
                raise ValueError(f"duplicate entry ({i}, {j})")
            row[j] = v
        self._rows = data

    @classmethod
    def _from_rows(cls, rows: int, cols: int, data: Dict[int, Vec]) -> "RatMatrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._rows = {i: r for i, r in data.items() if r}
        return m

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]], cols: Optional[int] = None) -> "RatMatrix":
        nrows = len(dense)
        if cols is None:
            cols = len(dense[0]) if nrows else 0
        return cls(nrows, cols, ((i, j, v) for i, r in enumerate(dense) for j, v in enumerate(r) if v))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Vec]) -> "RatMatrix":
        data: Dict[int, Vec] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    if not 0 <= i < rows:
                        raise IndexError(f"row index {i} outside {rows}")
                    data.setdefault(i, {})[j] = _frac(v)
        return cls._from_rows(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, ((i, i, 1) for i in range(n)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def entries(self) -> Iterator[Tuple[int, int, Fraction]]:
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def row(self, i: int) -> Vec:
        return dict(self._rows.get(i, {}))

    def column(self, j: int) -> Vec:
        return {i: r[j] for i, r in self._rows.items() if j in r}

    def columns(self) -> List[Vec]:
        cols: List[Vec] = [{} for _ in range(self.cols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def is_zero(self) -> bool:
        return not self._rows

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows.get(i, {}).get(j, Fraction(0))

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "RatMatrix":
        data: Dict[int, Vec] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                data.setdefault(j, {})[i] = v
        return RatMatrix._from_rows(self.cols, self.rows, data)

    def apply(self, v: Vec) -> Vec:
        """Matrix-vector product on a sparse vector."""
        out: Vec = {}
        if not v:
            return out
        for i, r in self._rows.items():
            s = Fraction(0)
            if len(r) < len(v):
                for j, a in r.items():
                    x = v.get(j)
                    if x:
                        s += a * x
            else:
                for j, x in v.items():
                    a = r.get(j)
                    if a:
                        s += a * x
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        orows = other._rows
        data: Dict[int, Vec] = {}
        for i, r in self._rows.items():
            acc: Vec = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                data[i] = acc
        return RatMatrix._from_rows(self.rows, other.cols, data)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        data = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            row = data.setdefault(i, {})
            for j, v in r.items():
                s = row.get(j, 0) + v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
        return RatMatrix._from_rows(self.rows, self.cols, data)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._from_rows(self.rows, self.cols,
                                    {i: {j: -v for j, v in r.items()} for i, r in self._rows.items()})

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, c) -> "RatMatrix":
        c = _frac(c)
        if not c:
            return RatMatrix(self.rows, self.cols)
        return RatMatrix._from_rows(self.rows, self.cols,
                                    {i: {j: c * v for j, v in r.items()} for i, r in self._rows.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def block_matrix(row_dims: Sequence[int], col_dims: Sequence[int],
                 blocks: Dict[Tuple[int, int], RatMatrix]) -> RatMatrix:
    """Assemble a matrix from blocks indexed by (block row, block column)."""
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    data: Dict[int, Vec] = {}
    for (bi, bj), m in blocks.items():
        if m.shape != (row_dims[bi], col_dims[bj]):
            raise DimensionMismatch(f"block {(bi, bj)} has shape {m.shape}, "
                                    f"expected {(row_dims[bi], col_dims[bj])}")
        for i, r in m._rows.items():
            row = data.setdefault(roff[bi] + i, {})
            for j, v in r.items():
                jj = coff[bj] + j
                s = row.get(jj, 0) + v
                if s:
                    row[jj] = s
                else:
                    row.pop(jj, None)
    return RatMatrix._from_rows(roff[-1], coff[-1], data)


# --- vectors -----------------------------------------------------------------

def vec_add(u: Vec, v: Vec, c=1) -> Vec:
    """Return u + c*v."""
    out = dict(u)
    for k, x in v.items():
        s = out.get(k, 0) + c * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_iadd(u: dict, v: dict, c=1) -> None:
    for k, x in v.items():
        s = u.get(k, 0) + c * x
        if s:
            u[k] = s
        else:
            u.pop(k, None)


def vec_scale(v: Vec, c) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


# --- elimination -------------------------------------------------------------

def _size(x: int) -> int:
    return x.bit_length()


def _integer_rows(m: RatMatrix) -> List[Dict[int, int]]:
    """Rows scaled to coprime integers; rank-preserving."""
    out = []
    for r in m._rows.values():
        den = 1
        for v in r.values():
            d = v.denominator
            den = den * d // gcd(den, d)
        out.append({j: int(v * den) for j, v in r.items()})
    return out


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def rank(m: RatMatrix) -> int:
    """Rank over Q by fraction-free elimination on primitive integer rows.

    Pivots are taken at the entry of smallest bit length of each new row,
    which keeps coefficient growth modest on the sparse +-1 matrices that
    dominate the chain complexes built here.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    if m.cols < m.rows:
        m = m.transpose()
    pivots: List[Tuple[int, Dict[int, int]]] = []
    for row in sorted(_integer_rows(m), key=len):
        for c, prow in pivots:
            a = row.get(c)
            if a:
                p = prow[c]
                g = gcd(a, p)
                ra, rp = a // g, p // g
                new = {j: v * rp for j, v in row.items()}
                for j, v in prow.items():
                    s = new.get(j, 0) - ra * v
                    if s:
                        new[j] = s
                    else:
                        new.pop(j, None)
                row = _primitive(new)
                if not row:
                    break
        if row:
            c = min(row, key=lambda j: (_size(abs(row[j])), j))
            pivots.append((c, row))
    return len(pivots)


def rref(m: RatMatrix, column_order: Optional[Sequence[int]] = None) -> List[Tuple[int, Vec]]:
    """Reduced row echelon form of the row space of ``m``.

    Returns ``(pivot_column, row)`` pairs with the pivot entry equal to 1 and
    every other returned row zero at that column. ``column_order`` fixes the
    pivot priority: the pivot of each row is its first nonzero column in that
    order (defaults to ascending column index). The set of pivot columns is
    therefore an invariant of the row space.
    """
    if column_order is None:
        prio = None
    else:
        prio = {c: k for k, c in enumerate(column_order)}
        if len(prio) != m.cols:
            raise DimensionMismatch("column_order must be a permutation of the columns")

    def lead(row: Vec) -> int:
        if prio is None:
            return min(row)
        return min(row, key=prio.__getitem__)

    pivots: Dict[int, Vec] = {}
    for r in m._rows.values():
        row = dict(r)
        # pivot rows are zero at each other's pivots, so one pass suffices
        for c, prow in pivots.items():
            a = row.get(c)
            if a:
                vec_iadd(row, prow, -a)
        if not row:
            continue
        c = lead(row)
        inv = 1 / row[c]
        row = {j: v * inv for j, v in row.items()}
        for prow in pivots.values():
            a = prow.get(c)
            if a:
                vec_iadd(prow, row, -a)
        pivots[c] = row
    if prio is None:
        return sorted(pivots.items())
    return sorted(pivots.items(), key=lambda kv: prio[kv[0]])


def kernel_basis(m: RatMatrix) -> List[Vec]:
    """Basis of the null space of ``m``, one sparse column vector per free column."""
    reduced = rref(m)
    pivot_cols = {c for c, _ in reduced}
    basis = []
    for f in range(m.cols):
        if f in pivot_cols:
            continue
        v: Vec = {f: Fraction(1)}
        for c, row in reduced:
            a = row.get(f)
            if a:
                v[c] = -a
        basis.append(v)
    return basis


def solve(m: RatMatrix, rhs: Vec) -> Optional[Vec]:
    """One exact solution x of ``m @ x = rhs``, or ``None`` if inconsistent."""
    if any(not 0 <= i < m.rows for i in rhs):
        raise DimensionMismatch("right-hand side does not fit the matrix")
    data = {i: dict(r) for i, r in m._rows.items()}
    for i, v in rhs.items():
        if v:
            data.setdefault(i, {})[m.cols] = _frac(v)
    aug = RatMatrix._from_rows(m.rows, m.cols + 1, data)
    x: Vec = {}
    for c, row in rref(aug):
        if c == m.cols:
            return None
        v = row.get(m.cols)
        if v:
            x[c] = v
    return x


def homology_dim(d_out: RatMatrix, d_in: RatMatrix) -> int:
    """dim ker(d_out) / im(d_in) at the middle term of ``. -d_in-> . -d_out-> .``."""
    if d_out.cols != d_in.rows:
        raise DimensionMismatch(
            f"d_out has {d_out.cols} columns but d_in has {d_in.rows} rows")
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out @ d_in is not zero")
    return d_out.cols - rank(d_out) - rank(d_in)


class QuotientSpace:
    """The quotient Q^n / span(relations) with a deterministic monomial-style basis.

    The basis consists of the ambient coordinates that are *not* pivots of the
    reduced relation span, where pivots are chosen by ``priority`` (first
    entries are eliminated first). :meth:`reduce` maps an ambient vector to
    its coordinates on that basis.
    """

    def __init__(self, ambient_dim: int, relations: Sequence[Vec], priority: Optional[Sequence[int]] = None):
        self.ambient_dim = ambient_dim
        rel = RatMatrix.from_columns(ambient_dim, list(relations)).transpose()
        self._pivots = dict(rref(rel, priority))
        self.relation_rank = len(self._pivots)
        self.basis = [j for j in range(ambient_dim) if j not in self._pivots]
        self._position = {j: k for k, j in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Vec) -> Vec:
        out: Vec = {}
        for j, x in v.items():
            if not x:
                continue
            prow = self._pivots.get(j)
            if prow is None:
                k = self._position[j]
                s = out.get(k, 0) + x
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                # pivot coordinate j equals minus the non-pivot part of its row
                for jj, a in prow.items():
                    if jj == j:
                        continue
                    k = self._position[jj]
                    s = out.get(k, 0) - x * a
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return out

    def lift(self, coords: Vec) -> Vec:
        return {self.basis[k]: x for k, x in coords.items() if x}
