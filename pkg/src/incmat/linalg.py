"""Exact dense linear algebra over a FieldCtx.

Rank, kernel bases, subspace intersection, and column-space membership,
all exact.  Pivoting is deterministic: first nonzero entry in column
order, no magnitude heuristics.  Three fast kernels sit behind the
generic contracts:

* characteristic 0: fraction-free two-step (Bareiss) elimination over
  the integers after clearing row denominators,
* GF(2): rows packed into Python ints, eliminated by xor,
* GF(p): vectorized modular elimination on int64 numpy arrays.

Extension fields use the generic element-by-element path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .fields import FieldCtx, parse_field

_NUMPY_P_LIMIT = 1 << 20  # keeps p**2 products well inside int64


class ExactMatrix:
    """Dense matrix over one field; entries are canonical field elements."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field: FieldCtx, data: list[list], ncols: int | None = None):
        self.field = field
        self.data = [list(row) for row in data]
        self.nrows = len(self.data)
        if self.nrows:
            widths = {len(row) for row in self.data}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols disagrees with row width")
        else:
            if ncols is None:
                raise ValueError("a 0-row matrix needs an explicit column count")
            self.ncols = ncols

    @classmethod
    def zeros(cls, field: FieldCtx, nrows: int, ncols: int) -> "ExactMatrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: FieldCtx, n: int) -> "ExactMatrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_int_rows(cls, field: FieldCtx, rows: list[list[int]], ncols: int | None = None) -> "ExactMatrix":
        emb = field.embed
        return cls(field, [[emb(v) for v in row] for row in rows], ncols)

    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.data, self.ncols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.field, [list(col) for col in zip(*self.data)] if self.nrows else [], self.nrows
        )

    def take_rows(self, indices) -> "ExactMatrix":
        return ExactMatrix(self.field, [self.data[i] for i in indices], self.ncols)

    def drop_rows(self, indices) -> "ExactMatrix":
        drop = set(indices)
        bad = [i for i in drop if not 0 <= i < self.nrows]
        if bad:
            raise ValueError(f"row indices out of range: {sorted(bad)}")
        return ExactMatrix(
            self.field, [row for i, row in enumerate(self.data) if i not in drop], self.ncols
        )

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.field != self.field or other.nrows != self.nrows:
            raise ValueError("hstack needs same field and row count")
        return ExactMatrix(
            self.field, [a + b for a, b in zip(self.data, other.data)], self.ncols + other.ncols
        )

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.field != self.field or other.ncols != self.ncols:
            raise ValueError("vstack needs same field and column count")
        return ExactMatrix(self.field, self.data + other.data, self.ncols)

    def mat_mul(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.field != self.field or self.ncols != other.nrows:
            raise ValueError("mat_mul shape or field mismatch")
        f = self.field
        zero = f.zero
        cols = list(zip(*other.data)) if other.nrows else []
        out = []
        for row in self.data:
            orow = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a != zero and b != zero:
                        acc = f.add(acc, f.mul(a, b))
                orow.append(acc)
            out.append(orow)
        return ExactMatrix(f, out, other.ncols)

    def mat_vec(self, v: list) -> list:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        f = self.field
        out = []
        for row in self.data:
            acc = f.zero
            for a, x in zip(row, v):
                if a != f.zero and x != f.zero:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.ncols == other.ncols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field.field_string}, {self.nrows}x{self.ncols})"


# -- elimination kernels -------------------------------------------------------


def _int_rows_char0(m: ExactMatrix) -> list[list[int]]:
    """Clear denominators row by row; rank is unchanged by row scaling."""
    out = []
    for row in m.data:
        lcm = 1
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else 1
            lcm = lcm * d // gcd(lcm, d)
        out.append([int(x * lcm) for x in row])
    return out


def _rank_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free two-step elimination; pivots by first nonzero in column order."""
    m = [row[:] for row in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    prev = 1
    rank = 0
    for col in range(nc):
        piv = None
        for i in range(rank, nr):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        p = prow[col]
        tail = prow[col:]
        scale_only = p == prev
        for i in range(rank + 1, nr):
            ri = m[i]
            f = ri[col]
            if f:
                m[i] = ri[:col] + [(p * a - f * b) // prev for a, b in zip(ri[col:], tail)]
            elif not scale_only:
                m[i] = ri[:col] + [(p * a) // prev for a in ri[col:]]
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def _pack_gf2(rows: list[list[int]]) -> list[int]:
    packed = []
    for row in rows:
        acc = 0
        for j, v in enumerate(row):
            if v & 1:
                acc |= 1 << j
        packed.append(acc)
    return packed


def _rank_gf2_packed(packed: list[int], ncols: int) -> int:
    rows = list(packed)
    nr = len(rows)
    rank = 0
    for col in range(ncols):
        mask = 1 << col
        piv = None
        for i in range(rank, nr):
            if rows[i] & mask:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for i in range(rank + 1, nr):
            if rows[i] & mask:
                rows[i] ^= prow
        rank += 1
        if rank == nr:
            break
    return rank


def _rank_modp(rows: list[list[int]], p: int) -> int:
    a = np.array(rows, dtype=np.int64) % p
    nr, nc = a.shape
    rank = 0
    for col in range(nc):
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1 :, col]
        sel = np.nonzero(below)[0]
        if sel.size:
            idx = sel + rank + 1
            a[idx] = (a[idx] - np.outer(a[idx, col], a[rank])) % p
        rank += 1
        if rank == nr:
            break
    return rank


def _rank_generic(m: ExactMatrix) -> int:
    f = m.field
    rows = [row[:] for row in m.data]
    nr, nc = m.nrows, m.ncols
    zero = f.zero
    rank = 0
    for col in range(nc):
        piv = None
        for i in range(rank, nr):
            if rows[i][col] != zero:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pinv = f.inv(prow[col])
        for i in range(rank + 1, nr):
            ri = rows[i]
            if ri[col] != zero:
                c = f.mul(ri[col], pinv)
                rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(ri, prow)]
        rank += 1
        if rank == nr:
            break
    return rank


def rank(m: ExactMatrix) -> int:
    """Exact rank of m over its field."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    f = m.field
    if f.char == 0:
        return _rank_bareiss(_int_rows_char0(m))
    if f.degree == 1 and f.char == 2:
        return _rank_gf2_packed(_pack_gf2(m.data), m.ncols)
    if f.degree == 1 and f.char < _NUMPY_P_LIMIT:
        return _rank_modp(m.data, f.char)
    return _rank_generic(m)


# -- reduced row echelon and kernels ------------------------------------------


def _rref_modp(rows: list[list[int]], p: int, ncols: int) -> tuple[list[list[int]], list[int]]:
    a = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    nr = len(rows)
    pivots: list[int] = []
    rank_ = 0
    for col in range(ncols):
        nz = np.nonzero(a[rank_:, col])[0]
        if nz.size == 0:
            continue
        piv = rank_ + int(nz[0])
        if piv != rank_:
            a[[rank_, piv]] = a[[piv, rank_]]
        inv = pow(int(a[rank_, col]), p - 2, p)
        a[rank_] = (a[rank_] * inv) % p
        others = np.nonzero(a[:, col])[0]
        others = others[others != rank_]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, col], a[rank_])) % p
        pivots.append(col)
        rank_ += 1
        if rank_ == nr:
            break
    return [[int(v) for v in a[i]] for i in range(rank_)], pivots


def _rref_generic(rows: list[list], ctx: FieldCtx, ncols: int) -> tuple[list[list], list[int]]:
    f = ctx
    work = [row[:] for row in rows]
    nr = len(work)
    zero = f.zero
    pivots: list[int] = []
    rank_ = 0
    for col in range(ncols):
        piv = None
        for i in range(rank_, nr):
            if work[i][col] != zero:
                piv = i
                break
        if piv is None:
            continue
        work[rank_], work[piv] = work[piv], work[rank_]
        pinv = f.inv(work[rank_][col])
        work[rank_] = [f.mul(pinv, x) for x in work[rank_]]
        prow = work[rank_]
        for i in range(nr):
            if i != rank_ and work[i][col] != zero:
                c = work[i][col]
                work[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(work[i], prow)]
        pivots.append(col)
        rank_ += 1
        if rank_ == nr:
            break
    return work[:rank_], pivots


def _rref(m: ExactMatrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon rows (nonzero only) and pivot columns."""
    if m.nrows == 0 or m.ncols == 0:
        return [], []
    f = m.field
    if f.char != 0 and f.degree == 1 and f.char < _NUMPY_P_LIMIT:
        return _rref_modp(m.data, f.char, m.ncols)
    return _rref_generic(m.data, f, m.ncols)


@dataclass
class SubspaceBasis:
    """Row space basis: vectors are independent rows in a common ambient space."""

    ambient_dim: int
    vectors: ExactMatrix

    def __post_init__(self):
        if self.vectors.ncols != self.ambient_dim:
            raise ValueError("basis vectors must have ambient_dim coordinates")
        if rank(self.vectors) != self.vectors.nrows:
            raise ValueError("basis rows are dependent")

    @property
    def dim(self) -> int:
        return self.vectors.nrows

    @property
    def field(self) -> FieldCtx:
        return self.vectors.field


def row_space_basis(m: ExactMatrix) -> SubspaceBasis:
    """Canonical (RREF) basis of the row space of m."""
    rows, _ = _rref(m)
    return SubspaceBasis(m.ncols, ExactMatrix(m.field, rows, m.ncols))


def kernel_basis(m: ExactMatrix) -> SubspaceBasis:
    """Basis of the right kernel {v : m v = 0}."""
    f = m.field
    if m.ncols == 0:
        return SubspaceBasis(0, ExactMatrix(f, [], 0))
    rows, pivots = _rref(m)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.ncols) if c not in pivot_set]
    basis_rows = []
    for fc in free_cols:
        v = [f.zero] * m.ncols
        v[fc] = f.one
        for k, pc in enumerate(pivots):
            v[pc] = f.neg(rows[k][fc])
        basis_rows.append(v)
    return SubspaceBasis(m.ncols, ExactMatrix(f, basis_rows, m.ncols))


def intersect(u: SubspaceBasis, v: SubspaceBasis) -> SubspaceBasis:
    """Basis of the intersection of two row spaces in the same ambient space."""
    if u.ambient_dim != v.ambient_dim or u.field != v.field:
        raise ValueError("intersect needs a common ambient space and field")
    f = u.field
    if u.dim == 0 or v.dim == 0:
        return SubspaceBasis(u.ambient_dim, ExactMatrix(f, [], u.ambient_dim))
    stacked = u.vectors.transpose().hstack(v.vectors.transpose())
    combos = kernel_basis(stacked)
    spanning = []
    for coeff in combos.vectors.data:
        a = coeff[: u.dim]
        vec = [f.zero] * u.ambient_dim
        for ci, urow in zip(a, u.vectors.data):
            if ci != f.zero:
                vec = [f.add(x, f.mul(ci, y)) for x, y in zip(vec, urow)]
        spanning.append(vec)
    return row_space_basis(ExactMatrix(f, spanning, u.ambient_dim))


def in_column_space(m: ExactMatrix, v: list) -> bool:
    """True iff v is a linear combination of the columns of m."""
    if len(v) != m.nrows:
        raise ValueError("vector length must equal the row count")
    col = ExactMatrix(m.field, [[x] for x in v], 1)
    return rank(m.hstack(col)) == rank(m)


# -- text serialization --------------------------------------------------------

_BUDGET_DEFAULT = 50_000_000


def entry_budget_guard(nrows: int, ncols: int, budget: int = _BUDGET_DEFAULT) -> None:
    """Refuse matrices whose entry count exceeds the configured budget."""
    if nrows * ncols > budget:
        raise ValueError(
            f"matrix of {nrows}x{ncols} = {nrows * ncols} entries exceeds the "
            f"budget of {budget}; raise the budget explicitly to proceed"
        )


def write_matrix(m: ExactMatrix, fp) -> None:
    """Serialize in the text format: header line, then nonzero `i j value` lines."""
    fp.write(f"incmat {m.nrows} {m.ncols} {m.field.field_string}\n")
    f = m.field
    for i, row in enumerate(m.data):
        for j, x in enumerate(row):
            if x != f.zero:
                fp.write(f"{i} {j} {f.to_str(x)}\n")


def read_matrix(fp) -> ExactMatrix:
    """Parse the text format written by write_matrix; omitted entries are zero."""
    header = fp.readline().split()
    if len(header) != 4 or header[0] != "incmat":
        raise ValueError("bad matrix header; expected `incmat <rows> <cols> <field>`")
    nrows, ncols = int(header[1]), int(header[2])
    field = parse_field(header[3])
    m = ExactMatrix.zeros(field, nrows, ncols)
    for line in fp:
        line = line.strip()
        if not line:
            continue
        i_s, j_s, v_s = line.split()
        i, j = int(i_s), int(j_s)
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ValueError(f"entry ({i},{j}) outside {nrows}x{ncols}")
        m.data[i][j] = field.from_str(v_s)
    return m
