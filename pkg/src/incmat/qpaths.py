"""Subspace lattice side, combinatorial layer: Gaussian binomials, the
lattice-path stratification of the Grassmannian of r-subspaces of GF(q)^n,
and the canonical (path, filling) coordinates for subspaces.

Every r-subspace of GF(q)^n has a unique basis matrix in which each row's
last nonzero entry is a 1, those leading ones sit in strictly increasing
pivot columns, and pivot columns vanish in the other rows.  Reading an S
step at pivot columns and an E step elsewhere gives a lattice path with r
south steps; the remaining free entries, row by row, form the filling.
Paths are ordered lexicographically with S < E, which is exactly the
lexicographic order of their pivot sets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .fields import FieldCtx, ground_field
from .linalg import ExactMatrix, _rref_generic
from .sets import k_subsets

PLUS = "PLUS"
MINUS = "MINUS"
OUTSIDE = "OUTSIDE"


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """The q-binomial coefficient [n choose k]_q; zero outside 0 <= k <= n."""
    if q < 2:
        raise ValueError(f"need a prime power q >= 2, got {q}")
    if k < 0 or k > n or n < 0:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class LatticePath:
    """A word of r S steps and n-r E steps; step i is S iff i is a pivot."""

    n: int
    r: int
    steps: str

    def __post_init__(self):
        if len(self.steps) != self.n or set(self.steps) - {"S", "E"}:
            raise ValueError(f"steps must be n letters from {{S, E}}, got {self.steps!r}")
        if self.steps.count("S") != self.r:
            raise ValueError(f"expected {self.r} S steps in {self.steps!r}")

    @classmethod
    def from_pivots(cls, n: int, pivots) -> "LatticePath":
        pset = set(pivots)
        steps = "".join("S" if i in pset else "E" for i in range(1, n + 1))
        return cls(n, len(pset), steps)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.steps, start=1) if c == "S")


@lru_cache(maxsize=None)
def enumerate_paths(n: int, r: int) -> tuple[LatticePath, ...]:
    """All paths with r S steps among n, ordered lexicographically with S < E
    (equivalently by pivot set, lexicographically)."""
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    return tuple(LatticePath.from_pivots(n, t) for t in k_subsets(n, r))


def box_count(pi: LatticePath) -> int:
    """Number of array boxes strictly below the path: sum of p_i - i."""
    return sum(p - i for i, p in enumerate(pi.pivots, start=1))


def leading_term(pi: LatticePath) -> int:
    """Number of E steps before the first S step (all of them if no S)."""
    first = pi.steps.find("S")
    return first if first >= 0 else pi.n


def classify(pi: LatticePath, r: int | None = None) -> str:
    """PLUS if the leading term is >= r, MINUS if the path stays weakly
    below the diagonal with a shorter leading term, OUTSIDE otherwise."""
    if r is None:
        r = pi.r
    elif r != pi.r:
        raise ValueError(f"path has r={pi.r}, not {r}")
    height = 0
    for c in pi.steps:
        height += 1 if c == "S" else -1
        if height > 0:
            return OUTSIDE
    return PLUS if leading_term(pi) >= r else MINUS


@dataclass(frozen=True)
class SubspaceCode:
    """Canonical coordinates of an r-subspace of GF(q)^n.

    ``pivots`` are the 1-based columns of the leading ones; ``filling``
    holds, for each row in pivot order, the free entries at the non-pivot
    columns left of that row's pivot, in increasing column order.
    """

    n: int
    r: int
    q: int
    pivots: tuple[int, ...]
    filling: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.pivots) != self.r or list(self.pivots) != sorted(set(self.pivots)):
            raise ValueError("pivots must be r strictly increasing columns")
        if self.pivots and not (1 <= self.pivots[0] and self.pivots[-1] <= self.n):
            raise ValueError("pivots outside [1, n]")
        if len(self.filling) != self.r:
            raise ValueError("filling needs one row per pivot")
        for i, (p, row) in enumerate(zip(self.pivots, self.filling), start=1):
            if len(row) != p - i:
                raise ValueError(f"filling row {i} must have p_i - i = {p - i} entries")

    @property
    def path(self) -> LatticePath:
        return LatticePath.from_pivots(self.n, self.pivots)


def decode_subspace(code: SubspaceCode) -> ExactMatrix:
    """Canonical r x n basis matrix of the coded subspace."""
    ctx = ground_field(code.q)
    m = ExactMatrix.zeros(ctx, code.r, code.n)
    pivot_set = set(code.pivots)
    for i, (p, row) in enumerate(zip(code.pivots, code.filling)):
        m.data[i][p - 1] = ctx.one
        free_cols = [c for c in range(1, p) if c not in pivot_set]
        if len(free_cols) != len(row):
            raise AssertionError("filling width drifted from pivot structure")
        for c, v in zip(free_cols, row):
            if not ctx.contains(v):
                raise ValueError(f"filling entry {v!r} is not in GF({code.q})")
            m.data[i][c - 1] = v
    return m


def encode_subspace(b: ExactMatrix) -> SubspaceCode:
    """Canonical coordinates of the row space of b.

    Works for any spanning set: reduces with the leading one taken as the
    LAST nonzero entry of each row (echelon from the right), which the
    column-reversed reduced echelon form provides.
    """
    ctx = b.field
    if ctx.char == 0:
        raise ValueError("subspace coding needs a finite ground field")
    n = b.ncols
    reversed_rows = [row[::-1] for row in b.data]
    rref_rows, rev_pivots = _rref_generic(reversed_rows, ctx, n)
    r = len(rref_rows)
    if r != b.nrows:
        raise ValueError(f"rows span a {r}-space, not an {b.nrows}-space")
    canon = [(n - c, row[::-1]) for c, row in zip(rev_pivots, rref_rows)]
    canon.sort(key=lambda pr: pr[0])
    pivots = tuple(p for p, _ in canon)
    pivot_set = set(pivots)
    filling = []
    for p, row in canon:
        free_cols = [c for c in range(1, p) if c not in pivot_set]
        filling.append(tuple(row[c - 1] for c in free_cols))
    return SubspaceCode(n, r, ctx.order, pivots, tuple(filling))


@lru_cache(maxsize=None)
def enumerate_subspaces(n: int, r: int, q: int) -> tuple[SubspaceCode, ...]:
    """All r-subspaces of GF(q)^n in canonical order: primary key the path
    position, secondary key the filling read row-major as a base-q integer
    (first box most significant)."""
    ctx = ground_field(q)
    elems = list(ctx.elements())
    out = []
    for pi in enumerate_paths(n, r):
        pivots = pi.pivots
        widths = [p - i for i, p in enumerate(pivots, start=1)]
        total = sum(widths)
        for flat in itertools.product(elems, repeat=total):
            filling = []
            at = 0
            for w in widths:
                filling.append(tuple(flat[at : at + w]))
                at += w
            out.append(SubspaceCode(n, r, q, pivots, tuple(filling)))
    return tuple(out)


@lru_cache(maxsize=None)
def subspace_index_map(n: int, r: int, q: int) -> dict[SubspaceCode, int]:
    return {c: i for i, c in enumerate(enumerate_subspaces(n, r, q))}


@dataclass(frozen=True)
class QFamily:
    """A family of r-subspaces of GF(q)^n, as sorted canonical-order indices."""

    n: int
    r: int
    q: int
    members: tuple[int, ...]

    def __post_init__(self):
        total = gaussian_binomial(self.n, self.r, self.q)
        if any(not 0 <= i < total for i in self.members):
            raise ValueError("member index out of range")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and unique")

    @classmethod
    def from_codes(cls, codes) -> "QFamily":
        codes = list(codes)
        if not codes:
            raise ValueError("use QFamily(n, r, q, ()) for an empty family")
        n, r, q = codes[0].n, codes[0].r, codes[0].q
        imap = subspace_index_map(n, r, q)
        return cls(n, r, q, tuple(sorted(imap[c] for c in codes)))

    def codes(self) -> list[SubspaceCode]:
        all_codes = enumerate_subspaces(self.n, self.r, self.q)
        return [all_codes[i] for i in self.members]

    def complement(self) -> "QFamily":
        present = set(self.members)
        total = gaussian_binomial(self.n, self.r, self.q)
        return QFamily(self.n, self.r, self.q, tuple(i for i in range(total) if i not in present))

    def __len__(self) -> int:
        return len(self.members)


# -- good fillings ---------------------------------------------------------------


def _filling_array(code: SubspaceCode, ctx: FieldCtx) -> list[list]:
    """The r x (n-r) box array: filling below the path, zeros above."""
    rows = []
    for i, (p, frow) in enumerate(zip(code.pivots, code.filling), start=1):
        width = p - i
        rows.append(list(frow) + [ctx.zero] * (code.n - code.r - width))
    return rows


def _tiny_rank(rows: list[list], ctx: FieldCtx) -> int:
    if not rows or not rows[0]:
        return 0
    work = [row[:] for row in rows]
    zero = ctx.zero
    rk = 0
    for col in range(len(work[0])):
        piv = None
        for i in range(rk, len(work)):
            if work[i][col] != zero:
                piv = i
                break
        if piv is None:
            continue
        work[rk], work[piv] = work[piv], work[rk]
        pinv = ctx.inv(work[rk][col])
        prow = work[rk]
        for i in range(rk + 1, len(work)):
            if work[i][col] != zero:
                c = ctx.mul(work[i][col], pinv)
                work[i] = [ctx.sub(a, ctx.mul(c, b)) for a, b in zip(work[i], prow)]
        rk += 1
        if rk == len(work):
            break
    return rk


def is_good(code: SubspaceCode) -> bool:
    """Rank conditions along the path: at every lattice corner (i, j) the
    path visits, the box submatrix with rows i..r and columns 1..j-1 must
    have rank at most j - i.  Paths that cross the diagonal have none."""
    ctx = ground_field(code.q)
    arr = _filling_array(code, ctx)
    r, n = code.r, code.n
    i, j = 1, 1
    corners = [(i, j)]
    for c in code.path.steps:
        if c == "S":
            i += 1
        else:
            j += 1
        corners.append((i, j))
    for (ci, cj) in corners:
        bound = cj - ci
        if bound < 0:
            return False
        nrows = r - ci + 1
        ncols = cj - 1
        if min(nrows, ncols) <= bound:
            continue
        sub = [arr[a][:ncols] for a in range(ci - 1, r)]
        if _tiny_rank(sub, ctx) > bound:
            return False
    return True


def count_good(n: int, r: int, q: int) -> int:
    """Number of good r-subspaces of GF(q)^n; requires r <= n/2."""
    if 2 * r > n:
        raise ValueError(f"need r <= n/2, got r={r}, n={n}")
    return sum(1 for code in enumerate_subspaces(n, r, q) if is_good(code))
