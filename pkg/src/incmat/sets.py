"""Subset lattice side: inclusion matrices of r-subsets versus s-subsets,
Wilson's rank formula, Frankl's rank function on subsets, Bier's nested
basis of the permutation module, and resilience of the rank under row
removals with explicit permutation certificates.

Subsets of [n] = {1..n} are bitmasks; k-subsets are enumerated in
lexicographic order of their sorted element tuples throughout, and row
and column indices of every matrix refer to that order.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .fields import FieldCtx
from .linalg import ExactMatrix, entry_budget_guard, rank
from .report import ResilienceReport


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if k < 0 or k > n or n < 0:
        return 0
    return comb(n, k)


@lru_cache(maxsize=None)
def k_subsets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All k-subsets of [n] as sorted tuples, lexicographic order."""
    return tuple(itertools.combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def subset_rank_map(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {t: i for i, t in enumerate(k_subsets(n, k))}


def _mask(elems) -> int:
    m = 0
    for e in elems:
        m |= 1 << (e - 1)
    return m


@dataclass(frozen=True)
class Subset:
    """A subset of [n], stored as a bitmask (element e <-> bit e-1)."""

    n: int
    mask: int

    def __post_init__(self):
        if self.n < 0 or self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} does not fit in [{self.n}]")

    @classmethod
    def from_elements(cls, n: int, elems) -> "Subset":
        elems = tuple(elems)
        if any(not 1 <= e <= n for e in elems):
            raise ValueError(f"elements out of [1, {n}]: {elems}")
        if len(set(elems)) != len(elems):
            raise ValueError(f"repeated elements: {elems}")
        return cls(n, _mask(elems))

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(e for e in range(1, self.n + 1) if self.mask >> (e - 1) & 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, e: int) -> bool:
        return 1 <= e <= self.n and bool(self.mask >> (e - 1) & 1)

    def issubset(self, other: "Subset") -> bool:
        return self.mask & other.mask == self.mask


@dataclass(frozen=True)
class SetFamily:
    """A family of r-subsets of [n], as sorted canonical-order indices."""

    n: int
    r: int
    members: tuple[int, ...]

    def __post_init__(self):
        total = binomial(self.n, self.r)
        if any(not 0 <= i < total for i in self.members):
            raise ValueError("member index out of range")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and unique")

    @classmethod
    def from_subsets(cls, n: int, r: int, subsets) -> "SetFamily":
        rmap = subset_rank_map(n, r)
        idx = []
        for s in subsets:
            t = s.elements if isinstance(s, Subset) else tuple(sorted(s))
            if len(t) != r:
                raise ValueError(f"{t} is not an r-subset for r={r}")
            if t not in rmap:
                raise ValueError(f"{t} is not a subset of [{n}]")
            idx.append(rmap[t])
        return cls(n, r, tuple(sorted(set(idx))))

    @classmethod
    def full(cls, n: int, r: int) -> "SetFamily":
        return cls(n, r, tuple(range(binomial(n, r))))

    def subsets(self) -> list[Subset]:
        all_r = k_subsets(self.n, self.r)
        return [Subset.from_elements(self.n, all_r[i]) for i in self.members]

    def tuples(self) -> list[tuple[int, ...]]:
        all_r = k_subsets(self.n, self.r)
        return [all_r[i] for i in self.members]

    def complement(self) -> "SetFamily":
        present = set(self.members)
        rest = tuple(i for i in range(binomial(self.n, self.r)) if i not in present)
        return SetFamily(self.n, self.r, rest)

    def __len__(self) -> int:
        return len(self.members)


# -- rank function on subsets ---------------------------------------------------


def frankl_rank(a: Subset) -> tuple[int, int]:
    """Frankl's rank of a subset.

    Walk the elements 1..n, stepping north on members and east otherwise;
    ell is the greatest height of the walk above the diagonal, and the
    rank is |a| - ell.

    Returns:
        (rank, ell)
    """
    ell = 0
    height = 0
    for i in range(1, a.n + 1):
        height += 1 if i in a else -1
        if height > ell:
            ell = height
    return a.size - ell, ell


def _tuple_full_rank(t: tuple[int, ...]) -> bool:
    return all(e >= 2 * (i + 1) for i, e in enumerate(t))


@lru_cache(maxsize=None)
def full_rank_tuples(n: int, j: int) -> tuple[tuple[int, ...], ...]:
    return tuple(t for t in k_subsets(n, j) if _tuple_full_rank(t))


def full_rank_sets(n: int, j: int) -> list[Subset]:
    """All j-subsets of full rank (rank = j), canonical order.

    Exactly the j-subsets whose i-th smallest element is >= 2i; there are
    C(n, j) - C(n, j-1) of them.  Requires j <= n/2.
    """
    if not 0 <= 2 * j <= n:
        raise ValueError(f"need 0 <= j <= n/2, got j={j}, n={n}")
    return [Subset.from_elements(n, t) for t in full_rank_tuples(n, j)]


def m_parameter(a: Subset) -> int:
    """Largest i with a_i < 2i over the sorted elements a_1 < ... < a_j;
    zero exactly when the subset has full rank."""
    m = 0
    for i, e in enumerate(a.elements, start=1):
        if e < 2 * i:
            m = i
    return m


def shadow(family: SetFamily, s: int) -> SetFamily:
    """The s-shadow: all s-subsets contained in some member."""
    if not 0 <= s <= family.r:
        raise ValueError(f"shadow level {s} outside 0..{family.r}")
    seen: set[tuple[int, ...]] = set()
    for t in family.tuples():
        seen.update(itertools.combinations(t, s))
    rmap = subset_rank_map(family.n, s)
    return SetFamily(family.n, s, tuple(sorted(rmap[t] for t in seen)))


def lovasz_x(size: int, r: int) -> float:
    """The unique real x >= r with x(x-1)...(x-r+1)/r! = size, by bisection.

    Kruskal-Katona in Lovasz form bounds shadows via this x.  Requires
    size >= 1 and r >= 1; accurate to 1e-9.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    if r < 1:
        raise ValueError("r must be >= 1")

    def f(x: float) -> float:
        acc = 1.0
        for i in range(r):
            acc *= (x - i) / (i + 1)
        return acc

    lo = float(r)
    hi = float(r + 1)
    while f(hi) < size:
        hi *= 2
    while hi - lo > 1e-9:
        mid = (lo + hi) / 2
        if f(mid) < size:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# -- inclusion matrices and Wilson's formula ------------------------------------


def build_w(
    n: int,
    r: int,
    s: int,
    field: FieldCtx,
    family: SetFamily | None = None,
    max_entries: int = 50_000_000,
) -> ExactMatrix:
    """Inclusion matrix of the family's r-subsets (rows) against all
    s-subsets (columns): entry one iff the column subset is contained in
    the row subset.  Rows follow the family's canonical order."""
    if not 0 <= s <= r <= n:
        raise ValueError(f"need 0 <= s <= r <= n, got {(n, r, s)}")
    if family is None:
        family = SetFamily.full(n, r)
    if family.n != n or family.r != r:
        raise ValueError("family does not match (n, r)")
    entry_budget_guard(len(family), binomial(n, s), max_entries)
    col_masks = [_mask(t) for t in k_subsets(n, s)]
    one, zero = field.one, field.zero
    data = []
    for t in family.tuples():
        rm = _mask(t)
        data.append([one if cm & rm == cm else zero for cm in col_masks])
    return ExactMatrix(field, data, binomial(n, s))


def wilson_rank(n: int, r: int, s: int, characteristic: int) -> int:
    """Rank of the full inclusion matrix over any field of the given
    characteristic, by Wilson's formula; needs n >= r + s.

    Sum of C(n, j) - C(n, j-1) over the j in 0..s where C(r-j, s-j)
    does not vanish in the field.
    """
    if not 0 <= s <= r <= n:
        raise ValueError(f"need 0 <= s <= r <= n, got {(n, r, s)}")
    if n < r + s:
        raise ValueError(f"formula needs n >= r + s, got n={n}, r+s={r + s}")
    if characteristic != 0 and characteristic < 2:
        raise ValueError(f"bad characteristic {characteristic}")
    total = 0
    for j in range(s + 1):
        c = binomial(r - j, s - j)
        if characteristic == 0 or c % characteristic != 0:
            total += binomial(n, j) - binomial(n, j - 1)
    return total


# -- Bier's nested basis ---------------------------------------------------------


def bier_vector(a: Subset, r: int, field: FieldCtx) -> list:
    """Coordinate vector of the sum of all r-supersets of the subset,
    over the canonical order of r-subsets."""
    n = a.n
    if not a.size <= r <= n:
        raise ValueError(f"need |a| <= r <= n, got |a|={a.size}, r={r}")
    one, zero = field.one, field.zero
    am = a.mask
    return [one if am & _mask(t) == am else zero for t in k_subsets(n, r)]


def bier_basis_matrix(n: int, r: int, field: FieldCtx) -> ExactMatrix:
    """Square C(n, r) matrix whose rows are the superset-sum vectors of
    all full-rank j-subsets, j = 0..r; a basis of the ambient module
    over every field when r <= n/2."""
    if not 0 <= 2 * r <= n:
        raise ValueError(f"need r <= n/2, got r={r}, n={n}")
    one, zero = field.one, field.zero
    r_tuples = k_subsets(n, r)
    data = []
    for j in range(r + 1):
        for t in full_rank_tuples(n, j):
            am = _mask(t)
            data.append([one if am & _mask(u) == am else zero for u in r_tuples])
    return ExactMatrix(field, data, binomial(n, r))


def bier_identity_residual(a: Subset, r: int, ell: int, field: FieldCtx) -> list:
    """The alternating superset identity evaluated at one subset.

    For |a| = j and 1 <= ell <= r - j this accumulates
    C(r-j, ell) <a> + sum_i (-1)^i C(r-j-i, ell-i) sum_{t in (j+i)-supersets of a} <t>
    as a coordinate vector in the r-th layer; it must vanish over every field.
    """
    n, j = a.n, a.size
    if not j < r <= n:
        raise ValueError(f"need |a| < r <= n, got |a|={j}, r={r}")
    if not 1 <= ell <= r - j:
        raise ValueError(f"need 1 <= ell <= r - |a|, got ell={ell}")
    r_tuples = k_subsets(n, r)
    coeffs = [0] * len(r_tuples)
    rest = [e for e in range(1, n + 1) if e not in a]

    def add_superset_sum(base_mask: int, weight: int) -> None:
        for k, t in enumerate(r_tuples):
            if base_mask & _mask(t) == base_mask:
                coeffs[k] += weight

    add_superset_sum(a.mask, binomial(r - j, ell))
    for i in range(1, ell + 1):
        w = (-1) ** i * binomial(r - j - i, ell - i)
        if w == 0:
            continue
        for extra in itertools.combinations(rest, i):
            add_superset_sum(a.mask | _mask(extra), w)
    emb = field.embed
    return [emb(c) for c in coeffs]


def bracket(u: Subset, x: Subset, m: int, r: int, field: FieldCtx) -> list:
    """Superset-sum aggregate used in the basis spanning argument.

    Sums the r-th layer vectors of J union X over all m-subsets J of
    [2m-1] that contain u.  Requires u inside [2m-1], x disjoint from
    [2m-1] with k-th smallest element >= 2(m+k), and |x| = r - m.
    """
    n = u.n
    if x.n != n:
        raise ValueError("u and x must live in the same ground set")
    if m < 1 or u.mask >> (2 * m - 1):
        raise ValueError("u must be a subset of [2m-1]")
    if x.size != r - m:
        raise ValueError(f"need |x| = r - m = {r - m}, got {x.size}")
    for k, e in enumerate(x.elements, start=1):
        if e < 2 * (m + k):
            raise ValueError(f"element {e} of x violates the >= 2(m+k) growth bound")
    rmap = subset_rank_map(n, r)
    acc = [field.zero] * binomial(n, r)
    u_elems = set(u.elements)
    x_elems = x.elements
    for j_tuple in itertools.combinations(range(1, 2 * m), m):
        if not u_elems.issubset(j_tuple):
            continue
        idx = rmap[tuple(sorted(j_tuple + x_elems))]
        acc[idx] = field.add(acc[idx], field.one)
    return acc


def diagonal_form_check(n: int, r: int, s: int, field: FieldCtx) -> bool:
    """Mechanically verify that the raise map sends the s-th layer vector
    of each full-rank j-subset to C(r-j, s-j) times its r-th layer vector,
    applying the inclusion matrix to coordinates."""
    if not 0 <= s <= r or 2 * r > n:
        raise ValueError(f"need 0 <= s <= r <= n/2, got {(n, r, s)}")
    w = build_w(n, r, s, field)
    for j in range(s + 1):
        factor = field.embed(binomial(r - j, s - j))
        for t in full_rank_tuples(n, j):
            a = Subset.from_elements(n, t)
            lhs = w.mat_vec(bier_vector(a, s, field))
            rhs = [field.mul(factor, v) for v in bier_vector(a, r, field)]
            if lhs != rhs:
                return False
    return True


# -- permutation certificates and resilience -------------------------------------


@dataclass(frozen=True)
class PermCert:
    """A permutation of [n] mapping every removed subset to a full-rank one;
    image[i-1] is the image of i."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(1, self.n + 1)):
            raise ValueError("image is not a permutation of [n]")

    def apply(self, a: Subset) -> Subset:
        return Subset.from_elements(a.n, (self.image[e - 1] for e in a.elements))


def find_sigma(fc: SetFamily, r: int) -> PermCert | None:
    """Search for a permutation of [n] sending every member of the removed
    family into the full-rank r-subsets.

    Complete backtracking over injective images of the union of the
    members, in ascending element and value order, pruned by the sorted
    prefix bound (any i-th smallest assigned image below 2i is fatal).
    Returns the first certificate found, or None when none exists.
    """
    if fc.r != r:
        raise ValueError(f"family is over r={fc.r}, not {r}")
    n = fc.n
    if 2 * r > n:
        raise ValueError(f"need r <= n/2, got r={r}, n={n}")
    member_tuples = fc.tuples()
    support = sorted({e for t in member_tuples for e in t})
    membership = [[i for i, t in enumerate(member_tuples) if e in t] for e in support]
    pos_of = {e: k for k, e in enumerate(support)}
    images: dict[int, int] = {}
    used = [False] * (n + 1)

    def feasible(member_idx: int) -> bool:
        assigned = sorted(images[e] for e in member_tuples[member_idx] if e in images)
        return all(v >= 2 * (i + 1) for i, v in enumerate(assigned))

    def extend(k: int) -> bool:
        if k == len(support):
            return True
        e = support[k]
        for v in range(1, n + 1):
            if used[v]:
                continue
            images[e] = v
            used[v] = True
            if all(feasible(mi) for mi in membership[pos_of[e]]):
                if extend(k + 1):
                    return True
            used[v] = False
            del images[e]
        return False

    if not extend(0):
        return None
    free_positions = [e for e in range(1, n + 1) if e not in images]
    free_values = [v for v in range(1, n + 1) if not used[v]]
    for e, v in zip(free_positions, free_values):
        images[e] = v
    return PermCert(n, tuple(images[e] for e in range(1, n + 1)))


def verify_set_resilience(
    n: int,
    r: int,
    s: int,
    fc: SetFamily,
    field: FieldCtx,
    full_matrix: ExactMatrix | None = None,
    want_certificate: bool = True,
) -> ResilienceReport:
    """Remove the family fc from the rows of the full inclusion matrix,
    compute the exact rank, and compare against the full-matrix rank.

    The formula side is Wilson's rank (elimination of the full matrix in
    the excluded n < r+s corner).  A permutation certificate is attached
    when the search finds one.
    """
    if not 0 <= s < r or 2 * r > n:
        raise ValueError(f"need 0 <= s < r <= n/2, got {(n, r, s)}")
    if fc.n != n or fc.r != r:
        raise ValueError("removed family does not match (n, r)")
    t0 = time.perf_counter()
    if full_matrix is None:
        full_matrix = build_w(n, r, s, field)
    sub = full_matrix.drop_rows(fc.members)
    computed = rank(sub)
    if n >= r + s:
        formula = wilson_rank(n, r, s, field.char)
    else:
        formula = rank(full_matrix)
    cert = find_sigma(fc, r) if want_certificate else None
    return ResilienceReport(
        mode="set",
        n=n,
        r=r,
        s=s,
        q=None,
        field_str=field.field_string,
        removed=fc.members,
        computed_rank=computed,
        formula_rank=formula,
        certificate=cert,
        elapsed_s=time.perf_counter() - t0,
    )
