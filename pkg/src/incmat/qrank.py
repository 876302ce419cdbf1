"""Subspace lattice side, rank layer: inclusion matrices of r-subspaces
against s-subspaces of GF(q)^n, the q-analogue rank formula, the span of
the up maps, Specht module dimensions via down-map kernels, character
vectors adapted to the path blocks, and rank resilience under row
removals with invertible-map certificates.

The coefficient field is always separate from the ground field and must
have characteristic different from p where q = p^t.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .fields import CharacterCtx, FieldCtx, ground_field
from .linalg import (
    ExactMatrix,
    SubspaceBasis,
    _rank_gf2_packed,
    _rref,
    _rref_generic,
    entry_budget_guard,
    intersect,
    rank,
    row_space_basis,
)
from .qpaths import (
    PLUS,
    QFamily,
    SubspaceCode,
    classify,
    decode_subspace,
    encode_subspace,
    enumerate_subspaces,
    gaussian_binomial,
    subspace_index_map,
)
from .report import ResilienceReport


def _ground_char(q: int) -> int:
    return ground_field(q).char


def _check_coeff_field(q: int, field: FieldCtx) -> None:
    if field.char == _ground_char(q):
        raise ValueError(
            f"coefficient field characteristic {field.char} collides with the "
            f"ground field characteristic of GF({q})"
        )


def subspace_contains(r_rows: list[list], s_rows: list[list], ctx: FieldCtx) -> bool:
    """True iff the row space of s_rows sits inside that of r_rows, tested
    as rank(stack) == dim of the larger space."""
    stacked = s_rows + r_rows
    if ctx.char == 2 and ctx.degree == 1:
        packed = []
        for row in stacked:
            acc = 0
            for j, v in enumerate(row):
                if v:
                    acc |= 1 << j
            packed.append(acc)
        n = len(r_rows[0]) if r_rows else 0
        return _rank_gf2_packed(packed, n) == len(r_rows)
    ncols = len(stacked[0]) if stacked else 0
    _, pivots = _rref_generic(stacked, ctx, ncols)
    return len(pivots) == len(r_rows)


def build_wq(
    n: int,
    r: int,
    s: int,
    q: int,
    field: FieldCtx,
    family: QFamily | None = None,
    max_entries: int = 50_000_000,
) -> ExactMatrix:
    """Inclusion matrix of the family's r-subspaces (rows) against all
    s-subspaces of GF(q)^n (columns), over the coefficient field: entry
    one iff the column subspace is contained in the row subspace."""
    if not 0 <= s <= r <= n:
        raise ValueError(f"need 0 <= s <= r <= n, got {(n, r, s)}")
    _check_coeff_field(q, field)
    if family is None:
        family = QFamily(n, r, q, tuple(range(gaussian_binomial(n, r, q))))
    if (family.n, family.r, family.q) != (n, r, q):
        raise ValueError("family does not match (n, r, q)")
    ncols = gaussian_binomial(n, s, q)
    entry_budget_guard(len(family), ncols, max_entries)
    col_index = subspace_index_map(n, s, q)
    # the columns hit by a row are exactly the images of the s-subspaces of
    # F_q^r under the row's basis, so each row costs [r s]_q encodings
    # instead of [n s]_q containment tests
    sub_bases = [decode_subspace(c) for c in enumerate_subspaces(r, s, q)]
    one, zero = field.one, field.zero
    data = []
    for code in family.codes():
        row_basis = decode_subspace(code)
        row = [zero] * ncols
        for sb in sub_bases:
            row[col_index[encode_subspace(sb.mat_mul(row_basis))]] = one
        data.append(row)
    return ExactMatrix(field, data, ncols)


def fy_rank(n: int, r: int, s: int, q: int, characteristic: int) -> int:
    """Rank of the full subspace inclusion matrix over any coefficient
    field of the given characteristic (which must differ from that of the
    ground field); needs n >= r + s.

    Sum of [n i]_q - [n i-1]_q over the i in 0..s where [r-i s-i]_q does
    not vanish in the coefficient field.
    """
    if not 0 <= s <= r <= n:
        raise ValueError(f"need 0 <= s <= r <= n, got {(n, r, s)}")
    if n < r + s:
        raise ValueError(f"formula needs n >= r + s, got n={n}, r+s={r + s}")
    p = _ground_char(q)
    if characteristic == p:
        raise ValueError(f"coefficient characteristic must differ from {p}")
    if characteristic != 0 and characteristic < 2:
        raise ValueError(f"bad characteristic {characteristic}")
    total = 0
    for i in range(s + 1):
        g = gaussian_binomial(r - i, s - i, q)
        if characteristic == 0 or g % characteristic != 0:
            total += gaussian_binomial(n, i, q) - gaussian_binomial(n, i - 1, q)
    return total


# -- up maps, chains, Specht dimension -------------------------------------------


def up_vector(x: SubspaceCode, r: int, field: FieldCtx) -> list:
    """Coordinate vector of the sum of all r-superspaces of x, over the
    canonical order of r-subspaces."""
    if x.r > r:
        raise ValueError(f"need dim x <= r, got {x.r} > {r}")
    _check_coeff_field(x.q, field)
    ctx = ground_field(x.q)
    xb = decode_subspace(x).data
    one, zero = field.one, field.zero
    return [
        one if subspace_contains(decode_subspace(c).data, xb, ctx) else zero
        for c in enumerate_subspaces(x.n, r, x.q)
    ]


def u_subspace(n: int, r: int, q: int, field: FieldCtx) -> SubspaceBasis:
    """Basis of the span of the images of all up maps from levels below r,
    i.e. the column space of the concatenated inclusion matrices of rows r
    against columns 0..r-1; its dimension is [n r-1]_q away from the
    ground characteristic."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    _check_coeff_field(q, field)
    rows = []
    for j in range(r):
        w = build_wq(n, r, j, q, field)
        rows.extend(w.transpose().data)
    ambient = gaussian_binomial(n, r, q)
    return row_space_basis(ExactMatrix(field, rows, ambient))


def w_chain_dims(
    n: int, s: int, q: int, field: FieldCtx
) -> tuple[list[int], list[list[SubspaceCode]]]:
    """Greedy filtration of the s-th level by up images of levels 0..s.

    Returns the chain dimensions after each level j (expected [n j]_q away
    from the ground characteristic) and, per level, the subspaces whose up
    vectors extended the basis (expected [n j]_q - [n j-1]_q many).
    """
    if not 0 <= s <= n:
        raise ValueError(f"need 0 <= s <= n, got s={s}, n={n}")
    _check_coeff_field(q, field)
    ambient = gaussian_binomial(n, s, q)
    rows: list[list] = []
    counts: list[int] = []
    for j in range(s + 1):
        rows.extend(build_wq(n, s, j, q, field).transpose().data)
        counts.append(gaussian_binomial(n, j, q))
    # greedy selection in stacking order = pivot columns of the transpose:
    # column k is a pivot exactly when row k extends the span of rows < k
    stacked = ExactMatrix(field, rows, ambient)
    kept = set(_rref(stacked.transpose())[1])
    dims: list[int] = []
    layers: list[list[SubspaceCode]] = []
    total, at = 0, 0
    for j in range(s + 1):
        codes = enumerate_subspaces(n, j, q)
        layer = [c for k, c in enumerate(codes) if at + k in kept]
        total += len(layer)
        at += counts[j]
        dims.append(total)
        layers.append(layer)
    return dims, layers


def specht_dimension(n: int, r: int, q: int, field: FieldCtx) -> int:
    """Dimension of the intersection of the kernels of all down maps from
    level r to levels 0..r-1, over the coefficient field; equals
    [n r]_q - [n r-1]_q away from the ground characteristic."""
    if not 0 <= 2 * r <= n:
        raise ValueError(f"need 0 <= r <= n/2, got r={r}, n={n}")
    _check_coeff_field(q, field)
    ambient = gaussian_binomial(n, r, q)
    if r == 0:
        return 1
    stack_rows: list[list] = []
    for j in range(r):
        stack_rows.extend(build_wq(n, r, j, q, field).transpose().data)
    stacked = ExactMatrix(field, stack_rows, ambient)
    return ambient - rank(stacked)


# -- character vectors and the plus block -----------------------------------------


def e_vector(L: SubspaceCode, cctx: CharacterCtx) -> list:
    """Character-twisted block vector of the subspace L.

    Supported on the subspaces with the same path as L; the coordinate at
    X is the product of theta(-l_b x_b) over the filling boxes, valued in
    the host prime field.
    """
    qc = cctx.q_ctx
    if qc.order != L.q:
        raise ValueError(f"character context is over GF({qc.order}), code over GF({L.q})")
    host = cctx.host
    ell = host.char
    codes = enumerate_subspaces(L.n, L.r, L.q)
    l_flat = [v for row in L.filling for v in row]
    out = [0] * len(codes)
    for i, x in enumerate(codes):
        if x.pivots != L.pivots:
            continue
        x_flat = [v for row in x.filling for v in row]
        s = qc.zero
        for lv, xv in zip(l_flat, x_flat):
            s = qc.add(s, qc.mul(lv, xv))
        t = cctx.trace(qc.neg(s))
        out[i] = pow(cctx.zeta, t, ell)
    return out


def up_space_avoids_plus_block(n: int, r: int, q: int, host: FieldCtx) -> bool:
    """True iff the span of the up images meets the coordinate block of
    the subspaces whose paths have leading term >= r only in zero.

    The host must be a prime field of characteristic != p containing a
    p-th root of unity (ell = 1 mod p), the setting where the block
    decomposition argument runs.
    """
    if host.char == 0 or host.degree != 1:
        raise ValueError("host must be a prime field")
    p = _ground_char(q)
    if host.char == p or host.char % p != 1:
        raise ValueError(f"host GF({host.char}) lacks a {p}-th root of unity or collides with p")
    if not 1 <= r <= n // 2:
        raise ValueError(f"need 1 <= r <= n/2, got r={r}, n={n}")
    u = u_subspace(n, r, q, host)
    codes = enumerate_subspaces(n, r, q)
    plus_coords = [i for i, c in enumerate(codes) if classify(c.path) == PLUS]
    block_rows = []
    for i in plus_coords:
        v = [host.zero] * len(codes)
        v[i] = host.one
        block_rows.append(v)
    block = SubspaceBasis(len(codes), ExactMatrix(host, block_rows, len(codes)))
    return intersect(u, block).dim == 0


# -- invertible-map certificates and resilience ------------------------------------


@dataclass
class GLCert:
    """An invertible n x n matrix over the ground field, acting on row
    vectors from the right, that maps every removed subspace to one whose
    path has leading term >= r."""

    n: int
    q: int
    matrix: ExactMatrix

    def __post_init__(self):
        m = self.matrix
        if m.nrows != self.n or m.ncols != self.n:
            raise ValueError("certificate matrix must be n x n")
        if m.field.order != self.q:
            raise ValueError("certificate matrix must live over GF(q)")
        if rank(m) != self.n:
            raise ValueError("certificate matrix is singular")

    def apply(self, code: SubspaceCode) -> SubspaceCode:
        return encode_subspace(decode_subspace(code).mat_mul(self.matrix))


def find_g(fc: QFamily) -> GLCert | None:
    """Search for an invertible map sending every removed subspace to the
    plus block.

    When every member already has leading term >= fc.r the identity is
    returned.  Otherwise, if the union of all pivot columns has at most
    n - r elements, the permutation matrix moving those columns (in
    order) to the last positions works: every nonzero vector of a member
    has its last nonzero coordinate at a pivot column, so after the move
    no member meets the span of the first r coordinates, forcing all its
    pivots past r.  Returns None when the pivot union is too large.
    """
    n, r, q = fc.n, fc.r, fc.q
    ctx = ground_field(q)
    codes = fc.codes()
    if all(classify(c.path) == PLUS for c in codes):
        return GLCert(n, q, ExactMatrix.identity(ctx, n))
    pivot_union = sorted({p for c in codes for p in c.pivots})
    l = len(pivot_union)
    if l > n - r:
        return None
    sigma = {}
    for k, col in enumerate(pivot_union, start=1):
        sigma[col] = n - l + k
    rest_positions = [i for i in range(1, n + 1) if i not in sigma]
    for k, col in enumerate(rest_positions, start=1):
        sigma[col] = k
    m = ExactMatrix.zeros(ctx, n, n)
    for i in range(1, n + 1):
        m.data[i - 1][sigma[i] - 1] = ctx.one
    cert = GLCert(n, q, m)
    for c in codes:
        if classify(cert.apply(c).path) != PLUS:
            raise RuntimeError(
                f"constructed certificate failed to move {c} into the plus block"
            )
    return cert


def verify_q_resilience(
    n: int,
    r: int,
    s: int,
    q: int,
    fc: QFamily,
    field: FieldCtx,
    full_matrix: ExactMatrix | None = None,
    want_certificate: bool = True,
) -> ResilienceReport:
    """Remove the family fc from the rows of the full subspace inclusion
    matrix, compute the exact rank over the coefficient field, and compare
    against the full-matrix rank from the q-analogue formula.  An
    invertible-map certificate is attached when the pivot-union
    construction applies."""
    if not 0 <= s < r or 2 * r > n:
        raise ValueError(f"need 0 <= s < r <= n/2, got {(n, r, s)}")
    _check_coeff_field(q, field)
    if (fc.n, fc.r, fc.q) != (n, r, q):
        raise ValueError("removed family does not match (n, r, q)")
    t0 = time.perf_counter()
    if full_matrix is None:
        full_matrix = build_wq(n, r, s, q, field)
    sub = full_matrix.drop_rows(fc.members)
    computed = rank(sub)
    if n >= r + s:
        formula = fy_rank(n, r, s, q, field.char)
    else:
        formula = rank(full_matrix)
    cert = find_g(fc) if want_certificate else None
    return ResilienceReport(
        mode="q",
        n=n,
        r=r,
        s=s,
        q=q,
        field_str=field.field_string,
        removed=fc.members,
        computed_rank=computed,
        formula_rank=formula,
        certificate=cert,
        elapsed_s=time.perf_counter() - t0,
    )
