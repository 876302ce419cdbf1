"""Subspace-side rank layer: inclusion matrices, the q-rank formula, up
maps, Specht dimensions, character vectors, and removal resilience."""
import itertools

import pytest

from incmat.fields import ground_field, make_character_ctx, parse_field
from incmat.linalg import ExactMatrix, rank
from incmat.qpaths import (
    PLUS,
    QFamily,
    SubspaceCode,
    box_count,
    classify,
    count_good,
    decode_subspace,
    enumerate_paths,
    enumerate_subspaces,
    gaussian_binomial,
    subspace_index_map,
)
from incmat.qrank import (
    GLCert,
    build_wq,
    e_vector,
    find_g,
    fy_rank,
    specht_dimension,
    subspace_contains,
    u_subspace,
    up_space_avoids_plus_block,
    up_vector,
    verify_q_resilience,
    w_chain_dims,
)

Q0 = parse_field("q0")
GF2 = parse_field("gf2")
GF3 = parse_field("gf3")
GF5 = parse_field("gf5")
GF7 = parse_field("gf7")


def _span(rows, ctx):
    """All vectors in the row space, as tuples.  Brute force: only for
    spaces with at most a few hundred elements."""
    vecs = {tuple([ctx.zero] * (len(rows[0]) if rows else 0))}
    for coeffs in itertools.product(list(ctx.elements()), repeat=len(rows)):
        v = None
        for c, row in zip(coeffs, rows):
            term = [ctx.mul(c, x) for x in row]
            v = term if v is None else [ctx.add(a, b) for a, b in zip(v, term)]
        if v is not None:
            vecs.add(tuple(v))
    return vecs


def _nonzero_count(m, axis):
    zero = m.field.zero
    if axis == "row":
        return [sum(1 for v in row if v != zero) for row in m.data]
    return [sum(1 for row in m.data if row[j] != zero) for j in range(m.ncols)]


# -- inclusion matrix builder -------------------------------------------------


def test_build_wq_fano_shape_and_sums():
    for field in (Q0, GF3):
        w = build_wq(3, 2, 1, 2, field)
        assert w.shape() == (7, 7)
        assert _nonzero_count(w, "row") == [3] * 7
        assert _nonzero_count(w, "col") == [3] * 7


def test_build_wq_s_zero_single_all_ones_column():
    w = build_wq(4, 2, 0, 2, GF3)
    assert w.shape() == (35, 1)
    assert all(row == [GF3.one] for row in w.data)


def test_build_wq_kantor_rank():
    assert rank(build_wq(4, 2, 1, 2, Q0)) == 15


def test_build_wq_row_and_column_sums():
    # rows: [r s]_q subspaces inside each row space; columns: [n-s r-s]_q
    # superspaces of each column space.
    w = build_wq(4, 2, 1, 2, Q0)
    assert _nonzero_count(w, "row") == [gaussian_binomial(2, 1, 2)] * 35
    assert _nonzero_count(w, "col") == [gaussian_binomial(3, 1, 2)] * 15
    w3 = build_wq(4, 2, 1, 3, Q0)
    assert _nonzero_count(w3, "row") == [gaussian_binomial(2, 1, 3)] * 130
    assert _nonzero_count(w3, "col") == [gaussian_binomial(3, 1, 3)] * 40


def test_build_wq_family_rows_match_full_matrix():
    full = build_wq(4, 2, 1, 2, GF3)
    fam = QFamily(4, 2, 2, (0, 5, 17, 34))
    sub = build_wq(4, 2, 1, 2, GF3, family=fam)
    assert sub == full.take_rows((0, 5, 17, 34))


def test_build_wq_rejects_bad_input():
    with pytest.raises(ValueError):
        build_wq(4, 1, 2, 2, GF3)
    with pytest.raises(ValueError):
        build_wq(4, 2, 1, 2, GF2)  # coefficient char equals ground char
    with pytest.raises(ValueError):
        build_wq(4, 2, 1, 2, GF3, family=QFamily(3, 2, 2, (0,)))
    with pytest.raises(ValueError):
        build_wq(4, 2, 1, 2, GF3, max_entries=10)


def test_build_wq_extension_ground_field():
    w = build_wq(2, 1, 0, 4, GF3)
    assert w.shape() == (5, 1)
    assert all(row == [GF3.one] for row in w.data)


# -- rank formula -------------------------------------------------------------


def test_fy_rank_spec_values():
    assert fy_rank(4, 2, 1, 2, 3) == 14
    assert fy_rank(4, 2, 1, 2, 0) == 15
    assert fy_rank(4, 2, 0, 2, 0) == 1
    assert fy_rank(6, 3, 0, 2, 5) == 1


def test_fy_rank_char_zero_telescopes():
    for n in range(2, 7):
        for r in range(1, n // 2 + 1):
            for s in range(r):
                if n < r + s:
                    continue
                for q in (2, 3):
                    assert fy_rank(n, r, s, q, 0) == gaussian_binomial(n, s, q)


def test_fy_rank_refusals():
    with pytest.raises(ValueError):
        fy_rank(4, 2, 1, 2, 2)  # coefficient char = ground char
    with pytest.raises(ValueError):
        fy_rank(4, 2, 1, 4, 2)  # q = 4 still has ground char 2
    with pytest.raises(ValueError):
        fy_rank(4, 2, 1, 3, 3)
    with pytest.raises(ValueError):
        fy_rank(3, 2, 2, 2, 0)  # n < r + s
    with pytest.raises(ValueError):
        fy_rank(4, 2, 1, 2, 1)
    with pytest.raises(ValueError):
        fy_rank(4, 2, 3, 2, 0)  # s > r


@pytest.mark.parametrize(
    "n,r,s,q,field,expected",
    [
        (4, 2, 1, 2, GF3, 14),
        (4, 2, 1, 2, GF5, 15),
        (4, 2, 1, 3, GF2, 39),
        (5, 2, 1, 2, Q0, 31),
    ],
)
def test_fy_rank_matches_elimination(n, r, s, q, field, expected):
    assert fy_rank(n, r, s, q, field.char) == expected
    assert rank(build_wq(n, r, s, q, field)) == expected


# -- containment --------------------------------------------------------------


def test_subspace_contains_matches_bruteforce():
    for n, q, r, s in ((4, 2, 2, 1), (3, 3, 2, 1)):
        ctx = ground_field(q)
        rs = [decode_subspace(c).data for c in enumerate_subspaces(n, r, q)]
        ss = [decode_subspace(c).data for c in enumerate_subspaces(n, s, q)]
        for rb in rs:
            big = _span(rb, ctx)
            for sb in ss:
                assert subspace_contains(rb, sb, ctx) == (_span(sb, ctx) <= big)


def test_subspace_contains_reflexive_and_zero():
    for q in (2, 3, 4):
        ctx = ground_field(q)
        for c in enumerate_subspaces(3, 2, q):
            rows = decode_subspace(c).data
            assert subspace_contains(rows, rows, ctx)
            assert subspace_contains(rows, [], ctx)


# -- up maps ------------------------------------------------------------------


def test_up_vector_of_full_dim_is_indicator():
    idx = subspace_index_map(4, 2, 2)
    for c in enumerate_subspaces(4, 2, 2):
        v = up_vector(c, 2, GF3)
        assert v[idx[c]] == GF3.one
        assert sum(1 for x in v if x != GF3.zero) == 1


def test_up_vector_of_zero_space_is_all_ones():
    zero = enumerate_subspaces(4, 0, 2)[0]
    assert up_vector(zero, 2, GF3) == [GF3.one] * 35


def test_up_vectors_are_inclusion_matrix_columns():
    w = build_wq(4, 2, 1, 2, GF3)
    lines = enumerate_subspaces(4, 1, 2)
    for k, x in enumerate(lines):
        assert up_vector(x, 2, GF3) == [row[k] for row in w.data]


def test_up_vector_rejects_too_large_source():
    c = enumerate_subspaces(4, 2, 2)[0]
    with pytest.raises(ValueError):
        up_vector(c, 1, GF3)


@pytest.mark.parametrize("n,q", [(4, 2), (5, 2)])
@pytest.mark.parametrize("field", [Q0, GF3])
def test_up_map_acts_diagonally_on_up_vectors(n, q, field):
    # pushing the up vector of a j-space from level s to level r scales it
    # by the count of intermediate s-spaces, [r-j s-j]_q
    r, s = 2, 1
    w = build_wq(n, r, s, q, field)
    for j in (0, 1):
        scalar = field.embed(gaussian_binomial(r - j, s - j, q))
        for x in enumerate_subspaces(n, j, q):
            lhs = w.mat_vec(up_vector(x, s, field))
            rhs = [field.mul(scalar, v) for v in up_vector(x, r, field)]
            assert lhs == rhs


def test_u_subspace_rank_one_case():
    u = u_subspace(4, 1, 2, GF3)
    assert u.dim == 1
    assert u.vectors.data[0] == [GF3.one] * 15


def test_u_subspace_dimensions():
    assert u_subspace(4, 2, 2, GF3).dim == 15
    assert u_subspace(5, 2, 2, GF5).dim == 31


def test_u_subspace_refusals():
    with pytest.raises(ValueError):
        u_subspace(4, 2, 2, GF2)
    with pytest.raises(ValueError):
        u_subspace(4, 0, 2, GF3)


def test_w_chain_dims_small():
    dims, layers = w_chain_dims(4, 1, 2, GF3)
    assert dims == [1, 15]
    assert [len(b) for b in layers] == [1, 14]


def test_w_chain_dims_two_levels():
    dims, layers = w_chain_dims(4, 2, 2, GF3)
    assert dims == [1, 15, 35]
    assert [len(b) for b in layers] == [1, 14, 20]
    for j, layer in enumerate(layers):
        assert all(c.r == j for c in layer)


def test_w_chain_dims_refusals():
    with pytest.raises(ValueError):
        w_chain_dims(4, 1, 2, GF2)
    with pytest.raises(ValueError):
        w_chain_dims(4, 5, 2, GF3)


def test_specht_dimension_values():
    assert specht_dimension(4, 0, 2, GF3) == 1
    assert specht_dimension(4, 2, 2, GF3) == 20
    assert specht_dimension(5, 2, 2, GF3) == 124
    assert specht_dimension(4, 2, 3, GF2) == 90


def test_specht_dimension_matches_good_count_and_formula():
    for n, r, q, field in ((4, 2, 2, GF3), (5, 2, 2, GF3), (4, 2, 3, GF7)):
        d = specht_dimension(n, r, q, field)
        assert d == count_good(n, r, q)
        assert d == gaussian_binomial(n, r, q) - gaussian_binomial(n, r - 1, q)


def test_specht_dimension_refusals():
    with pytest.raises(ValueError):
        specht_dimension(4, 3, 2, GF3)  # r > n/2
    with pytest.raises(ValueError):
        specht_dimension(4, 2, 2, GF2)


# -- character vectors --------------------------------------------------------


def test_e_vector_tiny_frozen_values():
    # n=2, q=2: codes in order are <e1>, <e2>, <e1+e2>; host F_3, zeta=2.
    cctx = make_character_ctx(ground_field(2))
    assert cctx.host.char == 3 and cctx.zeta == 2
    twisted = SubspaceCode(2, 1, 2, (2,), ((1,),))
    flat = SubspaceCode(2, 1, 2, (2,), ((0,),))
    assert e_vector(twisted, cctx) == [0, 1, 2]
    assert e_vector(flat, cctx) == [0, 1, 1]


def test_e_vector_zero_filling_is_block_indicator():
    cctx = make_character_ctx(ground_field(2))
    codes = enumerate_subspaces(4, 2, 2)
    for pivots in {c.pivots for c in codes}:
        filling = tuple(tuple(0 for _ in range(p - i)) for i, p in enumerate(pivots, 1))
        v = e_vector(SubspaceCode(4, 2, 2, pivots, filling), cctx)
        assert v == [1 if c.pivots == pivots else 0 for c in codes]


def test_e_vector_support_stays_in_own_block():
    cctx = make_character_ctx(ground_field(2))
    codes = enumerate_subspaces(4, 2, 2)
    for L in codes:
        v = e_vector(L, cctx)
        for c, x in zip(codes, v):
            assert (x != 0) == (c.pivots == L.pivots)


@pytest.mark.parametrize("n,r,q", [(4, 2, 2), (4, 1, 2), (3, 1, 3), (4, 2, 3)])
def test_e_vector_blocks_have_full_rank(n, r, q):
    cctx = make_character_ctx(ground_field(q))
    host = cctx.host
    codes = enumerate_subspaces(n, r, q)
    by_path = {}
    for c in codes:
        by_path.setdefault(c.pivots, []).append(c)
    for pi in enumerate_paths(n, r):
        block = by_path[pi.pivots]
        c_pi = q ** box_count(pi)
        assert len(block) == c_pi
        m = ExactMatrix(host, [e_vector(L, cctx) for L in block], len(codes))
        assert rank(m) == c_pi


def test_e_vector_rejects_mismatched_context():
    cctx = make_character_ctx(ground_field(3))
    with pytest.raises(ValueError):
        e_vector(SubspaceCode(2, 1, 2, (1,), ((),)), cctx)


def test_plus_block_avoidance():
    assert up_space_avoids_plus_block(4, 2, 2, GF3)
    assert up_space_avoids_plus_block(4, 1, 2, GF3)
    assert up_space_avoids_plus_block(5, 2, 2, GF3)


def test_plus_block_avoidance_host_validation():
    with pytest.raises(ValueError):
        up_space_avoids_plus_block(4, 2, 2, Q0)
    with pytest.raises(ValueError):
        up_space_avoids_plus_block(4, 2, 2, parse_field("gf3^2"))
    with pytest.raises(ValueError):
        up_space_avoids_plus_block(4, 2, 2, GF2)  # host char = p
    with pytest.raises(ValueError):
        up_space_avoids_plus_block(4, 2, 3, GF5)  # 5 != 1 mod 3
    with pytest.raises(ValueError):
        up_space_avoids_plus_block(4, 3, 2, GF3)  # r > n/2


# -- certificates and resilience ----------------------------------------------


def test_glcert_validation():
    with pytest.raises(ValueError):
        GLCert(4, 2, ExactMatrix.zeros(ground_field(2), 4, 3))
    with pytest.raises(ValueError):
        GLCert(4, 2, ExactMatrix.zeros(ground_field(2), 4, 4))
    with pytest.raises(ValueError):
        GLCert(4, 2, ExactMatrix.identity(GF3, 4))
    with pytest.raises(ValueError):
        GLCert(3, 2, ExactMatrix.identity(ground_field(2), 4))


def test_glcert_identity_apply_is_noop():
    cert = GLCert(4, 2, ExactMatrix.identity(ground_field(2), 4))
    for c in enumerate_subspaces(4, 2, 2):
        assert cert.apply(c) == c


def test_find_g_worked_example():
    # removing span{e1,e2} from F_2^4: pivot union {1,2} moves to {3,4}
    idx = subspace_index_map(4, 2, 2)
    member = SubspaceCode(4, 2, 2, (1, 2), ((), ()))
    fc = QFamily(4, 2, 2, (idx[member],))
    cert = find_g(fc)
    assert cert is not None
    ctx = ground_field(2)
    e = lambda k: [ctx.one if j == k else ctx.zero for j in range(4)]
    assert cert.matrix.data == [e(2), e(3), e(0), e(1)]
    image = cert.apply(member)
    assert image.pivots == (3, 4)
    assert classify(image.path) == PLUS


def test_find_g_all_plus_returns_identity():
    idx = subspace_index_map(4, 2, 2)
    members = tuple(sorted(i for c, i in idx.items() if classify(c.path) == PLUS))
    cert = find_g(QFamily(4, 2, 2, members))
    assert cert is not None
    assert cert.matrix == ExactMatrix.identity(ground_field(2), 4)


def test_find_g_gives_up_when_pivot_union_too_large():
    idx = subspace_index_map(4, 2, 2)
    a = SubspaceCode(4, 2, 2, (1, 2), ((), ()))
    b = SubspaceCode(4, 2, 2, (3, 4), ((0, 0), (0, 0)))
    assert find_g(QFamily(4, 2, 2, tuple(sorted((idx[a], idx[b]))))) is None


@pytest.mark.parametrize("q", [2, 3])
def test_find_g_succeeds_on_every_single_removal(q):
    codes = enumerate_subspaces(4, 2, q)
    for i, c in enumerate(codes):
        cert = find_g(QFamily(4, 2, q, (i,)))
        assert cert is not None
        assert classify(cert.apply(c).path) == PLUS


def test_verify_q_resilience_empty_family():
    rep = verify_q_resilience(4, 2, 1, 2, QFamily(4, 2, 2, ()), GF3)
    assert rep.equal and rep.computed_rank == 14


def test_verify_q_resilience_every_single_removal():
    full = build_wq(4, 2, 1, 2, GF3)
    for i in range(35):
        rep = verify_q_resilience(
            4, 2, 1, 2, QFamily(4, 2, 2, (i,)), GF3, full_matrix=full
        )
        assert rep.equal and rep.computed_rank == 14
        assert isinstance(rep.certificate, GLCert)


def test_verify_q_resilience_pencil_counterexample():
    # over the rationals, removing all 7 planes through a fixed line kills
    # that line's column, so the bound cannot be loosened to 7 removals
    ctx = ground_field(2)
    line = decode_subspace(enumerate_subspaces(4, 1, 2)[0]).data
    members = tuple(
        i
        for i, c in enumerate(enumerate_subspaces(4, 2, 2))
        if subspace_contains(decode_subspace(c).data, line, ctx)
    )
    assert len(members) == 7
    rep = verify_q_resilience(4, 2, 1, 2, QFamily(4, 2, 2, members), Q0)
    assert not rep.equal
    assert rep.formula_rank == 15
    assert rep.computed_rank == 14


def test_verify_q_resilience_skips_certificate_on_request():
    rep = verify_q_resilience(
        4, 2, 1, 2, QFamily(4, 2, 2, (3,)), GF3, want_certificate=False
    )
    assert rep.certificate is None


def test_verify_q_resilience_rejects_bad_input():
    with pytest.raises(ValueError):
        verify_q_resilience(4, 2, 1, 2, QFamily(4, 2, 2, ()), GF2)
    with pytest.raises(ValueError):
        verify_q_resilience(4, 2, 2, 2, QFamily(4, 2, 2, ()), GF3)  # s = r
    with pytest.raises(ValueError):
        verify_q_resilience(5, 2, 1, 2, QFamily(4, 2, 2, ()), GF3)
