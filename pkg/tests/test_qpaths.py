"""Lattice paths, the subspace codec, and good fillings."""
import itertools
import random

import pytest

from incmat.fields import ground_field
from incmat.linalg import ExactMatrix, rank
from incmat.qpaths import (
    MINUS,
    OUTSIDE,
    PLUS,
    LatticePath,
    QFamily,
    SubspaceCode,
    box_count,
    classify,
    count_good,
    decode_subspace,
    encode_subspace,
    enumerate_paths,
    enumerate_subspaces,
    gaussian_binomial,
    is_good,
    leading_term,
    subspace_index_map,
)
from incmat.sets import binomial, full_rank_tuples


def _gauss_poly(n, k):
    """Pascal-recursion coefficients of the Gaussian binomial in q."""
    if k < 0 or k > n:
        return []
    if k == 0 or k == n:
        return [1]
    left = _gauss_poly(n - 1, k - 1)
    right = _gauss_poly(n - 1, k)
    out = [0] * max(len(left), k + len(right))
    for i, c in enumerate(left):
        out[i] += c
    for i, c in enumerate(right):
        out[k + i] += c
    return out


def _eval_poly(coeffs, q):
    return sum(c * q ** i for i, c in enumerate(coeffs))


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 0, 2) == 1
    assert gaussian_binomial(4, 1, 2) == 15
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 2, 3) == 1210
    assert gaussian_binomial(4, -1, 2) == 0
    assert gaussian_binomial(4, 5, 2) == 0


def test_gaussian_binomial_matches_pascal_polynomial():
    for n in range(9):
        for k in range(n + 1):
            coeffs = _gauss_poly(n, k)
            for q in (2, 3, 4, 5):
                assert gaussian_binomial(n, k, q) == _eval_poly(coeffs, q)


def test_gaussian_binomial_at_one_is_binomial():
    for n in range(9):
        for k in range(n + 1):
            assert _eval_poly(_gauss_poly(n, k), 1) == binomial(n, k)


def test_lattice_path_validation():
    p = LatticePath(4, 2, "SESE")
    assert p.pivots == (1, 3)
    assert LatticePath.from_pivots(4, (1, 3)) == p
    with pytest.raises(ValueError):
        LatticePath(4, 2, "SSSE")
    with pytest.raises(ValueError):
        LatticePath(4, 2, "SSE")
    with pytest.raises(ValueError):
        LatticePath(4, 2, "SSXX")


def test_enumerate_paths_displayed_order():
    steps = [p.steps for p in enumerate_paths(4, 2)]
    assert steps == ["SSEE", "SESE", "SEES", "ESSE", "ESES", "EESS"]


def test_enumerate_paths_extremes_and_count():
    for n in range(1, 9):
        for r in range(n + 1):
            paths = enumerate_paths(n, r)
            assert len(paths) == binomial(n, r)
            assert len(set(p.steps for p in paths)) == len(paths)
            assert paths[0].steps == "S" * r + "E" * (n - r)
            assert paths[-1].steps == "E" * (n - r) + "S" * r


def test_box_count_examples():
    assert box_count(LatticePath(7, 3, "ESESESE")) == 6
    assert box_count(LatticePath(6, 2, "SSEEEE")) == 0
    assert box_count(LatticePath(4, 2, "EESS")) == 4


def test_box_count_sum_is_gaussian_polynomial():
    for n in range(1, 9):
        for r in range(n + 1):
            coeffs = _gauss_poly(n, r)
            counts = [box_count(p) for p in enumerate_paths(n, r)]
            got = [0] * (max(counts) + 1 if counts else 1)
            for c in counts:
                got[c] += 1
            assert got == coeffs
            for q in (2, 3):
                assert sum(q ** c for c in counts) == gaussian_binomial(n, r, q)


def test_leading_term_and_classify_examples():
    assert leading_term(LatticePath(4, 2, "EESS")) == 2
    assert classify(LatticePath(4, 2, "EESS")) == PLUS
    assert leading_term(LatticePath(4, 2, "SSEE")) == 0
    assert classify(LatticePath(4, 2, "SSEE")) == OUTSIDE
    assert leading_term(LatticePath(4, 2, "ESES")) == 1
    assert classify(LatticePath(4, 2, "ESES")) == MINUS
    assert leading_term(LatticePath(3, 0, "EEE")) == 3


def test_classify_partition_matches_set_correspondence():
    for n in range(2, 9):
        for r in range(n // 2 + 1):
            fr = set(full_rank_tuples(n, r))
            plus = minus = outside = 0
            for p in enumerate_paths(n, r):
                cls = classify(p, r)
                if cls == PLUS:
                    plus += 1
                    assert leading_term(p) >= r
                elif cls == MINUS:
                    minus += 1
                else:
                    outside += 1
                assert (cls in (PLUS, MINUS)) == (p.pivots in fr)
            assert plus + minus == binomial(n, r) - binomial(n, r - 1)
            assert plus == binomial(n - r, r)


def test_subspace_code_validation():
    SubspaceCode(4, 2, 2, (1, 3), ((), (0,)))
    with pytest.raises(ValueError):
        SubspaceCode(4, 2, 2, (1, 3), ((), ()))  # filling width mismatch
    with pytest.raises(ValueError):
        SubspaceCode(4, 2, 2, (3, 1), ((0, 0), ()))
    with pytest.raises(ValueError):
        SubspaceCode(4, 2, 2, (1, 5), ((), (0, 0, 0)))


def test_decode_canonical_forms():
    ctx = ground_field(2)
    code = SubspaceCode(4, 2, 2, (3, 4), ((0, 0), (0, 0)))
    m = decode_subspace(code)
    assert m.data == [[0, 0, 1, 0], [0, 0, 0, 1]]
    code = SubspaceCode(5, 2, 2, (1, 2), ((), ()))
    assert decode_subspace(code).data == [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
    ]
    del ctx


def test_worked_codec_example():
    # pivots 2,3,5 in a 7-column canonical form; filling rows (a),(b),(c,d)
    q = 5
    a, b, c, d = 2, 3, 1, 4
    code = SubspaceCode(7, 3, q, (2, 3, 5), ((a,), (b,), (c, d)))
    assert code.path.steps == "ESSESEE"
    m = decode_subspace(code)
    assert m.data[0] == [a, 1, 0, 0, 0, 0, 0]
    assert m.data[1] == [b, 0, 1, 0, 0, 0, 0]
    assert m.data[2] == [c, 0, 0, d, 1, 0, 0]
    assert encode_subspace(m) == code


def test_encode_is_basis_independent():
    rng = random.Random(7)
    for q in (2, 3):
        ctx = ground_field(q)
        for code in enumerate_subspaces(4, 2, q):
            m = decode_subspace(code)
            # random invertible row operations preserve the row space
            scr = [row[:] for row in m.data]
            for _ in range(4):
                i, j = rng.randrange(2), rng.randrange(2)
                if i != j:
                    c = ctx.element_at(rng.randrange(q))
                    scr[i] = [ctx.add(x, ctx.mul(c, y)) for x, y in zip(scr[i], scr[j])]
                else:
                    c = ctx.element_at(rng.randrange(1, q))
                    scr[i] = [ctx.mul(c, x) for x in scr[i]]
            assert encode_subspace(ExactMatrix(ctx, scr, 4)) == code


def test_encode_rejects_rank_deficient():
    ctx = ground_field(2)
    m = ExactMatrix.from_int_rows(ctx, [[1, 0, 1, 0], [1, 0, 1, 0]])
    with pytest.raises(ValueError):
        encode_subspace(m)


def test_enumerate_subspaces_counts_and_roundtrip():
    for n in range(1, 6):
        for q in (2, 3):
            for r in range(n + 1):
                codes = enumerate_subspaces(n, r, q)
                assert len(codes) == gaussian_binomial(n, r, q)
                assert len(set(codes)) == len(codes)
                for code in codes:
                    back = encode_subspace(decode_subspace(code))
                    assert back == code


def test_enumerate_subspaces_order_is_path_major():
    codes = enumerate_subspaces(4, 2, 2)
    paths = [p.pivots for p in enumerate_paths(4, 2)]
    seen_paths = [c.pivots for c in codes]
    # path blocks appear in enumerate_paths order
    block_order = []
    for piv in seen_paths:
        if not block_order or block_order[-1] != piv:
            block_order.append(piv)
    assert block_order == paths
    idx = subspace_index_map(4, 2, 2)
    for i, c in enumerate(codes):
        assert idx[c] == i


def test_decoded_bases_have_full_rank():
    for code in enumerate_subspaces(5, 2, 3):
        assert rank(decode_subspace(code)) == 2


def test_is_good_examples():
    # leading term >= r: every filling is good
    for code in enumerate_subspaces(4, 2, 2):
        cls = classify(code.path)
        if cls == PLUS:
            assert is_good(code)
        elif cls == OUTSIDE:
            assert not is_good(code)
        elif all(v == 0 for row in code.filling for v in row):
            assert is_good(code)


def test_count_good_values():
    assert count_good(4, 2, 2) == 20 == gaussian_binomial(4, 2, 2) - gaussian_binomial(4, 1, 2)
    for q in (2, 3):
        assert count_good(2, 1, q) == q
    assert count_good(5, 2, 3) == 1089
    with pytest.raises(ValueError):
        count_good(4, 3, 2)


def test_count_good_matches_dimension_formula():
    for n in range(2, 6):
        for q in (2, 3):
            for r in range(n // 2 + 1):
                assert count_good(n, r, q) == (
                    gaussian_binomial(n, r, q) - gaussian_binomial(n, r - 1, q)
                )


def test_good_paths_never_cross():
    for code in enumerate_subspaces(5, 2, 2):
        if is_good(code):
            assert classify(code.path) in (PLUS, MINUS)


def test_qfamily_api():
    codes = enumerate_subspaces(4, 2, 2)
    fam = QFamily.from_codes(codes[:3])
    assert fam.members == (0, 1, 2)
    assert [c.pivots for c in fam.codes()] == [c.pivots for c in codes[:3]]
    comp = fam.complement()
    assert len(comp) == 35 - 3
    assert set(comp.members).isdisjoint(fam.members)
    with pytest.raises(ValueError):
        QFamily(4, 2, 2, (35,))
    with pytest.raises(ValueError):
        QFamily(4, 2, 2, (1, 1))
