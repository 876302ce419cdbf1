"""Tour of the subspace side: coding subspaces by lattice paths,
inclusion matrices between subspace layers, the closed-form rank, the
character construction, and removal certificates.

Subspaces of F_q^n replace subsets of [n]: an r-dimensional subspace has
a unique reduced basis whose pivot pattern is a lattice path, and the
free entries of that basis form the path's filling.
"""
from incmat.fields import ground_field, make_character_ctx, parse_field
from incmat.linalg import rank
from incmat.qpaths import (
    QFamily,
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
    build_wq,
    e_vector,
    find_g,
    fy_rank,
    specht_dimension,
    u_subspace,
    up_space_avoids_plus_block,
    verify_q_resilience,
    w_chain_dims,
)

GF3 = parse_field("gf3")
GF7 = parse_field("gf7")


def main() -> None:
    # 1. layer sizes are Gaussian binomials
    n, q = 4, 2
    print(f"subspace counts in F_{q}^{n}:",
          [gaussian_binomial(n, j, q) for j in range(n + 1)])

    # 2. each path carries q^boxes subspaces; classification splits the
    #    paths into PLUS / MINUS / OUTSIDE by their leading pivots
    r = 2
    for i, pi in enumerate(enumerate_paths(n, r)):
        print(f"  {i} {pi.steps} pivots={pi.pivots} boxes={box_count(pi)} "
              f"class={classify(pi)}")
    total = sum(q ** box_count(pi) for pi in enumerate_paths(n, r))
    print(f"sum of block sizes: {total} = [{n} {r}]_{q} "
          f"= {gaussian_binomial(n, r, q)}")

    # 3. the inclusion matrix of planes against lines and its rank formula
    w = build_wq(n, 2, 1, q, GF3)
    print(f"\nplanes x lines over gf3: shape {w.shape()}, rank {rank(w)}, "
          f"formula {fy_rank(n, 2, 1, q, 3)}")

    # 4. removing any single plane preserves the rank, with an invertible
    #    change of coordinates as certificate
    idx = subspace_index_map(n, 2, q)
    codes = enumerate_subspaces(n, 2, q)
    some = codes[0]
    rep = verify_q_resilience(n, 2, 1, q, QFamily(n, 2, q, (idx[some],)), GF3)
    print(f"remove subspace {some.pivots}/{some.filling}: "
          f"computed {rep.computed_rank}, formula {rep.formula_rank}, "
          f"equal: {rep.equal}")
    cert = find_g(QFamily(n, 2, q, (idx[some],)))
    moved = cert.apply(some)
    print(f"certificate moves it to pivots {moved.pivots} "
          f"({classify(moved.path)})")

    # 5. the character vectors attached to subspaces span a complement of
    #    the image of the level-below inclusion map; dimensions match the
    #    good-filling count
    host = make_character_ctx(ground_field(q)).host
    print(f"\nhost field for q={q}: gf{host.char}")
    good = count_good(n, r, q)
    spec = specht_dimension(n, r, q, GF3)
    print(f"count_good={good}, specht_dimension={spec}, "
          f"difference of layers = "
          f"{gaussian_binomial(n, r, q) - gaussian_binomial(n, r - 1, q)}")

    # 6. one character vector, supported on its own path block
    cctx = make_character_ctx(ground_field(q), GF3)
    L = codes[5]
    v = e_vector(L, cctx)
    support = [i for i, x in enumerate(v) if x != 0]
    same_block = [i for i, c in enumerate(codes) if c.pivots == L.pivots]
    print(f"e-vector of {L.pivots}/{L.filling}: support {support} "
          f"= its path block {same_block}")

    # 7. the up-span from the layer below meets the PLUS block trivially,
    #    which is what makes rank resilience work here
    print(f"\nup-span dimension at r-1: {u_subspace(n, r, q, GF3).dim} "
          f"= [{n} {r - 1}]_{q}")
    dims, _ = w_chain_dims(n, r, q, GF3)
    print(f"chain dimensions: {dims}")
    print(f"up-span avoids PLUS block: "
          f"{up_space_avoids_plus_block(n, r, q, GF3)}")

    # 8. same story at q=3 with host gf7
    print(f"\nq=3: rank {rank(build_wq(4, 2, 1, 3, GF7))} "
          f"= formula {fy_rank(4, 2, 1, 3, 7)}; "
          f"good count {count_good(4, 2, 3)} "
          f"= specht {specht_dimension(4, 2, 3, GF7)}")


if __name__ == "__main__":
    main()
