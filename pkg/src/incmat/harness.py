"""Experiment harness: a CLI over the library, grid sweeps of removal
experiments with JSON/CSV reports, and a self-check suite.

Exit codes: 0 success, 1 property violation (failed check or an
in-hypothesis counterexample), 2 usage errors.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field

from .fields import ground_field, make_character_ctx, parse_field
from .linalg import ExactMatrix, kernel_basis, rank, read_matrix, write_matrix
from .qpaths import (
    PLUS,
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
)
from .qrank import (
    GLCert,
    build_wq,
    e_vector,
    find_g,
    fy_rank,
    specht_dimension,
    up_space_avoids_plus_block,
    verify_q_resilience,
    w_chain_dims,
)
from .report import ResilienceReport
from .sets import (
    PermCert,
    SetFamily,
    Subset,
    bier_basis_matrix,
    bier_identity_residual,
    binomial,
    build_w,
    find_sigma,
    verify_set_resilience,
    wilson_rank,
)

# -- sweep configuration and reports ----------------------------------------------


@dataclass
class ExperimentConfig:
    """Grid of removal experiments: cartesian product of the parameter
    lists, filtered to valid combinations (0 <= s < r <= n/2, and a
    coefficient characteristic away from the ground one in q mode)."""

    mode: str
    ns: tuple[int, ...]
    rs: tuple[int, ...]
    ss: tuple[int, ...]
    fields: tuple[str, ...]
    qs: tuple[int, ...] = ()
    policy: str = "exhaustive"  # or "sample"
    k: int = 1
    samples: int = 0
    seed: int = 0
    max_entries: int = 50_000_000

    def __post_init__(self):
        if self.mode not in ("set", "q"):
            raise ValueError(f"bad mode {self.mode!r}")
        if self.policy not in ("exhaustive", "sample"):
            raise ValueError(f"bad policy {self.policy!r}")
        if self.mode == "q" and not self.qs:
            raise ValueError("q mode needs at least one ground order q")
        if self.policy == "sample" and (self.samples < 1 or self.k < 1):
            raise ValueError("sample policy needs samples >= 1 and k >= 1")


@dataclass
class RunSummary:
    config: ExperimentConfig
    cells: list[dict]
    equal_cells: int
    unequal_cells: int
    counterexamples: list[int]  # cell indices violating an in-hypothesis guarantee
    skipped: list[dict]  # grid entries not run, each with a reason
    wall_ms: int

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _hypothesis_bound(mode: str, n: int, r: int) -> int:
    """Largest removal size the rank guarantee covers."""
    if mode == "set":
        return (n - 1) // r
    return n // r - 1


def _serialize_certificate(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, PermCert):
        return {"kind": "permutation", "image": list(cert.image)}
    if isinstance(cert, GLCert):
        ctx = cert.matrix.field
        return {
            "kind": "invertible",
            "matrix": [[ctx.to_str(v) for v in row] for row in cert.matrix.data],
        }
    raise TypeError(f"unknown certificate type {type(cert)!r}")


def _cell_dict(rep: ResilienceReport, in_hypothesis: bool) -> dict:
    return {
        "params": {
            "mode": rep.mode,
            "n": rep.n,
            "r": rep.r,
            "s": rep.s,
            "q": rep.q,
            "field": rep.field_str,
        },
        "removed": list(rep.removed),
        "computed_rank": rep.computed_rank,
        "formula_rank": rep.formula_rank,
        "equal": rep.equal,
        "in_hypothesis": in_hypothesis,
        "certificate": _serialize_certificate(rep.certificate),
        "ms": int(rep.elapsed_s * 1000),
    }


def _grid_points(cfg: ExperimentConfig) -> tuple[list[tuple], list[dict]]:
    """Valid grid entries plus the skipped ones, each with a reason."""
    points, skipped = [], []
    qs = cfg.qs if cfg.mode == "q" else (None,)
    for n, r, s, q, fs in itertools.product(cfg.ns, cfg.rs, cfg.ss, qs, cfg.fields):
        params = {"mode": cfg.mode, "n": n, "r": r, "s": s, "q": q, "field": fs}
        if not 0 <= s < r or 2 * r > n:
            skipped.append({"params": params, "reason": "needs 0 <= s < r <= n/2"})
            continue
        fld = parse_field(fs)
        if cfg.mode == "q" and fld.char == ground_field(q).char:
            skipped.append(
                {"params": params, "reason": "coefficient characteristic equals ground one"}
            )
            continue
        points.append((n, r, s, q, fs))
    return points, skipped


def _families_for_point(cfg: ExperimentConfig, point_index: int, total_rows: int):
    if cfg.policy == "exhaustive":
        for size in range(cfg.k + 1):
            yield from itertools.combinations(range(total_rows), size)
    else:
        rng = random.Random((cfg.seed * 0x9E3779B97F4A7C15 + point_index) % 2**64)
        for _ in range(cfg.samples):
            size = rng.randint(1, min(cfg.k, total_rows))
            yield tuple(sorted(rng.sample(range(total_rows), size)))


def _run_gridpoint(args: tuple) -> tuple[list[dict], list[dict]]:
    cfg_dict, point_index, point = args
    cfg = ExperimentConfig(**cfg_dict)
    n, r, s, q, fs = point
    fld = parse_field(fs)
    cells: list[dict] = []
    try:
        if cfg.mode == "set":
            full = build_w(n, r, s, fld, max_entries=cfg.max_entries)
        else:
            full = build_wq(n, r, s, q, fld, max_entries=cfg.max_entries)
    except ValueError as exc:  # entry budget refusals become skips, not aborts
        params = {"mode": cfg.mode, "n": n, "r": r, "s": s, "q": q, "field": fs}
        return cells, [{"params": params, "reason": str(exc)}]
    total = full.nrows
    for members in _families_for_point(cfg, point_index, total):
        if cfg.mode == "set":
            fc = SetFamily(n, r, members)
            rep = verify_set_resilience(n, r, s, fc, fld, full_matrix=full)
        else:
            fc = QFamily(n, r, q, members)
            rep = verify_q_resilience(n, r, s, q, fc, fld, full_matrix=full)
        cells.append(_cell_dict(rep, len(members) <= _hypothesis_bound(cfg.mode, n, r)))
    return cells, []


def run_sweep(
    cfg: ExperimentConfig, jobs: int | None = None, deterministic_timing: bool = False
) -> RunSummary:
    """Run the configured grid and collect one cell per removal experiment.

    Cells appear in deterministic order (grid point order, then family
    enumeration order); with a fixed (config, seed) and
    deterministic_timing=True the serialized report is byte-identical
    across runs."""
    t0 = time.perf_counter()
    if jobs is None:
        jobs = int(os.environ.get("INCMAT_JOBS", "1"))
    points, skipped = _grid_points(cfg)
    tasks = [(asdict(cfg), i, p) for i, p in enumerate(points)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_point = list(pool.map(_run_gridpoint, tasks))
    else:
        per_point = [_run_gridpoint(t) for t in tasks]
    cells = [c for group, _ in per_point for c in group]
    skipped.extend(sk for _, group_skips in per_point for sk in group_skips)
    if deterministic_timing:
        for c in cells:
            c["ms"] = 0
    equal_cells = sum(1 for c in cells if c["equal"])
    counterexamples = [i for i, c in enumerate(cells) if c["in_hypothesis"] and not c["equal"]]
    wall = 0 if deterministic_timing else int((time.perf_counter() - t0) * 1000)
    return RunSummary(
        config=cfg,
        cells=cells,
        equal_cells=equal_cells,
        unequal_cells=len(cells) - equal_cells,
        counterexamples=counterexamples,
        skipped=skipped,
        wall_ms=wall,
    )


def summary_to_json_dict(summary: RunSummary) -> dict:
    return {
        "mode": summary.config.mode,
        "grid": asdict(summary.config),
        "cells": summary.cells,
        "summary": {
            "cells": len(summary.cells),
            "equal": summary.equal_cells,
            "unequal": summary.unequal_cells,
            "counterexamples": summary.counterexamples,
            "skipped": summary.skipped,
            "wall_ms": summary.wall_ms,
            "seed": summary.config.seed,
        },
    }


def write_json_report(summary: RunSummary, fp) -> None:
    json.dump(summary_to_json_dict(summary), fp, indent=2, sort_keys=True)
    fp.write("\n")


def write_csv_report(summary: RunSummary, fp) -> None:
    """Flat CSV mirror of the JSON cells."""
    w = csv.writer(fp)
    w.writerow(
        [
            "mode", "n", "r", "s", "q", "field", "removed",
            "computed_rank", "formula_rank", "equal", "in_hypothesis",
            "certificate", "ms",
        ]
    )
    for c in summary.cells:
        p = c["params"]
        cert = c["certificate"]
        if cert is None:
            cert_s = ""
        elif cert["kind"] == "permutation":
            cert_s = "perm:" + ",".join(str(v) for v in cert["image"])
        else:
            cert_s = "gl:" + ";".join(",".join(row) for row in cert["matrix"])
        w.writerow(
            [
                p["mode"], p["n"], p["r"], p["s"],
                "" if p["q"] is None else p["q"], p["field"],
                "|".join(str(i) for i in c["removed"]),
                c["computed_rank"], c["formula_rank"],
                int(c["equal"]), int(c["in_hypothesis"]), cert_s, c["ms"],
            ]
        )


# -- removal family file formats ----------------------------------------------------


def read_set_family(fp, n: int, r: int) -> SetFamily:
    """One subset per line, comma-separated elements of [n]."""
    subsets = []
    for line in fp:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        elems = tuple(int(tok) for tok in line.split(","))
        subsets.append(elems)
    return SetFamily.from_subsets(n, r, subsets)


def write_set_family(family: SetFamily, fp) -> None:
    for t in family.tuples():
        fp.write(",".join(str(e) for e in t) + "\n")


def read_q_family(fp, n: int, r: int, q: int) -> QFamily:
    """One subspace per line: `p1,...,pr|f1 f2 ... fb` with the filling
    row-major in canonical element strings."""
    ctx = ground_field(q)
    codes = []
    for line in fp:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        left, _, right = line.partition("|")
        pivots = tuple(int(tok) for tok in left.split(",") if tok)
        flat = [ctx.from_str(tok) for tok in right.split()]
        widths = [p - i for i, p in enumerate(pivots, start=1)]
        if len(flat) != sum(widths):
            raise ValueError(f"filling length {len(flat)} does not match pivots {pivots}")
        filling, at = [], 0
        for wdt in widths:
            filling.append(tuple(flat[at : at + wdt]))
            at += wdt
        codes.append(SubspaceCode(n, len(pivots), q, pivots, tuple(filling)))
    if not codes:
        return QFamily(n, r, q, ())
    return QFamily.from_codes(codes)


def write_q_family(family: QFamily, fp) -> None:
    ctx = ground_field(family.q)
    for code in family.codes():
        left = ",".join(str(p) for p in code.pivots)
        right = " ".join(ctx.to_str(v) for row in code.filling for v in row)
        fp.write(f"{left}|{right}\n")


# -- self-check suite ---------------------------------------------------------------


def _check_field_axioms() -> None:
    for fs in ("gf2", "gf3", "gf5", "gf2^2", "gf3^2"):
        f = parse_field(fs)
        elems = list(f.elements())
        for a in elems:
            for b in elems:
                assert f.add(a, b) == f.add(b, a)
                assert f.mul(a, b) == f.mul(b, a)
                if b != f.zero:
                    assert f.mul(f.div(a, b), b) == a
                for c in elems[:3]:
                    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    q0 = parse_field("q0")
    assert q0.div(q0.embed(-4), q0.embed(6)) == q0.embed(-2) / 3


def _check_characters() -> None:
    for q in (4, 8, 9):
        ctx = ground_field(q)
        cc = make_character_ctx(ctx)
        p = ctx.char
        assert cc.host.char % p == 1
        traces = {cc.trace(x) for x in ctx.elements()}
        assert traces == set(range(p)), "trace must be onto the prime field"
        for x in ctx.elements():
            for y in ctx.elements():
                assert cc.trace(ctx.add(x, y)) == (cc.trace(x) + cc.trace(y)) % p
        total = 0
        for x in ctx.elements():
            total = (total + cc.character(x)) % cc.host.char
        assert total == 0, "character sum over the field must vanish"


def _check_linalg() -> None:
    rng = random.Random(7)
    q0 = parse_field("q0")
    for _ in range(20):
        nr, nc = rng.randint(1, 12), rng.randint(1, 12)
        rows = [[rng.randint(-4, 4) for _ in range(nc)] for _ in range(nr)]
        m = ExactMatrix.from_int_rows(q0, rows)
        assert rank(m) == rank(m.transpose())
        for ell in (101, 103, 107):
            mp = ExactMatrix.from_int_rows(parse_field(f"gf{ell}"), rows)
            assert rank(mp) == rank(m)
        k = kernel_basis(m)
        assert k.dim == nc - rank(m)
        for v in k.vectors.data:
            assert all(x == 0 for x in m.mat_vec(v))


def _check_gf2_packed_agreement() -> None:
    from .linalg import _rank_generic

    rng = random.Random(11)
    gf2 = parse_field("gf2")
    for _ in range(30):
        nr, nc = rng.randint(1, 48), rng.randint(1, 48)
        rows = [[rng.randint(0, 1) for _ in range(nc)] for _ in range(nr)]
        m = ExactMatrix.from_int_rows(gf2, rows)
        assert rank(m) == _rank_generic(m)


def _check_wilson_formula() -> None:
    for n in range(2, 7):
        for r in range(n // 2 + 1):
            for s in range(r + 1):
                if n < r + s:
                    continue
                for ch in (0, 2, 3):
                    fld = parse_field("q0" if ch == 0 else f"gf{ch}")
                    assert rank(build_w(n, r, s, fld)) == wilson_rank(n, r, s, ch)


def _check_bier() -> None:
    for n in range(1, 8):
        for r in range(n // 2 + 1):
            size = binomial(n, r)
            for fs in ("q0", "gf2", "gf3"):
                assert rank(bier_basis_matrix(n, r, parse_field(fs))) == size
    q0 = parse_field("q0")
    gf2 = parse_field("gf2")
    for n in (5, 6):
        for r in range(1, n // 2 + 1):
            for j in range(r):
                for t in itertools.combinations(range(1, n + 1), j):
                    a = Subset.from_elements(n, t)
                    for ell in range(1, r - j + 1):
                        for fld in (q0, gf2):
                            res = bier_identity_residual(a, r, ell, fld)
                            assert all(v == fld.zero for v in res)


def _check_set_resilience() -> None:
    cfg = ExperimentConfig(
        mode="set", ns=(6,), rs=(2,), ss=(1,), fields=("q0", "gf2"), policy="exhaustive", k=2
    )
    summary = run_sweep(cfg)
    assert summary.ok, f"counterexamples: {summary.counterexamples}"
    for n in range(2, 7):
        for r in range(1, n // 2 + 1):
            bound = (n - 1) // r
            rows = binomial(n, r)
            for size in range(min(bound, 2) + 1):
                for members in itertools.combinations(range(rows), size):
                    assert find_sigma(SetFamily(n, r, members), r) is not None


def _check_q_side() -> None:
    q0 = parse_field("q0")
    gf3 = parse_field("gf3")
    gf2 = parse_field("gf2")
    gf7 = parse_field("gf7")
    for (n, r, s, q), flds in {
        (4, 2, 1, 2): (q0, gf3),
        (4, 2, 0, 2): (q0, gf3),
        (4, 2, 1, 3): (q0, gf2),
    }.items():
        for fld in flds:
            assert rank(build_wq(n, r, s, q, fld)) == fy_rank(n, r, s, q, fld.char)
    for (n, r, q) in ((4, 2, 2), (4, 2, 3)):
        for code in enumerate_subspaces(n, r, q):
            assert encode_subspace(decode_subspace(code)) == code
        assert count_good(n, r, q) == gaussian_binomial(n, r, q) - gaussian_binomial(n, r - 1, q)
        host = gf3 if q == 2 else gf2
        assert specht_dimension(n, r, q, host) == count_good(n, r, q)
    dims, layers = w_chain_dims(4, 2, 2, gf3)
    assert dims == [gaussian_binomial(4, j, 2) for j in range(3)]
    assert [len(l) for l in layers] == [1, 14, 20]
    assert up_space_avoids_plus_block(4, 2, 2, gf3)
    assert up_space_avoids_plus_block(4, 2, 3, gf7)
    cfg = ExperimentConfig(
        mode="q", ns=(4,), rs=(2,), ss=(1,), qs=(2,), fields=("gf3",), policy="exhaustive", k=1
    )
    assert run_sweep(cfg).ok
    for code in enumerate_subspaces(4, 2, 2):
        cert = find_g(QFamily.from_codes([code]))
        assert cert is not None and classify(cert.apply(code).path) == PLUS


def _check_e_blocks() -> None:
    cc = make_character_ctx(ground_field(2))
    codes = enumerate_subspaces(4, 2, 2)
    for pi in enumerate_paths(4, 2):
        block = [i for i, c in enumerate(codes) if c.pivots == pi.pivots]
        rows = [[e_vector(codes[i], cc)[k] for k in block] for i in block]
        assert rank(ExactMatrix(cc.host, rows, len(block))) == len(block)


def _check_report_roundtrip() -> None:
    import io

    cfg = ExperimentConfig(
        mode="set", ns=(5,), rs=(2,), ss=(1,), fields=("gf2",), policy="sample",
        k=2, samples=5, seed=42,
    )
    a = run_sweep(cfg, deterministic_timing=True)
    b = run_sweep(cfg, deterministic_timing=True)
    sa, sb = io.StringIO(), io.StringIO()
    write_json_report(a, sa)
    write_json_report(b, sb)
    assert sa.getvalue() == sb.getvalue(), "reports must be byte-identical for fixed seed"
    buf = io.StringIO()
    m = build_w(4, 2, 1, parse_field("gf3"))
    write_matrix(m, buf)
    buf.seek(0)
    assert read_matrix(buf) == m


ALL_CHECKS = [
    ("field-axioms", _check_field_axioms),
    ("characters", _check_characters),
    ("exact-linalg", _check_linalg),
    ("gf2-packed-agreement", _check_gf2_packed_agreement),
    ("wilson-formula", _check_wilson_formula),
    ("bier-basis", _check_bier),
    ("set-resilience", _check_set_resilience),
    ("q-side", _check_q_side),
    ("character-blocks", _check_e_blocks),
    ("report-roundtrip", _check_report_roundtrip),
]

QUICK_CHECKS = {"field-axioms", "characters", "exact-linalg", "wilson-formula", "report-roundtrip"}


def run_verify(quick: bool = False, out=None) -> int:
    out = out if out is not None else sys.stdout
    failures = 0
    for name, fn in ALL_CHECKS:
        if quick and name not in QUICK_CHECKS:
            continue
        t0 = time.perf_counter()
        try:
            fn()
        except AssertionError as exc:
            failures += 1
            out.write(f"FAIL {name}: {exc}\n")
        else:
            out.write(f"ok   {name} ({time.perf_counter() - t0:.2f}s)\n")
    out.write(("all checks passed\n" if not failures else f"{failures} check(s) failed\n"))
    return 1 if failures else 0


# -- CLI ------------------------------------------------------------------------------


def _add_remove_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--remove", metavar="FILE", help="removal family file")
    p.add_argument(
        "--remove-indices", metavar="I,J,...", help="removal family as canonical row indices"
    )


def _parse_removed_set(args, n: int, r: int) -> SetFamily:
    if args.remove:
        with open(args.remove) as fp:
            return read_set_family(fp, n, r)
    if args.remove_indices:
        members = tuple(sorted(int(t) for t in args.remove_indices.split(",")))
        return SetFamily(n, r, members)
    return SetFamily(n, r, ())


def _parse_removed_q(args, n: int, r: int, q: int) -> QFamily:
    if args.remove:
        with open(args.remove) as fp:
            return read_q_family(fp, n, r, q)
    if args.remove_indices:
        members = tuple(sorted(int(t) for t in args.remove_indices.split(",")))
        return QFamily(n, r, q, members)
    return QFamily(n, r, q, ())


def _build_from_args(args) -> ExactMatrix:
    fld = parse_field(args.field)
    if args.mode == "set":
        fam = _parse_removed_set(args, args.n, args.r).complement() if (
            args.remove or args.remove_indices
        ) else None
        return build_w(args.n, args.r, args.s, fld, fam, max_entries=args.max_entries)
    fam = _parse_removed_q(args, args.n, args.r, args.q).complement() if (
        args.remove or args.remove_indices
    ) else None
    return build_wq(args.n, args.r, args.s, args.q, fld, fam, max_entries=args.max_entries)


def _out_stream(path: str | None):
    return open(path, "w") if path else sys.stdout


def cli_main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="incmat",
        description="Exact ranks of subset/subspace inclusion matrices and their "
        "resilience to row removals.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, with_q: bool, with_s: bool = True):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--r", type=int, required=True)
        if with_s:
            p.add_argument("--s", type=int, required=True)
        if with_q:
            p.add_argument("--q", type=int, required=True)

    p_build = sub.add_parser("build", help="build an inclusion matrix and write its text form")
    p_build.add_argument("--mode", choices=("set", "q"), required=True)
    common(p_build, with_q=False)
    p_build.add_argument("--q", type=int)
    p_build.add_argument("--field", required=True)
    p_build.add_argument("--max-entries", type=int, default=50_000_000)
    _add_remove_args(p_build)
    p_build.add_argument("-o", "--output")

    p_rank = sub.add_parser("rank", help="exact rank of a matrix file or a built matrix")
    p_rank.add_argument("--file", help="matrix in the text format")
    p_rank.add_argument("--mode", choices=("set", "q"))
    p_rank.add_argument("--n", type=int)
    p_rank.add_argument("--r", type=int)
    p_rank.add_argument("--s", type=int)
    p_rank.add_argument("--q", type=int)
    p_rank.add_argument("--field")
    p_rank.add_argument("--max-entries", type=int, default=50_000_000)
    _add_remove_args(p_rank)

    p_w = sub.add_parser("wilson", help="rank of the full subset inclusion matrix by formula")
    common(p_w, with_q=False)
    p_w.add_argument("--char", type=int, required=True)

    p_fy = sub.add_parser("fy", help="rank of the full subspace inclusion matrix by formula")
    common(p_fy, with_q=True)
    p_fy.add_argument("--char", type=int, required=True)

    p_bier = sub.add_parser("bier", help="nested-basis matrix and its invertibility")
    p_bier.add_argument("--n", type=int, required=True)
    p_bier.add_argument("--r", type=int, required=True)
    p_bier.add_argument("--field", required=True)
    p_bier.add_argument("-o", "--output")

    p_paths = sub.add_parser("paths", help="list lattice paths with box counts and classes")
    p_paths.add_argument("--n", type=int, required=True)
    p_paths.add_argument("--r", type=int, required=True)

    p_gc = sub.add_parser("good-count", help="number of good r-subspaces")
    common(p_gc, with_q=True, with_s=False)

    p_sd = sub.add_parser("specht-dim", help="dimension of the down-map kernel intersection")
    common(p_sd, with_q=True, with_s=False)
    p_sd.add_argument("--field", required=True)

    p_sig = sub.add_parser("sigma", help="permutation certificate for a removed subset family")
    p_sig.add_argument("--n", type=int, required=True)
    p_sig.add_argument("--r", type=int, required=True)
    _add_remove_args(p_sig)

    p_g = sub.add_parser("gfind", help="invertible-map certificate for a removed subspace family")
    common(p_g, with_q=True, with_s=False)
    _add_remove_args(p_g)

    p_res = sub.add_parser("resilience", help="removal sweep comparing ranks to the formula")
    p_res.add_argument("--mode", choices=("set", "q"), required=True)
    common(p_res, with_q=False)
    p_res.add_argument("--q", type=int)
    p_res.add_argument("--field", required=True, help="comma-separated field strings")
    group = p_res.add_mutually_exclusive_group(required=True)
    group.add_argument("--exhaustive", type=int, metavar="K", help="all families of size <= K")
    group.add_argument("--samples", type=int, metavar="N", help="N sampled families")
    group.add_argument("--remove", metavar="FILE", help="one explicit removal family")
    p_res.add_argument("--remove-indices", help=argparse.SUPPRESS)
    p_res.add_argument("--max-size", type=int, default=1, help="sampled family size cap")
    p_res.add_argument("--seed", type=int, default=0)
    p_res.add_argument("--jobs", type=int, default=None)
    p_res.add_argument("--max-entries", type=int, default=50_000_000)
    p_res.add_argument("--stable-timing", action="store_true", help="zero timing fields")
    p_res.add_argument("--json", metavar="FILE")
    p_res.add_argument("--csv", metavar="FILE")

    p_ver = sub.add_parser("verify", help="run the library self-checks")
    p_ver.add_argument("--quick", action="store_true")

    args = ap.parse_args(argv)

    if args.cmd == "build":
        if args.mode == "q" and args.q is None:
            ap.error("q mode needs --q")
        m = _build_from_args(args)
        out = _out_stream(args.output)
        write_matrix(m, out)
        if out is not sys.stdout:
            out.close()
        return 0

    if args.cmd == "rank":
        if args.file:
            with open(args.file) as fp:
                m = read_matrix(fp)
        else:
            needed = (args.mode, args.n, args.r, args.s, args.field)
            if any(v is None for v in needed):
                ap.error("rank needs --file or full build parameters")
            if args.mode == "q" and args.q is None:
                ap.error("q mode needs --q")
            m = _build_from_args(args)
        print(rank(m))
        return 0

    if args.cmd == "wilson":
        print(wilson_rank(args.n, args.r, args.s, args.char))
        return 0

    if args.cmd == "fy":
        print(fy_rank(args.n, args.r, args.s, args.q, args.char))
        return 0

    if args.cmd == "bier":
        fld = parse_field(args.field)
        m = bier_basis_matrix(args.n, args.r, fld)
        rk = rank(m)
        full = rk == m.nrows
        if args.output:
            with open(args.output, "w") as fp:
                write_matrix(m, fp)
        print(f"size={m.nrows} rank={rk} full_rank={'yes' if full else 'no'}")
        return 0 if full else 1

    if args.cmd == "paths":
        for i, pi in enumerate(enumerate_paths(args.n, args.r)):
            print(f"{i} {pi.steps} boxes={box_count(pi)} class={classify(pi)}")
        return 0

    if args.cmd == "good-count":
        print(count_good(args.n, args.r, args.q))
        return 0

    if args.cmd == "specht-dim":
        print(specht_dimension(args.n, args.r, args.q, parse_field(args.field)))
        return 0

    if args.cmd == "sigma":
        fc = _parse_removed_set(args, args.n, args.r)
        cert = find_sigma(fc, args.r)
        if cert is None:
            print("NONE")
            return 1 if len(fc) <= _hypothesis_bound("set", args.n, args.r) else 0
        print(" ".join(str(v) for v in cert.image))
        return 0

    if args.cmd == "gfind":
        fc = _parse_removed_q(args, args.n, args.r, args.q)
        cert = find_g(fc)
        if cert is None:
            print("NONE")
            return 1 if len(fc) <= _hypothesis_bound("q", args.n, args.r) else 0
        ctx = cert.matrix.field
        for row in cert.matrix.data:
            print(" ".join(ctx.to_str(v) for v in row))
        return 0

    if args.cmd == "resilience":
        fields = tuple(args.field.split(","))
        if args.mode == "q" and args.q is None:
            ap.error("q mode needs --q")
        qs = (args.q,) if args.mode == "q" else ()
        if args.remove or args.remove_indices:
            fld = parse_field(fields[0])
            if args.mode == "set":
                fc = _parse_removed_set(args, args.n, args.r)
                rep = verify_set_resilience(args.n, args.r, args.s, fc, fld)
            else:
                fc = _parse_removed_q(args, args.n, args.r, args.q)
                rep = verify_q_resilience(args.n, args.r, args.s, args.q, fc, fld)
            in_hyp = len(fc) <= _hypothesis_bound(args.mode, args.n, args.r)
            cell = _cell_dict(rep, in_hyp)
            if args.stable_timing:
                cell["ms"] = 0
            print(json.dumps(cell, indent=2, sort_keys=True))
            return 0 if (rep.equal or not in_hyp) else 1
        if args.exhaustive is not None:
            cfg = ExperimentConfig(
                mode=args.mode, ns=(args.n,), rs=(args.r,), ss=(args.s,), qs=qs,
                fields=fields, policy="exhaustive", k=args.exhaustive,
                max_entries=args.max_entries,
            )
        else:
            cfg = ExperimentConfig(
                mode=args.mode, ns=(args.n,), rs=(args.r,), ss=(args.s,), qs=qs,
                fields=fields, policy="sample", k=args.max_size, samples=args.samples,
                seed=args.seed, max_entries=args.max_entries,
            )
        summary = run_sweep(cfg, jobs=args.jobs, deterministic_timing=args.stable_timing)
        if args.json:
            with open(args.json, "w") as fp:
                write_json_report(summary, fp)
        if args.csv:
            with open(args.csv, "w") as fp:
                write_csv_report(summary, fp)
        s = summary
        print(
            f"cells={len(s.cells)} equal={s.equal_cells} unequal={s.unequal_cells} "
            f"counterexamples={len(s.counterexamples)} skipped={len(s.skipped)} "
            f"wall_ms={s.wall_ms}"
        )
        return 0 if s.ok else 1

    if args.cmd == "verify":
        return run_verify(quick=args.quick)

    raise AssertionError("unreachable")


def main() -> None:
    try:
        code = cli_main()
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
