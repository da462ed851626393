"""Acceptance criteria 1-10, one test per criterion.

Each test prints a single ``criterion k: PASS|FAIL ...`` line to the terminal
(outside pytest's capture) before asserting.  Run standalone with
``python3 tests/test_acceptance.py`` for just the summary lines.
"""

import time

import numpy as np
import pytest

from blockcoh import blocks, groupcoh, hochschild
from blockcoh.blocks import blocks_of
from blockcoh.cli import scan_group
from blockcoh.field import GF
from blockcoh.groupcoh import coboundary_values, cohomology_dim
from blockcoh.groups import DEFAULT_CATALOG, make_group, subgroups_up_to_conjugacy
from blockcoh.hochschild import (hh_coboundary_values, hh_dim, hh_dim_oracle, verify_delta_conj_square,
                                 verify_delta_restriction, verify_delta_transfer, verify_mackey_axioms)
from blockcoh.sasaki import (block_context, conjecture_check, correspondent_context, sub_context,
                             verify_hh_square, verify_reciprocity, verify_transitivity)

PRIMES = (2, 3)


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'}{' - ' + detail if detail else ''}")
        assert ok, detail
    return emit


@pytest.fixture(scope="module")
def catalog_reports():
    """Conjecture reports for every catalog block at p = 2, 3 up to degree 4."""
    out = []
    for spec in DEFAULT_CATALOG:
        G = make_group(spec)
        for p in PRIMES:
            for blk in blocks_of(G, p):
                ctx = block_context(G, p, blk.index)
                out.append((spec, p, ctx, conjecture_check(ctx, 4)))
    return out


def test_criterion_1_complex_laws(report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    bad = []
    for spec in DEFAULT_CATALOG:
        G = make_group(spec)
        N = G.order
        for p in PRIMES:
            F = GF(p)
            for n in range(3 if N > 8 else 4):
                for _ in range(100):
                    f = rng.integers(0, p, N ** n)
                    dd = coboundary_values(G, coboundary_values(G, f, n, F), n + 1, F)
                    if dd.any():
                        bad.append(f"{spec} p={p} bar degree {n}")
                        break
            for n in range(2 if N > 12 else 3):
                for _ in range(100):
                    f = rng.integers(0, p, (N ** n, N))
                    dd = hh_coboundary_values(G, hh_coboundary_values(G, f, n, F), n + 1, F)
                    if dd.any():
                        bad.append(f"{spec} p={p} Hochschild degree {n}")
                        break
    elapsed = time.perf_counter() - t0
    report(1, not bad and elapsed < 60, f"{elapsed:.1f} s" + (f", failures {bad}" if bad else ""))


def test_criterion_2_cohomology_oracle(report):
    cases = [("C 2", 2, range(5), lambda n: 1), ("prod(C 2,C 2)", 2, range(4), lambda n: n + 1),
             ("C 3", 3, range(5), lambda n: 1)]
    bad = []
    for spec, p, degrees, expected in cases:
        G = make_group(spec)
        for n in degrees:
            full = cohomology_dim(G, GF(p), n, mode="full")
            normalized = cohomology_dim(G, GF(p), n, mode="normalized")
            if not full == normalized == expected(n):
                bad.append(f"{spec} n={n}: full {full}, normalized {normalized}, expected {expected(n)}")
    report(2, not bad, "; ".join(bad))


def test_criterion_3_hh_oracle(report):
    bad = []
    for spec in ("C 2", "C 3", "S 3", "prod(C 2,C 2)"):
        G = make_group(spec)
        for p in PRIMES:
            for n in range(3):
                a, b = hh_dim(G, GF(p), n), hh_dim_oracle(G, GF(p), n)
                if a != b:
                    bad.append(f"{spec} p={p} n={n}: {a} vs oracle {b}")
    report(3, not bad, "; ".join(bad))


def _mackey_cases():
    S3 = make_group("S 3")
    A4 = make_group("A 4")
    V = make_group("prod(C 2,C 2)")
    C2 = S3.generate([S3.index("(1,2)")])
    C3 = S3.generate([S3.index("(1,2,3)")])
    V4 = A4.generate([A4.index("(1,2)(3,4)"), A4.index("(1,3)(2,4)")])
    a, b = V.generate([1]), V.generate([2])
    return [(S3, C2, C3, range(S3.order)),
            (A4, V4, V4, [0, A4.index("(1,2,3)"), A4.index("(1,3,2)")]),
            (V, a, b, range(V.order)), (V, a, a, range(V.order)), (V, V.trivial(), a, range(V.order))]


def test_criterion_4_mackey_suite(report):
    bad, checks = [], 0
    for G, K, H, gs in _mackey_cases():
        for p in PRIMES:
            for n in range(3):
                for g in gs:
                    for row in verify_mackey_axioms(G.whole(), K, H, g, n, GF(p)):
                        checks += 1
                        if not row["pass"]:
                            bad.append(f"{G.label} p={p} n={n} g={G.names[g]}: {row['item']} {row['check']}")
    report(4, not bad, f"{checks} checks" + (f", failures {bad[:5]}" if bad else ""))


def test_criterion_5_delta_squares(report):
    bad, checks = [], 0
    for spec in DEFAULT_CATALOG:
        G = make_group(spec)
        W = G.whole()
        n_max = 2 if G.order <= 12 else 1
        for H in subgroups_up_to_conjugacy(G, W):
            for p in PRIMES:
                F = GF(p)
                for n in range(n_max + 1):
                    for g in sorted(set(W.generators) | {G.order - 1}):
                        checks += 1
                        if not verify_delta_conj_square(H, g, n, F):
                            bad.append(f"{spec} |H|={H.order} p={p} n={n} conj by {G.names[g]}")
                    checks += 2
                    if not verify_delta_transfer(H, W, n, F):
                        bad.append(f"{spec} |H|={H.order} p={p} n={n} transfer")
                    if not verify_delta_restriction(H, W, n, F):
                        bad.append(f"{spec} |H|={H.order} p={p} n={n} restriction")
    report(5, not bad, f"{checks} checks" + (f", failures {bad[:5]}" if bad else ""))


def _y(ctx):
    return {ctx.G.names[e.rep]: e.multiplicity for e in ctx.y}


def test_criterion_6_block_facts(report):
    bad = []
    S3, A4 = make_group("S 3"), make_group("A 4")
    b = blocks_of(S3, 3)
    ctx = block_context(S3, 3, 0)
    if not (len(b) == 1 and b[0].defect.order == 3 and ctx.dim_source == 6 and _y(ctx) == {"e": 1, "(1,2)": 1}):
        bad.append(f"S3 p=3: {len(b)} blocks, defect {b[0].defect.order}, dim {ctx.dim_source}, Y {_y(ctx)}")
    b = blocks_of(S3, 2)
    ctx = block_context(S3, 2, 0)
    if not (len(b) == 2 and _y(ctx) == {"e": 1}):
        bad.append(f"S3 p=2: {len(b)} blocks, principal Y {_y(ctx)}")
    b = blocks_of(A4, 2)
    V4 = {"e", "(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"}
    if not (len(b) == 1 and b[0].field == GF(2, 2) and {A4.names[x] for x in b[0].defect.elements} == V4):
        bad.append(f"A4 p=2: {len(b)} blocks over {b[0].field.name}, defect {b[0].defect}")
    report(6, not bad, "; ".join(bad))


def test_criterion_7_sasaki_hard_assertions(report, catalog_reports):
    bad, covered = [], 0
    for spec, p, ctx, rep in catalog_reports:
        if "normal" in rep.classification or "abelian" in rep.classification:
            covered += 1
            for d in rep.degrees:
                if not d["equal"]:
                    bad.append(f"{spec} p={p} block {rep.block_index} n={d['n']}: {d['dim_image']} vs {d['dim_stable']}")
    dims = {(spec, p, r.block_index): tuple(d["dim_image"] for d in r.degrees) for spec, p, _, r in catalog_reports}
    if dims[("S 3", 3, 0)] != (1, 0, 0, 1, 1):
        bad.append(f"S3 p=3 dims {dims[('S 3', 3, 0)]}")
    if dims[("A 4", 2, 0)][:3] != (1, 0, 1):
        bad.append(f"A4 p=2 dims {dims[('A 4', 2, 0)][:3]}")
    report(7, not bad, f"{covered} normal/abelian blocks, n <= 4" + (f", failures {bad}" if bad else ""))


def test_criterion_8_invariant_inclusion(report, catalog_reports):
    bad = [f"{spec} p={p} block {r.block_index} n={d['n']}"
           for spec, p, _, r in catalog_reports for d in r.degrees if not d["image_in_invariant"]]
    report(8, not bad, f"{len(catalog_reports)} blocks, degrees 0..4" + (f", failures {bad}" if bad else ""))


def test_criterion_9_transfer_laws(report, catalog_reports):
    bad = []
    S4 = make_group("S 4")
    b2 = block_context(S4, 2, 0)
    c2 = sub_context(b2, S4.generate([S4.index("(1,2)"), S4.index("(1,2,3)")]))
    for d in verify_transitivity(b2, c2, 4)["degrees"]:
        if d.get("zero_composite") is not True:
            bad.append(f"S4/S3 p=2 zero composite n={d['n']}: {d}")
    b3 = block_context(S4, 3, 0)
    c3 = correspondent_context(b3)
    for r in verify_reciprocity(b3, c3, 4):
        if r["pass"] is not True:
            bad.append(f"reciprocity degrees ({r['deg_zeta']},{r['deg_tau']})")
    for d in verify_transitivity(b3, c3, 4)["degrees"]:
        for key in ("scalar_identity", "restriction_is_inclusion", "kernel_inclusion", "triangle"):
            if d.get(key) is not True:
                bad.append(f"S4/N(C3) p=3 {key} n={d['n']}")
    for spec, p, _, r in catalog_reports:
        for d in r.degrees:
            if d["equal"] and not d["split_dims"]:
                bad.append(f"{spec} p={p} block {r.block_index} split dims n={d['n']}")
    report(9, not bad, "; ".join(bad))


def test_criterion_10_hh_square_and_scan_time(report):
    bad = []
    for spec in ("A 4", "S 4"):
        G = make_group(spec)
        b = block_context(G, 3, 0)
        conjecture_check(b, 2)
        for r in verify_hh_square(b, correspondent_context(b), 2):
            if not r["pass"]:
                bad.append(f"{spec} p=3 hh-square n={r['n']}")
    for clear in (groupcoh.clear_cache, hochschild.clear_cache, blocks.clear_cache):
        clear()
    t0 = time.perf_counter()
    for spec in DEFAULT_CATALOG:
        for p in PRIMES:
            scan_group(spec, p, 4, 2, ("blocks", "mackey", "sasaki", "transfer", "hh-square"))
    elapsed = time.perf_counter() - t0
    if elapsed >= 600:
        bad.append(f"catalog scan took {elapsed:.0f} s")
    report(10, not bad, f"catalog scan {elapsed:.1f} s" + (f"; {bad}" if bad else ""))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "--no-header", "-p", "no:cacheprovider"]))
