"""Command line driver: ``scan``, ``verify`` and ``block-info``.

Exit codes: 0 when every hard assertion passes, 2 when one fails or a budget
is exceeded, 1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import budget as budget_mod
from .blocks import blocks_of
from .budget import Budget, BudgetExceeded
from .field import GF
from .groups import (DEFAULT_CATALOG, GroupError, FiniteGroup, make_group, normalizer, sylow,
                     subgroups_up_to_conjugacy)
from .hochschild import (verify_delta_conj_square, verify_delta_restriction, verify_delta_transfer,
                         verify_mackey_axioms)
from .sasaki import (PreconditionError, block_context, conjecture_check, correspondent_context,
                     verify_hh_square, verify_reciprocity, verify_transitivity)

SUITES = ("blocks", "mackey", "sasaki", "transfer", "hh-square")
VERIFY_SUITES = ("mackey", "delta-square", "reciprocity", "transitivity", "hh-square")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# suite runners; each returns (detail, list of hard failures)

def _group(spec: str) -> FiniteGroup:
    try:
        return make_group(spec)
    except GroupError as exc:
        raise UsageError(str(exc)) from exc


def mackey_tuples(G: FiniteGroup, p: int):
    """(K, H, [conjugators]) covering a Sylow subgroup, a large subgroup and non-inner g."""
    reps = [S for S in subgroups_up_to_conjugacy(G, G.whole()) if 1 < S.order < G.order]
    if not reps:
        return []
    K = sylow(G, p)
    if K.order in (1, G.order):
        K = reps[0]
    others = [S for S in reps if S != K]
    H = max(others, key=lambda S: (S.order, [-e for e in S.elements])) if others else K
    N = normalizer(G, H)
    gs = []
    for x in range(G.order):
        if not N.mask[x]:
            gs.append(x)
            break
    for x in range(1, G.order):
        if not H.mask[x] and x not in gs:
            gs.append(x)
            break
    return [(K, H, gs or [0])]


def run_mackey(G, p, hh_degree):
    F, W = GF(p), G.whole()
    detail, failures = [], []
    for K, H, gs in mackey_tuples(G, p):
        for g in gs:
            for n in range(hh_degree + 1):
                try:
                    rows = verify_mackey_axioms(W, K, H, g, n, F)
                except BudgetExceeded as exc:
                    detail.append({"K": K.order, "H": H.order, "g": G.names[g], "n": n, "skipped": str(exc)})
                    continue
                bad = [r for r in rows if not r["pass"]]
                detail.append({"K": K.order, "H": H.order, "g": G.names[g], "n": n,
                               "checks": len(rows), "failed": [r["item"] + ": " + r["check"] for r in bad]})
                failures += [f"{G.label} p={p} mackey item {r['item']} ({r['check']}) degree {n}" for r in bad]
    return detail, failures


def run_delta(G, p, hh_degree):
    F, W = GF(p), G.whole()
    H = sylow(G, p)
    detail, failures = [], []
    for n in range(hh_degree + 1):
        try:
            rec = {"n": n,
                   "conj_square": all(verify_delta_conj_square(H, g, n, F) for g in W.generators),
                   "transfer": verify_delta_transfer(H, W, n, F),
                   "restriction": verify_delta_restriction(H, W, n, F)}
        except BudgetExceeded as exc:
            detail.append({"n": n, "skipped": str(exc)})
            continue
        detail.append(rec)
        failures += [f"{G.label} p={p} delta {k} degree {n}" for k, v in rec.items() if v is False]
    return detail, failures


def _block_summary(ctx):
    G, sd = ctx.G, ctx.sd
    return {"dim_source": ctx.dim_source, "source_candidates": sd.candidates,
            "defect": [G.names[x] for x in ctx.P.elements],
            "inertial_reps": [G.names[x] for x in ctx.inertial_reps],
            "y_contains_inertial": sd.y_contains_inertial()}


def run_transfer(ctx, max_degree):
    c = correspondent_context(ctx)
    trans = verify_transitivity(ctx, c, max_degree)
    recip = verify_reciprocity(ctx, c, max_degree)
    where = f"{ctx.G.label} p={ctx.field.p} block {ctx.block.index}"
    failures = []
    for d in trans["degrees"]:
        for key in ("zero_composite", "scalar_identity", "restriction_is_inclusion", "triangle"):
            if d.get(key) is False:
                failures.append(f"{where}: {key} fails in degree {d['n']}")
    for r in recip:
        if r["pass"] is False:
            failures.append(f"{where}: reciprocity fails in degrees ({r['deg_zeta']}, {r['deg_tau']})")
    return {"correspondent_order": c.H.order, "transitivity": trans, "reciprocity": recip}, failures


def run_hh_square(ctx, hh_degree):
    c = correspondent_context(ctx)
    where = f"{ctx.G.label} p={ctx.field.p} block {ctx.block.index}"
    try:
        res = verify_hh_square(ctx, c, hh_degree)
    except PreconditionError as exc:
        return {"skipped": str(exc)}, []
    return res, [f"{where}: hh-square fails in degree {r['n']}" for r in res if not r["pass"]]


def scan_group(spec, p, max_degree, hh_degree, suites, timings=True):
    G = _group(spec)
    records, failures = [], []
    t0 = time.perf_counter()
    group_suites = {}
    if "mackey" in suites:
        d1, f1 = run_mackey(G, p, hh_degree)
        d2, f2 = run_delta(G, p, hh_degree)
        group_suites = {"mackey": d1, "delta-square": d2}
        failures += f1 + f2
    for blk in blocks_of(G, p):
        t1 = time.perf_counter()
        ctx = block_context(G, p, blk.index)
        rec = {"group": spec, "prime": p, "field": blk.field.name, "block_index": blk.index,
               "defect_order": blk.defect.order,
               "y_multiset": [{"rep": G.names[e.rep], "multiplicity": e.multiplicity,
                               "coset_size": e.coset_size} for e in ctx.y],
               "suites": dict(group_suites) if blk.index == 0 else {}}
        if "blocks" in suites:
            rec["suites"]["blocks"] = _block_summary(ctx)
        if "sasaki" in suites or "transfer" in suites or "hh-square" in suites:
            report = conjecture_check(ctx, max_degree)
            rec["degrees"] = [{k: d[k] for k in ("n", "dim_image", "dim_stable", "dim_invariant", "equal",
                                                 "image_in_stable", "image_in_invariant")}
                              for d in report.degrees]
            rec["classification"] = report.classification
            rec["suites"]["sasaki"] = {"merged_reps_consistent": report.merged_consistent,
                                       "degree0_scalar_ok": report.degree0_scalar_ok,
                                       "hard_failures": report.hard_failures}
            failures += [f"{spec} p={p}: {msg}" for msg in report.hard_failures]
            if not report.merged_consistent:
                failures.append(f"{spec} p={p} block {blk.index}: merged Y representatives give different t_g")
        nontrivial = blk.defect.order > 1
        if "transfer" in suites and nontrivial:
            detail, f = run_transfer(ctx, max_degree)
            rec["suites"]["transfer"] = detail
            failures += f
        if "hh-square" in suites and nontrivial:
            detail, f = run_hh_square(ctx, hh_degree)
            rec["suites"]["hh-square"] = detail
            failures += f
        rec["elapsed_ms"] = round(1000 * (time.perf_counter() - t1)) if timings else 0
        records.append(rec)
    if records and timings:
        records[0]["elapsed_ms"] = round(1000 * (time.perf_counter() - t0)) - sum(
            r["elapsed_ms"] for r in records[1:])
    return records, failures


# ---------------------------------------------------------------------------
# commands

def _set_budget(args):
    if getattr(args, "budget", None):
        try:
            budget_mod.set_budget(Budget.from_env(args.budget))
        except ValueError as exc:
            raise UsageError(f"bad budget: {exc}") from exc


def _write(path, payload):
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def cmd_scan(args):
    suites = args.suite or ["sasaki"]
    groups = args.group or DEFAULT_CATALOG
    records, failures = [], []
    for spec in groups:
        for p in args.prime:
            recs, fails = scan_group(spec, p, args.max_degree, args.hh_degree, suites, not args.no_timings)
            records += recs
            failures += fails
            for r in recs:
                dims = ",".join(str(d["dim_image"]) for d in r.get("degrees", []))
                eq = all(d["equal"] for d in r.get("degrees", []))
                print(f"{spec} p={p} block {r['block_index']}: defect order {r['defect_order']}"
                      + (f", Im t_Y dims ({dims}), equality {'yes' if eq else 'no'}" if dims else ""))
    report = {"records": records, "hard_failures": failures}
    _write(args.output, report)
    if args.output is None:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    for f in failures:
        print("FAIL", f, file=sys.stderr)
    return 2 if failures else 0


def cmd_verify(args):
    groups = args.group or DEFAULT_CATALOG
    detail, failures = [], []
    for spec in groups:
        G = _group(spec)
        for p in args.prime:
            if args.suite == "mackey":
                d, f = run_mackey(G, p, args.hh_degree)
            elif args.suite == "delta-square":
                d, f = run_delta(G, p, args.hh_degree)
            else:
                d, f = [], []
                for blk in blocks_of(G, p):
                    if blk.defect.order == 1:
                        continue
                    ctx = block_context(G, p, blk.index)
                    conjecture_check(ctx, args.max_degree)
                    if args.suite == "hh-square":
                        dd, ff = run_hh_square(ctx, args.hh_degree)
                    else:
                        dd, ff = run_transfer(ctx, args.max_degree)
                        dd = dd["reciprocity"] if args.suite == "reciprocity" else dd["transitivity"]
                        ff = [x for x in ff if ("reciprocity" in x) == (args.suite == "reciprocity")]
                    d.append({"block_index": blk.index, "result": dd})
                    f += ff
            detail.append({"group": spec, "prime": p, "suite": args.suite, "result": d})
            print(f"{args.suite} {spec} p={p}: {'pass' if not f else f'{len(f)} failure(s)'}")
            failures += f
    _write(args.output, {"results": detail, "hard_failures": failures})
    for f in failures:
        print("FAIL", f, file=sys.stderr)
    return 2 if failures else 0


def cmd_block_info(args):
    G = _group(args.group)
    p = args.prime[0]
    for blk in blocks_of(G, p):
        ctx = block_context(G, p, blk.index)
        s = _block_summary(ctx)
        print(f"block {blk.index}{' (principal)' if blk.principal else ''} over {blk.field.name}: "
              f"defect group of order {blk.defect.order} {{{', '.join(s['defect'])}}}")
        print(f"  source idempotent: dim ikGi = {s['dim_source']}, {s['source_candidates']} candidate(s), first taken")
        ys = ", ".join(f"{G.names[e.rep]}:{e.multiplicity} (|PgP| = {e.coset_size})" for e in ctx.y)
        print(f"  Y = {{{ys}}}")
        print(f"  N_G(P,e_P)/PC_G(P) representatives: {', '.join(s['inertial_reps'])}")
        counts = sum(len(ctx.sd.fusion.hom(Q, R)) for Q in ctx.subgroups for R in ctx.subgroups)
        print(f"  fusion morphisms between subgroups of P: {counts}")
    return 0


def build_parser():
    ap = _Parser(prog="blockcoh", description="Block cohomology computations over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, suites_flag=False):
        sp.add_argument("--group", action="append", help="group spec, e.g. 'S 3' (repeatable; default catalog)")
        sp.add_argument("--prime", action="append", type=int, required=True, help="characteristic (repeatable)")
        sp.add_argument("--max-degree", type=int, default=2, help="largest cohomological degree")
        sp.add_argument("--hh-degree", type=int, default=1, help="largest Hochschild degree")
        sp.add_argument("--budget", help="matrix budget override, same syntax as BLOCKCOH_BUDGET")
        sp.add_argument("--output", help="JSON report path")

    sc = sub.add_parser("scan", help="run suites over groups and primes")
    common(sc)
    sc.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable; default sasaki)")
    sc.add_argument("--no-timings", action="store_true", help="write elapsed_ms as 0 for byte-stable reports")
    sc.set_defaults(func=cmd_scan)

    ve = sub.add_parser("verify", help="run one verifier")
    ve.add_argument("suite", choices=VERIFY_SUITES)
    common(ve)
    ve.set_defaults(func=cmd_verify)

    bi = sub.add_parser("block-info", help="describe the blocks of a group algebra")
    bi.add_argument("--group", required=True)
    bi.add_argument("--prime", action="append", type=int, required=True)
    bi.add_argument("--budget")
    bi.set_defaults(func=cmd_block_info)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if any(p < 2 for p in args.prime) or min(getattr(args, "max_degree", 0), getattr(args, "hh_degree", 0)) < 0:
            raise UsageError("primes must be at least 2 and degrees non-negative")
        _set_budget(args)
        for p in args.prime:
            GF(p)
        return args.func(args)
    except UsageError as exc:
        print(f"blockcoh: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        if "prime" in str(exc):
            print(f"blockcoh: error: {exc}", file=sys.stderr)
            return 1
        raise
    except BudgetExceeded as exc:
        print(f"blockcoh: budget exceeded: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
