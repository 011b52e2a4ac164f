"""Command-line entry point.

Exit codes: 0 success, 1 failed claim or counterexample, 2 usage error,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import invariants as inv
from .errors import BudgetExhausted, ZeroSumError
from .group import FiniteAbelianGroup, TablePolicy, parse_group_spec
from .parallel import parallel_sea
from .search import (
    Budget,
    GirardStatus,
    Mode,
    automorphic_images,
    davenport_exact,
    exists_split,
    find_zero_sum_free,
    girard_check,
    random_zero_sum_free,
)
from .sequence import Sequence, cross_number, is_minimal_zero_sum, is_zero_sum_free

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _group(args) -> FiniteAbelianGroup:
    try:
        orders = parse_group_spec(args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return FiniteAbelianGroup(orders, TablePolicy(args.tables))


def _load_sequence(ref: str, group: FiniteAbelianGroup | None) -> Sequence:
    """A sequence from a file path or a ``construction:...`` name."""
    try:
        if ref.startswith("construction:"):
            seq = inv.parse_construction(ref).sequence
            if group is not None and seq.group != group:
                raise UsageError(f"{ref} lives in {seq.group.spec}, not {group.spec}")
            return seq
        return Sequence.from_text(Path(ref).read_text(), group)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _budget(args) -> Budget | None:
    seconds = getattr(args, "budget_seconds", None)
    nodes = getattr(args, "budget_nodes", None)
    if seconds is None and nodes is None:
        return None
    return Budget(seconds, nodes)


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


# commands -------------------------------------------------------------------


def cmd_verify_construction(args) -> int:
    try:
        if args.family == "theorem31":
            result = inv.build_theorem31(args.n)
            results = [result, result.related["S*"]]
        else:
            if args.r is None:
                raise UsageError("--r is required for corollary32")
            results = [inv.build_corollary32(args.n, args.r)]
    except ZeroSumError as exc:
        raise UsageError(str(exc)) from None
    records = []
    for res in results:
        for claim, ok, observed in inv.verify_claims(res):
            records.append({"construction": res.name, "claim": str(claim), "ok": ok, "observed": observed})
    all_ok = all(r["ok"] for r in records)
    lines = [
        f"{'PASS' if r['ok'] else 'FAIL'}  {r['construction']}  {r['claim']}  (observed {r['observed']})"
        for r in records
    ]
    lines.append("ALL PASS" if all_ok else "SOME CLAIMS FAILED")
    _emit(args, {"group": results[0].group.spec, "claims": records, "ok": all_ok}, lines)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_check(args) -> int:
    group = _group(args)
    seq = _load_sequence(args.file, group)
    if args.predicate == "zsf":
        value = is_zero_sum_free(seq)
    elif args.predicate == "minimal":
        value = is_minimal_zero_sum(seq)
    else:
        try:
            value = cross_number(seq)
        except ZeroSumError as exc:
            raise UsageError(str(exc)) from None
    text = str(value).lower() if isinstance(value, bool) else str(value)
    _emit(args, {"predicate": args.predicate, "length": seq.length, "value": text}, [text])
    return EXIT_OK


def cmd_invariants(args) -> int:
    group = _group(args)
    rows = {
        "group": group.spec or "1",
        "size": group.size,
        "invariant_factors": list(group.invariant_factors),
        "rank": group.rank,
        "total_rank": group.total_rank,
        "d_star": inv.d_star(group),
        "k_star": str(inv.k_star(group)),
        "girard_bound": str(inv.girard_bound(group)),
        "upper_bound": None if group.size == 1 else round(inv.davenport_upper_bound(group), 6),
    }
    lines = [f"{k:<18} {v if v is not None else '-'}" for k, v in rows.items()]
    _emit(args, rows, lines)
    return EXIT_OK


def cmd_davenport(args) -> int:
    group = _group(args)
    budget = _budget(args)
    try:
        if args.lower_bound is not None:
            seq = find_zero_sum_free(group, args.lower_bound, budget)
            found = seq is not None
            payload = {"length": args.lower_bound, "found": found, "witness": seq.to_text() if seq else None}
            lines = [f"d >= {args.lower_bound}" if found else f"d < {args.lower_bound}"]
            if seq:
                lines.append(seq.to_text().rstrip())
            _emit(args, payload, lines)
            return EXIT_OK
        res = davenport_exact(group, cap=args.cap, budget=budget, method=args.method)
    except BudgetExhausted as exc:
        _emit(args, {"budget_exhausted": True, "lower_bound": exc.partial}, [f"budget exhausted; d >= {exc.partial}"])
        return EXIT_BUDGET
    _emit(
        args,
        {"d": res.value, "D": res.value + 1, "d_star": inv.d_star(group), "witness": res.witness.to_text()},
        [str(res.value)],
    )
    return EXIT_OK


def cmd_sea(args) -> int:
    group = _group(args)
    seeds: list[Sequence] = []
    if args.seed_empty:
        seeds.append(Sequence(group))
    rng = random.Random(args.rng_seed)
    for ref in args.seed or []:
        base = _load_sequence(ref, group)
        seeds.append(base)
        seeds.extend(automorphic_images(base, args.orbit_seeds, rng))
    if args.random_seeds:
        if args.seed_length is None:
            raise UsageError("--random-seeds needs --seed-length")
        try:
            seeds.extend(random_zero_sum_free(group, args.seed_length, rng) for _ in range(args.random_seeds))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not seeds:
        raise UsageError("no seeds given (use --seed-empty, --seed or --random-seeds)")
    try:
        report = parallel_sea(seeds, args.depth, args.threads, Mode(args.mode), _budget(args))
    except ZeroSumError as exc:
        raise UsageError(str(exc)) from None
    hits = report.hit_lines(group)
    if args.hits_out:
        Path(args.hits_out).write_text("".join(line + "\n" for line in hits))
    summary = report.to_json()
    lines = ([] if args.hits_out else hits) + [
        "# " + " ".join(f"{k}={v}" for k, v in summary.items() if k != "wall_seconds")
    ]
    _emit(args, summary, lines)
    if report.failed:
        return EXIT_FAIL
    return EXIT_OK if report.completed == report.seeds_processed else EXIT_BUDGET


def cmd_split_check(args) -> int:
    group = _group(args)
    seq = _load_sequence(args.seed, group)
    try:
        witness = exists_split(seq)
    except ZeroSumError as exc:
        raise UsageError(str(exc)) from None
    if witness is None:
        _emit(args, {"split": None}, ["no split exists"])
        return EXIT_OK
    g, g1, g2 = (group.format_element(x) for x in witness)
    _emit(args, {"split": [g, g1, g2]}, [f"split exists: {g} = {g1} + {g2}"])
    return EXIT_FAIL


def cmd_girard_check(args) -> int:
    group = _group(args)
    verdict = girard_check(group, _budget(args))
    payload = {
        "verdict": verdict.status.value,
        "bound": str(verdict.bound),
        "checked": verdict.checked,
        "max_cross_number": None if verdict.max_cross_number is None else str(verdict.max_cross_number),
    }
    lines = [verdict.status.value, f"checked {verdict.checked} sequences, bound {verdict.bound}, max k(S) {verdict.max_cross_number}"]
    if verdict.counterexample is not None:
        payload["counterexample"] = verdict.counterexample.to_text()
        lines.append(verdict.counterexample.to_text().rstrip())
    _emit(args, payload, lines)
    return {
        GirardStatus.ALL_WITHIN_BOUND: EXIT_OK,
        GirardStatus.COUNTEREXAMPLE: EXIT_FAIL,
        GirardStatus.BUDGET_EXHAUSTED: EXIT_BUDGET,
    }[verdict.status]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zerosum", description="Zero-sum sequences over finite abelian groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, group=True):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if group:
            p.add_argument("--group", required=True, help="comma-separated cyclic orders, e.g. 2,6,6,6,6")
            p.add_argument("--tables", choices=[t.value for t in TablePolicy], default="auto")
        return p

    def budget_flags(p):
        p.add_argument("--budget-seconds", type=float)
        p.add_argument("--budget-nodes", type=int)

    p = add("verify-construction", cmd_verify_construction, "build and re-verify an explicit construction", group=False)
    p.add_argument("--family", choices=["theorem31", "corollary32"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)

    p = add("check", cmd_check, "evaluate a predicate on a sequence file")
    p.add_argument("--file", required=True, help="sequence file or construction:<name>?<params>")
    p.add_argument("--predicate", choices=["zsf", "minimal", "cross"], required=True)

    add("invariants", cmd_invariants, "closed-form invariants of a group")

    p = add("davenport", cmd_davenport, "exact d(G) by exhaustive search")
    p.add_argument("--cap", type=int, help="maximum number of search states")
    p.add_argument("--method", choices=["levels", "dfs"], default="levels")
    p.add_argument("--lower-bound", type=int, metavar="L", help="only search for a zero-sum free sequence of length L")
    budget_flags(p)

    p = add("sea", cmd_sea, "extend zero-sum free seeds")
    p.add_argument("--seed", action="append", help="sequence file or construction name (repeatable)")
    p.add_argument("--seed-empty", action="store_true")
    p.add_argument("--random-seeds", type=int, default=0, help="add N random greedy zero-sum free seeds")
    p.add_argument("--seed-length", type=int)
    p.add_argument("--orbit-seeds", type=int, default=0, metavar="N",
                   help="also add N random automorphic images of every --seed")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="first")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--hits-out", help="write hit lines to this file instead of stdout")
    budget_flags(p)

    p = add("split-check", cmd_split_check, "look for T* = g1 g2 T' with T = (g1+g2) T' zero-sum free")
    p.add_argument("--seed", required=True, help="sequence file or construction name")

    p = add("girard-check", cmd_girard_check, "check Girard's cross number bound exhaustively")
    budget_flags(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "threads", 1) < 1 or getattr(args, "depth", 1) < 1:
        print("error: --threads and --depth must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
