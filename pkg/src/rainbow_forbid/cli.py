"""Command-line front end.

Exit codes::

    0  success / coloring is rainbow-free
    1  check: a rainbow cycle was found
    2  usage error (bad or conflicting flags)
    3  node budget exhausted
    4  input grid could not be parsed or is not a latin rectangle
    5  a verification found a violation
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import constructions, fmc
from .latin import LatinError, format_grid, parse_grid
from .rainbow import (
    KTooLarge,
    classify_3x3,
    find_rainbow_cycle,
    to_coloring,
)

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4
EXIT_VIOLATION = 5


class UsageError(Exception):
    pass


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    if args.kind == "l2xm":
        if args.k is None:
            raise UsageError("--kind l2xm needs --k")
        m = args.m if args.m is not None else 2 * args.k
        try:
            rect = constructions.theorem22_coloring(args.k, m)
        except (constructions.KNotOdd, constructions.MOutOfRange) as exc:
            raise UsageError(str(exc))
    elif args.kind == "km8":
        if args.k not in (None, 3):
            raise UsageError("--kind km8 is a k = 3 construction")
        try:
            rect = constructions.km8_coloring(args.m if args.m is not None else 8)
        except constructions.MOutOfRange as exc:
            raise UsageError(str(exc))
    else:
        if args.m not in (None, 3) or args.k not in (None, 3):
            raise UsageError("--kind k37 takes no --m/--k other than 3")
        rect = constructions.k37_coloring()
    if args.format == "json":
        _emit(json.dumps({"m": rect.rows, "n": rect.cols, "grid": rect.tolist()}) + "\n", args.out)
    else:
        _emit(format_grid(rect), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        rect = parse_grid(Path(args.file).read_text())
    except (OSError, LatinError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        cert = find_rainbow_cycle(to_coloring(rect), args.k, threads=args.threads)
    except KTooLarge as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        payload = {"verdict": "FOUND" if cert else "RAINBOW-FREE", "k": args.k,
                   "certificate": cert.to_dict() if cert else None}
        print(json.dumps(payload))
    elif cert is None:
        print("RAINBOW-FREE")
    else:
        print("FOUND")
        print(cert.to_json())
    if cert is not None and args.out:
        Path(args.out).write_text(cert.to_json() + "\n")
    return EXIT_OK if cert is None else EXIT_FOUND


def cmd_search(args) -> int:
    for name in ("m", "n", "k"):
        if getattr(args, name) is None:
            raise UsageError(f"search needs --{name}")
    try:
        out = fmc.decide_membership(args.m, args.n, args.k, budget=args.budget,
                                    threads=args.threads)
    except fmc.InvalidDimensions as exc:
        raise UsageError(str(exc))
    except fmc.BudgetExceeded as exc:
        payload = {"m": args.m, "n": args.n, "k": args.k, "verdict": "BudgetExceeded",
                   "stats": exc.stats.to_dict()}
        print(json.dumps(payload) if args.format == "json" else
              f"BudgetExceeded after {exc.stats.nodes} nodes")
        return EXIT_BUDGET
    if args.format == "json":
        print(json.dumps(out.to_dict()))
    else:
        print(f"{out.verdict} (nodes={out.stats.nodes})")
        if out.witness is not None:
            print(format_grid(out.witness), end="")
    if out.witness is not None and args.out:
        Path(args.out).write_text(format_grid(out.witness))
    return EXIT_OK


def cmd_fmc(args) -> int:
    k = args.k if args.k is not None else 3
    if k < 2:
        raise UsageError("--k must be at least 2")
    max_n = args.max_n if args.max_n is not None else 5 * k - 6
    max_m = args.max_m if args.max_m is not None else max(k, 5 * k - 7)
    code = EXIT_OK
    try:
        report = fmc.compute_fmc(k, max_m, max_n, budget=args.budget, threads=args.threads)
    except fmc.BudgetExceeded as exc:
        report = exc.partial if exc.partial is not None else fmc.FmcReport(k, complete=False)
        print(f"BudgetExceeded after {exc.stats.nodes} nodes; report is partial",
              file=sys.stderr)
        code = EXIT_BUDGET
    _emit(report.to_json() + "\n", args.out)
    return code


def _isotopy_spot_check(seed: int, trials: int) -> int:
    """Classification flags must not change under random row/column/symbol permutations."""
    rng = random.Random(seed)
    failures = 0
    for distinct in (6, 7):
        for rep in fmc.enumerate_3x3_classes(distinct):
            base = classify_3x3(rep)
            for _ in range(trials):
                rows, cols, syms = [0, 1, 2], [0, 1, 2], list(range(9))
                rng.shuffle(rows)
                rng.shuffle(cols)
                rng.shuffle(syms)
                moved = [[syms[rep[i][j]] for j in cols] for i in rows]
                if classify_3x3(moved) != base:
                    failures += 1
    return failures


def cmd_verify(args) -> int:
    which = args.which
    results = {}
    try:
        if which in ("all", "prop31"):
            results["prop_3_1"] = fmc.verify_prop_3_1().to_dict()
        if which in ("all", "prop32"):
            results["prop_3_2"] = fmc.verify_prop_3_2().to_dict()
        if which in ("all", "lemma34"):
            results["lemma_3_4"] = fmc.verify_lemma_3_4_structure(
                budget=args.budget, threads=args.threads).to_dict()
    except fmc.ViolationFound as exc:
        print(f"VIOLATION: {exc}: {exc.example}", file=sys.stderr)
        return EXIT_VIOLATION
    except fmc.BudgetExceeded as exc:
        print(f"BudgetExceeded after {exc.stats.nodes} nodes", file=sys.stderr)
        return EXIT_BUDGET
    if which in ("all", "isotopy"):
        results["isotopy_spot_check"] = {"seed": args.seed,
                                         "failures": _isotopy_spot_check(args.seed, 5)}
    if args.format == "json":
        print(json.dumps(results))
    else:
        for name, res in results.items():
            print(f"{name}: {json.dumps(res)}")
    failed = results.get("isotopy_spot_check", {}).get("failures", 0)
    return EXIT_VIOLATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rainbow-forbid",
        description="Colorings of K_{m,n} without rainbow even cycles.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, k_default=None):
        sp.add_argument("--k", type=int, default=k_default)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out", metavar="PATH")

    def search_flags(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help=f"node budget (default ${fmc.BUDGET_ENV} or {fmc.DEFAULT_BUDGET})")
        sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("construct", help="emit a forbidding coloring")
    sp.add_argument("--kind", choices=("l2xm", "km8", "k37"), required=True)
    sp.add_argument("--m", type=int)
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("check", help="look for a rainbow 2k-cycle in a grid file")
    sp.add_argument("file")
    common(sp, k_default=3)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("search", help="decide membership of (m, n) by exhaustive search")
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    common(sp, k_default=3)
    search_flags(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("fmc", help="membership report for all small (m, n)")
    sp.add_argument("--max-m", type=int)
    sp.add_argument("--max-n", type=int)
    common(sp, k_default=3)
    search_flags(sp)
    sp.set_defaults(func=cmd_fmc)

    sp = sub.add_parser("verify", help="re-check the 3 x 3 and 3 x 7 classifications")
    sp.add_argument("--which", choices=("all", "prop31", "prop32", "lemma34", "isotopy"),
                    default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    search_flags(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be positive")
    if getattr(args, "budget", None) is not None and args.budget < 0:
        parser.error("--budget must be non-negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
