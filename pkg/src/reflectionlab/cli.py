"""Command line: classify, gamma, crosscheck, cache."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import report
from .classical import crosscheck
from .engine import DEFAULT

EXIT_MISMATCH = 1
EXIT_BAD_TYPE = 2
EXIT_BUDGET = 3

CACHE_ENV = "REFLECTIONLAB_CACHE"


def _default_cache() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "reflectionlab"


def cache_dir(args) -> Optional[Path]:
    if getattr(args, "no_cache", False):
        return None
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    return Path(args.cache_dir) if args.cache_dir else _default_cache()


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", required=True, help="B5, E8, H4, I2:12, ... (case-insensitive)")
    p.add_argument("--threads", type=_positive, default=1,
                   help="accepted for compatibility; output never depends on it")
    p.add_argument("--cache-dir", help=f"result cache directory (${CACHE_ENV} takes precedence)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reflectionlab",
                                     description="Conjugacy classes of reflection subgroups of finite Coxeter groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="table of reflection subgroup classes")
    _common(p)
    p.add_argument("--format", choices=["md", "json", "csv"], default="md")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--group-by-closure", dest="group_by_closure", action="store_true", default=True,
                   help="separate closure blocks (default)")
    g.add_argument("--no-group-by-closure", dest="group_by_closure", action="store_false")
    p.add_argument("--budget", type=_positive, help=f"orbit size budget (default {DEFAULT.orbit_budget})")

    p = sub.add_parser("gamma", help="audit the map from subgroup classes to element classes")
    _common(p)
    p.add_argument("--check-injective", action="store_true")
    p.add_argument("--check-surjective", action="store_true",
                   help=f"enumerate all classes of W (only for |W| <= {DEFAULT.class_enum_cap})")
    p.add_argument("--find-coincidences", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--budget", type=_positive,
                   help=f"node budget of each conjugacy search (default {DEFAULT.search_budget})")

    p = sub.add_parser("crosscheck", help="compare closed forms for A, B, D, I2 with the engine")
    p.add_argument("--type", required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("cache", help="inspect or clear the result cache")
    p.add_argument("action", choices=["list", "clear", "path"])
    p.add_argument("--cache-dir")
    return parser


def _group(args) -> report.GroupType:
    return report.parse_type(args.type)


def cmd_classify(args, out) -> int:
    gt = _group(args)
    config = DEFAULT if args.budget is None else replace(DEFAULT, orbit_budget=args.budget)
    opts = report.RunOptions(config=config, cache_dir=cache_dir(args))
    status = 0
    try:
        doc = report.run(gt, opts)
    except report.BudgetExhausted as exc:
        doc, status = exc.document, EXIT_BUDGET
        print(f"warning: {exc}", file=sys.stderr)
    out.write(report.render(doc, args.format, args.group_by_closure))
    return status


def cmd_gamma(args, out) -> int:
    gt = _group(args)
    config = DEFAULT if args.budget is None else replace(DEFAULT, search_budget=args.budget)
    if args.check_surjective and gt.family != "I":
        from .rootsys import build_root_system
        order = build_root_system(gt.family, gt.rank).type_label.order
        if order > config.class_enum_cap:
            print(f"surjectivity check refused: |W({gt.label})| = {order} exceeds the class enumeration "
                  f"cap of {config.class_enum_cap}", file=sys.stderr)
            args.check_surjective = False
    opts = report.RunOptions(config=config, check_surjective=args.check_surjective, cache_dir=cache_dir(args))
    try:
        doc = report.run(gt, opts)
    except report.BudgetExhausted as exc:
        print(f"warning: {exc}", file=sys.stderr)
        out.write(report.render_gamma(exc.document, False) if args.format == "text" else exc.document.to_json())
        return EXIT_BUDGET
    reports = dict(doc.reports)
    if not args.check_surjective:
        reports.pop("surjective", None)
        reports.pop("class_count", None)
    if args.format == "json":
        out.write(json.dumps({"group": doc.group, **reports}, ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    else:
        everything = not (args.check_injective or args.check_surjective or args.find_coincidences)
        out.write(report.render_gamma(doc, args.find_coincidences or everything, args.check_surjective))
    return 0


def cmd_crosscheck(args, out) -> int:
    gt = _group(args)
    if gt.family not in "ABDI":
        raise report.InvalidTypeDescriptor(f"no closed form to compare for {gt.label}; use A, B, D or I2")
    if gt.family == "B" and gt.rank < 2 or gt.family == "D" and gt.rank < 4:
        raise report.InvalidTypeDescriptor(f"closed form for {gt.label} needs rank >= {2 if gt.family == 'B' else 4}")
    res = crosscheck(gt.family, gt.m if gt.family == "I" else gt.rank)
    if args.format == "json":
        out.write(json.dumps(res.as_dict(), ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    else:
        out.write(f"{res.type}: {'pass' if res.ok else 'FAIL'}\n")
        for row in res.only_predicted:
            out.write(f"  - predicted only: {row}\n")
        for row in res.only_computed:
            out.write(f"  + computed only:  {row}\n")
        for note in res.extra:
            out.write(f"  ! {note}\n")
    return 0 if res.ok else EXIT_MISMATCH


def cmd_cache(args, out) -> int:
    root = cache_dir(args)
    cache = report.Cache(root)
    if args.action == "path":
        out.write(f"{root}\n")
    elif args.action == "list":
        for p in cache.entries():
            out.write(f"{p.name}\t{p.stat().st_size}\n")
    else:
        out.write(f"removed {cache.clear()} entries\n")
    return 0


COMMANDS = {"classify": cmd_classify, "gamma": cmd_gamma, "crosscheck": cmd_crosscheck, "cache": cmd_cache}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except report.InvalidTypeDescriptor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_TYPE


if __name__ == "__main__":
    sys.exit(main())
