"""Render the classification table of every golden type and diff it against
golden/<type>.md.  Exit status 1 if any table differs."""
from __future__ import annotations

import argparse
import difflib
import sys
import time
from pathlib import Path

from reflectionlab import report

ROOT = Path(__file__).resolve().parent.parent
TYPES = ["G2", "H3", "F4", "B5", "D6", "E6", "H4", "E7", "E8"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("types", nargs="*", default=TYPES)
    ap.add_argument("--out", type=Path, help="also write rendered tables here")
    ap.add_argument("--cache-dir", type=Path, help="reuse cached results")
    args = ap.parse_args(argv)
    opts = report.RunOptions(cache_dir=args.cache_dir)
    failed = 0
    for label in args.types:
        gt = report.parse_type(label)
        t0 = time.perf_counter()
        text = report.render_markdown(report.run(gt, opts))
        secs = time.perf_counter() - t0
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{gt.file_stem}.md").write_text(text, "utf-8")
        golden = (ROOT / "golden" / f"{gt.file_stem}.md").read_text("utf-8")
        same = text == golden
        failed += not same
        print(f"{gt.label:4s} {'match' if same else 'DIFFER'}  {secs:7.1f} s")
        if not same:
            sys.stdout.writelines(difflib.unified_diff(golden.splitlines(True), text.splitlines(True),
                                                       "golden", "computed"))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
