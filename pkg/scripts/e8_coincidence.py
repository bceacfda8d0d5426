"""Find every pair of reflection subgroup classes of W(E8) whose Coxeter
elements are conjugate, and print each conjugating word."""
from __future__ import annotations

import argparse
import time

from reflectionlab.classify import full_classification
from reflectionlab.engine import DEFAULT, GroupElement, conjugate, fingerprint
from reflectionlab.gamma import coxeter_element, gamma_map
from reflectionlab.rootsys import build_root_system


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=DEFAULT.search_budget, help="conjugacy search budget")
    args = ap.parse_args(argv)
    rs = build_root_system("E", 8)
    t0 = time.perf_counter()
    records = full_classification(rs)
    t1 = time.perf_counter()
    print(f"{len(records)} classes of reflection subgroups in {t1 - t0:.1f} s")
    report = gamma_map(records, budget=args.budget)
    print(f"gamma computed in {time.perf_counter() - t1:.1f} s; injective: {report.injective}")
    for p in report.coincidence_pairs:
        a, b = records[p.first], records[p.second]
        ca, cb = coxeter_element(a.subsystem), coxeter_element(b.subsystem)
        w = GroupElement.from_word(rs, [rs.simple_indices[g] for g in p.word])
        ok = conjugate(ca, w) == cb
        print(f"{a.type_label} (class size {a.class_size}) ~ {b.type_label} (class size {b.class_size})")
        print(f"  Coxeter element order {ca.order}, characteristic polynomial {fingerprint(ca).charpoly}")
        print(f"  witness ({len(p.word)} simple reflections): {' '.join(str(g + 1) for g in p.word)}")
        print(f"  witness verified: {ok}")


if __name__ == "__main__":
    main()
