"""Injectivity and surjectivity of gamma across small irreducible types,
next to the number of classes of reflections."""
from __future__ import annotations

import argparse
import warnings

from reflectionlab.classical import classify_i2
from reflectionlab.classify import full_classification
from reflectionlab.config import EngineConfig
from reflectionlab.engine import GroupTooLarge
from reflectionlab.gamma import gamma_map, reflection_orbits, surjectivity_audit
from reflectionlab.rootsys import build_root_system

DEFAULT_TYPES = ["A3", "A6", "B3", "B6", "C4", "D4", "D5", "D6", "E6", "E7", "F4", "G2", "H3", "H4"]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("types", nargs="*", default=DEFAULT_TYPES)
    ap.add_argument("--dihedral", type=int, nargs="*", default=[5, 7, 8, 9, 10, 12])
    args = ap.parse_args(argv)
    config = EngineConfig()
    print(f"{'type':6s} {'classes':>7s} {'refl orbits':>11s} {'injective':>9s} {'surjective':>10s}")
    for label in args.types:
        rs = build_root_system(label[0], int(label[1:]))
        records = full_classification(rs)
        report = gamma_map(records)
        try:
            surj = str(surjectivity_audit(records, rs, config)[0])
        except GroupTooLarge:
            surj = "n/a"
        print(f"{label:6s} {len(records):7d} {reflection_orbits(rs):11d} {str(report.injective):>9s} {surj:>10s}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for m in args.dihedral:
            res = classify_i2(m)
            print(f"{'I2:' + str(m):6s} {len(res.records):7d} {1 if m % 2 else 2:11d} "
                  f"{str(res.injective):>9s} {str(res.surjective):>10s}")


if __name__ == "__main__":
    main()
