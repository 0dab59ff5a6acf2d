#!/usr/bin/env python3
"""Print the brute-force cross-check of the tabulated operator values.

Two constants quoted alongside the quaternionic and twistor constructions do
not match direct contraction of the tensors they describe; this report shows
the computed values next to the tabulated ones.  The headline conclusions (a
nonzero tensor with vanishing complex Jacobi operator; a curvature tensor
moved by an isometry that preserves all complex Jacobi data) are unaffected,
which the test suite verifies separately.

Usage: python3 scripts/discrepancy_audit.py [--m 4] [--json]
"""

import argparse
import json

from curvlab import discrepancy_audit


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=4, help="dimension, a multiple of 4")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    report = discrepancy_audit(args.m, seed=args.seed)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    print(f"discrepancy audit at m = {args.m} (documented report, not a failure)")
    for key, entry in report.items():
        flag = "agrees" if entry["agrees"] else "DISAGREES"
        print(f"  {key}: computed {entry['computed']:.6g}, tabulated {entry['tabulated']:.6g}  [{flag}]")
        print(f"    {entry['description']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
