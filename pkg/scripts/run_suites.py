"""Run property suites at the acceptance sizes and print a summary table.

    python3 scripts/run_suites.py                 # every suite
    python3 scripts/run_suites.py tini-fg cg2fg   # a selection
    python3 scripts/run_suites.py --json out.json
"""

from __future__ import annotations

import argparse
import json
import sys

from ifcbridge.harness import SUITES, GenConfig, run_suite

# trials and term size per suite; anything unlisted uses the defaults
PLAN: dict[str, dict] = {
    "tini-fg": {"trials": 1_000, "max_size": 20},
    "tini-cg": {"trials": 1_000, "max_size": 20},
    "fg2cg": {"trials": 500, "max_size": 15},
    "cg2fg": {"trials": 500},
    "types-fg2cg": {"trials": 5_000},
    "types-cg2fg": {"trials": 5_000},
    "search-fg": {"trials": 200},
    "search-cg": {"trials": 200},
    "recovery-fg2cg": {"trials": 300},
    "recovery-cg2fg": {"trials": 300},
    "square-fg": {"trials": 300},
    "square-cg": {"trials": 300},
}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("suites", nargs="*", help="suite names (default: all)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--lattice", default="two-point")
    ap.add_argument("--attacker", default="L")
    ap.add_argument("--json", metavar="PATH", help="write every report to PATH")
    args = ap.parse_args(argv)

    names = args.suites or sorted(SUITES)
    reports = {}
    print(f"{'suite':<16} {'trials':>7} {'FAIL':>5} {'vacuous':>8} {'seconds':>8}")
    for name in names:
        cfg = GenConfig(seed=args.seed, lattice=args.lattice, attacker=args.attacker,
                        **PLAN.get(name, {"trials": 1_000}))
        r = run_suite(name, cfg)
        reports[name] = r.to_json()
        print(f"{name:<16} {r.trials:>7} {r.failed:>5} {r.vacuous_fraction:>8.1%} {r.duration:>8.1f}",
              flush=True)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(reports, fh, indent=2, ensure_ascii=False)
    return 0 if all(r["passed"] for r in reports.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
