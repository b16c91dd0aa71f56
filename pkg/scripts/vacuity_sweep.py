"""How the share of vacuous TINI trials (aborts and timeouts) grows with term size."""

from __future__ import annotations

import argparse

from ifcbridge.harness import GenConfig, run_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 40, 80])
    args = ap.parse_args()

    print(f"{'size':>5} {'tini-fg':>9} {'tini-cg':>9}")
    for size in args.sizes:
        row = []
        for calc in ("fg", "cg"):
            r = run_suite(f"tini-{calc}", GenConfig(trials=args.trials, max_size=size))
            assert r.ok, r.summary()
            row.append(f"{r.vacuous_fraction:>9.1%}")
        print(f"{size:>5} " + " ".join(row), flush=True)


if __name__ == "__main__":
    main()
