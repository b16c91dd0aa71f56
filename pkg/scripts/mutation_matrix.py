"""Which suites notice which monitor mutant.

Each mutant runs against every suite of its calculus that executes programs.
A cell shows the number of failing trials, so a zero marks a suite that is
blind to that mutant.
"""

from __future__ import annotations

import argparse

from ifcbridge.harness import MUTANTS, GenConfig, run_suite

SUITES_BY_CALCULUS = {
    calc: [f"tini-{calc}", f"confinement-{calc}", f"pc-raise-{calc}", f"valid-{calc}"]
    for calc in ("fg", "cg")
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=2_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for calc, suites in SUITES_BY_CALCULUS.items():
        print(f"\n{calc.upper()} " + " ".join(f"{s:>16}" for s in suites))
        for mutant, (mcalc, _designated) in sorted(MUTANTS.items()):
            if mcalc != calc:
                continue
            cells = []
            for s in suites:
                r = run_suite(s, GenConfig(seed=args.seed, trials=args.trials, mutant=mutant))
                cells.append(f"{r.failed:>16}")
            print(f"{mutant:<18}" + " ".join(cells), flush=True)


if __name__ == "__main__":
    main()
