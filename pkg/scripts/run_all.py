"""Run every scenario at one configuration and print a summary table."""

import argparse
import time

from speccartan.scenarios import SCENARIOS, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failed = 0
    for name in SCENARIOS:
        start = time.perf_counter()
        rep = run_scenario(name, args.n, args.trials, args.seed)
        s = rep["summary"]
        failed += not s["all_passed"]
        print(f"{name:28s} {s['passed']:5d}/{s['checks']:<5d} {time.perf_counter() - start:7.2f}s")
        for c in rep["checks"]:
            if not c["passed"]:
                print(f"    first failure: {c['name']}")
                break
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
