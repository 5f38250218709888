"""Exhaustive oracle sweep over small instances.

    python scripts/run_sweep.py --nmax 5 --kmax 5 --filter all --out sweep.csv
"""

import argparse
import time

from corrcache.verify import sweep_verify

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=5)
    ap.add_argument("--kmax", type=int, default=5)
    ap.add_argument("--filter", default="theorem2", choices=("theorem2", "all", "distinct"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    start = time.perf_counter()
    report = sweep_verify(
        range(1, args.nmax + 1), range(1, args.kmax + 1), demand_filter=args.filter, workers=args.workers
    )
    elapsed = time.perf_counter() - start
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_csv())
    print(f"{len(report.records)} demands, {len(report.failures)} failures, "
          f"{len(report.unclaimed)} outside the optimality cases, {elapsed:.1f}s")
    for rec in report.failures[:20]:
        print("FAIL", rec)
    raise SystemExit(1 if report.failures else 0)
