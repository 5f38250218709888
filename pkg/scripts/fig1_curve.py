"""Converse, scheme-corner and round-division curves for (N,K,r) = (5,20,2).

    python scripts/fig1_curve.py --out fig1.csv [--plot fig1.png]

The plot needs matplotlib; the CSV does not.
"""

import argparse
import csv

from corrcache.cli import main as cli_main


def plot(csv_path, png_path):
    import matplotlib.pyplot as plt

    rows = list(csv.DictReader(open(csv_path)))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for kind, style in (("converse", "k-"), ("scheme", "bo"), ("baseline", "r--")):
        pts = [(float(r["M_float"]), float(r["load_float"])) for r in rows if r["kind"] == kind]
        ax.plot(*zip(*pts), style, label=kind, markersize=3)
    ax.set_xlabel("M")
    ax.set_ylabel("average load")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=5)
    ap.add_argument("--K", type=int, default=20)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--out", default="fig1.csv")
    ap.add_argument("--plot")
    args = ap.parse_args()
    code = cli_main(["curve", f"N={args.N}", f"K={args.K}", f"r={args.r}", f"s={min(args.N, args.K)}", "--out", args.out])
    if code == 0 and args.plot:
        plot(args.out, args.plot)
    raise SystemExit(code)
