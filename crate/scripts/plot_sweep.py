#!/usr/bin/env python3
"""Plot median TV error against per-group sample count from a sweep CSV.

    python3 scripts/plot_sweep.py out/sweep.csv -o sweep.png

Needs numpy and matplotlib; renders off-screen.
"""
import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SCHEMA = "# schema: pauli-tomo/sweep v1"


def read_sweep(path):
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != SCHEMA:
            sys.exit(f"{path}: expected '{SCHEMA}', found '{first}'")
        rows = list(csv.DictReader(fh))
    cols = {k: np.array([float(r[k]) for r in rows]) for k in ("N", "median_tv", "q25", "q75")}
    return cols


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("-o", "--output", default="sweep.png")
    args = ap.parse_args()

    c = read_sweep(args.csv)
    slope, intercept = np.polyfit(np.log(c["N"]), np.log(c["median_tv"]), 1)

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.fill_between(c["N"], c["q25"], c["q75"], alpha=0.25, label="interquartile range")
    ax.plot(c["N"], c["median_tv"], "o-", label="median TV")
    ax.plot(c["N"], np.exp(intercept) * c["N"] ** slope, "--", label=f"fit, slope {slope:.3f}")
    ax.plot(c["N"], c["median_tv"][0] * np.sqrt(c["N"][0] / c["N"]), ":", color="gray", label=r"$N^{-1/2}$")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("samples per group N")
    ax.set_ylabel("TV error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
