#!/usr/bin/env python3
"""Plot CSV output of isingbell-cli.

    isingbell-cli scan --axis t --j1 1.351 --t 0.005:0.2:0.001 --derivatives --out scan.csv
    python3 tools/plot.py scan scan.csv --field B

    isingbell-cli contour --t 0.001:0.5:0.0025 --j1 0.1:2.5:0.012 --out grid.csv
    python3 tools/plot.py contour grid.csv --field B --levels 2 2.8
"""
import argparse

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def plot_scan(df, field, ax):
    x = df.columns[0]
    ax.plot(df[x], df[field], label=field)
    d = f"d{field}/d{x}"
    if d in df.columns:
        inset = ax.inset_axes([0.55, 0.55, 0.4, 0.4])
        inset.plot(df[x], df[d], lw=0.8)
        inset.set_title(d, fontsize=8)
    ax.set_xlabel(x)
    ax.set_ylabel(field)


def plot_contour(df, field, levels, ax):
    grid = df.pivot(index="T", columns="J1", values=field)
    j1, t = np.meshgrid(grid.columns.values, grid.index.values)
    filled = ax.contourf(j1, t, grid.values, levels=30)
    plt.colorbar(filled, ax=ax, label=field)
    if levels:
        lines = ax.contour(j1, t, grid.values, levels=sorted(levels), colors="k")
        ax.clabel(lines, fmt="%g")
    ax.set_xlabel("J1")
    ax.set_ylabel("T")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("kind", choices=["scan", "contour"])
    parser.add_argument("csv")
    parser.add_argument("--field", default="B")
    parser.add_argument("--levels", type=float, nargs="*", default=[])
    parser.add_argument("--out", help="image file; shows a window when omitted")
    args = parser.parse_args()

    df = pd.read_csv(args.csv, comment="#")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if args.kind == "scan":
        plot_scan(df, args.field, ax)
    else:
        plot_contour(df, args.field, args.levels, ax)
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
