"""Plot the CSVs written by `treepoly figure`. Development aid only.

usage: python scripts/plot_figures.py DATA_DIR [OUT_DIR]
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def closed(df):
    return pd.concat([df, df.iloc[:1]])


def fig4(data, out):
    pts = pd.read_csv(data / "fig4_points.csv")
    hull = closed(pd.read_csv(data / "fig4_hull.csv"))
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(hull.x, hull.y, "k-", lw=1)
    ax.scatter(pts.x, pts.y, c="0.6", s=18, zorder=3)
    ax.set_xlabel("p1 (Comb_5)")
    ax.set_ylabel("p2 (Gir_5)")
    fig.savefig(out / "fig4.png", dpi=150, bbox_inches="tight")


def curves(data, out, name):
    beta = pd.read_csv(data / f"{name}_beta.csv")
    multi = pd.read_csv(data / f"{name}_multinomial.csv")
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(multi.x, multi.y, c="0.7", s=4)
    ax.plot(beta.x, beta.y, "k-", lw=2.5)
    hulls = data / f"{name}_hulls.csv"
    if hulls.exists():
        for _, g in pd.read_csv(hulls).groupby("n"):
            g = closed(g.sort_values("order"))
            ax.plot(g.x, g.y, "k-", lw=0.8)
    ax.set_xlabel("p1 (Comb_5)")
    ax.set_ylabel("p2 (Gir_5)")
    fig.savefig(out / f"{name}.png", dpi=150, bbox_inches="tight")


def main():
    data = Path(sys.argv[1])
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else data
    out.mkdir(parents=True, exist_ok=True)
    if (data / "fig4_points.csv").exists():
        fig4(data, out)
    for name in ("fig5", "fig6"):
        if (data / f"{name}_beta.csv").exists():
            curves(data, out, name)


if __name__ == "__main__":
    main()
