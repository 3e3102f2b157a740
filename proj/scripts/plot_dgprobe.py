#!/usr/bin/env python3
"""Quick-look plots for dgprobe CSV output.

    python3 scripts/plot_dgprobe.py out.csv [-o out.png] [--kz 0]

The command is read from the first header line, so sweep, kmap, path, series,
topo and spectrum tables each get a matching plot.
"""

import argparse
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def read_table(path):
    meta = {}
    command = None
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if body.startswith("dgprobe "):
                command = body.split()[-1]
            elif ": " in body:
                key, value = body.split(": ", 1)
                meta[key] = value
    return command, meta, pd.read_csv(path, comment="#")


def plot_sweep(ax, df, meta):
    x = df.columns[0]
    ax.plot(df[x], df["diagnostic"], ".-", lw=0.8)
    cusps = df[df["is_cusp"] == 1]
    ax.plot(cusps[x], cusps["diagnostic"], "rv", label="cusp")
    ax.set_xlabel(x)
    ax.set_ylabel(meta.get("diagnostic", "diagnostic"))
    ax.legend()


def plot_kmap(ax, df, meta, kz):
    if "kz" in df.columns:
        target = df["kz"].iloc[(df["kz"] - kz).abs().argmin()]
        df = df[df["kz"] == target]
        ax.set_title(f"kz = {target:.3f}")
    if "ky" in df.columns and "kx" in df.columns:
        grid = df.pivot(index="ky", columns="kx", values="lk2")
        im = ax.pcolormesh(grid.columns, grid.index, grid.values, shading="nearest")
        plt.colorbar(im, ax=ax, label="|L_k|^2")
        ax.set_xlabel("kx")
        ax.set_ylabel("ky")
    else:
        k = df.columns[0]
        ax.plot(df[k] / math.pi, df["lk2"], ".-")
        ax.set_xlabel(f"{k} / pi")
        ax.set_ylabel("|L_k|^2")


def plot_path(ax, df, meta):
    ax.plot(df["s"], df["lk2"], "k-")
    ax.set_ylabel("|L_k|^2")
    ax.set_xlabel("path")
    for entry in meta.get("vertices", "").split():
        label, s = entry.split("@")
        ax.axvline(float(s), color="0.7", lw=0.5)
        ax.text(float(s), 1.02, label, ha="center", transform=ax.get_xaxis_transform())
    bands = [c for c in df.columns if c.startswith("E")]
    twin = ax.twinx()
    for b in bands:
        twin.plot(df["s"], df[b], color="tab:blue", lw=0.5, alpha=0.5)
    twin.set_ylabel("E")


def plot_series(ax, df, meta):
    ax.plot(df["t"], df["log10_modsq"])
    ax.set_xlabel("t")
    ax.set_ylabel("log10 |L(t)|^2")


def plot_topo(ax, df, meta):
    x = df.columns[0]
    y = df.columns[1]
    ax.step(df[x], df[y], where="mid")
    ax.set_xlabel(x)
    ax.set_ylabel(y)


def plot_spectrum(ax, df, meta):
    if "energy" in df.columns:
        sc = ax.scatter(df["index"], df["energy"], c=df["edge_weight"], s=6, vmin=0, vmax=1)
        plt.colorbar(sc, ax=ax, label="edge weight")
        ax.set_xlabel("index")
        ax.set_ylabel("E")
        return
    k = df.columns[0]
    for b in [c for c in df.columns if c.startswith("E")]:
        ax.plot(df[k], df[b], "k-", lw=0.6)
    ax.set_xlabel(k)
    ax.set_ylabel("E")


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("csv")
    parser.add_argument("-o", "--out", help="image file (default: <csv stem>.png)")
    parser.add_argument("--kz", type=float, default=0.0, help="kz slice for 3D k-maps")
    args = parser.parse_args()

    command, meta, df = read_table(args.csv)
    fig, ax = plt.subplots(figsize=(6, 4))
    if command == "sweep":
        plot_sweep(ax, df, meta)
    elif command == "kmap":
        plot_kmap(ax, df, meta, args.kz)
    elif command == "path":
        plot_path(ax, df, meta)
    elif command == "series":
        plot_series(ax, df, meta)
    elif command == "topo":
        plot_topo(ax, df, meta)
    elif command == "spectrum" and "site" not in df.columns:
        plot_spectrum(ax, df, meta)
    else:
        raise SystemExit(f"no plot for table of command '{command}'")
    fig.suptitle(meta.get("model", ""))
    fig.tight_layout()
    out = args.out or args.csv.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
