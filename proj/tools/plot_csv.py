#!/usr/bin/env python3
"""Quick-look plots for pulsetool CSV output (pulses and offset profiles)."""
import argparse
import csv
import sys


def read_csv(path):
    with open(path, newline="") as f:
        rows = [r for r in csv.reader(f) if r and not r[0].startswith("#")]
    header, data = rows[0], rows[1:]
    cols = {name: [float(r[i]) for r in data] for i, name in enumerate(header)}
    return cols


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", help="pulse or profile CSV files")
    ap.add_argument("-o", "--out", help="save figure instead of showing it")
    args = ap.parse_args()

    import matplotlib

    if args.out:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    first = read_csv(args.csv[0])
    if "delta" in first:  # offset profile: log10 J vs delta
        fig, ax = plt.subplots()
        for path in args.csv:
            cols = read_csv(path)
            ax.plot(cols["delta"], cols["log10J"], label=path)
        ax.set_xlabel("delta")
        ax.set_ylabel("log10 J")
        ax.legend()
    else:  # pulse waveform: amplitude and phase vs time
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True)
        for path in args.csv:
            cols = read_csv(path)
            ax1.plot(cols["t"], cols["omega"], label=path)
            ax2.plot(cols["t"], cols["phi"])
        ax1.set_ylabel("omega")
        ax2.set_ylabel("phi")
        ax2.set_xlabel("t")
        ax1.legend()
    fig.tight_layout()
    if args.out:
        fig.savefig(args.out, dpi=150)
    else:
        plt.show()
    return 0


if __name__ == "__main__":
    sys.exit(main())
