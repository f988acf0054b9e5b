"""Identification probability curves.

Sweeps the invariant x for several alphabet sizes m and prints/plots the
probability Q_m(x) that the receiver picks the transmitted branch. The
curves start at 1/m (pure chance among m equally likely branches at x = 0),
rise monotonically, and saturate near 1; larger alphabets sit strictly
lower at every x > 0 because there are more branches to beat.

Run:  python demos/01_identification_curves.py
"""

import csv
import pathlib

import numpy as np

from m_ary_channel import q_m

M_VALUES = (2, 8, 32, 100)
X_GRID = np.arange(0.0, 8.0 + 1e-9, 0.05)
OUT_DIR = pathlib.Path(__file__).resolve().parent / "output"


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    curves = {m: [q_m(float(x), m) for x in X_GRID] for m in M_VALUES}

    csv_path = OUT_DIR / "identification_curves.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "m", "q"])
        for m in M_VALUES:
            for x, q in zip(X_GRID, curves[m]):
                writer.writerow([f"{x:.17g}", m, f"{q:.17g}"])
    print(f"wrote {csv_path}")

    print("\n  x    " + "".join(f"Q_{m}(x)".rjust(12) for m in M_VALUES))
    for x in (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0):
        i = int(round(x / 0.05))
        row = "".join(f"{curves[m][i]:12.6f}" for m in M_VALUES)
        print(f"{x:5.2f}{row}")
    print("\nat x = 0 each column equals 1/m; every column rises toward 1.")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the PNG")
        return
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for m in M_VALUES:
        ax.plot(X_GRID, curves[m], label=f"m = {m}")
    ax.set_xlabel("invariant x = (1 - delta) g sqrt(B)")
    ax.set_ylabel("correct-identification probability q")
    ax.legend()
    ax.grid(alpha=0.3)
    png_path = OUT_DIR / "identification_curves.png"
    fig.savefig(png_path, dpi=150, bbox_inches="tight")
    print(f"wrote {png_path}")


if __name__ == "__main__":
    main()
