"""Plot the anisotropy surface written by `spinfloquet sweep --config configs/anisotropy_map.json`.

Example only; not a supported interface.

    python scripts/plot_anisotropy_map.py anisotropy_map.csv anisotropy_map.png
"""
import sys

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def main(csv_path, png_path):
    df = pd.read_csv(csv_path)
    df["H0_T"] = df["H0"] / 1e4
    short = df[df["tau0"] < 1e-9]
    long = df[df["tau0"] >= 1e-9]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.2))
    for ax, part, xlabel, scale in [
        (ax1, short, "τ0 (fs)", 1e15),
        (ax2, long, "τ0 (s)", 1.0),
    ]:
        grid = part.pivot(index="H0_T", columns="tau0", values="Delta_W")
        tau = grid.columns.to_numpy() * scale
        h0 = grid.index.to_numpy()
        values = grid.to_numpy()
        if ax is ax1:
            # normalize by the envelope so the fringes stand out
            env = part.pivot(index="H0_T", columns="tau0", values="Gamma").to_numpy() * grid.columns.to_numpy()
            env *= 1.0 / np.sqrt(1.0 + part.pivot(index="H0_T", columns="tau0", values="x").to_numpy() ** 2)
            with np.errstate(invalid="ignore", divide="ignore"):
                values = np.where(env > 0, values / env, np.nan)
            label = "ΔW / [(ω0/Ω) Γτ0]"
        else:
            ax.set_xscale("log")
            label = "ΔW"
        mesh = ax.pcolormesh(tau, h0, values, shading="auto")
        fig.colorbar(mesh, ax=ax, label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("H0 (T)")
    fig.suptitle("Spin-flip anisotropy at ħω0 = 1 eV, radiative decay")
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "anisotropy_map.png")
