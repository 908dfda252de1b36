#!/usr/bin/env python3
# densemimo: uplink spectral efficiency of dense multicell massive MIMO networks
# Copyright 2026 The densemimo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Render figures from the CSV files written by `densemimo analytic|simulate`.

    python scripts/plot_figures.py RESULTS_DIR [--out FIGDIR]

Looks for fig2_ase.csv, fig3_uatf.csv, fig4_nmse.csv, fig5_zeta.csv,
fig6_thresholds.csv, fig7_required_m.csv and fig8_ase_mk.csv; missing files
are skipped.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

SCHEME_STYLE = {"MR": "o-", "ZF": "s-", "S-MMSE": "^-", "M-MMSE": "d-"}


def load(path):
    return pd.read_csv(path, comment="#") if path.exists() else None


def fig2(df, out):
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, corr in zip(axes, [True, False]):
        part = df[df.delta_deg != "none"] if corr else df[df.delta_deg == "none"]
        for scheme, g in part.groupby("scheme"):
            ax.errorbar(g["lambda"], g.ase, yerr=g.ase_ci, fmt=SCHEME_STYLE.get(scheme, "-"), label=scheme)
        ax.set_xscale("log")
        ax.set_xlabel("BS density [BS/km²]")
        ax.set_title("Δ = 10°" if corr else "uncorrelated")
    axes[0].set_ylabel("ASE [bit/s/Hz/km²]")
    axes[0].legend()
    fig.savefig(out / "fig2_ase.png", dpi=150, bbox_inches="tight")


def fig3(df, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for m, g in df.groupby("M"):
        ax.plot(g["lambda"], g.se_mr, "-", label=f"MR, M/K={m / g.K.iloc[0]:g}")
        ax.plot(g["lambda"], g.se_zf, "--", label=f"ZF, M/K={m / g.K.iloc[0]:g}")
    first = df[df.M == df.M.min()]
    ax.plot(first["lambda"], first.rate_inf, "k:", label="M → ∞")
    ax.set_xscale("log")
    ax.set_xlabel("BS density [BS/km²]")
    ax.set_ylabel("SE [bit/s/Hz/UE]")
    ax.legend()
    fig.savefig(out / "fig3_uatf.png", dpi=150, bbox_inches="tight")


def fig4(df, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for (delta, zeta), g in df.groupby(["delta_deg", "zeta"]):
        label = ("uncorrelated" if delta == "none" else f"Δ={delta}°") + f", ζ={zeta}"
        ax.errorbar(g["lambda"], g.nmse, yerr=g.nmse_ci, fmt="o-", label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("BS density [BS/km²]")
    ax.set_ylabel("NMSE")
    ax.legend(fontsize=8)
    fig.savefig(out / "fig4_nmse.png", dpi=150, bbox_inches="tight")


def fig5(df, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    best = df.loc[df.groupby("lambda").rate_inf.idxmax()]
    ax.plot(best["lambda"], best.zeta, "o", ms=3, label="grid argmax")
    ax.plot(best["lambda"], best.zeta_opt, "-", label="Lambert W")
    ax.set_xscale("log")
    ax.set_xlabel("BS density [BS/km²]")
    ax.set_ylabel("optimal ζ")
    ax.legend()
    fig.savefig(out / "fig5_zeta.png", dpi=150, bbox_inches="tight")


def fig6(df, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for zeta, g in df.groupby("zeta"):
        ax.plot(g["lambda"], g.m_threshold_mr / g.K, "-", label=f"MR, ζ={zeta:g}")
        ax.plot(g["lambda"], g.m_threshold_zf / g.K, "--", label=f"ZF, ζ={zeta:g}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("BS density [BS/km²]")
    ax.set_ylabel("M/K where pilot contamination = interference")
    ax.legend()
    fig.savefig(out / "fig6_thresholds.png", dpi=150, bbox_inches="tight")


def fig7(df, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for scheme, g in df.groupby("scheme"):
        ax.plot(g.delta_deg.astype(float), g.M / g.K, SCHEME_STYLE.get(scheme, "-"), label=scheme)
    ax.set_xlabel("angular spread Δ [deg]")
    ax.set_ylabel("M/K for SE = 3 bit/s/Hz/UE")
    ax.legend()
    fig.savefig(out / "fig7_required_m.png", dpi=150, bbox_inches="tight")


def fig8(df, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for (zeta, scheme), g in df.groupby(["zeta", "scheme"]):
        ax.plot(g.M / g.K, g.ase, SCHEME_STYLE.get(scheme, "-"), label=f"{scheme}, ζ={zeta}")
    ax.set_xlabel("M/K")
    ax.set_ylabel("ASE [bit/s/Hz/km²]")
    ax.legend(fontsize=7, ncol=2)
    fig.savefig(out / "fig8_ase_mk.png", dpi=150, bbox_inches="tight")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("results", type=Path)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    plots = {
        "fig2_ase.csv": fig2,
        "fig3_uatf.csv": fig3,
        "fig4_nmse.csv": fig4,
        "fig5_zeta.csv": fig5,
        "fig6_thresholds.csv": fig6,
        "fig7_required_m.csv": fig7,
        "fig8_ase_mk.csv": fig8,
    }
    for name, plot in plots.items():
        df = load(args.results / name)
        if df is None:
            print(f"skip {name}: not found")
            continue
        plot(df, args.out)
        print(f"wrote {args.out / name.replace('.csv', '.png')}")


if __name__ == "__main__":
    main()
