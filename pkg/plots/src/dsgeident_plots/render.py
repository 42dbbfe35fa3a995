"""Render figures from dsgeident CLI output CSVs.

Figure kinds:

* ``irf-compare`` - overlay two impulse-response runs (first input solid
  blue, second dashed red) on a variables-by-shocks panel grid.
* ``spectrum``    - diagonal spectral densities per observable.
* ``scree``       - eigenvalue scree of a local-identification run.
* ``smc-diag``    - ESS and acceptance rate per tempering stage.

Inputs are the published CSV schemas only; nothing here imports the
primary package.  Rendering is deterministic: fixed figure geometry and
scrubbed metadata, so equal inputs give equal bytes.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import matplotlib
matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

KINDS = ("irf-compare", "spectrum", "scree", "smc-diag")

IRF_COLUMNS = {"h", "shock", "variable", "value"}
SMC_COLUMNS = {"stage", "ess", "accept"}
SCREE_COLUMNS = {"eigenvalue"}

#: Default panel layout for irf-compare figures.
IRF_VARIABLES = ("y", "pi", "i", "r_real")
IRF_SHOCKS = ("eps_a", "eps_g")


class SchemaMismatchError(ValueError):
    """Input CSV does not carry the columns a figure kind requires."""


@dataclass
class PlotJob:
    kind: str
    inputs: tuple[str, ...]
    output: str
    labels: tuple[str, ...] = ("baseline", "alternative")
    variables: tuple[str, ...] = IRF_VARIABLES
    shocks: tuple[str, ...] = IRF_SHOCKS
    dpi: int = 120
    style: dict = field(default_factory=dict)


def _read_csv(path: str, required: set[str], kind: str) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = sorted(required - set(frame.columns))
    if missing:
        raise SchemaMismatchError(
            f"{kind}: {path} is missing column(s) {missing}; found {sorted(frame.columns)}"
        )
    if frame.empty:
        raise SchemaMismatchError(f"{kind}: {path} has no rows")
    return frame


def _savefig(fig, path: str, dpi: int) -> None:
    fig.savefig(path, dpi=dpi, metadata={"Software": None})
    plt.close(fig)


def render_irf_compare(job: PlotJob) -> None:
    if len(job.inputs) != 2:
        raise SchemaMismatchError("irf-compare needs exactly two input CSVs")
    frames = [_read_csv(p, IRF_COLUMNS, "irf-compare") for p in job.inputs]
    variables = [v for v in job.variables
                 if all((f["variable"] == v).any() for f in frames)]
    shocks = [s for s in job.shocks
              if all((f["shock"] == s).any() for f in frames)]
    if not variables or not shocks:
        raise SchemaMismatchError(
            "irf-compare: inputs share no requested variable/shock series "
            f"(wanted variables {job.variables}, shocks {job.shocks})"
        )
    nrow, ncol = len(variables), len(shocks)
    fig, axes = plt.subplots(nrow, ncol, figsize=(4.0 * ncol, 2.6 * nrow),
                             sharex=True, squeeze=False)
    styles = [
        {"color": "tab:blue", "linestyle": "-", "label": job.labels[0]},
        {"color": "tab:red", "linestyle": "--", "label": job.labels[1]},
    ]
    for i, var in enumerate(variables):
        for j, shock in enumerate(shocks):
            ax = axes[i][j]
            for frame, style in zip(frames, styles):
                sel = frame[(frame["variable"] == var) & (frame["shock"] == shock)]
                sel = sel.sort_values("h")
                ax.plot(sel["h"], sel["value"], linewidth=1.6, **style)
            ax.axhline(0.0, color="k", linewidth=0.6, alpha=0.5)
            ax.set_title(f"{var} to {shock}", fontsize=9)
            if i == nrow - 1:
                ax.set_xlabel("quarters")
    axes[0][0].legend(fontsize=8, frameon=False)
    fig.tight_layout()
    _savefig(fig, job.output, job.dpi)


def render_spectrum(job: PlotJob) -> None:
    frame = _read_csv(job.inputs[0], {"omega"}, "spectrum")
    diag_cols = [c for c in frame.columns if c.startswith("re(f_")]
    diag_cols = [c for c in diag_cols
                 if (lambda parts: len(parts) == 2 and parts[0] == parts[1])(
                     c[len("re(f_"):-1].split("_"))]
    if not diag_cols:
        raise SchemaMismatchError(
            "spectrum: no diagonal re(f_<v>_<v>) columns found in "
            f"{sorted(frame.columns)}"
        )
    pos = frame[frame["omega"] >= 0]
    fig, axes = plt.subplots(1, len(diag_cols), figsize=(3.6 * len(diag_cols), 2.8))
    axes = np.atleast_1d(axes)
    for ax, col in zip(axes, diag_cols):
        ax.plot(pos["omega"], pos[col], color="tab:blue", linewidth=1.4)
        ax.set_title(col[len("re(f_"):-1], fontsize=9)
        ax.set_xlabel("omega")
    fig.tight_layout()
    _savefig(fig, job.output, job.dpi)


def render_scree(job: PlotJob) -> None:
    frame = _read_csv(job.inputs[0], SCREE_COLUMNS, "scree")
    lam = frame["eigenvalue"].to_numpy(dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.semilogy(np.arange(1, lam.size + 1), np.maximum(lam, 1e-300), "o-",
                color="tab:blue", linewidth=1.4)
    ax.set_xlabel("eigenvalue rank")
    ax.set_ylabel("eigenvalue")
    ax.set_title("identification eigenvalue scree", fontsize=10)
    fig.tight_layout()
    _savefig(fig, job.output, job.dpi)


def render_smc_diag(job: PlotJob) -> None:
    frame = _read_csv(job.inputs[0], SMC_COLUMNS, "smc-diag")
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    ax.plot(frame["stage"], frame["ess"], color="tab:blue", linewidth=1.5, label="ESS")
    ax.set_xlabel("stage")
    ax.set_ylabel("effective sample size", color="tab:blue")
    ax2 = ax.twinx()
    ax2.plot(frame["stage"], frame["accept"], color="tab:red", linewidth=1.2,
             label="acceptance")
    ax2.set_ylabel("acceptance rate", color="tab:red")
    ax2.set_ylim(0, 1)
    fig.tight_layout()
    _savefig(fig, job.output, job.dpi)


_RENDERERS = {
    "irf-compare": render_irf_compare,
    "spectrum": render_spectrum,
    "scree": render_scree,
    "smc-diag": render_smc_diag,
}


def render(job: PlotJob) -> str:
    if job.kind not in _RENDERERS:
        raise SchemaMismatchError(f"unknown figure kind {job.kind!r}; choose from {KINDS}")
    _RENDERERS[job.kind](job)
    return job.output


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render", description=__doc__)
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--labels", nargs=2, default=("baseline", "alternative"))
    parser.add_argument("--variables", nargs="+", default=list(IRF_VARIABLES))
    parser.add_argument("--shocks", nargs="+", default=list(IRF_SHOCKS))
    parser.add_argument("--dpi", type=int, default=120)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = PlotJob(
        kind=args.kind, inputs=tuple(args.inputs), output=args.out,
        labels=tuple(args.labels), variables=tuple(args.variables),
        shocks=tuple(args.shocks), dpi=args.dpi,
    )
    try:
        out = render(job)
    except (SchemaMismatchError, FileNotFoundError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
