"""Command-line front end.

Subcommands: solve, irf, spectrum, ident-local, ident-global, ident-cross,
distance, estimate, summarize.  Every run writes a ``manifest.json``
echoing the resolved configuration (including defaults and seeds) into the
output directory; re-running with the same manifest settings reproduces
numeric outputs byte-for-byte.  Tables are written twice: CSV rounded to 4
significant digits for reading, JSON at full precision for machines.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from .errors import InvalidParamsError, ToolkitError
from .ident.globl import (
    KLOptions,
    empirical_distance_map,
    kl_distance,
    lr_variance,
    mc_rejection_rate,
    minimize_kl_constrained,
    minimize_kl_cross_model,
)
from .ident.local import eigen_analysis, g_matrix
from .lre import impulse_response, solve_linear_re
from .models import presets
from .models.api import medium_model, small_model
from .models.params import MediumScaleParams, SmallScaleParams, load_params_json
from .spectrum import BUSINESS_CYCLE_BAND, FrequencyGrid

SMALL_STATE_REAL_RATE = ("i", "X")  # nominal rate minus expected inflation


def _sig4(x: float) -> float:
    if x == 0 or not np.isfinite(x):
        return x
    return float(np.format_float_positional(x, precision=4, unique=False, fractional=False))


def _round_frame(frame: pd.DataFrame) -> pd.DataFrame:
    out = frame.copy()
    for col in out.columns:
        if out[col].dtype.kind == "f":
            out[col] = out[col].map(_sig4)
    return out


def _write_manifest(out_dir: Path, command: str, config: dict) -> None:
    payload = {"command": command, "version": __version__, "config": config}
    (out_dir / "manifest.json").write_text(json.dumps(payload, indent=2, sort_keys=True, default=str))


def _parse_band(text: str | None):
    if text in (None, "", "full"):
        return None
    if text == "business-cycle":
        return BUSINESS_CYCLE_BAND
    try:
        lo, hi = (float(v) for v in text.split(":"))
        return ((lo, hi),)
    except ValueError as exc:
        raise InvalidParamsError(
            f"band must be 'full', 'business-cycle' or 'lo:hi', got {text!r}"
        ) from exc


def _load_params(spec: str, model_id: str):
    """Resolve --params: 'preset:<name>' or a JSON file path."""
    if spec.startswith("preset:"):
        name = spec.split(":", 1)[1]
        if name not in presets.PRESETS:
            raise InvalidParamsError(
                f"unknown preset {name!r}; available: {sorted(presets.PRESETS)}"
            )
        return presets.PRESETS[name], []
    cls = MediumScaleParams if model_id == "medium" else SmallScaleParams
    return load_params_json(spec, cls)


def _model_for(model_id: str, regime: str, params):
    if model_id == "medium":
        return medium_model(regime=regime, base=params)
    if model_id in ("small", "small-estimation", "reduced"):
        return small_model(regime=regime, base=params)
    raise InvalidParamsError(f"unknown model id {model_id!r}")


def _build_canonical(model_id: str, regime: str, params):
    from .models.medium import build_medium_scale
    from .models.small import (
        build_reduced_two_equation,
        build_small_scale,
        build_small_scale_estimation,
    )

    build_regime = "RE" if regime.upper() == "RE" else "DE"
    if model_id == "small":
        return build_small_scale(params, build_regime)
    if model_id == "small-estimation":
        return build_small_scale_estimation(params, build_regime)
    if model_id == "reduced":
        return build_reduced_two_equation(params, build_regime)
    if model_id == "medium":
        return build_medium_scale(params, regime=build_regime)
    raise InvalidParamsError(f"unknown model id {model_id!r}")


def _ensure_out(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    params, _ = _load_params(args.params, args.model)
    cf = _build_canonical(args.model, args.regime, params)
    sol = solve_linear_re(cf)
    out = _ensure_out(args)
    labels = list(sol.state_labels)
    pd.DataFrame(sol.theta1, index=labels, columns=labels).to_csv(out / "theta1.csv")
    pd.DataFrame(sol.theta_eps, index=labels, columns=list(sol.shock_labels)).to_csv(
        out / "theta_eps.csv"
    )
    pd.DataFrame(
        sol.theta_sun, index=labels, columns=[f"sun{i}" for i in range(sol.q)]
    ).to_csv(out / "theta_sun.csv")
    verdict = {
        "classification": sol.classification,
        "n_unstable": sol.determinacy.n_unstable,
        "n_expectation_errors": sol.determinacy.n_expectation_errors,
        "pi_rank": sol.determinacy.pi_rank,
        "existence_residual": sol.determinacy.existence_residual,
        "spectral_radius": sol.spectral_radius(),
    }
    (out / "determinacy.json").write_text(json.dumps(verdict, indent=2))
    _write_manifest(out, "solve", vars(args))
    print(f"{args.model} [{args.regime}]: {sol.classification}")
    return 0


def cmd_irf(args) -> int:
    params, _ = _load_params(args.params, args.model)
    cf = _build_canonical(args.model, args.regime, params)
    sol = solve_linear_re(cf)
    m = _model_for(args.model, args.regime, params)
    cov = m.shock_cov(m.vector(params)).sigma[: sol.k, : sol.k]
    projection = None
    if sol.q and params.has_sunspot_block:
        projection = params.projection
    rows = []
    labels = list(sol.state_labels)
    for j, shock in enumerate(sol.shock_labels):
        irf = impulse_response(
            sol, j, args.horizon, shock_cov=cov, sunspot_projection=projection
        )
        for name, col in zip(labels, irf.T):
            for h, v in enumerate(col):
                rows.append({"h": h, "shock": shock, "variable": name, "value": v})
        if all(s in labels for s in SMALL_STATE_REAL_RATE):
            real = irf[:, labels.index("i")] - irf[:, labels.index("X")]
            for h, v in enumerate(real):
                rows.append({"h": h, "shock": shock, "variable": "r_real", "value": v})
    frame = pd.DataFrame(rows)
    out = _ensure_out(args)
    frame.to_csv(out / "irf.csv", index=False)
    _write_manifest(out, "irf", vars(args))
    print(f"wrote {out / 'irf.csv'} ({len(frame)} rows)")
    return 0


def cmd_spectrum(args) -> int:
    params, _ = _load_params(args.params, args.model)
    m = _model_for(args.model, args.regime, params)
    grid = FrequencyGrid.uniform(args.grid)
    band = _parse_band(args.band)
    if band is not None:
        grid = grid.restrict(band)
    sdg = m.spectrum(m.vector(params), grid)
    cols = {"omega": sdg.grid.omegas}
    n = sdg.n_obs
    for i in range(n):
        for j in range(n):
            tag = f"{sdg.labels[i]}_{sdg.labels[j]}" if sdg.labels else f"{i}{j}"
            cols[f"re(f_{tag})"] = sdg.values[:, i, j].real
            cols[f"im(f_{tag})"] = sdg.values[:, i, j].imag
    out = _ensure_out(args)
    pd.DataFrame(cols).to_csv(out / "spectrum.csv", index=False)
    _write_manifest(out, "spectrum", vars(args))
    print(f"wrote {out / 'spectrum.csv'} ({sdg.grid.n_points} frequencies)")
    return 0


def cmd_ident_local(args) -> int:
    params, fixed = _load_params(args.params, args.model)
    m = _model_for(args.model, args.regime, params)
    if fixed:
        m.free_names = tuple(n for n in m.free_names if n not in fixed)
    grid = FrequencyGrid.uniform(args.grid)
    band = _parse_band(args.band)
    if band is not None:
        grid = grid.restrict(band)
    gm = g_matrix(m, grid=grid)
    rows = eigen_analysis(gm, tol_list=args.tols)
    out = _ensure_out(args)
    pd.DataFrame(gm.g, index=list(gm.param_names), columns=list(gm.param_names)).to_csv(
        out / "g_matrix.csv"
    )
    _round_frame(
        pd.DataFrame({"eigenvalue": gm.eigenvalues})
    ).to_csv(out / "eigenvalues.csv", index=False)
    pd.DataFrame(
        [{"tol": r.tol, "rank": r.rank, "deficiency": len(gm.param_names) - r.rank} for r in rows]
    ).to_csv(out / "rank_vs_tol.csv", index=False)
    (out / "ident_local.json").write_text(json.dumps({
        "param_names": list(gm.param_names),
        "eigenvalues": gm.eigenvalues.tolist(),
        "rank": gm.rank,
        "tol": gm.tol,
        "settings": gm.settings,
    }, indent=2))
    _write_manifest(out, "ident-local", vars(args))
    print(f"rank {gm.rank}/{len(gm.param_names)}; largest eigenvalue {gm.eigenvalues[0]:.4f}")
    return 0


def cmd_ident_global(args) -> int:
    params, fixed_file = _load_params(args.params, args.model)
    m = _model_for(args.model, args.regime, params)
    fixed = tuple(dict.fromkeys(list(fixed_file) + list(args.fixed or ())))
    band = _parse_band(args.band)
    opts = KLOptions(seed=args.seed, band=band, t_list=tuple(args.T), alpha=args.alpha)
    out = _ensure_out(args)
    minimizers = {}
    panel = []
    for c in args.c:
        rep = minimize_kl_constrained(m, c=c, fixed=fixed, opts=opts)
        minimizers[c] = rep
        row = {"c": c, "kl": rep.kl, "binding": rep.binding}
        row.update({f"p(T={t})": p for t, p in rep.empirical.items()})
        panel.append(row)
    mini_frame = pd.DataFrame(
        {f"c={c}": rep.gamma_c for c, rep in minimizers.items()},
        index=list(m.free_names),
    )
    mini_frame.insert(0, "gamma0", next(iter(minimizers.values())).gamma0)
    _round_frame(mini_frame.reset_index(names="param")).to_csv(
        out / "kl_minimizers.csv", index=False
    )
    _round_frame(pd.DataFrame(panel)).to_csv(out / "kl_panel.csv", index=False)
    (out / "ident_global.json").write_text(json.dumps({
        str(c): {
            "gamma_c": rep.gamma_c.tolist(),
            "kl": rep.kl,
            "binding": rep.binding,
            "empirical": rep.empirical,
            "settings": rep.settings,
        } for c, rep in minimizers.items()
    }, indent=2, default=str))
    _write_manifest(out, "ident-global", vars(args))
    for row in panel:
        print(f"c={row['c']}: KL={row['kl']:.4e} binding={row['binding']}")
    return 0


def cmd_ident_cross(args) -> int:
    params, _ = _load_params(args.params, args.model)
    null_model = _model_for(args.model, args.regime, params)
    constraints = {}
    for item in args.constraint or ():
        name, _, value = item.partition("=")
        if not value:
            raise InvalidParamsError(f"constraint must be name=value, got {item!r}")
        constraints[name] = float(value)
    alt_regime = args.alt_regime or ("RE" if constraints.get("theta") == 0.0 else args.regime)
    if args.model == "medium":
        alt = medium_model(regime=alt_regime, base=params if alt_regime != "RE" else params.replace(theta=0.0))
    else:
        base_alt = params.replace(theta=0.0) if alt_regime == "RE" else params
        alt = small_model(regime=alt_regime, base=base_alt)
    band = _parse_band(args.band)
    opts = KLOptions(seed=args.seed, band=band, t_list=tuple(args.T), alpha=args.alpha)
    rep = minimize_kl_cross_model(null_model, alt, constraints, opts=opts)
    out = _ensure_out(args)
    frame = pd.DataFrame({
        "param": list(alt.free_names),
        "gamma_alt": rep.gamma_alt,
    })
    _round_frame(frame).to_csv(out / "cross_minimizer.csv", index=False)
    payload = {
        "constraints": rep.constraints,
        "kl": rep.kl,
        "empirical": rep.empirical,
        "gamma_alt": dict(zip(alt.free_names, rep.gamma_alt.tolist())),
        "settings": rep.settings,
    }
    (out / "cross_model.json").write_text(json.dumps(payload, indent=2, default=str))
    _write_manifest(out, "ident-cross", vars(args))
    print(f"cross-model KL={rep.kl:.4e}; p: " + ", ".join(
        f"T={t}: {p:.4f}" for t, p in rep.empirical.items()))
    return 0


def cmd_distance(args) -> int:
    params0, _ = _load_params(args.gamma0, args.model)
    params1, _ = _load_params(args.gamma1, args.model)
    m0 = _model_for(args.model, args.regime, params0)
    m1 = _model_for(args.model, args.alt_regime or args.regime, params1)
    band = _parse_band(args.band)
    grid = FrequencyGrid.uniform(args.grid)
    if band is not None:
        grid = grid.restrict(band)
    g0, g1 = m0.vector(params0), m1.vector(params1)
    f0, f1 = m0.spectrum(g0, grid), m1.spectrum(g1, grid)
    kl = kl_distance(f0, f1)
    result = {
        "kl": kl,
        "lr_variance": lr_variance(f0, f1),
        "empirical": empirical_distance_map(
            m0, g0, g1, t_list=tuple(args.T), alpha=args.alpha,
            model1=m1, method=args.method, band=band, kl=kl,
        ),
        "asymptotic": empirical_distance_map(
            m0, g0, g1, t_list=tuple(args.T), alpha=args.alpha,
            model1=m1, method="asymptotic", band=band,
        ),
    }
    if args.monte_carlo:
        mc = {}
        for t in args.T:
            rate, se = mc_rejection_rate(
                m0, g0, g1, alpha=args.alpha, T=int(t), nrep=args.nrep,
                seed=args.seed, model1=m1, band=band,
            )
            mc[int(t)] = {"rate": rate, "se": se}
        result["monte_carlo"] = mc
    out = _ensure_out(args)
    (out / "distance.json").write_text(json.dumps(result, indent=2))
    _write_manifest(out, "distance", vars(args))
    print(f"KL={kl:.6e}; " + ", ".join(f"p(T={t})={p:.4f}" for t, p in result["empirical"].items()))
    return 0


def cmd_estimate(args) -> int:
    from .estimation import SMCSettings, load_observables, posterior_summary, smc_estimate_small

    data = load_observables(args.data, demean=args.demean, columns=("YGR", "INFL", "INT"))
    settings = SMCSettings(
        n_particles=args.n_particles, n_stages=args.n_stages,
        lam=args.lam, init_scale=args.init_scale,
        target_accept=args.target_accept, blocks=args.blocks,
        workers=args.workers,
    )
    regime = "indeterminacy" if args.regime == "indeterminacy" else "determinacy"
    ps = smc_estimate_small(data, regime=regime, settings=settings, seed=args.seed)
    summary = posterior_summary(ps)
    out = _ensure_out(args)
    frame = pd.DataFrame(
        [{"param": k, "mean": v["mean"], "q05": v["q05"], "q95": v["q95"]}
         for k, v in summary.items()]
    )
    _round_frame(frame).to_csv(out / "posterior_summary.csv", index=False)
    (out / "posterior_summary.json").write_text(json.dumps(summary, indent=2))
    diag = pd.DataFrame({
        "stage": np.arange(1, ps.stage + 1),
        "phi": ps.phi_history,
        "ess": ps.ess_history,
        "accept": ps.accept_history,
        "scale": ps.scale_history,
        "resampled": ps.resampled,
    })
    diag.to_csv(out / "smc_diagnostics.csv", index=False)
    if args.dump_particles:
        dump = pd.DataFrame(ps.particles, columns=list(ps.names))
        dump["log_weight"] = ps.log_weights
        dump.to_csv(out / "particles.csv", index=False)
    _write_manifest(out, "estimate", vars(args))
    print(f"estimation done: {ps.stage} stages, final ESS {ps.ess:.1f}, "
          f"rejected-regime draws {ps.rejected_regime_draws}")
    return 0


def cmd_summarize(args) -> int:
    from .estimation import weighted_quantile

    frame = pd.read_csv(args.particles)
    if "log_weight" not in frame.columns:
        raise InvalidParamsError("particles file must carry a log_weight column")
    logw = frame.pop("log_weight").to_numpy()
    w = np.exp(logw - logw.max())
    w /= w.sum()
    rows = []
    for col in frame.columns:
        vals = frame[col].to_numpy(dtype=float)
        rows.append({
            "param": col,
            "mean": float(np.sum(w * vals)),
            "q05": weighted_quantile(vals, w, 0.05),
            "q95": weighted_quantile(vals, w, 0.95),
        })
    out = _ensure_out(args)
    _round_frame(pd.DataFrame(rows)).to_csv(out / "posterior_summary.csv", index=False)
    _write_manifest(out, "summarize", vars(args))
    print(f"wrote {out / 'posterior_summary.csv'}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsgeident",
        description="Frequency-domain identification toolkit for DSGE models",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        p.add_argument("--out-dir", default="out", help="output directory")
        if model:
            p.add_argument("--model", default="small",
                           choices=["small", "small-estimation", "reduced", "medium"])
            p.add_argument("--regime", default="DE", choices=["DE", "RE", "indeterminacy"])
            p.add_argument("--params", default=None,
                           help="preset:<name> or parameter JSON path")

    def default_params(args):
        if getattr(args, "params", None) is None:
            args.params = {
                ("small", "DE"): "preset:small-de",
                ("small", "RE"): "preset:small-re",
                ("small", "indeterminacy"): "preset:small-indet",
                ("medium", "DE"): "preset:medium-de",
                ("medium", "RE"): "preset:medium-de",
            }.get((args.model.replace("-estimation", "").replace("reduced", "small"), args.regime),
                  "preset:small-de")
        return args

    p = sub.add_parser("solve", help="solve a model and export its solution")
    common(p)
    p.set_defaults(func=cmd_solve, postprocess=default_params)

    p = sub.add_parser("irf", help="impulse responses to one-s.d. shocks")
    common(p)
    p.add_argument("--horizon", type=int, default=40)
    p.set_defaults(func=cmd_irf, postprocess=default_params)

    p = sub.add_parser("spectrum", help="spectral density grid as CSV")
    common(p)
    p.add_argument("--grid", type=int, default=5000)
    p.add_argument("--band", default="full")
    p.set_defaults(func=cmd_spectrum, postprocess=default_params)

    p = sub.add_parser("ident-local", help="local identification (G matrix)")
    common(p)
    p.add_argument("--grid", type=int, default=5000)
    p.add_argument("--band", default="full")
    p.add_argument("--tols", type=float, nargs="+",
                   default=[1e-6, 1e-8, 1e-10, 1e-12])
    p.set_defaults(func=cmd_ident_local, postprocess=default_params)

    p = sub.add_parser("ident-global", help="constrained KL minimization panels")
    common(p)
    p.add_argument("--c", type=float, nargs="+", default=[0.1, 0.5, 1.0])
    p.add_argument("--fixed", nargs="*", default=None, help="parameters held at gamma0")
    p.add_argument("--T", type=int, nargs="+", default=[80, 150, 200, 1000])
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--band", default="full")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ident_global, postprocess=default_params)

    p = sub.add_parser("ident-cross", help="cross-model KL minimization")
    common(p)
    p.add_argument("--constraint", action="append",
                   help="name=value equality constraint on the alternative model")
    p.add_argument("--alt-regime", default=None, choices=["DE", "RE", "indeterminacy"])
    p.add_argument("--T", type=int, nargs="+", default=[80, 150, 200, 1000])
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--band", default="full")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ident_cross, postprocess=default_params)

    p = sub.add_parser("distance", help="KL and empirical distances between two points")
    common(p, model=True)
    p.add_argument("--gamma0", required=True, help="preset:<name> or JSON path")
    p.add_argument("--gamma1", required=True, help="preset:<name> or JSON path")
    p.add_argument("--alt-regime", default=None, choices=["DE", "RE", "indeterminacy"])
    p.add_argument("--T", type=int, nargs="+", default=[80, 150, 200, 1000])
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--method", default="exact", choices=["exact", "circulant", "asymptotic"])
    p.add_argument("--grid", type=int, default=5000)
    p.add_argument("--band", default="full")
    p.add_argument("--monte-carlo", action="store_true")
    p.add_argument("--nrep", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_distance, postprocess=default_params)

    p = sub.add_parser("estimate", help="SMC posterior sampling (small model)")
    common(p, model=False)
    p.add_argument("--data", required=True, help="observables CSV (YGR, INFL, INT)")
    p.add_argument("--regime", default="determinacy",
                   choices=["determinacy", "indeterminacy"])
    p.add_argument("--demean", action="store_true")
    p.add_argument("--n-particles", type=int, default=3000)
    p.add_argument("--n-stages", type=int, default=200)
    p.add_argument("--lam", type=float, default=2.0)
    p.add_argument("--init-scale", type=float, default=0.5)
    p.add_argument("--target-accept", type=float, default=0.25)
    p.add_argument("--blocks", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-particles", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("summarize", help="posterior summary from a particle dump")
    common(p, model=False)
    p.add_argument("--particles", required=True)
    p.set_defaults(func=cmd_summarize)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if hasattr(args, "postprocess"):
        args = args.postprocess(args)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
