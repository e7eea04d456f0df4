"""Command line interface.

Subcommands: estimate (one fit on one sample), calibrate (threshold-constant
study), benchmark (method and dictionary comparison panels), analyze
(restricted-eigenvalue report), gram (Gram matrix diagnostics).

Options can come from an INI file (section name = subcommand) passed with
--config; explicit flags override file values, and unknown file keys are
rejected.  Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 combinatorial budget exceeded.
"""

import configparser
import functools
import json
import os
import sys

import click
import numpy as np

from . import __version__
from .analysis import structural_report
from .densities import (DENSITY_IDS, density_eval, get_density, l2_risk,
                        sample)
from .dictionary import KINDS, build_dictionary, gram, synthesize
from .empirical import compute_stats
from .errors import (BudgetExceededError, ConfigError, IllConditionedError,
                     SolverError)
from .experiments import (CALIBRATION_FIELDS, PANEL_FIELDS, RESULT_FIELDS,
                          METHODS, ExperimentConfig, calibration_sweep,
                          result_rows, run_experiment, write_csv, write_json)

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_BUDGET = 4


def _out_path(path):
    """Relative output paths land in $SPARSEDENSITY_OUT_DIR when set."""
    base = os.environ.get("SPARSEDENSITY_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _load_config_section(path, section, known_keys):
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file {path!r} not found or unreadable")
    if not parser.has_section(section):
        return {}
    values = dict(parser.items(section))
    unknown = sorted(set(values) - set(known_keys))
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {', '.join(unknown)}")
    return values


def _merge(ctx, config_path, known_keys):
    """File values fill in parameters the user left at their defaults."""
    if not config_path:
        return
    section = ctx.command.name
    file_values = _load_config_section(config_path, section, known_keys)
    for key, raw in file_values.items():
        src = ctx.get_parameter_source(key)
        if src is not None and src.name != "DEFAULT":
            continue  # explicit flag wins
        param = next(p for p in ctx.command.params if p.name == key)
        try:
            ctx.params[key] = param.type.convert(raw, param, ctx)
        except click.UsageError as exc:
            raise ConfigError(f"bad value for {key!r} in [{section}]: {exc}")


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"configuration error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except (SolverError, IllConditionedError) as exc:
            click.echo(f"solver error: {exc}", err=True)
            sys.exit(EXIT_SOLVER)
        except BudgetExceededError as exc:
            click.echo(f"budget exceeded: {exc}", err=True)
            sys.exit(EXIT_BUDGET)
    return wrapper


@click.group()
@click.version_option(version=__version__, prog_name="sparsedensity")
def main():
    """Sparse density estimation on [0,1] with data-driven constraints."""


@main.command()
@click.option("--density", default="uniform",
              type=click.Choice(DENSITY_IDS, case_sensitive=False))
@click.option("--dict", "dictionary", default="haar",
              type=click.Choice(KINDS, case_sensitive=False))
@click.option("--n", default=500, type=int, help="sample size")
@click.option("--gamma", default=1.01, type=float,
              help="threshold constant")
@click.option("--method", default="dantzig",
              type=click.Choice(METHODS, case_sensitive=False))
@click.option("--seed", default=0, type=int)
@click.option("--out", default="estimate.json", type=click.Path(),
              help="output JSON path (a matching .csv curve is also written)")
@click.option("--curve-points", default=1024, type=int)
@click.option("--config", "config_path", default=None, type=click.Path())
@click.pass_context
@_handle_errors
def estimate(ctx, density, dictionary, n, gamma, method, seed, out,
             curve_points, config_path):
    """Fit one estimate on one simulated sample and write it out."""
    _merge(ctx, config_path, ["density", "dictionary", "n", "gamma",
                              "method", "seed", "out", "curve_points"])
    p = ctx.params
    cfg = ExperimentConfig(density=p["density"], dictionary=p["dictionary"],
                           n=p["n"], gamma=p["gamma"], method=p["method"],
                           replications=1, seed=p["seed"]).validate()
    result = run_experiment(cfg)
    rec = result.replications[0]
    if "error" in rec:
        raise SolverError(rec["error"], status=rec["status"])

    # recompute the winning coefficient vector for the output files
    d = build_dictionary(cfg.dictionary, cfg.n)
    dens = get_density(cfg.density)
    smp = sample(dens, cfg.n, cfg.seed)
    stats = compute_stats(smp, d, cfg.gamma)
    from .experiments import _solve_for_method
    from .empirical import non_adaptive_eta

    eta_vec = stats.eta
    if cfg.method == "dantzig-nonadaptive":
        eta_vec = non_adaptive_eta(dens.sup_norm, d.sup_norms, cfg.gamma,
                                   d.M, cfg.n)
    G = gram(d).entries
    orthonormal = d.kind in ("fou", "hist", "haar", "wav")
    vec, report = _solve_for_method(cfg.method, G, stats, eta_vec,
                                    cfg.solver, orthonormal)

    payload = {
        "config": {"density": cfg.density, "dictionary": cfg.dictionary,
                   "n": cfg.n, "gamma": cfg.gamma, "method": cfg.method,
                   "seed": cfg.seed},
        "coefficients": vec.values.tolist(),
        "support": vec.support.tolist(),
        "l1_norm": vec.l1_norm,
        "risk": rec["risk"],
        "report": vars(report),
    }
    if cfg.method == "dantzig-ls":
        # also report the constrained solution the refit started from
        base, _ = _solve_for_method("dantzig", G, stats, eta_vec,
                                    cfg.solver, orthonormal)
        payload["base_coefficients"] = base.values.tolist()
        payload["base_risk"] = l2_risk(dens, d, base.values)
    out_json = _out_path(p["out"])
    write_json(out_json, payload, {"config_digest": cfg.digest()})

    xs = np.linspace(0.0, 1.0, p["curve_points"])
    fx = synthesize(d, vec.values, xs)
    f0 = density_eval(dens, xs)
    curve_path = out_json.rsplit(".", 1)[0] + ".csv"
    rows = [{"x": float(x), "estimate": float(v), "truth": float(t)}
            for x, v, t in zip(xs, fx, f0)]
    write_csv(curve_path, rows, ["x", "estimate", "truth"],
              {"config_digest": cfg.digest(), "kind": "density-curve",
               "density": cfg.density, "method": cfg.method})
    click.echo(f"risk {rec['risk']:.6e}  support {vec.support.size}  "
               f"l1 {vec.l1_norm:.4f}  -> {out_json}, {curve_path}")


@main.command()
@click.option("--gammas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,"
              "1.0,1.1,1.2,1.3,1.4,1.5", help="comma-separated grid")
@click.option("--j-values", "j_values", default="4,5,6,7,8,9,10",
              help="comma-separated exponents, n = 2^J")
@click.option("--reps", default=20, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", default="calibration.csv", type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
@click.pass_context
@_handle_errors
def calibrate(ctx, gammas, j_values, reps, seed, out, config_path):
    """Mean soft-threshold risk over a (gamma, n) grid, uniform density."""
    _merge(ctx, config_path, ["gammas", "j_values", "reps", "seed", "out"])
    p = ctx.params
    try:
        gamma_grid = [float(g) for g in p["gammas"].split(",") if g.strip()]
        Js = [int(j) for j in p["j_values"].split(",") if j.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid specification: {exc}")
    if not gamma_grid or not Js or min(gamma_grid) <= 0 or min(Js) < 2:
        raise ConfigError("need positive gammas and J >= 2")
    rows, gamma_min = calibration_sweep(gamma_grid, Js, p["reps"], p["seed"])
    meta = {"kind": "calibration", "reps": p["reps"], "seed": p["seed"],
            "gamma_min": json.dumps({str(k): v for k, v in gamma_min.items()})}
    out = _out_path(p["out"])
    write_csv(out, rows, CALIBRATION_FIELDS, meta)
    for J in Js:
        click.echo(f"n=2^{J}: gamma_min = {gamma_min[J]}")
    click.echo(f"-> {out}")


_PANELS = {
    "dantzig-vs-lasso": [("dantzig", "mix2"), ("lasso", "mix2")],
    "adaptive-vs-nonadaptive": [
        ("dantzig", "mix2"), ("dantzig-nonadaptive", "mix2")],
    "dantzig-vs-refit": [("dantzig", "mix2"), ("dantzig-ls", "mix2")],
    "dictionary-choice": [("dantzig", "mix"), ("dantzig", "fou"),
                          ("dantzig", "hist")],
}


@main.command()
@click.option("--n", default=500, type=int)
@click.option("--reps", default=100, type=int)
@click.option("--gamma", default=1.01, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--threads", default=1, type=int)
@click.option("--out-dir", default="benchmark", type=click.Path())
@click.option("--panel", default="all",
              type=click.Choice(["all"] + list(_PANELS)))
@click.option("--config", "config_path", default=None, type=click.Path())
@click.pass_context
@_handle_errors
def benchmark(ctx, n, reps, gamma, seed, threads, out_dir, panel,
              config_path):
    """Replicated method and dictionary comparisons, boxplot statistics out."""
    _merge(ctx, config_path, ["n", "reps", "gamma", "seed", "threads",
                              "out_dir", "panel"])
    p = ctx.params
    out_dir = _out_path(p["out_dir"])
    panels = list(_PANELS) if p["panel"] == "all" else [p["panel"]]
    for name in panels:
        rows = []
        raw_rows = []
        densities = ("f4",) if name == "dictionary-choice" else DENSITY_IDS[1:]
        for dens in densities:
            for method, kind in _PANELS[name]:
                cfg = ExperimentConfig(density=dens, dictionary=kind,
                                       n=p["n"], gamma=p["gamma"],
                                       method=method,
                                       replications=p["reps"],
                                       seed=p["seed"],
                                       threads=p["threads"]).validate()
                result = run_experiment(cfg)
                raw_rows.extend(result_rows(result))
                rows.append({"comparison": name, "density": dens,
                             "method": method, "dictionary": kind,
                             "n": p["n"], "reps": p["reps"],
                             **result.aggregate})
                click.echo(f"{name} {dens} {method}/{kind}: mean risk "
                           f"{result.aggregate['mean']:.4f}")
        meta = {"kind": "benchmark-panel", "comparison": name, "n": p["n"],
                "reps": p["reps"], "gamma": p["gamma"], "seed": p["seed"]}
        write_csv(f"{out_dir}/{name}.csv", rows, PANEL_FIELDS, meta)
        write_csv(f"{out_dir}/{name}-replications.csv", raw_rows,
                  RESULT_FIELDS, meta)
    click.echo(f"-> {out_dir}/")


@main.command()
@click.option("--dict", "dictionary", default=None,
              type=click.Choice(KINDS, case_sensitive=False))
@click.option("--n", default=None, type=int)
@click.option("--gram-json", default=None, type=click.Path(exists=True),
              help="JSON file with an explicit Gram matrix under key 'gram'")
@click.option("--l-max", default=4, type=int)
@click.option("--s", default=None, type=int,
              help="check one specific (s, l) pair instead of the defaults")
@click.option("--l", default=None, type=int)
@click.option("--out", default=None, type=click.Path(),
              help="optional JSON report path")
@click.option("--config", "config_path", default=None, type=click.Path())
@click.pass_context
@_handle_errors
def analyze(ctx, dictionary, n, gram_json, l_max, s, l, out, config_path):
    """Restricted eigenvalues, correlations and assumption checks."""
    _merge(ctx, config_path, ["dictionary", "n", "gram_json", "l_max",
                              "s", "l", "out"])
    p = ctx.params
    if p["gram_json"]:
        with open(p["gram_json"]) as fh:
            G = np.asarray(json.load(fh)["gram"], dtype=float)
    elif p["dictionary"] and p["n"]:
        G = gram(build_dictionary(p["dictionary"], p["n"])).entries
    else:
        raise ConfigError("provide either --gram-json or both --dict and --n")
    if (p["s"] is None) != (p["l"] is None):
        raise ConfigError("--s and --l must be given together")
    pairs = [(p["s"], p["l"])] if p["s"] is not None else None
    report = structural_report(G, p["l_max"], pairs=pairs)
    click.echo(f"M = {report.M}, l_max = {report.l_max}")
    click.echo(" l   phi_min        phi_max")
    for l in sorted(report.phi_min):
        click.echo(f"{l:2d}   {report.phi_min[l]:<12.6g}   "
                   f"{report.phi_max[l]:<12.6g}")
    for c in report.checks:
        click.echo(f"s={c.s} l={c.l}: A1={'yes' if c.a1_holds else 'no'} "
                   f"(kappa1={c.kappa1:.4g}, mu1={c.mu1:.4g})  "
                   f"A2={'yes' if c.a2_holds else 'no'} "
                   f"(kappa2={c.kappa2:.4g}, mu2={c.mu2:.4g})")
    if p["out"]:
        out = _out_path(p["out"])
        with open(out, "w") as fh:
            fh.write(report.to_json())
        click.echo(f"-> {out}")


@main.command(name="gram")
@click.option("--dict", "dictionary", required=True,
              type=click.Choice(KINDS, case_sensitive=False))
@click.option("--n", required=True, type=int)
@click.option("--cache-dir", default=None, type=click.Path())
@_handle_errors
def gram_cmd(dictionary, n, cache_dir):
    """Build a dictionary Gram matrix and print diagnostics."""
    d = build_dictionary(dictionary, n)
    G = gram(d, cache_dir=cache_dir).entries
    off = G - np.diag(np.diag(G))
    eigs = np.linalg.eigvalsh(G)
    click.echo(f"kind={d.kind} n={d.n} M={d.M}")
    click.echo(f"min eigenvalue      {eigs[0]: .6e}")
    click.echo(f"max |off-diagonal|  {np.max(np.abs(off)):.6e}")
    click.echo(f"||G - I||_max       {np.max(np.abs(G - np.eye(d.M))):.6e}")


if __name__ == "__main__":
    main()
