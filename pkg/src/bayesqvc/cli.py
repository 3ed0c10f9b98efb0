"""Command-line driver: simulate -> fit -> evaluate -> diagnose workflows.

Subcommands: ``simulate``, ``fit``, ``evaluate``, ``diagnose``,
``replicate-study``.  The default output directory can be set with the
``BAYESQVC_OUT`` environment variable.  Every JSON output embeds the run
configuration, so any result is regenerable from the file alone.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import inference, metrics
from .basis import default_grid
from .diagnostics import psrf_report, psrf_report_trace
from .io import (
    RunConfig,
    dump_json,
    load_json,
    load_samples,
    load_truth,
    read_curves_csv,
    read_dataset_csv,
    save_samples,
    write_curves_csv,
    write_dataset_csv,
    write_truth,
)
from .samplers import fit as run_fit
from .simulate import (
    COVARIATE_KINDS,
    ERROR_KINDS,
    ScenarioSpec,
    TrueCurves,
    simulate_dataset,
)

ENV_OUT_DIR = "BAYESQVC_OUT"
METHODS = ("bqrvcss", "bqrvc", "bvcss", "bvc")


def _default_out() -> str:
    return os.environ.get(ENV_OUT_DIR, ".")


def _out_dir(args) -> Path:
    out = Path(args.out if args.out is not None else _default_out())
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> int:
    spec = ScenarioSpec(
        n=args.n,
        p=args.p,
        covariate_kind=args.covariate_kind,
        error_kind=args.error,
        heteroscedastic=args.heteroscedastic,
        tau=args.tau,
        seed=args.seed,
        hard_intercept=args.hard_intercept,
        mixture_sd_or_var=args.mixture_sd_or_var,
    )
    dataset, _, support = simulate_dataset(spec)
    out = _out_dir(args)
    write_dataset_csv(out / "dataset.csv", dataset)
    write_truth(out / "truth.json", spec, support)
    dump_json(out / "scenario.json", asdict(spec))
    print(f"wrote {out / 'dataset.csv'} ({dataset.n} rows, p={dataset.p})")
    return 0


# ---------------------------------------------------------------------------
# fit

def _config_from_args(args) -> RunConfig:
    if args.config:
        payload = load_json(args.config)
    else:
        payload = {}
    overrides = {
        "method": args.method,
        "tau": args.tau,
        "degree": args.degree,
        "interior_knots": args.interior_knots,
        "iterations": args.iterations,
        "burn_in": args.burn_in,
        "thin": args.thin,
        "chains": args.chains,
        "seed": args.seed,
        "store_latents": args.store_latents,
        "workers": args.workers,
    }
    for key, value in overrides.items():
        if value is not None:
            payload[key] = value
    priors = dict(payload.get("priors", {}))
    for item in args.prior or []:
        key, _, value = item.partition("=")
        if not _:
            raise ValueError(f"--prior expects key=value, got {item!r}")
        priors[key] = float(value)
    payload["priors"] = priors
    config = RunConfig.from_dict(payload)
    return config


def fit_and_summarize(dataset, config: RunConfig, out: Path) -> dict:
    """Run the requested chains, persist samples, curves, and summary JSON."""
    start = time.perf_counter()
    samples = run_fit(
        dataset,
        config.method,
        spline_config=config.spline_config(),
        prior=config.prior_config(),
        tau=config.tau if config.method in ("bqrvcss", "bqrvc") else None,
        opts=config.mcmc_options(),
        workers=config.workers,
    )
    wallclock = time.perf_counter() - start

    grid = default_grid()
    estimates = inference.all_curve_estimates(samples, grid=grid)
    summary = {
        "config": config.to_dict(),
        "method": config.method,
        "n": dataset.n,
        "p": dataset.p,
        "q": dataset.q,
        "d": config.spline_config().basis_count,
        "chains": [c.stream_id for c in samples.chains],
        "stored_draws": sum(c.stored for c in samples.chains),
        "wallclock_seconds": wallclock,
        "scalar_summaries": inference.posterior_scalar_summaries(samples),
    }
    if samples.is_spike:
        inc = inference.inclusion_probabilities(samples)
        summary["inclusion_probabilities"] = inc.probs.tolist()
        summary["selected"] = inc.selected
        summary["selection_rule"] = "mpm"
    else:
        selected = inference.ci_selection(samples)
        summary["selected"] = selected
        summary["selection_rule"] = "ci95"

    save_samples(out, samples, config)
    write_curves_csv(out / "curves.csv", estimates)
    dump_json(out / "fit_summary.json", summary)
    return summary


def cmd_fit(args) -> int:
    config = _config_from_args(args)
    dataset = read_dataset_csv(args.data)
    out = _out_dir(args)
    summary = fit_and_summarize(dataset, config, out)
    print(
        f"method={config.method} selected={summary['selected']} "
        f"({summary['wallclock_seconds']:.1f}s); outputs in {out}"
    )
    return 0


# ---------------------------------------------------------------------------
# evaluate

def evaluate_fit(fit_dir: Path, truth_path: Path) -> dict:
    spec, support = load_truth(truth_path)
    curves = TrueCurves(hard_intercept=spec.hard_intercept)
    grid, med, low, upp = read_curves_csv(fit_dir / "curves.csv")
    summary = load_json(fit_dir / "fit_summary.json")
    per_curve = [metrics.imse(med[j], curves.evaluate(j, grid)) for j in range(med.shape[0])]
    cov = {
        str(j): metrics.coverage(low[j], upp[j], curves.evaluate(j, grid))
        for j in range(min(4, med.shape[0]))
    }
    selected = summary["selected"]
    return {
        "config": summary["config"],
        "selected": selected,
        "true_support": sorted(support),
        "classification": metrics.classify_fit(selected, support),
        "imse": per_curve,
        "timse": metrics.timse(per_curve),
        "coverage": cov,
    }


def aggregate_metrics(rows: list[dict]) -> dict:
    labels = [row["classification"] for row in rows]
    timses = [row["timse"] for row in rows]
    agg = {
        "replicates": len(rows),
        "C": labels.count("C") / len(rows),
        "O": labels.count("O") / len(rows),
        "U": labels.count("U") / len(rows),
        "timse_mean": float(np.mean(timses)),
        "timse_sd": float(np.std(timses, ddof=1)) if len(rows) > 1 else 0.0,
        "timse_cell": metrics.mean_sd_cell(timses),
    }
    for j in rows[0]["coverage"]:
        agg[f"coverage_{j}"] = float(np.mean([row["coverage"][j] for row in rows]))
    return agg


def cmd_evaluate(args) -> int:
    fits = [Path(f) for f in args.fit]
    truths = [Path(t) for t in args.truth]
    if len(truths) == 1:
        truths = truths * len(fits)
    if len(truths) != len(fits):
        raise ValueError("--truth must be given once or once per --fit")
    for path in truths:
        if not path.exists():
            raise FileNotFoundError(f"truth file not found: {path}")
    rows = [evaluate_fit(fit_dir, truth) for fit_dir, truth in zip(fits, truths)]
    payload = rows[0] if len(rows) == 1 else {"fits": rows, "aggregate": aggregate_metrics(rows)}
    out = Path(args.out) if args.out else None
    if out:
        out.parent.mkdir(parents=True, exist_ok=True)
        dump_json(out, payload)
        print(f"wrote {out}")
    else:
        import json as _json

        print(_json.dumps(payload, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# diagnose

def cmd_diagnose(args) -> int:
    samples, config = load_samples(Path(args.fit))
    if len(samples.chains) < 2 and not args.split:
        raise ValueError(
            "PSRF needs at least 2 chains; refit with --chains 2 or rerun "
            "diagnose with --split to halve the single chain"
        )
    report = psrf_report(samples, split=args.split)
    stored = samples.chains[0].stored
    if args.checkpoints:
        checkpoints = [c for c in args.checkpoints if c <= stored]
    else:
        step = 1000
        checkpoints = list(range(step, (stored // 2 if args.split else stored) + 1, step))
        if not checkpoints:
            checkpoints = [stored // 2 if args.split else stored]
    trace = psrf_report_trace(samples, checkpoints, split=args.split)
    payload = {
        "config": config.to_dict(),
        "cutoff": report.cutoff,
        "converged": report.converged,
        "psrf": report.values,
        "degenerate": report.degenerate,
        "trace": trace,
    }
    out = Path(args.out) if args.out else Path(args.fit) / "psrf.json"
    dump_json(out, payload)
    flag = "converged" if report.converged else "NOT converged"
    print(f"{flag}: max PSRF {max(report.values.values()):.4f} over "
          f"{len(report.values)} tracked parameters; wrote {out}")
    return 0


# ---------------------------------------------------------------------------
# replicate-study

def run_replicate(study: dict, scenario: dict, method: str, rep: int, rep_dir: Path) -> dict:
    base_seed = study.get("base_seed", 0)
    spec = ScenarioSpec(**{**scenario, "seed": base_seed + rep})
    dataset, curves, support = simulate_dataset(spec)
    mcmc = dict(study.get("mcmc", {}))
    config = RunConfig.from_dict(
        {
            "method": method,
            "tau": spec.tau,
            **study.get("spline", {}),
            **mcmc,
            "seed": base_seed + rep,
            "priors": study.get("priors", {}),
            "workers": study.get("workers", 1),
        }
    )
    rep_dir.mkdir(parents=True, exist_ok=True)
    summary = fit_and_summarize(dataset, config, rep_dir)
    if not study.get("save_samples", False):
        for name in ("samples.bin", "samples.json"):
            (rep_dir / name).unlink(missing_ok=True)
    write_truth(rep_dir / "truth.json", spec, support)
    result = evaluate_fit(rep_dir, rep_dir / "truth.json")
    result["wallclock_seconds"] = summary["wallclock_seconds"]
    dump_json(rep_dir / "metrics.json", result)
    return result


def scenario_label(scenario: dict) -> str:
    kind = scenario.get("covariate_kind", "gene")
    err = scenario.get("error_kind", "normal")
    het = "het" if scenario.get("heteroscedastic", False) else "iid"
    tau = scenario.get("tau", 0.5)
    hard = "-hard" if scenario.get("hard_intercept", False) else ""
    return f"{kind}_{het}_{err}_tau{tau}{hard}"


def cmd_replicate_study(args) -> int:
    study = load_json(args.config)
    out = Path(args.out if args.out else study.get("out_dir", _default_out()))
    out.mkdir(parents=True, exist_ok=True)
    replicates = int(study["replicates"])
    aggregate_rows = []
    for scenario in study["scenarios"]:
        label = scenario_label(scenario)
        for method in study["methods"]:
            if method not in METHODS:
                raise ValueError(f"unknown method {method!r}")
            rows = []
            for rep in range(replicates):
                rep_dir = out / label / method / f"rep_{rep:04d}"
                manifest = rep_dir / "manifest.json"
                if manifest.exists():
                    rows.append(load_json(manifest))
                    continue
                result = run_replicate(study, scenario, method, rep, rep_dir)
                tmp = manifest.with_suffix(".tmp")
                dump_json(tmp, result)
                tmp.rename(manifest)
                rows.append(result)
                print(f"{label}/{method} replicate {rep + 1}/{replicates} done", flush=True)
            agg = {"scenario": label, "method": method, **aggregate_metrics(rows)}
            aggregate_rows.append(agg)
    dump_json(out / "aggregate.json", aggregate_rows)
    keys = list(aggregate_rows[0].keys())
    with open(out / "aggregate.csv", "w") as fh:
        fh.write(",".join(keys) + "\n")
        for row in aggregate_rows:
            fh.write(",".join(str(row[k]) for k in keys) + "\n")
    print(f"wrote {out / 'aggregate.csv'}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bayesqvc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate one simulated dataset")
    sim.add_argument("--n", type=int, default=200)
    sim.add_argument("--p", type=int, default=100)
    sim.add_argument("--covariate-kind", choices=COVARIATE_KINDS, default="gene")
    sim.add_argument("--error", choices=ERROR_KINDS, default="normal")
    sim.add_argument("--heteroscedastic", action="store_true")
    sim.add_argument("--tau", type=float, default=0.5)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--hard-intercept", action="store_true")
    sim.add_argument("--mixture-sd-or-var", choices=("sd", "var"), default="var")
    sim.add_argument("--out", default=None, help=f"output dir (default ${ENV_OUT_DIR} or .)")
    sim.set_defaults(func=cmd_simulate)

    fit_p = sub.add_parser("fit", help="fit one method to a dataset CSV")
    fit_p.add_argument("--data", required=True)
    fit_p.add_argument("--config", default=None, help="RunConfig JSON (flags override)")
    fit_p.add_argument("--method", choices=METHODS, default=None)
    fit_p.add_argument("--tau", type=float, default=None)
    fit_p.add_argument("--degree", type=int, default=None)
    fit_p.add_argument("--interior-knots", type=int, default=None)
    fit_p.add_argument("--iterations", type=int, default=None)
    fit_p.add_argument("--burn-in", type=int, default=None)
    fit_p.add_argument("--thin", type=int, default=None)
    fit_p.add_argument("--chains", type=int, default=None)
    fit_p.add_argument("--seed", type=int, default=None)
    fit_p.add_argument("--store-latents", action="store_true", default=None)
    fit_p.add_argument("--workers", type=int, default=None)
    fit_p.add_argument("--prior", action="append", metavar="KEY=VALUE")
    fit_p.add_argument("--out", default=None)
    fit_p.set_defaults(func=cmd_fit)

    ev = sub.add_parser("evaluate", help="score persisted fits against the truth")
    ev.add_argument("--fit", nargs="+", required=True, help="fit output dir(s)")
    ev.add_argument("--truth", nargs="+", required=True, help="truth JSON (1 or per fit)")
    ev.add_argument("--out", default=None, help="metrics JSON path (default: stdout)")
    ev.set_defaults(func=cmd_evaluate)

    diag = sub.add_parser("diagnose", help="PSRF convergence report for a fit")
    diag.add_argument("--fit", required=True)
    diag.add_argument("--split", action="store_true", help="halve a single chain")
    diag.add_argument("--checkpoints", nargs="*", type=int, default=None)
    diag.add_argument("--out", default=None)
    diag.set_defaults(func=cmd_diagnose)

    rep = sub.add_parser("replicate-study", help="scenario grid with seeded replicates")
    rep.add_argument("--config", required=True, help="study config JSON")
    rep.add_argument("--out", default=None)
    rep.set_defaults(func=cmd_replicate_study)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
