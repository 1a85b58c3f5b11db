"""Command-line driver for the full pipeline.

    actriv ball     build and persist a trivialization ball
    actriv sample   draw a training set from a ball
    actriv learn    evolve a set of distance metrics
    actriv fit      fit ensemble weights or trim multi-objectives
    actriv solve    run a search campaign on an instance
    actriv verify   replay and verify a move-sequence certificate
    actriv catalog  list the embedded problem instances

Solver settings may come from a key=value config file (--config); explicit
flags override the file, which overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import ball as ball_mod
from . import catalog as catalog_mod
from . import ensemble as ensemble_mod
from . import metrics as metrics_mod
from . import notation
from . import proof as proof_mod
from . import solver as solver_mod
from .presentations import Presentation


def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{line_no}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


_CONFIG_FIELDS = {
    "population_size": int,
    "initial_length": int,
    "tournament_size": int,
    "p_insert": float,
    "p_replace": float,
    "p_delete": float,
    "min_length": int,
    "max_length": int,
    "relator_length_cap": int,
    "max_generations": int,
    "time_budget_s": float,
    "restarts": int,
    "mode": str,
    "stop_on_first_solve": lambda s: s.lower() in ("1", "true", "yes"),
}


def _solver_config(args) -> solver_mod.SolverConfig:
    cfg = solver_mod.SolverConfig()
    if args.config:
        for key, raw in _read_config(args.config).items():
            if key not in _CONFIG_FIELDS:
                raise SystemExit(f"unknown config key {key!r}")
            setattr(cfg, key, _CONFIG_FIELDS[key](raw))
    for key in _CONFIG_FIELDS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    cfg.validate()
    return cfg


def _load_instance(args) -> tuple[str, Presentation]:
    if getattr(args, "instance", None):
        text = args.instance
        if text.lstrip().startswith("<"):
            return "custom", notation.parse_presentation(text)
        record = catalog_mod.get_instance(text)
        return record.id, record.presentation
    if getattr(args, "instance_file", None):
        with open(args.instance_file, encoding="utf-8") as fh:
            text = fh.read().strip()
        name = os.path.splitext(os.path.basename(args.instance_file))[0]
        return name, notation.parse_presentation(text)
    raise SystemExit("need --instance or --instance-file")


def _cmd_catalog(args) -> int:
    records = catalog_mod.catalog()
    if args.auxiliary:
        records = records + catalog_mod.auxiliary_catalog()
    if args.id:
        records = [r for r in records if r.id == args.id]
        if not records:
            raise SystemExit(f"unknown instance {args.id!r}")
    for r in records:
        length = "-" if r.known_length is None else str(r.known_length)
        print(f"{r.id}\t{notation.format_presentation(r.presentation)}\t{length}")
    return 0


def _cmd_ball(args) -> int:
    try:
        built = ball_mod.build_ball(
            args.rank, args.max_total_length, args.max_depth, args.max_members
        )
    except ball_mod.BallCapacityError as exc:
        raise SystemExit(str(exc)) from exc
    ball_mod.save_ball(built, args.out)
    census = " ".join(f"{d}:{n}" for d, n in sorted(built.depth_census().items()))
    print(f"ball: {len(built)} members -> {args.out}")
    print(f"depth census: {census}")
    return 0


def _cmd_sample(args) -> int:
    built = ball_mod.load_ball(args.ball)
    training = ball_mod.sample_cases(built, args.count, args.seed)
    ball_mod.save_training(training, args.out)
    print(f"training set: {len(training.cases)} cases -> {args.out}")
    return 0


def _cmd_learn(args) -> int:
    training = ball_mod.load_training(args.train)
    config = metrics_mod.MetricGaConfig(
        population_size=args.population,
        generations=args.generations,
        correlation=args.correlation,
    )
    metric_set = metrics_mod.learn_metric_set(
        training,
        runs=args.runs,
        config=config,
        master_seed=args.seed,
        workers=args.workers,
    )
    metrics_mod.save_metric_set(metric_set, args.out)
    shown = ", ".join(f"{f:.3f}" for f in metric_set.fitnesses)
    print(f"learned {len(metric_set)} metrics -> {args.out}")
    print(f"best-of-run correlations: {shown}")
    return 0


def _cmd_fit(args) -> int:
    metric_set = metrics_mod.load_metric_set(args.metrics)
    training = ball_mod.load_training(args.train)
    if args.mode == "single":
        weights = ensemble_mod.fit_weights(metric_set, training, args.cap)
        ensemble_mod.save_ensemble(weights, args.metrics, args.out)
        print(
            f"ensemble: intercept {weights.intercept:.4f}, "
            f"{sum(1 for w in weights.weights if w)} active weights -> {args.out}"
        )
    else:
        objectives = ensemble_mod.trim_objectives(
            metric_set, training, k=args.objectives, cap=args.cap, kind=args.correlation
        )
        ensemble_mod.save_objectives(objectives, args.out)
        print(f"objective set: {len(objectives)} objectives -> {args.out}")
    return 0


def _load_model(path: str, cfg: solver_mod.SolverConfig, explicit_mode: str | None):
    """Load a model file; its kind decides the mode unless one was forced."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
    if "actriv-ensemble" in header:
        if explicit_mode == "multi":
            raise SystemExit("ensemble model files drive mode=single")
        cfg.mode = "single"
        weights, metrics_ref = ensemble_mod.load_ensemble(path)
        if not os.path.isabs(metrics_ref):
            metrics_ref = os.path.join(os.path.dirname(path) or ".", metrics_ref)
        metric_set = metrics_mod.load_metric_set(metrics_ref)
        return ensemble_mod.ScalarEnsemble(weights, metric_set)
    if "actriv-objectives" in header:
        if explicit_mode == "single":
            raise SystemExit("objective model files drive mode=multi")
        cfg.mode = "multi"
        return ensemble_mod.load_objectives(path)
    raise SystemExit(f"{path}: not an ensemble or objectives file")


def _cmd_solve(args) -> int:
    cfg = _solver_config(args)
    instance_id, instance = _load_instance(args)
    built = ball_mod.load_ball(args.ball)
    model = _load_model(args.model, cfg, args.mode)
    results = solver_mod.run_campaign(
        instance,
        model,
        built,
        cfg,
        master_seed=args.seed,
        instance_id=instance_id,
        workers=args.workers,
    )
    solver_mod.write_results_jsonl(results, instance.rank, args.out)
    if args.summary:
        solver_mod.write_summary_csv(results, args.summary)
    solved = [r for r in results if r.outcome == "solved"]
    print(
        f"{instance_id}: {len(solved)}/{len(results)} runs solved "
        f"-> {args.out}"
    )
    if solved:
        best = min(solved, key=lambda r: r.prefix_length)
        print(
            f"shortest trivialization: {best.prefix_length} moves "
            f"(seed {best.seed}, generation {best.generations})"
        )
    return 0


def _cmd_verify(args) -> int:
    instance_id, instance = _load_instance(args)
    built = ball_mod.load_ball(args.ball)
    with open(args.sequence, encoding="utf-8") as fh:
        text = " ".join(
            line.split("#", 1)[0] for line in fh
        )
    sequence = notation.parse_sequence(text, instance.rank)
    result = proof_mod.verify(instance, sequence, built, instance_id)
    listing = result.to_text()
    if args.out:
        ball_mod._atomic_write(args.out, listing + "\n")
        print(f"proof listing -> {args.out}")
    else:
        print(listing)
    if not result.verified:
        return 1
    print(
        f"{instance_id}: verified, trivialization length {result.prefix_length}"
    )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="actriv",
        description="search and verification of AC-trivializations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list embedded instances")
    p.add_argument("--id", help="show one instance")
    p.add_argument("--auxiliary", action="store_true", help="include T83")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("ball", help="build a trivialization ball")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--max-total-length", type=int, required=True)
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--max-members", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("sample", help="sample fitness cases from a ball")
    p.add_argument("--ball", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("learn", help="evolve distance metrics")
    p.add_argument("--train", required=True)
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--correlation", choices=("pearson", "kendall"), default="pearson")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("fit", help="fit ensemble weights / trim objectives")
    p.add_argument("--metrics", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--mode", choices=("single", "multi"), default="single")
    p.add_argument("--objectives", type=int, default=5)
    p.add_argument("--correlation", choices=("pearson", "kendall"), default="pearson")
    p.add_argument("--cap", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("solve", help="run a search campaign")
    p.add_argument("--instance", help="catalog id or literal <...> text")
    p.add_argument("--instance-file")
    p.add_argument("--ball", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--config", help="key=value solver config file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--summary")
    for name, caster in _CONFIG_FIELDS.items():
        flag = "--" + name.replace("_", "-")
        if name == "mode":
            p.add_argument(flag, choices=("single", "multi"), default=None)
        elif name == "stop_on_first_solve":
            p.add_argument(flag, action="store_const", const=True, default=None)
        else:
            p.add_argument(flag, type=caster, default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="verify a move-sequence certificate")
    p.add_argument("--instance", help="catalog id or literal <...> text")
    p.add_argument("--instance-file")
    p.add_argument("--sequence", required=True, help="file of move codes")
    p.add_argument("--ball", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
