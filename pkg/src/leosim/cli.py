"""Command-line entry points.

Subcommands: train, baseline, evaluate, sweep, calibrate, trace.  Every
run directory receives the resolved config echo plus the CSV/checkpoint
artifacts needed to re-derive its numbers offline.
"""
import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import baselines, episode, ppo, watermark
from .config import ScenarioConfig, draw_task_sizes, load_config, write_config
from .env import OffloadEnv
from .timeline import write_trace_csv

SWEEP_AXES = ("satellites", "tasks", "n_step", "lr")


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "out", None):
        cfg = replace(cfg, out_dir=args.out)
    return cfg


def _run_dir(cfg: ScenarioConfig, name: str) -> Path:
    out = Path(cfg.out_dir) / name
    out.mkdir(parents=True, exist_ok=True)
    write_config(out / "config.ini", cfg)
    return out


def _train_one(cfg: ScenarioConfig, seed: int) -> ppo.TrainResult:
    return ppo.train(lambda s: OffloadEnv(cfg, s), cfg.ppo, seed)


def cmd_train(args) -> int:
    cfg = _load(args)
    out = _run_dir(cfg, f"train_seed{cfg.seed}")
    result = _train_one(cfg, cfg.seed)
    ppo.write_metrics_csv(out / "metrics.csv", result.metrics)
    ppo.save_checkpoint(out / "checkpoint.bin", result.policy, result.value)
    outcome, assignment = baselines.greedy_rollout(result.policy, cfg,
                                                   cfg.seed)
    episode.write_outcome_csv(
        out / "outcome.csv",
        [episode.outcome_row("ppo", cfg.seed, outcome, assignment)])
    print(f"trained: cost={outcome.cost:.6f} feasible={outcome.feasible} "
          f"-> {out}")
    return 0


def cmd_baseline(args) -> int:
    cfg = _load(args)
    kind = baselines.BaselineKind(args.kind, best_of=args.k)
    out = _run_dir(cfg, f"baseline_{args.kind}_seed{cfg.seed}")
    outcome, assignment = baselines.run_baseline(kind, cfg, cfg.seed)
    episode.write_outcome_csv(
        out / "outcome.csv",
        [episode.outcome_row(args.kind, cfg.seed, outcome, assignment)])
    print(f"{args.kind}: cost={outcome.cost:.6f} "
          f"feasible={outcome.feasible} -> {out}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = _load(args)
    policy, _ = ppo.load_checkpoint(args.checkpoint)
    out = _run_dir(cfg, f"evaluate_seed{cfg.seed}")
    outcome, assignment = baselines.greedy_rollout(policy, cfg, cfg.seed)
    episode.write_outcome_csv(
        out / "outcome.csv",
        [episode.outcome_row("ppo-greedy", cfg.seed, outcome, assignment)])
    print(f"evaluate: cost={outcome.cost:.6f} feasible={outcome.feasible}")
    return 0


def _apply_axis(cfg: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    if axis == "satellites":
        return replace(cfg, satellite_count=int(value))
    if axis == "tasks":
        return replace(cfg, task_count=int(value))
    if axis == "n_step":
        return replace(cfg, ppo=replace(cfg.ppo, n_step=int(value)))
    if axis == "lr":
        return replace(cfg, ppo=replace(cfg.ppo, lr_start=float(value)))
    raise ValueError(f"unknown sweep axis {axis!r}")


def run_sweep(base_cfg: ScenarioConfig, axis: str, values, reps: int,
              out_dir: Path) -> list[dict]:
    """Train PPO and run both baselines for each axis value and rep.

    Returns summary rows (axis value, rep, policy, cost); failed training
    cells are recorded and skipped rather than aborting the sweep.
    """
    rows = []
    for value in values:
        cfg = _apply_axis(base_cfg, axis, value)
        for rep in range(reps):
            seed = base_cfg.seed + rep
            cell = f"{axis}{value}_rep{rep}"
            try:
                result = _train_one(cfg, seed)
                outcome, _ = baselines.greedy_rollout(result.policy, cfg,
                                                      seed)
                final_reward = (result.metrics[-1]["mean_reward"]
                                if result.metrics else 0.0)
                rows.append({"axis": axis, "value": value, "rep": rep,
                             "seed": seed, "policy": "ppo",
                             "cost": repr(outcome.cost),
                             "mean_reward": repr(final_reward),
                             "feasible": outcome.feasible})
                cell_dir = out_dir / cell
                cell_dir.mkdir(parents=True, exist_ok=True)
                ppo.write_metrics_csv(cell_dir / "metrics.csv",
                                      result.metrics)
                ppo.save_checkpoint(cell_dir / "checkpoint.bin",
                                    result.policy, result.value)
            except ppo.DivergenceError as exc:
                rows.append({"axis": axis, "value": value, "rep": rep,
                             "seed": seed, "policy": "ppo",
                             "cost": "failed", "mean_reward": "failed",
                             "feasible": False})
                print(f"cell {cell} failed: {exc}", file=sys.stderr)
            for name, kind in (
                    ("random", baselines.BaselineKind(baselines.RANDOM)),
                    ("sequential",
                     baselines.BaselineKind(baselines.SEQUENTIAL))):
                outcome, _ = baselines.run_baseline(kind, cfg, seed)
                rows.append({"axis": axis, "value": value, "rep": rep,
                             "seed": seed, "policy": name,
                             "cost": repr(outcome.cost), "mean_reward": "",
                             "feasible": outcome.feasible})
    return rows


def cmd_sweep(args) -> int:
    cfg = _load(args)
    out = _run_dir(cfg, f"sweep_{args.axis}")
    values = [float(v) for v in args.values]
    rows = run_sweep(cfg, args.axis, values, args.reps, out)
    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["axis", "value", "rep",
                                                "seed", "policy", "cost",
                                                "mean_reward", "feasible"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"sweep complete: {len(rows)} rows -> {out / 'summary.csv'}")
    return 0


def synthetic_corpus(count: int = 10, size: int = 64,
                     seed: int = 0) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 256, size=(size, size), dtype=np.uint8)
            for _ in range(count)]


def cmd_calibrate(args) -> int:
    if args.corpus:
        paths = sorted(Path(args.corpus).glob("*.pgm"))
        if not paths:
            print(f"no .pgm files in {args.corpus}", file=sys.stderr)
            return 1
        corpus = [watermark.load_pgm(p) for p in paths]
    else:
        corpus = synthetic_corpus(seed=args.seed or 0)
    lines = []
    for kind in watermark.ALGORITHM_KINDS:
        alg = watermark.WatermarkAlgorithm(kind)
        mse = watermark.calibrate_mse(corpus, alg, seed=args.seed or 0)
        lines.append(f"mse_{kind} = {mse!r}")
        print(lines[-1])
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text("[watermark]\n" + "\n".join(lines) + "\n")
    return 0


def cmd_trace(args) -> int:
    cfg = _load(args)
    out = _run_dir(cfg, f"trace_seed{cfg.seed}")
    sizes = draw_task_sizes(cfg, cfg.seed)
    if args.policy == "sequential":
        assignment = [i % cfg.satellite_count for i in range(cfg.task_count)]
    else:
        kind = baselines.BaselineKind(baselines.RANDOM, best_of=args.k)
        _, assignment = baselines.run_baseline(kind, cfg, cfg.seed)
    outcome, sched = episode.evaluate_assignment(cfg, sizes, assignment)
    write_trace_csv(out / "trace.csv", sched)
    episode.write_outcome_csv(
        out / "outcome.csv",
        [episode.outcome_row(args.policy, cfg.seed, outcome, assignment)])
    print(f"trace: T_total={outcome.total_time_s:.4f}s "
          f"cost={outcome.cost:.6f} -> {out / 'trace.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leosim",
        description="LEO watermark-offloading simulator and PPO scheduler")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="scenario INI file (defaults apply)")
        p.add_argument("--seed", type=int, help="root seed override")
        p.add_argument("--out", help="output directory override")

    p = sub.add_parser("train", help="one PPO training run")
    common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("baseline", help="one baseline run")
    common(p)
    p.add_argument("--kind", choices=[baselines.RANDOM, baselines.SEQUENTIAL],
                   default=baselines.RANDOM)
    p.add_argument("--k", type=int, default=1000,
                   help="draws for random best-of-K")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("evaluate", help="greedy rollout of a checkpoint")
    common(p)
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="axis sweep with baselines")
    common(p)
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", nargs="+", required=True)
    p.add_argument("--reps", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate",
                       help="measure per-algorithm embed MSE on a corpus")
    p.add_argument("--corpus", help="directory of 8-bit P5 .pgm images "
                                    "(default: bundled synthetic corpus)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write an INI [watermark] fragment here")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("trace", help="dump one episode's task trace CSV")
    common(p)
    p.add_argument("--policy", choices=["sequential", "random"],
                   default="sequential")
    p.add_argument("--k", type=int, default=1000)
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
