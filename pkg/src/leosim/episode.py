"""Full-assignment evaluation: schedule + economics in one call.

This is the single cost pipeline shared by the RL environment, the
baselines and the CLI, so every policy is scored identically.
"""
import csv

from .channel import batch_reliability
from .config import ScenarioConfig
from .economics import (EpisodeOutcome, check_constraints, scalar_cost,
                        total_price, total_quality)
from .timeline import ScheduleResult, TaskSpec, simulate


def make_tasks(sizes_bits) -> list[TaskSpec]:
    return [TaskSpec(index=i, size_bits=float(d))
            for i, d in enumerate(sizes_bits)]


def evaluate_assignment(cfg: ScenarioConfig, sizes_bits, assignment,
                        t0: float = 0.0
                        ) -> tuple[EpisodeOutcome, ScheduleResult]:
    """Score one complete assignment of tasks to satellites."""
    tasks = make_tasks(sizes_bits)
    servers = cfg.servers()
    sched = simulate(list(assignment), tasks, servers, cfg.constellation(),
                     cfg.link(), cfg.migrate_speed_bps, t0=t0)
    price = total_price(tasks, assignment, servers)
    quality = total_quality(tasks, assignment, servers, cfg.peak)
    sizes = [t.size_bits for t in tasks]
    _, r_failure = batch_reliability(sched.bers, sizes)
    cost = scalar_cost(sched.total_time, sched.transmit_energy_j, price,
                       quality, cfg.weights, cfg.scales)
    feasible, violated = check_constraints(sched.total_time, r_failure,
                                           quality, cfg.constraints)
    outcome = EpisodeOutcome(
        total_time_s=sched.total_time,
        transmit_energy_j=sched.transmit_energy_j,
        total_price=price,
        total_quality_db=quality,
        failure_prob=r_failure,
        cost=cost,
        feasible=feasible,
        violated=violated,
    )
    return outcome, sched


OUTCOME_CSV_FIELDS = ["policy", "seed", "total_time_s", "transmit_energy_j",
                      "total_price", "total_quality_db", "failure_prob",
                      "cost", "feasible", "violated", "assignment"]


def write_outcome_csv(path, rows: list[dict]) -> None:
    """Append-style outcome log; one row per scored episode."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=OUTCOME_CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)


def outcome_row(policy: str, seed: int, outcome: EpisodeOutcome,
                assignment) -> dict:
    return {
        "policy": policy, "seed": seed,
        "total_time_s": repr(outcome.total_time_s),
        "transmit_energy_j": repr(outcome.transmit_energy_j),
        "total_price": repr(outcome.total_price),
        "total_quality_db": repr(outcome.total_quality_db),
        "failure_prob": repr(outcome.failure_prob),
        "cost": repr(outcome.cost),
        "feasible": outcome.feasible,
        "violated": " ".join(sorted(outcome.violated)),
        "assignment": " ".join(str(j) for j in assignment),
    }
