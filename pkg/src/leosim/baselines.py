"""Non-learning comparison policies.

Random best-of-K draws K full assignments uniformly and keeps the
cheapest; Sequential assigns task i to satellite i mod J.  Both score
through the exact same pipeline as PPO episodes.
"""
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig, draw_task_sizes
from .economics import EpisodeOutcome
from .episode import evaluate_assignment
from .seeding import rng_stream

RANDOM, SEQUENTIAL = "random", "sequential"


@dataclass(frozen=True)
class BaselineKind:
    kind: str
    best_of: int = 1000

    def __post_init__(self):
        if self.kind not in (RANDOM, SEQUENTIAL):
            raise ValueError(f"unknown baseline {self.kind!r}")
        if self.best_of < 1:
            raise ValueError("best_of must be >= 1")


def run_baseline(kind: BaselineKind, cfg: ScenarioConfig,
                 seed: int) -> tuple[EpisodeOutcome, list[int]]:
    """Score one baseline on the episode generated by ``seed``.

    The task sizes come from the same substream an OffloadEnv episode
    with this seed would use, so baselines and PPO see identical
    scenarios.
    """
    sizes = draw_task_sizes(cfg, seed)
    n, j = cfg.task_count, cfg.satellite_count
    if kind.kind == SEQUENTIAL:
        assignment = [i % j for i in range(n)]
        outcome, _ = evaluate_assignment(cfg, sizes, assignment)
        return outcome, assignment

    rng = rng_stream(seed, "baseline")
    best_outcome = None
    best_assignment = None
    for _ in range(kind.best_of):
        candidate = rng.integers(0, j, size=n).tolist()
        outcome, _ = evaluate_assignment(cfg, sizes, candidate)
        if best_outcome is None or outcome.cost < best_outcome.cost:
            best_outcome, best_assignment = outcome, candidate
    return best_outcome, best_assignment


def greedy_rollout(policy, cfg: ScenarioConfig,
                   seed: int) -> tuple[EpisodeOutcome, list[int]]:
    """Greedy episode of a trained policy through the same pipeline."""
    from .env import OffloadEnv
    from .ppo import act

    env = OffloadEnv(cfg, seed)
    obs = env.reset(seed)
    info = None
    while not env.done:
        action, _ = act(policy, obs, "greedy")
        result = env.step(action)
        obs, info = result.state, result.info
    if info is None:  # zero-task episode
        outcome, _ = evaluate_assignment(cfg, [], [])
        return outcome, []
    # re-score offline to assert the env and offline pipelines agree
    outcome, _ = evaluate_assignment(cfg, env.sizes[:len(env.assignment)],
                                     env.assignment)
    return outcome, list(env.assignment)
