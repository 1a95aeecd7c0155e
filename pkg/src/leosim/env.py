"""The offloading MDP: one episode assigns N tasks to satellites in order.

Uploads are strictly sequential, so the only per-step decision is which
satellite receives the next task; the action space is the satellite
index.  The reward is the negative increment of the scalar cost of the
partial assignment, which telescopes to -C(final assignment); a terminal
penalty of ``terminal_penalty`` per violated constraint is added when the
episode ends infeasible.  Episodes end when every task is assigned or
when the accumulated transmission-failure probability already exceeds
its threshold.
"""
from dataclasses import dataclass

import numpy as np

from .channel import batch_reliability
from .config import ScenarioConfig, draw_task_sizes
from .economics import (EpisodeOutcome, check_constraints, scalar_cost,
                        total_price, total_quality)
from .geometry import pose_at
from .timeline import TaskSpec, simulate


class EpisodeFinishedError(RuntimeError):
    """step() called on a finished episode."""


@dataclass(frozen=True)
class StepResult:
    state: np.ndarray
    reward: float
    done: bool
    info: EpisodeOutcome | None = None


class OffloadEnv:
    """Gym-style reset/step environment over one scenario config."""

    def __init__(self, cfg: ScenarioConfig, seed: int = 0):
        self.cfg = cfg
        self._constellation = cfg.constellation()
        self._link = cfg.link()
        self._servers = cfg.servers()
        self.n_actions = cfg.satellite_count
        self.n_tasks = cfg.task_count
        max_price = max(s.unit_price_per_byte for s in self._servers)
        max_speed = max(s.compute_speed_bps for s in self._servers)
        self._price_norm = np.array(
            [s.unit_price_per_byte / max_price if max_price > 0 else 0.0
             for s in self._servers])
        self._speed_norm = np.array(
            [s.compute_speed_bps / max_speed for s in self._servers])
        self.state_dim = 1 + 2 * self.n_tasks + 5 * self.n_actions
        self._episode_seed = seed
        self._seed_base = seed
        self._episode_index = 0
        self._done = True
        self.reset(seed)

    # --- episode lifecycle --------------------------------------------------

    def reset(self, seed: int | None = None) -> np.ndarray:
        """Start a new episode; deterministic for a fixed seed."""
        if seed is not None:
            self._seed_base = seed
            self._episode_index = 0
        # distinct, reproducible tasks per successive episode
        self._episode_seed = self._seed_base + self._episode_index
        self._episode_index += 1
        self.sizes = draw_task_sizes(self.cfg, self._episode_seed)
        self.tasks = [TaskSpec(index=i, size_bits=float(d))
                      for i, d in enumerate(self.sizes)]
        self.assignment: list[int] = []
        self._prev_cost = 0.0
        self._sched = None
        self._done = self.n_tasks == 0
        return self._build_state()

    @property
    def done(self) -> bool:
        return self._done

    def step(self, action: int) -> StepResult:
        if self._done:
            raise EpisodeFinishedError("episode is finished; call reset()")
        if not 0 <= action < self.n_actions:
            raise IndexError(f"action {action} out of range")
        self.assignment.append(int(action))
        k = len(self.assignment)
        sched = simulate(self.assignment, self.tasks[:k], self._servers,
                         self._constellation, self._link,
                         self.cfg.migrate_speed_bps)
        self._sched = sched
        price = total_price(self.tasks[:k], self.assignment, self._servers)
        quality = total_quality(self.tasks[:k], self.assignment,
                                self._servers, self.cfg.peak)
        _, r_failure = batch_reliability(sched.bers, self.sizes[:k])
        cost = scalar_cost(sched.total_time, sched.transmit_energy_j, price,
                           quality, self.cfg.weights, self.cfg.scales)
        reward = -(cost - self._prev_cost)
        self._prev_cost = cost

        feasible, violated = check_constraints(
            sched.total_time, r_failure, quality, self.cfg.constraints)
        all_assigned = k == self.n_tasks
        reliability_lost = r_failure >= self.cfg.constraints.max_failure_prob
        done = all_assigned or reliability_lost
        info = None
        if done:
            reward -= self.cfg.terminal_penalty * len(violated)
            info = EpisodeOutcome(
                total_time_s=sched.total_time,
                transmit_energy_j=sched.transmit_energy_j,
                total_price=price, total_quality_db=quality,
                failure_prob=r_failure, cost=cost,
                feasible=feasible, violated=violated)
        self._done = done
        return StepResult(state=self._build_state(), reward=reward,
                          done=done, info=info)

    # --- state encoding -----------------------------------------------------

    def _build_state(self) -> np.ndarray:
        cfg = self.cfg
        t_hat = cfg.constraints.max_total_time_s
        k = len(self.assignment)
        clock = self._sched.traces[-1].upload_end if k else 0.0

        state = np.zeros(self.state_dim)
        state[0] = min(clock / t_hat, 1.0)
        state[1:1 + k] = 1.0  # assigned flags, task order is fixed
        if self.n_tasks:
            state[1 + self.n_tasks:1 + 2 * self.n_tasks] = (
                self.sizes / cfg.size_max_bits)

        backlog = np.zeros(self.n_actions)
        if self._sched is not None:
            for tr in self._sched.traces:
                backlog[tr.assigned_sat] = max(backlog[tr.assigned_sat],
                                               tr.comp_end - clock)
        base = 1 + 2 * self.n_tasks
        sat = state[base:]
        for j in range(self.n_actions):
            pose = pose_at(self._constellation, j, clock)
            sat[5 * j] = min(max(backlog[j], 0.0) / t_hat, 1.0)
            sat[5 * j + 1] = 1.0 if pose.visible else 0.0
            sat[5 * j + 2] = pose.geocentric_angle / np.pi - 1.0
            sat[5 * j + 3] = self._price_norm[j]
            sat[5 * j + 4] = self._speed_norm[j]
        return state
