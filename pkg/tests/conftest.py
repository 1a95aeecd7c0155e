import math

import numpy as np
import pytest
from dataclasses import replace

from leosim.channel import LinkParams
from leosim.config import ScenarioConfig
from leosim.economics import Constraints, NormalizationScales, ObjectiveWeights
from leosim.geometry import ConstellationConfig
from leosim.ppo import PpoHyperparams
from leosim.timeline import SatelliteServer, TaskSpec


def make_instance(rng, n_max=10, j_max=8, frozen=True):
    """Random timeline instance with at least one visible satellite."""
    n = int(rng.integers(1, n_max + 1))
    j = int(rng.integers(1, j_max + 1))
    half_angle = rng.uniform(0.5, math.pi / 2)
    phases = rng.uniform(0, 2 * math.pi, size=j)
    # keep one satellite well inside the cone so schedules stay feasible
    phases[int(rng.integers(j))] = rng.uniform(0, 0.2)
    constellation = ConstellationConfig(
        satellite_count=j,
        angular_velocity=0.0 if frozen else rng.uniform(1e-6, 1e-5),
        visibility_half_angle=half_angle,
        initial_phase_offsets=tuple(phases),
    )
    link = LinkParams(
        reference_gain=rng.uniform(0.005, 0.05),
        noise_power_w=1e-10,
        tx_power_w=rng.uniform(0.5, 4.0),
        bandwidth_hz=tuple(rng.uniform(5e5, 5e6, size=j)),
    )
    servers = [
        SatelliteServer(index=k, compute_speed_bps=rng.uniform(1e6, 1e7),
                        unit_price_per_byte=rng.uniform(0, 2e-6),
                        algorithm="lsb", bandwidth_hz=link.bandwidth_hz[k],
                        mse=0.25)
        for k in range(j)
    ]
    tasks = [TaskSpec(index=i, size_bits=float(rng.uniform(1e5, 5e6)))
             for i in range(n)]
    assignment = rng.integers(0, j, size=n).tolist()
    migrate_speed = rng.uniform(1e7, 1e9)
    return assignment, tasks, servers, constellation, link, migrate_speed


def unit_rate_scenario(n_sats=1, compute_speed=1.0, bandwidth=1.0):
    """Constellation/link where the zenith satellite uplinks at exactly
    ``bandwidth`` bits/s (snr=1), for hand-traceable schedules."""
    constellation = ConstellationConfig(
        satellite_count=n_sats, angular_velocity=0.0,
        initial_phase_offsets=tuple([0.0] * n_sats) if n_sats == 1 else (),
    )
    # gamma=0 slant range is H = 780 km; beta0 equal to the range in
    # meters makes the gain 1 and, with p = N0, the snr exactly 1
    link = LinkParams(reference_gain=780e3, noise_power_w=1.0,
                      tx_power_w=1.0,
                      bandwidth_hz=tuple([bandwidth] * n_sats))
    servers = [SatelliteServer(index=j, compute_speed_bps=compute_speed,
                               unit_price_per_byte=0.0, algorithm="lsb",
                               bandwidth_hz=bandwidth, mse=0.25)
               for j in range(n_sats)]
    return constellation, link, servers


def toy_config(**overrides) -> ScenarioConfig:
    """Small 3-satellite / 4-task scenario with a heterogeneous ring."""
    base = dict(
        satellite_count=3,
        angular_velocity=0.0,
        initial_phase_offsets=(0.0, 0.7, 2.8),
        bandwidth_pattern=(2e6, 1.5e6, 1e6),
        compute_speed_pattern=(5e6, 3e6, 1e6),
        unit_price_pattern=(1e-6, 8e-7, 3e-6),
        algorithm_pattern=("lsb", "dct", "dwt"),
        task_count=4,
        size_min_bits=1e6,
        size_max_bits=4e6,
        weights=ObjectiveWeights(0.25, 0.25, 0.25, 0.25),
        constraints=Constraints(30.0, 0.05, 100.0),
        scales=NormalizationScales(20.0, 10.0, 5.0, 200.0),
        ppo=PpoHyperparams(n_step=256, epochs=10, minibatch_size=64,
                           total_steps=30_000, lr_start=1e-3,
                           lr_end=5.76e-7),
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def ordering_config(**overrides) -> ScenarioConfig:
    """15-satellite / 20-task scenario for the policy-ordering trend."""
    base = dict(
        satellite_count=15,
        angular_velocity=0.0,
        bandwidth_pattern=(3e6, 1e6, 2e6, 8e5, 2.5e6),
        compute_speed_pattern=(8e6, 2e6, 5e6, 1.5e6, 4e6),
        unit_price_pattern=(6e-7, 2.5e-6, 1e-6, 3e-6, 8e-7),
        algorithm_pattern=("lsb", "dct", "dwt"),
        task_count=20,
        size_min_bits=1e6,
        size_max_bits=6e6,
        weights=ObjectiveWeights(0.25, 0.25, 0.25, 0.25),
        constraints=Constraints(120.0, 0.05, 400.0),
        scales=NormalizationScales(60.0, 30.0, 30.0, 900.0),
        ppo=PpoHyperparams(n_step=2048, epochs=10, minibatch_size=64,
                           total_steps=120_000, lr_start=1e-3,
                           lr_end=5.76e-7),
    )
    base.update(overrides)
    return ScenarioConfig(**base)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
