"""Named RNG substreams derived from one root seed.

Every source of randomness in a run (task sizes, network init, rollout
sampling, baseline draws) pulls from its own substream so components can
be varied independently while staying reproducible.
"""
import numpy as np

STREAMS = {
    "tasks": 0,
    "policy-init": 1,
    "rollout": 2,
    "baseline": 3,
}


def rng_stream(root_seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(root_seed, spawn_key=(STREAMS[name],)))
