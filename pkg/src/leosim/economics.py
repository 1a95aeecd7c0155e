"""Pricing, watermark-quality aggregation and the scalar objective.

The objective mixes seconds, joules, currency and dB, so each component
is divided by a config-supplied scale before weighting; the weights then
act on unit-free quantities.  Constraint directions follow the model
verbatim: time and failure-rate are strict '<', quality is '>='.
"""
import math
from dataclasses import dataclass, field

from .timeline import SatelliteServer, TaskSpec

WEIGHT_SUM_TOL = 1e-9

# constraint tags
TIME, RELIABILITY, QUALITY = "time", "reliability", "quality"


@dataclass(frozen=True)
class ObjectiveWeights:
    time: float
    energy: float
    price: float
    quality: float

    def __post_init__(self):
        if min(self.time, self.energy, self.price, self.quality) < 0:
            raise ValueError("weights must be >= 0")
        total = self.time + self.energy + self.price + self.quality
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")


@dataclass(frozen=True)
class Constraints:
    max_total_time_s: float        # T-hat
    max_failure_prob: float        # r-hat
    min_total_quality_db: float    # V-hat

    def __post_init__(self):
        if not 0 < self.max_failure_prob <= 1:
            raise ValueError("max_failure_prob must be in (0, 1]")
        if not math.isfinite(self.max_total_time_s) \
                or not math.isfinite(self.min_total_quality_db):
            raise ValueError("constraint thresholds must be finite")


@dataclass(frozen=True)
class NormalizationScales:
    time_s: float
    energy_j: float
    price: float
    quality_db: float

    def __post_init__(self):
        if min(self.time_s, self.energy_j, self.price, self.quality_db) <= 0:
            raise ValueError("normalization scales must be > 0")


@dataclass(frozen=True)
class EpisodeOutcome:
    total_time_s: float
    transmit_energy_j: float
    total_price: float
    total_quality_db: float
    failure_prob: float
    cost: float
    feasible: bool
    violated: frozenset = field(default_factory=frozenset)


def total_price(tasks: list[TaskSpec], assignment: list[int],
                servers: list[SatelliteServer]) -> float:
    """Byte-count billing: sum of (D_i / 8) * unit price of the server."""
    return sum(t.size_bits / 8.0 * servers[j].unit_price_per_byte
               for t, j in zip(tasks, assignment))


def total_quality(tasks: list[TaskSpec], assignment: list[int],
                  servers: list[SatelliteServer],
                  peak: float = 255.0) -> float:
    """Sum over tasks of the PSNR of the serving satellite's codec."""
    out = 0.0
    for _, j in zip(tasks, assignment):
        mse = servers[j].mse
        if mse == 0.0:
            return math.inf  # lossless codec, excluded from default configs
        out += 10.0 * math.log10(peak * peak / mse)
    return out


def scalar_cost(total_time_s: float, transmit_energy_j: float,
                total_price_: float, total_quality_db: float,
                weights: ObjectiveWeights,
                scales: NormalizationScales) -> float:
    """Weighted unit-free cost; quality enters with a negative sign."""
    return (weights.time * (total_time_s / scales.time_s)
            + weights.energy * (transmit_energy_j / scales.energy_j)
            + weights.price * (total_price_ / scales.price)
            - weights.quality * (total_quality_db / scales.quality_db))


def check_constraints(total_time_s: float, failure_prob: float,
                      total_quality_db: float,
                      constraints: Constraints) -> tuple[bool, frozenset]:
    violated = set()
    if not total_time_s < constraints.max_total_time_s:
        violated.add(TIME)
    if not failure_prob < constraints.max_failure_prob:
        violated.add(RELIABILITY)
    if not total_quality_db >= constraints.min_total_quality_db:
        violated.add(QUALITY)
    return not violated, frozenset(violated)
