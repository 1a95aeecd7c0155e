"""Scenario configuration: INI schema, validation, runtime builders.

One INI file holds every free parameter of a run.  All keys have
defaults, unknown sections or keys are rejected, and the fully-resolved
config can be echoed back out and re-loaded to an identical scenario.

Per-satellite lists (bandwidth, compute speed, price, algorithm) are
patterns: they are cycled out to ``satellite_count`` entries, so one base
file supports satellite-count sweeps.
"""
import configparser
import math
from dataclasses import dataclass, replace, field

import numpy as np

from .channel import LinkParams
from .economics import Constraints, NormalizationScales, ObjectiveWeights
from .geometry import ConstellationConfig
from .ppo import PpoHyperparams
from .seeding import rng_stream
from .timeline import SatelliteServer
from .watermark import ALGORITHM_KINDS


class ConfigError(ValueError):
    """Invalid or unparseable scenario configuration."""


@dataclass(frozen=True)
class ScenarioConfig:
    # constellation
    earth_radius_km: float = 6371.0
    orbit_altitude_km: float = 780.0
    satellite_count: int = 8
    angular_velocity: float = 0.0  # rad/s; 0 freezes the ring
    visibility_half_angle: float = math.pi / 2
    initial_phase_offsets: tuple[float, ...] = ()
    # link
    reference_gain: float = 0.02
    noise_power_w: float = 1e-10
    tx_power_w: float = 2.0
    path_loss_exponent: float = 1.0
    # per-satellite patterns, cycled to satellite_count
    bandwidth_pattern: tuple[float, ...] = (2e6, 1.5e6, 2.5e6, 1e6, 3e6)
    compute_speed_pattern: tuple[float, ...] = (4e6, 2e6, 8e6, 3e6, 6e6)
    unit_price_pattern: tuple[float, ...] = (1e-6, 2e-6, 5e-7, 1.5e-6, 8e-7)
    algorithm_pattern: tuple[str, ...] = ("lsb", "dct", "dwt")
    # watermark quality constants
    peak: float = 255.0
    mse_lsb: float = 0.25
    mse_dct: float = 48.0
    mse_dwt: float = 2.75
    # tasks
    task_count: int = 8
    size_min_bits: float = 1e6
    size_max_bits: float = 8e6
    migrate_speed_bps: float = 1e8
    # objective
    weights: ObjectiveWeights = field(
        default_factory=lambda: ObjectiveWeights(0.25, 0.25, 0.25, 0.25))
    constraints: Constraints = field(
        default_factory=lambda: Constraints(60.0, 0.05, 250.0))
    scales: NormalizationScales = field(
        default_factory=lambda: NormalizationScales(60.0, 20.0, 20.0, 500.0))
    terminal_penalty: float = 10.0
    # training and run bookkeeping
    ppo: PpoHyperparams = field(default_factory=PpoHyperparams)
    seed: int = 0
    out_dir: str = "runs"

    def __post_init__(self):
        if self.task_count < 0:
            raise ConfigError("tasks.count must be >= 0")
        if not 0 < self.size_min_bits <= self.size_max_bits:
            raise ConfigError("task size range must satisfy 0 < min <= max")
        if self.migrate_speed_bps <= 0:
            raise ConfigError("migration.speed_bps must be > 0")
        if self.terminal_penalty < 0:
            raise ConfigError("env.terminal_penalty must be >= 0")
        for kind in self.algorithm_pattern:
            if kind not in ALGORITHM_KINDS:
                raise ConfigError(f"unknown algorithm {kind!r}")
        for name in ("bandwidth_pattern", "compute_speed_pattern"):
            if any(v <= 0 for v in getattr(self, name)):
                raise ConfigError(f"satellites.{name} must be > 0")

    # --- runtime builders ---------------------------------------------------

    def constellation(self) -> ConstellationConfig:
        return ConstellationConfig(
            earth_radius_km=self.earth_radius_km,
            orbit_altitude_km=self.orbit_altitude_km,
            satellite_count=self.satellite_count,
            angular_velocity=self.angular_velocity,
            visibility_half_angle=self.visibility_half_angle,
            initial_phase_offsets=self.initial_phase_offsets,
        )

    def _cycled(self, pattern, n):
        return tuple(pattern[i % len(pattern)] for i in range(n))

    def link(self) -> LinkParams:
        return LinkParams(
            reference_gain=self.reference_gain,
            noise_power_w=self.noise_power_w,
            tx_power_w=self.tx_power_w,
            bandwidth_hz=self._cycled(self.bandwidth_pattern,
                                      self.satellite_count),
            path_loss_exponent=self.path_loss_exponent,
        )

    def mse_for(self, kind: str) -> float:
        return {"lsb": self.mse_lsb, "dct": self.mse_dct,
                "dwt": self.mse_dwt}[kind]

    def servers(self) -> list[SatelliteServer]:
        n = self.satellite_count
        speeds = self._cycled(self.compute_speed_pattern, n)
        prices = self._cycled(self.unit_price_pattern, n)
        algs = self._cycled(self.algorithm_pattern, n)
        bands = self._cycled(self.bandwidth_pattern, n)
        return [SatelliteServer(index=j, compute_speed_bps=speeds[j],
                                unit_price_per_byte=prices[j],
                                algorithm=algs[j], bandwidth_hz=bands[j],
                                mse=self.mse_for(algs[j]))
                for j in range(n)]


def draw_task_sizes(cfg: ScenarioConfig, seed: int) -> np.ndarray:
    """Episode task sizes in bits, from the 'tasks' substream of ``seed``."""
    rng = rng_stream(seed, "tasks")
    return rng.uniform(cfg.size_min_bits, cfg.size_max_bits,
                       size=cfg.task_count)


# --- INI schema -------------------------------------------------------------

def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split())


def _strs(text: str) -> tuple[str, ...]:
    return tuple(text.split())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split())


def _bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# section -> key -> (parser, ScenarioConfig attribute path)
_SCHEMA = {
    "constellation": {
        "earth_radius_km": (float, "earth_radius_km"),
        "orbit_altitude_km": (float, "orbit_altitude_km"),
        "satellite_count": (int, "satellite_count"),
        "angular_velocity_rad_s": (float, "angular_velocity"),
        "visibility_half_angle_rad": (float, "visibility_half_angle"),
        "initial_phase_offsets": (_floats, "initial_phase_offsets"),
    },
    "link": {
        "reference_gain": (float, "reference_gain"),
        "noise_power_w": (float, "noise_power_w"),
        "tx_power_w": (float, "tx_power_w"),
        "path_loss_exponent": (float, "path_loss_exponent"),
    },
    "satellites": {
        "bandwidth_hz": (_floats, "bandwidth_pattern"),
        "compute_speed_bps": (_floats, "compute_speed_pattern"),
        "unit_price_per_byte": (_floats, "unit_price_pattern"),
        "algorithm": (_strs, "algorithm_pattern"),
    },
    "watermark": {
        "peak": (float, "peak"),
        "mse_lsb": (float, "mse_lsb"),
        "mse_dct": (float, "mse_dct"),
        "mse_dwt": (float, "mse_dwt"),
    },
    "tasks": {
        "count": (int, "task_count"),
        "size_min_bits": (float, "size_min_bits"),
        "size_max_bits": (float, "size_max_bits"),
    },
    "migration": {
        "speed_bps": (float, "migrate_speed_bps"),
    },
    "objective": {
        "weight_time": (float, ("weights", "time")),
        "weight_energy": (float, ("weights", "energy")),
        "weight_price": (float, ("weights", "price")),
        "weight_quality": (float, ("weights", "quality")),
    },
    "constraints": {
        "max_total_time_s": (float, ("constraints", "max_total_time_s")),
        "max_failure_prob": (float, ("constraints", "max_failure_prob")),
        "min_total_quality_db": (float,
                                 ("constraints", "min_total_quality_db")),
    },
    "normalization": {
        "time_s": (float, ("scales", "time_s")),
        "energy_j": (float, ("scales", "energy_j")),
        "price": (float, ("scales", "price")),
        "quality_db": (float, ("scales", "quality_db")),
    },
    "env": {
        "terminal_penalty": (float, "terminal_penalty"),
    },
    "ppo": {
        "n_step": (int, ("ppo", "n_step")),
        "epochs": (int, ("ppo", "epochs")),
        "minibatch_size": (int, ("ppo", "minibatch_size")),
        "clip_eps": (float, ("ppo", "clip_eps")),
        "discount": (float, ("ppo", "discount")),
        "gae_lambda": (float, ("ppo", "gae_lambda")),
        "lr_start": (float, ("ppo", "lr_start")),
        "lr_end": (float, ("ppo", "lr_end")),
        "total_steps": (int, ("ppo", "total_steps")),
        "value_coef": (float, ("ppo", "value_coef")),
        "entropy_coef": (float, ("ppo", "entropy_coef")),
        "normalize_advantages": (_bool, ("ppo", "normalize_advantages")),
        "hidden": (_ints, ("ppo", "hidden")),
    },
    "run": {
        "seed": (int, "seed"),
        "out_dir": (str, "out_dir"),
    },
}


def load_config(path) -> ScenarioConfig:
    """Parse and validate an INI scenario file; defaults fill gaps."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    flat: dict[str, object] = {}
    nested: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            parse, target = _SCHEMA[section][key]
            try:
                value = parse(raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {section}.{key}: "
                                  f"{raw!r} ({exc})") from exc
            if isinstance(target, tuple):
                nested.setdefault(target[0], {})[target[1]] = value
            else:
                flat[target] = value

    try:
        base = ScenarioConfig(**flat)
        if "weights" in nested:
            base = replace(base, weights=replace(base.weights,
                                                 **nested["weights"]))
        if "constraints" in nested:
            base = replace(base, constraints=replace(base.constraints,
                                                     **nested["constraints"]))
        if "scales" in nested:
            base = replace(base, scales=replace(base.scales,
                                                **nested["scales"]))
        if "ppo" in nested:
            ppo_kwargs = dict(nested["ppo"])
            if "hidden" in ppo_kwargs:
                ppo_kwargs["hidden"] = tuple(ppo_kwargs["hidden"])
            base = replace(base, ppo=replace(base.ppo, **ppo_kwargs))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return base


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return " ".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_config(path, cfg: ScenarioConfig) -> None:
    """Echo the fully-resolved config; re-loading it reproduces ``cfg``."""
    def attr(target):
        if isinstance(target, tuple):
            return getattr(getattr(cfg, target[0]), target[1])
        return getattr(cfg, target)

    lines = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key, (_, target) in keys.items():
            value = attr(target)
            if value == () or value is None:
                continue
            lines.append(f"{key} = {_fmt(value)}")
        lines.append("")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
