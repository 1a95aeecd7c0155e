"""Circular-orbit constellation geometry around a fixed ground user.

Satellites sit on one ring at altitude H above an Earth of radius R.  The
geocentric angle gamma of a satellite is measured from the ray through the
user's zenith; a satellite is visible when its angular separation from
that ray is below the configured half-angle (default: the upper
half-plane).
"""
import math
from dataclasses import dataclass, field

TWO_PI = 2.0 * math.pi

# 100-minute orbital period
DEFAULT_ANGULAR_VELOCITY = TWO_PI / 6000.0


class InfeasibleConstellationError(RuntimeError):
    """No satellite is visible at the requested time."""


@dataclass(frozen=True)
class ConstellationConfig:
    earth_radius_km: float = 6371.0
    orbit_altitude_km: float = 780.0
    satellite_count: int = 8
    angular_velocity: float = DEFAULT_ANGULAR_VELOCITY  # rad/s; 0 = frozen
    visibility_half_angle: float = math.pi / 2
    initial_phase_offsets: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.satellite_count < 1:
            raise ValueError("satellite_count must be >= 1")
        if self.orbit_altitude_km <= 0:
            raise ValueError("orbit_altitude_km must be > 0")
        if not 0 < self.visibility_half_angle <= math.pi:
            raise ValueError("visibility_half_angle must be in (0, pi]")
        if not self.initial_phase_offsets:
            # uniform ring
            offsets = tuple(
                TWO_PI * j / self.satellite_count
                for j in range(self.satellite_count)
            )
            object.__setattr__(self, "initial_phase_offsets", offsets)
        if len(self.initial_phase_offsets) != self.satellite_count:
            raise ValueError("need one phase offset per satellite")
        if any(not 0 <= p < TWO_PI for p in self.initial_phase_offsets):
            raise ValueError("phase offsets must lie in [0, 2*pi)")

    @property
    def frozen(self) -> bool:
        return self.angular_velocity == 0.0


@dataclass(frozen=True)
class SatellitePose:
    sat_index: int
    geocentric_angle: float  # rad, in [0, 2*pi)
    visible: bool
    distance_km: float


def slant_range_km(cfg: ConstellationConfig, gamma: float) -> float:
    """UE-to-satellite distance from the geocentric angle (cosine rule)."""
    r = cfg.earth_radius_km
    rh = r + cfg.orbit_altitude_km
    return math.sqrt(r * r + rh * rh - 2.0 * r * rh * math.cos(gamma))


def is_visible(cfg: ConstellationConfig, gamma: float) -> bool:
    separation = min(gamma, TWO_PI - gamma)
    return separation < cfg.visibility_half_angle


def pose_at(cfg: ConstellationConfig, sat_index: int, t: float) -> SatellitePose:
    """Pose of one satellite at time t (pure function of its arguments)."""
    if not 0 <= sat_index < cfg.satellite_count:
        raise IndexError(f"satellite index {sat_index} out of range")
    gamma = (cfg.initial_phase_offsets[sat_index]
             + cfg.angular_velocity * t) % TWO_PI
    return SatellitePose(
        sat_index=sat_index,
        geocentric_angle=gamma,
        visible=is_visible(cfg, gamma),
        distance_km=slant_range_km(cfg, gamma),
    )


def hops_to_visible(cfg: ConstellationConfig, sat_index: int,
                    t: float) -> tuple[int, int]:
    """Ring walk from ``sat_index`` to the nearest visible satellite.

    Returns (hop_count, target_index).  A satellite in the (0, 180]-degree
    half walks by -1 (mod J), the other half by +1 (mod J), so results
    always move toward the zenith ray by the short way round.
    """
    pose = pose_at(cfg, sat_index, t)
    if pose.visible:
        return 0, sat_index
    step = -1 if 0.0 < pose.geocentric_angle <= math.pi else 1
    j = sat_index
    n = cfg.satellite_count
    for hop in range(1, n):
        j = (j + step) % n
        if pose_at(cfg, j, t).visible:
            return hop, j
    raise InfeasibleConstellationError(
        f"no visible satellite at t={t:.3f}s")
