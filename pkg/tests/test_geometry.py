import math

import numpy as np
import pytest

from leosim.geometry import (ConstellationConfig, InfeasibleConstellationError,
                             hops_to_visible, pose_at, slant_range_km)

# frozen from a 50-digit Decimal evaluation of the cosine rule
DIST_30DEG_780KM = 3579.9305698438566


def cfg(**kw):
    defaults = dict(satellite_count=8, angular_velocity=0.0)
    defaults.update(kw)
    return ConstellationConfig(**defaults)


class TestSlantRange:
    def test_overhead_distance_is_altitude(self):
        c = cfg(orbit_altitude_km=780.0)
        assert slant_range_km(c, 0.0) == pytest.approx(780.0, rel=1e-9)

    def test_antipodal_distance(self):
        c = cfg(orbit_altitude_km=780.0, earth_radius_km=6371.0)
        assert slant_range_km(c, math.pi) == pytest.approx(
            2 * 6371.0 + 780.0, rel=1e-9)

    def test_thirty_degrees_high_precision(self):
        c = cfg(orbit_altitude_km=780.0, earth_radius_km=6371.0)
        assert slant_range_km(c, math.radians(30)) == pytest.approx(
            DIST_30DEG_780KM, rel=1e-12)

    def test_even_and_periodic_in_gamma(self, rng):
        c = cfg()
        for gamma in rng.uniform(0, 2 * math.pi, size=50):
            assert slant_range_km(c, gamma) == pytest.approx(
                slant_range_km(c, 2 * math.pi - gamma), rel=1e-12)
            assert slant_range_km(c, gamma) <= slant_range_km(c, math.pi)
            assert slant_range_km(c, gamma) >= slant_range_km(c, 0.0) - 1e-12


class TestPose:
    def test_pure_function(self):
        c = cfg(angular_velocity=1e-3)
        a = pose_at(c, 3, 17.5)
        b = pose_at(c, 3, 17.5)
        assert a == b

    def test_phase_advance(self):
        c = cfg(angular_velocity=0.01, satellite_count=4)
        p = pose_at(c, 0, 10.0)
        assert p.geocentric_angle == pytest.approx(0.1)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            pose_at(cfg(), 8, 0.0)

    def test_visibility_is_angular_separation(self):
        c = cfg(satellite_count=8, visibility_half_angle=math.pi / 2)
        # uniform ring: 0 and 45 deg visible, 90 is a closed boundary
        assert pose_at(c, 0, 0.0).visible
        assert pose_at(c, 1, 0.0).visible
        assert not pose_at(c, 2, 0.0).visible  # 90 deg, strict <
        assert pose_at(c, 7, 0.0).visible      # 315 deg -> separation 45

    def test_rotation_leaves_distance_multiset(self, rng):
        c = cfg(satellite_count=6, angular_velocity=2 * math.pi / 6000)
        period_slot = 1000.0  # one slot of the 6-sat uniform ring
        d0 = sorted(pose_at(c, j, 0.0).distance_km for j in range(6))
        d1 = sorted(pose_at(c, j, period_slot).distance_km for j in range(6))
        assert np.allclose(d0, d1, rtol=1e-9)


class TestHops:
    def test_visible_satellite_zero_hops(self):
        c = cfg()
        assert hops_to_visible(c, 0, 0.0) == (0, 0)

    def test_one_hop_neighbor(self):
        # only satellite 0 visible; its +45deg neighbour walks back to it
        c = cfg(satellite_count=4, visibility_half_angle=0.8,
                initial_phase_offsets=(0.0, math.pi / 2, math.pi,
                                       3 * math.pi / 2))
        hops, target = hops_to_visible(c, 1, 0.0)
        assert (hops, target) == (1, 0)

    def test_direction_convention(self):
        # gamma in (0,180] walks -1 mod J; gamma in (180,360) walks +1
        c = cfg(satellite_count=8, visibility_half_angle=math.pi / 2)
        hops, target = hops_to_visible(c, 3, 0.0)   # 135 deg
        assert (hops, target) == (2, 1)
        hops, target = hops_to_visible(c, 5, 0.0)   # 225 deg
        assert (hops, target) == (2, 7)

    def test_near_antipode_matches_brute_force(self):
        c = cfg(satellite_count=8, visibility_half_angle=math.pi / 2,
                initial_phase_offsets=tuple(
                    (math.radians(170) + 2 * math.pi * j / 8) % (2 * math.pi)
                    for j in range(8)))
        hops, target = hops_to_visible(c, 0, 0.0)
        # brute force: walk the ring in the mandated direction
        j, walked = 0, 0
        while not pose_at(c, j, 0.0).visible:
            j = (j - 1) % 8
            walked += 1
        assert (hops, target) == (walked, j)

    def test_target_always_visible_randomized(self, rng):
        for _ in range(300):
            j = int(rng.integers(1, 9))
            phases = rng.uniform(0, 2 * math.pi, size=j)
            phases[0] = 0.1
            c = cfg(satellite_count=j,
                    visibility_half_angle=float(rng.uniform(0.2, math.pi)),
                    initial_phase_offsets=tuple(phases),
                    angular_velocity=float(rng.uniform(0, 1e-2)))
            t = float(rng.uniform(0, 1e4))
            # keep one satellite pinned near zenith at the query instant
            if not any(pose_at(c, k, t).visible for k in range(j)):
                continue
            hops, target = hops_to_visible(c, int(rng.integers(j)), t)
            assert pose_at(c, target, t).visible
            assert hops < j

    def test_no_visible_satellite_raises(self):
        c = cfg(satellite_count=2, visibility_half_angle=0.01,
                initial_phase_offsets=(1.0, 4.0))
        with pytest.raises(InfeasibleConstellationError):
            hops_to_visible(c, 0, 0.0)


class TestConfigValidation:
    def test_bad_phase_count(self):
        with pytest.raises(ValueError):
            ConstellationConfig(satellite_count=3,
                                initial_phase_offsets=(0.0, 1.0))

    def test_bad_half_angle(self):
        with pytest.raises(ValueError):
            ConstellationConfig(visibility_half_angle=0.0)
