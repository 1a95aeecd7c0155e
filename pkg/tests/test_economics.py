import math

import pytest

from leosim.economics import (QUALITY, RELIABILITY, TIME, Constraints,
                              NormalizationScales, ObjectiveWeights,
                              check_constraints, scalar_cost, total_price,
                              total_quality)
from leosim.timeline import SatelliteServer, TaskSpec


def server(j, price=1e-6, mse=0.25):
    return SatelliteServer(index=j, compute_speed_bps=1e6,
                           unit_price_per_byte=price, algorithm="lsb",
                           bandwidth_hz=1e6, mse=mse)


UNIFORM = ObjectiveWeights(0.25, 0.25, 0.25, 0.25)
UNIT_SCALES = NormalizationScales(1.0, 1.0, 1.0, 1.0)


class TestPrice:
    def test_empty(self):
        assert total_price([], [], []) == 0.0

    def test_hand_value(self):
        # 8e6 bits = 1e6 bytes at 2e-6 per byte: price 2.0
        tasks = [TaskSpec(0, 8e6)]
        assert total_price(tasks, [0], [server(0, price=2e-6)]) == \
            pytest.approx(2.0)

    def test_additive_over_tasks(self):
        tasks = [TaskSpec(0, 8.0), TaskSpec(1, 16.0)]
        servers = [server(0, price=1.0), server(1, price=3.0)]
        assert total_price(tasks, [0, 1], servers) == pytest.approx(1.0 + 6.0)


class TestQuality:
    def test_single_mse_one(self):
        # psnr of mse=1 at peak 255 is 10*log10(65025)
        v = total_quality([TaskSpec(0, 8.0)], [0], [server(0, mse=1.0)])
        assert v == pytest.approx(10 * math.log10(255 ** 2), rel=1e-12)

    def test_sums_over_tasks(self):
        tasks = [TaskSpec(0, 8.0), TaskSpec(1, 8.0)]
        s = [server(0, mse=4.0)]
        one = total_quality(tasks[:1], [0], s)
        assert total_quality(tasks, [0, 0], s) == pytest.approx(2 * one)

    def test_lossless_is_infinite(self):
        assert total_quality([TaskSpec(0, 8.0)], [0],
                             [server(0, mse=0.0)]) == math.inf

    def test_lower_mse_higher_quality(self):
        tasks = [TaskSpec(0, 8.0)]
        qs = [total_quality(tasks, [0], [server(0, mse=m)])
              for m in (0.25, 1.0, 16.0, 100.0)]
        assert qs == sorted(qs, reverse=True)


class TestScalarCost:
    def test_hand_value(self):
        # equal weights, unit scales: (4 + 2 + 8 - 6) / 4 = 2.0
        assert scalar_cost(4.0, 2.0, 8.0, 6.0, UNIFORM, UNIT_SCALES) == \
            pytest.approx(2.0)

    def test_quality_sign(self):
        base = scalar_cost(1.0, 1.0, 1.0, 0.0, UNIFORM, UNIT_SCALES)
        better = scalar_cost(1.0, 1.0, 1.0, 10.0, UNIFORM, UNIT_SCALES)
        assert better < base

    def test_scale_divides_component(self):
        a = scalar_cost(10.0, 0.0, 0.0, 0.0, ObjectiveWeights(1, 0, 0, 0),
                        NormalizationScales(5.0, 1.0, 1.0, 1.0))
        assert a == pytest.approx(2.0)

    def test_argmin_invariant_under_common_scaling(self, rng):
        # scaling every normalization scale by the same factor preserves
        # the ordering of candidate outcomes
        outcomes = rng.uniform(0.1, 10.0, size=(16, 4))
        s1 = NormalizationScales(3.0, 5.0, 7.0, 11.0)
        s2 = NormalizationScales(6.0, 10.0, 14.0, 22.0)
        c1 = [scalar_cost(*o, UNIFORM, s1) for o in outcomes]
        c2 = [scalar_cost(*o, UNIFORM, s2) for o in outcomes]
        order1 = sorted(range(16), key=c1.__getitem__)
        order2 = sorted(range(16), key=c2.__getitem__)
        assert order1 == order2


class TestConstraints:
    CONS = Constraints(60.0, 0.05, 250.0)

    def test_all_satisfied(self):
        feasible, violated = check_constraints(59.9, 0.01, 250.0, self.CONS)
        assert feasible and violated == frozenset()

    def test_time_boundary_is_strict(self):
        feasible, violated = check_constraints(60.0, 0.01, 300.0, self.CONS)
        assert not feasible and violated == {TIME}

    def test_reliability_boundary_is_strict(self):
        feasible, violated = check_constraints(10.0, 0.05, 300.0, self.CONS)
        assert not feasible and violated == {RELIABILITY}

    def test_quality_boundary_is_inclusive(self):
        feasible, violated = check_constraints(10.0, 0.01, 250.0, self.CONS)
        assert feasible and violated == frozenset()

    def test_multiple_violations_reported(self):
        feasible, violated = check_constraints(100.0, 0.9, 0.0, self.CONS)
        assert not feasible
        assert violated == {TIME, RELIABILITY, QUALITY}


class TestValidation:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ObjectiveWeights(0.5, 0.5, 0.5, 0.5)

    def test_weights_nonnegative(self):
        with pytest.raises(ValueError):
            ObjectiveWeights(-0.5, 0.5, 0.5, 0.5)

    def test_weight_sum_tolerance(self):
        ObjectiveWeights(0.1, 0.2, 0.3, 0.4 + 1e-12)  # within tolerance

    def test_scales_positive(self):
        with pytest.raises(ValueError):
            NormalizationScales(1.0, 0.0, 1.0, 1.0)

    def test_failure_prob_range(self):
        with pytest.raises(ValueError):
            Constraints(60.0, 0.0, 250.0)
        with pytest.raises(ValueError):
            Constraints(60.0, 1.5, 250.0)
