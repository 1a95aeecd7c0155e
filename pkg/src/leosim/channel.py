"""Uplink channel model: gain, SNR, rate, BPSK BER, batch reliability.

Note on the path-loss law: the gain is beta0 / distance**exponent with a
default exponent of 1, which is what the source model states verbatim
even though the conventional free-space law would use 2.  The exponent is
configurable; exponent 1 is the canonical setting here.
"""
import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class LinkParams:
    reference_gain: float          # power gain at 1 m (beta0)
    noise_power_w: float
    tx_power_w: float
    bandwidth_hz: tuple[float, ...]  # per-satellite uplink bandwidth
    path_loss_exponent: float = 1.0

    def __post_init__(self):
        if self.reference_gain <= 0 or self.noise_power_w <= 0 \
                or self.tx_power_w <= 0:
            raise ValueError("link parameters must be strictly positive")
        if any(b <= 0 for b in self.bandwidth_hz):
            raise ValueError("bandwidths must be strictly positive")


@dataclass(frozen=True)
class LinkQuality:
    gain: float
    snr: float            # linear, not dB
    rate_bps: float
    ber: float            # in [0, 0.5]


def link_quality(params: LinkParams, distance_km: float,
                 sat_index: int) -> LinkQuality:
    """Channel gain, SNR, Shannon rate and BPSK BER at a given slant range."""
    if distance_km <= 0:
        raise ValueError("distance must be > 0")
    distance_m = distance_km * 1e3
    gain = params.reference_gain / distance_m ** params.path_loss_exponent
    snr = params.tx_power_w * gain / params.noise_power_w
    rate = params.bandwidth_hz[sat_index] * math.log2(1.0 + snr)
    ber = math.erfc(math.sqrt(snr)) / 2.0
    return LinkQuality(gain=gain, snr=snr, rate_bps=rate, ber=ber)


def batch_reliability(bers: Sequence[float],
                      sizes_bits: Sequence[float]) -> tuple[float, float]:
    """All-or-nothing transmission reliability for a batch of tasks.

    r_success = prod_i (1 - b_i)**D_i, evaluated in the log domain so tiny
    per-bit error rates do not underflow.  Returns (r_success, r_failure).
    """
    if len(bers) != len(sizes_bits):
        raise ValueError("bers and sizes must have the same length")
    log_r = 0.0
    for b, d in zip(bers, sizes_bits):
        if not 0.0 <= b <= 1.0:
            raise ValueError(f"ber {b} outside [0, 1]")
        if d < 0:
            raise ValueError("task size must be >= 0")
        if d == 0:
            continue
        if b >= 1.0:
            return 0.0, 1.0
        log_r += d * math.log1p(-b)
    r_success = math.exp(log_r)
    r_failure = -math.expm1(log_r)
    return r_success, r_failure
