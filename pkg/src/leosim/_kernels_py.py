"""Pure-Python fallback for the hot kernels.

Arithmetic must stay operation-for-operation identical to the Cython
version in ``_kernels.pyx`` so that both backends produce bit-identical
schedules.
"""
import numpy as np


def schedule_frozen(sizes, assign, up_rate, comp_speed, hops, down_rate,
                    migrate_speed, t0):
    """Sequential-upload FIFO schedule for a frozen (static) constellation.

    sizes       -- task sizes in bits, float64 (n,)
    assign      -- satellite index per task, int64 (n,)
    up_rate     -- uplink rate per satellite, bits/s (J,)
    comp_speed  -- compute speed per satellite, bits/s (J,)
    hops        -- migration hop count per satellite, int64 (J,)
    down_rate   -- uplink rate of the return satellite per satellite (J,)

    Returns six float64 arrays: upload_start, upload_end, comp_start,
    comp_end, migrate_end, download_end.
    """
    n = sizes.shape[0]
    n_sat = up_rate.shape[0]
    us = np.empty(n)
    ue = np.empty(n)
    cs = np.empty(n)
    ce = np.empty(n)
    me = np.empty(n)
    de = np.empty(n)
    last_comp_end = [-np.inf] * n_sat
    clock = t0
    for i in range(n):
        j = int(assign[i])
        d = float(sizes[i])
        dur = d / up_rate[j]
        us[i] = clock
        clock = clock + dur
        ue[i] = clock
        start = ue[i]
        if last_comp_end[j] > start:
            start = last_comp_end[j]
        cs[i] = start
        ce[i] = start + d / comp_speed[j]
        last_comp_end[j] = ce[i]
        me[i] = ce[i] + hops[j] * d / migrate_speed
        de[i] = me[i] + d / (10.0 * down_rate[j])
    return us, ue, cs, ce, me, de


def gae_backward(rewards, values, dones, last_value, gamma, lam):
    """Backward GAE recursion with done-masking.

    rewards, values, dones are float64 (n,); ``last_value`` bootstraps the
    step after the buffer.  Returns the advantage array (n,).
    """
    n = rewards.shape[0]
    adv = np.empty(n)
    gae = 0.0
    for t in range(n - 1, -1, -1):
        nonterminal = 1.0 - dones[t]
        next_v = values[t + 1] if t + 1 < n else last_value
        delta = rewards[t] + gamma * next_v * nonterminal - values[t]
        gae = delta + gamma * lam * nonterminal * gae
        adv[t] = gae
    return adv
