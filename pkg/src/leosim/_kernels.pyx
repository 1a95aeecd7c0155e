# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: frozen-constellation scheduling and GAE.

Must stay arithmetic-identical to ``_kernels_py``; both are exercised by
the parity tests.
"""
import numpy as np


def schedule_frozen(double[::1] sizes, long long[::1] assign,
                    double[::1] up_rate, double[::1] comp_speed,
                    long long[::1] hops, double[::1] down_rate,
                    double migrate_speed, double t0):
    cdef Py_ssize_t n = sizes.shape[0]
    cdef Py_ssize_t n_sat = up_rate.shape[0]
    us_a = np.empty(n)
    ue_a = np.empty(n)
    cs_a = np.empty(n)
    ce_a = np.empty(n)
    me_a = np.empty(n)
    de_a = np.empty(n)
    last_a = np.full(n_sat, -np.inf)
    cdef double[::1] us = us_a
    cdef double[::1] ue = ue_a
    cdef double[::1] cs = cs_a
    cdef double[::1] ce = ce_a
    cdef double[::1] me = me_a
    cdef double[::1] de = de_a
    cdef double[::1] last = last_a
    cdef double clock = t0
    cdef double d, dur, start
    cdef Py_ssize_t i, j
    for i in range(n):
        j = <Py_ssize_t>assign[i]
        d = sizes[i]
        dur = d / up_rate[j]
        us[i] = clock
        clock = clock + dur
        ue[i] = clock
        start = ue[i]
        if last[j] > start:
            start = last[j]
        cs[i] = start
        ce[i] = start + d / comp_speed[j]
        last[j] = ce[i]
        me[i] = ce[i] + hops[j] * d / migrate_speed
        de[i] = me[i] + d / (10.0 * down_rate[j])
    return us_a, ue_a, cs_a, ce_a, me_a, de_a


def gae_backward(double[::1] rewards, double[::1] values, double[::1] dones,
                 double last_value, double gamma, double lam):
    cdef Py_ssize_t n = rewards.shape[0]
    adv_a = np.empty(n)
    cdef double[::1] adv = adv_a
    cdef double gae = 0.0
    cdef double nonterminal, next_v, delta
    cdef Py_ssize_t t
    for t in range(n - 1, -1, -1):
        nonterminal = 1.0 - dones[t]
        if t + 1 < n:
            next_v = values[t + 1]
        else:
            next_v = last_value
        delta = rewards[t] + gamma * next_v * nonterminal - values[t]
        gae = delta + gamma * lam * nonterminal * gae
        adv[t] = gae
    return adv_a
