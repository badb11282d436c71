"""Shared test oracles: definition-level correlation sums, no shared code paths.

The library computes correlations through count vectors and FFTs; the
oracles here spell out the defining sums term by term on the complex
lifts, so agreement is meaningful.
"""

import numpy as np


def lift(seq):
    """Complex unit-circle lift of a phase sequence, computed locally."""
    return np.exp(2j * np.pi * np.asarray(seq.values, dtype=float) / seq.modulus)


def naive_rho(ca, cb, tau):
    """Aperiodic cross-correlation of complex arrays by the defining sum."""
    L = len(ca)
    assert -L < tau < L
    if tau >= 0:
        return sum(ca[i] * np.conj(cb[i + tau]) for i in range(L - tau))
    return sum(ca[i - tau] * np.conj(cb[i]) for i in range(L + tau))


def naive_set_aacf(sset, tau):
    """Sum of member autocorrelations at one shift, term by term."""
    total = 0j
    for s in sset.sequences:
        c = lift(s)
        total += naive_rho(c, c, tau)
    return total
