"""Canonical worked sets used by the test suite, the selftest and the docs.

Both are small enough to verify exactly in well under a second and serve
as fixed points: their parameters, claims and measured PMEPR values are
frozen in the regression tests.
"""

from __future__ import annotations

from .constructions import PrimeBlock, length_extended_mscs, single_prime_mscs
from .seqcore import SequenceSet


def mscs_3_27_3() -> SequenceSet:
    """The ternary (3, 27, 3)-MSCS over Z6 with base function 2*v2*v3 + 5.

    Three sequences of length 27; the summed autocorrelations vanish at
    every nonzero multiple of 3, and the set doubles as a type-II ZCS with
    zero zone width 24.
    """
    block = PrimeBlock(p=3, m=3, s=2, pi=(2, 3), constant=5)
    return single_prime_mscs(block, modulus=6)


def mscs_3_54_2() -> SequenceSet:
    """The (3, 54, 2)-MSCS over Z6 built from a ternary GCS base times one binary digit.

    Base function 2*(v2*v3 + v3*v1) + 2*v1 + 5*v2 + v3 on Z_3^3, extended
    by the factor 3*w over Z_2 as the most significant length digit.  Set
    PMEPR sits just under the bound M*S = 6.
    """
    base = PrimeBlock(p=3, m=3, s=1, pi=(2, 3, 1), linear=(2, 5, 1))
    return length_extended_mscs([base], ext_prime=2, modulus=6, ext_linear=3)
