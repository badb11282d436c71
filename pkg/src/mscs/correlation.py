"""Aperiodic correlation and exact verification of complementarity claims.

Correlations of phase sequences are carried exactly: a correlation value is
a multiset of lambda-th roots of unity, stored as an integer count per
exponent (:class:`CyclotomicSum`).  Such a sum is exactly zero iff its
generating polynomial sum_j counts[j] x^j is divisible by the lambda-th
cyclotomic polynomial, the minimal polynomial of exp(2*pi*1j/lambda).  The
divisibility test runs in integer arithmetic, so GCS / MSCS / type-II ZCS
verdicts carry no floating point tolerance.

A floating point path evaluates every tested sum independently in complex
doubles.  Exact and float verdicts must agree (zero below ``ZERO_TOL``,
nonzero above ``NONZERO_TOL``); a sum landing between the two thresholds,
or on the wrong side of its exact verdict, raises, because at these sizes
(at most 10^6 terms, lambda at most a few dozen in practice) nonzero sums
of roots of unity are bounded far away from zero.

Moduli above ``EXACT_MODULUS_CAP`` fall back to the float path alone and
reports are marked ``mode="numerical"``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .constructions import kronecker_compose
from .seqcore import PhaseSequence, SequenceSet, to_complex

EXACT_MODULUS_CAP = 1000
ZERO_TOL = 1e-9
NONZERO_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CyclotomicSum:
    """An integer combination sum_j counts[j] * w^j of lambda-th roots of unity."""

    modulus: int
    counts: np.ndarray

    def __init__(self, modulus: int, counts):
        modulus = int(modulus)
        if modulus < 1:
            raise ValueError(f"modulus {modulus} must be >= 1")
        arr = np.asarray(counts, dtype=np.int64)
        if arr.shape != (modulus,):
            raise ValueError(f"counts must have length {modulus}, got shape {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "counts", arr)

    @classmethod
    def zero(cls, modulus: int) -> "CyclotomicSum":
        return cls(modulus, np.zeros(modulus, dtype=np.int64))

    def _coerce(self, other) -> np.ndarray:
        if not isinstance(other, CyclotomicSum):
            raise TypeError("expected a CyclotomicSum")
        if other.modulus != self.modulus:
            raise ValueError("modulus mismatch")
        return other.counts

    def __add__(self, other):
        return CyclotomicSum(self.modulus, self.counts + self._coerce(other))

    def __sub__(self, other):
        return CyclotomicSum(self.modulus, self.counts - self._coerce(other))

    def __neg__(self):
        return CyclotomicSum(self.modulus, -self.counts)

    def __mul__(self, other):
        """Product of sums: cyclic convolution of counts, exponents mod lambda."""
        b = self._coerce(other)
        lam = self.modulus
        out = np.zeros(lam, dtype=np.int64)
        for j in np.nonzero(self.counts)[0]:
            out += self.counts[j] * np.roll(b, j)
        return CyclotomicSum(lam, out)

    def conjugate(self) -> "CyclotomicSum":
        """Complex conjugate: exponent j becomes -j mod lambda."""
        idx = (-np.arange(self.modulus)) % self.modulus
        return CyclotomicSum(self.modulus, self.counts[idx])

    def value(self) -> complex:
        """Numeric evaluation in complex doubles."""
        w = np.exp(2j * np.pi * np.arange(self.modulus) / self.modulus)
        return complex(np.dot(self.counts, w))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicSum):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.counts, other.counts)


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending, monic.

    Computed by exact division of x^n - 1 by the product of all lower
    cyclotomic polynomials at divisors of n.
    """
    if n < 1:
        raise ValueError(f"cyclotomic index {n} must be >= 1")
    poly = [0] * (n + 1)
    poly[0] = -1
    poly[n] = 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _poly_divexact(num: Sequence[int], den: Sequence[int]) -> list[int]:
    """Exact quotient of integer polynomials; den must be monic and divide num."""
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    if any(num):
        raise ValueError("polynomial division left a remainder")
    return quot


def is_zero(s: CyclotomicSum) -> bool:
    """Exact test of sum_j counts[j] * w^j == 0.

    True iff the counts polynomial is divisible by the lambda-th cyclotomic
    polynomial: w is a root of a rational polynomial exactly when its
    minimal polynomial divides it.  Divisor is monic, so the division stays
    in integers.
    """
    if not s.counts.any():
        return True
    phi = cyclotomic_polynomial(s.modulus)
    dd = len(phi) - 1
    rem = [int(c) for c in s.counts]
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            rem[i] = 0
            for j in range(dd):
                rem[i - dd + j] -= c * phi[j]
    return not any(rem[:dd])


def _check_pair(a: PhaseSequence, b: PhaseSequence, tau: int) -> int:
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    L = len(a)
    if abs(tau) >= L:
        raise ValueError(f"shift {tau} out of range for length {L}")
    return L


def accf_exact(a: PhaseSequence, b: PhaseSequence, tau: int) -> CyclotomicSum:
    """Aperiodic cross-correlation sum_i w^(a_i - b_{i+tau}) as exact counts.

    For tau >= 0 the window is i = 0 .. L-1-tau; for negative tau it is the
    mirrored sum_i w^(a_{i-tau} - b_i).  Exactly L - |tau| terms are counted.
    """
    L = _check_pair(a, b, tau)
    lam = a.modulus
    if tau >= 0:
        diffs = (a.values[: L - tau] - b.values[tau:]) % lam
    else:
        diffs = (a.values[-tau:] - b.values[: L + tau]) % lam
    return CyclotomicSum(lam, np.bincount(diffs, minlength=lam))


def accf_float(a: PhaseSequence, b: PhaseSequence, tau: int) -> complex:
    """Aperiodic cross-correlation evaluated directly in complex doubles."""
    L = _check_pair(a, b, tau)
    ca, cb = to_complex(a), to_complex(b)
    if tau >= 0:
        return complex(np.dot(ca[: L - tau], np.conj(cb[tau:])))
    return complex(np.dot(ca[-tau:], np.conj(cb[: L + tau])))


def aacf_set_sum(sset: SequenceSet, tau: int) -> CyclotomicSum:
    """Entrywise sum of the members' autocorrelations at one shift."""
    L = sset.length
    if abs(tau) >= L:
        raise ValueError(f"shift {tau} out of range for length {L}")
    lam = sset.modulus
    stack = np.stack([s.values for s in sset.sequences])
    if tau >= 0:
        diffs = (stack[:, : L - tau] - stack[:, tau:]) % lam
    else:
        diffs = (stack[:, -tau:] - stack[:, : L + tau]) % lam
    return CyclotomicSum(lam, np.bincount(diffs.ravel(), minlength=lam))


def _aacf_float_all(seq: PhaseSequence) -> np.ndarray:
    """Autocorrelation at every shift 0..L-1 via one zero-padded FFT."""
    c = to_complex(seq)
    L = len(c)
    padded = np.zeros(2 * L, dtype=complex)
    padded[:L] = c
    spec = np.fft.fft(padded)
    corr = np.fft.ifft(spec * np.conj(spec))
    # corr[t] = sum_i c_{i+t} conj(c_i); the definition conjugates the lagged copy
    return np.conj(corr[:L])


def _set_aacf_float_all(sset: SequenceSet) -> np.ndarray:
    out = np.zeros(sset.length, dtype=complex)
    for s in sset.sequences:
        out += _aacf_float_all(s)
    return out


@dataclass(frozen=True)
class ShiftCheck:
    """Verdict at one shift: exact zero flag plus float magnitude."""

    shift: int
    exact_zero: bool
    magnitude: float


@dataclass(frozen=True)
class CorrelationReport:
    """Outcome of a GCS / MSCS / type-II ZCS verification run."""

    claim: str
    parameter: int | None
    set_size: int
    length: int
    modulus: int
    mode: str
    shifts: tuple[ShiftCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.exact_zero for c in self.shifts)

    @property
    def failing_shifts(self) -> tuple[int, ...]:
        return tuple(c.shift for c in self.shifts if not c.exact_zero)


def _verify(sset: SequenceSet, shifts: Iterable[int], claim: str, parameter: int | None,
            early_exit: bool) -> CorrelationReport:
    lam = sset.modulus
    exact_mode = lam <= EXACT_MODULUS_CAP
    float_all = _set_aacf_float_all(sset)
    checks = []
    for tau in shifts:
        mag = float(abs(float_all[tau]))
        if exact_mode:
            zero = is_zero(aacf_set_sum(sset, tau))
            if zero and mag >= ZERO_TOL or not zero and mag <= NONZERO_TOL:
                raise RuntimeError(
                    f"exact/float separation violated at shift {tau}: "
                    f"exact_zero={zero}, |sum|={mag:.3e}"
                )
        else:
            zero = mag < ZERO_TOL
        checks.append(ShiftCheck(tau, zero, mag))
        if early_exit and not zero:
            break
    return CorrelationReport(
        claim=claim,
        parameter=parameter,
        set_size=len(sset),
        length=sset.length,
        modulus=lam,
        mode="exact" if exact_mode else "numerical",
        shifts=tuple(checks),
    )


def verify_mscs(sset: SequenceSet, S: int, *, early_exit: bool = False) -> CorrelationReport:
    """Check sum of member AACFs vanishes at every nonzero multiple of S.

    Negative shifts follow from conjugate symmetry, so only 0 < tau < L is
    tested.  Failures are report content; nothing raises on a bad set.
    """
    L = sset.length
    if not (1 <= S < L):
        raise ValueError(f"S={S} must satisfy 1 <= S < L={L}")
    return _verify(sset, range(S, L, S), "MSCS", S, early_exit)


def verify_gcs(sset: SequenceSet, *, early_exit: bool = False) -> CorrelationReport:
    """Check sum of member AACFs vanishes at every nonzero shift."""
    L = sset.length
    if L < 2:
        raise ValueError("GCS verification needs length >= 2")
    report = _verify(sset, range(1, L), "GCS", None, early_exit)
    return report


def verify_type2_zcs(sset: SequenceSet, Z: int, *, early_exit: bool = False) -> CorrelationReport:
    """Check sum of member AACFs vanishes in the tail band L-Z < tau < L."""
    L = sset.length
    if not (1 <= Z < L):
        raise ValueError(f"Z={Z} must satisfy 1 <= Z < L={L}")
    return _verify(sset, range(L - Z + 1, L), "ZCS", Z, early_exit)


def _accf_or_zero(x: PhaseSequence, tau: int) -> CyclotomicSum:
    if abs(tau) >= len(x):
        return CyclotomicSum.zero(x.modulus)
    return accf_exact(x, x, tau)


def _accf_float_or_zero(x: PhaseSequence, tau: int) -> complex:
    if abs(tau) >= len(x):
        return 0j
    return accf_float(x, x, tau)


def kronecker_accf_identity_check(a: PhaseSequence, b: PhaseSequence, tau: int) -> bool:
    """Check the correlation split of a Kronecker product against direct computation.

    With q = tau // L2 and r = tau % L2 (L2 = len(b)), the autocorrelation
    of the composed sequence satisfies

        rho(a (x) b)(tau) = rho(a)(q) rho(b)(r) + rho(a)(q+1) rho(b)(r - L2)

    where the second term is present only when r != 0 and out-of-range
    shifts contribute zero.  Floor division extends the split to negative
    shifts unchanged.  The identity is checked exactly through count
    vector convolution and in floats within ``ZERO_TOL``; both must hold.
    """
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    L2 = len(b)
    total = len(a) * L2
    if not (-total < tau < total):
        raise ValueError(f"shift {tau} out of range for composed length {total}")
    q, r = divmod(tau, L2)
    composed = kronecker_compose(a, b)

    lhs_f = accf_float(composed, composed, tau)
    rhs_f = _accf_float_or_zero(a, q) * _accf_float_or_zero(b, r)
    if r != 0:
        rhs_f += _accf_float_or_zero(a, q + 1) * _accf_float_or_zero(b, r - L2)
    float_ok = abs(lhs_f - rhs_f) <= ZERO_TOL

    if a.modulus > EXACT_MODULUS_CAP:
        return float_ok

    lhs = accf_exact(composed, composed, tau)
    rhs = _accf_or_zero(a, q) * _accf_or_zero(b, r)
    if r != 0:
        rhs = rhs + _accf_or_zero(a, q + 1) * _accf_or_zero(b, r - L2)
    return float_ok and is_zero(lhs - rhs)
