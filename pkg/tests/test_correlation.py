import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import mscs.correlation as correlation
from conftest import lift, naive_rho, naive_set_aacf
from mscs.constructions import (
    PrimeBlock,
    kronecker_compose,
    multi_prime_mscs,
    single_prime_mscs,
)
from mscs.correlation import (
    EXACT_MODULUS_CAP,
    CyclotomicSum,
    aacf_set_sum,
    accf_exact,
    accf_float,
    cyclotomic_polynomial,
    is_zero,
    kronecker_accf_identity_check,
    verify_gcs,
    verify_mscs,
    verify_type2_zcs,
)
from mscs.reference_sets import mscs_3_27_3
from mscs.seqcore import PhaseSequence, SequenceSet


def test_cyclotomic_polynomial_known_values():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_cyclotomic_polynomial_against_sympy():
    import sympy

    x = sympy.Symbol("x")
    for n in range(1, 61):
        ours = cyclotomic_polynomial(n)
        theirs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(ours) == [int(c) for c in theirs]


def test_cyclotomic_degree_is_totient():
    for n in range(1, 211):
        degree = len(cyclotomic_polynomial(n)) - 1
        totient = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
        assert degree == totient


def test_is_zero_root_of_unity_sums():
    counts = np.zeros(6, dtype=int)
    counts[[0, 2, 4]] = 1
    assert is_zero(CyclotomicSum(6, counts))
    counts = np.zeros(6, dtype=int)
    counts[[1, 4]] = 1
    assert is_zero(CyclotomicSum(6, counts))
    counts = np.zeros(6, dtype=int)
    counts[3] = 2
    assert not is_zero(CyclotomicSum(6, counts))
    assert is_zero(CyclotomicSum.zero(9))


@given(
    st.integers(2, 12),
    st.lists(st.integers(-9, 9), min_size=1, max_size=12),
)
@settings(max_examples=200)
def test_is_zero_against_mpmath(lam, raw):
    import mpmath

    counts = np.zeros(lam, dtype=int)
    for j, c in enumerate(raw[:lam]):
        counts[j] = c
    s = CyclotomicSum(lam, counts)
    with mpmath.workdps(50):
        value = mpmath.fsum(
            int(counts[j]) * mpmath.e ** (2j * mpmath.pi * j / lam) for j in range(lam)
        )
        numerically_zero = abs(value) < mpmath.mpf("1e-30")
    assert is_zero(s) == numerically_zero


def test_cyclotomic_sum_algebra():
    rng = random.Random(8)
    lam = 12
    a = CyclotomicSum(lam, [rng.randint(-5, 5) for _ in range(lam)])
    b = CyclotomicSum(lam, [rng.randint(-5, 5) for _ in range(lam)])
    assert abs((a + b).value() - (a.value() + b.value())) < 1e-9
    assert abs((a - b).value() - (a.value() - b.value())) < 1e-9
    assert abs((-a).value() + a.value()) < 1e-12
    assert abs((a * b).value() - a.value() * b.value()) < 1e-9
    assert abs(a.conjugate().value() - np.conj(a.value())) < 1e-12


def test_cyclotomic_sum_product_of_monomials():
    lam = 5
    xa = np.zeros(lam, dtype=int)
    xa[3] = 1
    xb = np.zeros(lam, dtype=int)
    xb[4] = 1
    prod = CyclotomicSum(lam, xa) * CyclotomicSum(lam, xb)
    expected = np.zeros(lam, dtype=int)
    expected[(3 + 4) % lam] = 1
    assert list(prod.counts) == list(expected)


def test_cyclotomic_sum_validation():
    with pytest.raises(ValueError):
        CyclotomicSum(0, [])
    with pytest.raises(ValueError):
        CyclotomicSum(3, [1, 2])
    a = CyclotomicSum(3, [1, 0, 0])
    with pytest.raises(ValueError):
        a + CyclotomicSum(4, [0, 0, 0, 0])
    with pytest.raises(TypeError):
        a + 1


def test_accf_exact_zero_shift():
    s = PhaseSequence(4, [0, 1, 3, 2, 2])
    out = accf_exact(s, s, 0)
    assert out.counts[0] == 5
    assert not out.counts[1:].any()


def test_accf_exact_small_example():
    # (0,0,0,1) over Z_2 at shift 1: differences (0,0,1), value 2-1 = 1
    s = PhaseSequence(2, [0, 0, 0, 1])
    out = accf_exact(s, s, 1)
    assert list(out.counts) == [2, 1]
    assert abs(out.value() - 1) < 1e-12


def test_accf_exact_counts_total():
    rng = random.Random(21)
    a = PhaseSequence(6, [rng.randrange(6) for _ in range(17)])
    b = PhaseSequence(6, [rng.randrange(6) for _ in range(17)])
    for tau in range(-16, 17):
        assert accf_exact(a, b, tau).counts.sum() == 17 - abs(tau)


def test_accf_conjugate_symmetry():
    rng = random.Random(22)
    a = PhaseSequence(8, [rng.randrange(8) for _ in range(12)])
    b = PhaseSequence(8, [rng.randrange(8) for _ in range(12)])
    for tau in range(1, 12):
        back = accf_exact(a, b, -tau)
        fwd = accf_exact(b, a, tau)
        assert back == fwd.conjugate()


def test_accf_argument_validation():
    a = PhaseSequence(4, [0, 1, 2])
    with pytest.raises(ValueError, match="out of range"):
        accf_exact(a, a, 3)
    with pytest.raises(ValueError, match="out of range"):
        accf_exact(a, a, -3)
    with pytest.raises(ValueError, match="modulus"):
        accf_exact(a, PhaseSequence(6, [0, 1, 2]), 1)
    with pytest.raises(ValueError, match="length"):
        accf_exact(a, PhaseSequence(4, [0, 1]), 1)


@given(st.integers(0, 10**6))
@settings(max_examples=100)
def test_accf_exact_matches_naive_sum(seed):
    rng = random.Random(seed)
    lam = rng.randint(2, 12)
    L = rng.randint(1, 24)
    a = PhaseSequence(lam, [rng.randrange(lam) for _ in range(L)])
    b = PhaseSequence(lam, [rng.randrange(lam) for _ in range(L)])
    tau = rng.randint(-L + 1, L - 1)
    want = naive_rho(lift(a), lift(b), tau)
    assert abs(accf_exact(a, b, tau).value() - want) < 1e-9
    assert abs(accf_float(a, b, tau) - want) < 1e-9


def test_accf_float_agrees_with_exact_long():
    rng = random.Random(23)
    lam = 10
    a = PhaseSequence(lam, [rng.randrange(lam) for _ in range(1000)])
    for tau in (0, 1, 7, 500, -999):
        assert abs(accf_float(a, a, tau) - accf_exact(a, a, tau).value()) < 1e-9


def test_accf_float_complementary_pair():
    a = PhaseSequence(2, [0, 0, 0, 1])
    b = PhaseSequence(2, [0, 0, 1, 0])
    for tau in (1, 2, 3):
        total = accf_float(a, a, tau) + accf_float(b, b, tau)
        assert abs(total) < 1e-12


def test_aacf_set_sum_zero_shift():
    sset = mscs_3_27_3()
    out = aacf_set_sum(sset, 0)
    assert out.counts[0] == 3 * 27
    assert not out.counts[1:].any()


def test_aacf_set_sum_examples():
    sset = mscs_3_27_3()
    assert is_zero(aacf_set_sum(sset, 3))
    at_one = aacf_set_sum(sset, 1)
    # regression constant, cross-checked against the naive complex sum
    assert list(at_one.counts) == [62, 0, 8, 0, 8, 0]
    assert abs(at_one.value() - naive_set_aacf(sset, 1)) < 1e-9
    assert abs(at_one.value() - 54) < 1e-9
    with pytest.raises(ValueError, match="out of range"):
        aacf_set_sum(sset, 27)


def test_verify_mscs_reference_set():
    report = verify_mscs(mscs_3_27_3(), 3)
    assert report.passed
    assert report.mode == "exact"
    assert report.claim == "MSCS"
    assert report.parameter == 3
    assert [c.shift for c in report.shifts] == [3, 6, 9, 12, 15, 18, 21, 24]
    assert report.failing_shifts == ()


def test_verify_mscs_singleton_fails():
    sset = SequenceSet([PhaseSequence(2, [0, 0])])
    report = verify_mscs(sset, 1)
    assert not report.passed
    assert report.failing_shifts == (1,)
    assert report.shifts[0].magnitude > 0.5


def test_verify_mscs_parameter_bounds():
    sset = SequenceSet([PhaseSequence(2, [0, 0])])
    with pytest.raises(ValueError):
        verify_mscs(sset, 0)
    with pytest.raises(ValueError):
        verify_mscs(sset, 2)


def test_verify_gcs_cases():
    remark_set = multi_prime_mscs([PrimeBlock(p=2, m=1), PrimeBlock(p=3, m=1)], 6)
    assert verify_gcs(remark_set).passed
    pair = single_prime_mscs(PrimeBlock(p=2, m=1), 2)
    assert verify_gcs(pair).passed
    lonely = SequenceSet([PhaseSequence(2, [0, 0, 0])])
    assert not verify_gcs(lonely).passed


def test_verify_gcs_failure_lists_shifts():
    report = verify_gcs(mscs_3_27_3())
    assert not report.passed
    assert report.failing_shifts == (1, 2)


def test_verify_type2_zcs_cases():
    sset = mscs_3_27_3()
    report = verify_type2_zcs(sset, 24)
    assert report.passed
    assert [c.shift for c in report.shifts] == list(range(4, 27))
    # Z=1 leaves an empty open window (26, 27), so the check is vacuous
    narrow = verify_type2_zcs(sset, 1)
    assert narrow.shifts == ()
    assert narrow.passed
    two = verify_type2_zcs(sset, 2)
    assert [c.shift for c in two.shifts] == [26]
    rng = random.Random(17)
    noise = SequenceSet(
        [PhaseSequence(4, [rng.randrange(4) for _ in range(16)]) for _ in range(2)]
    )
    bad = verify_type2_zcs(noise, 10)
    assert not bad.passed
    assert len(bad.failing_shifts) > 0


def test_verify_early_exit():
    report = verify_gcs(mscs_3_27_3(), early_exit=True)
    assert not report.passed
    assert len(report.shifts) == 1
    assert report.shifts[0].shift == 1


def test_verify_numerical_mode_above_cap():
    lam = 2 * 1009
    assert lam > EXACT_MODULUS_CAP
    sset = single_prime_mscs(PrimeBlock(p=2, m=2), lam)
    report = verify_mscs(sset, 1)
    assert report.mode == "numerical"
    assert report.passed


def test_separation_tripwire(monkeypatch):
    # force the exact path to lie; the float cross-check must catch it
    monkeypatch.setattr(correlation, "is_zero", lambda s: True)
    with pytest.raises(RuntimeError, match="separation"):
        verify_gcs(mscs_3_27_3())


def test_kronecker_identity_trivial_shift():
    rng = random.Random(31)
    a = PhaseSequence(6, [rng.randrange(6) for _ in range(4)])
    b = PhaseSequence(6, [rng.randrange(6) for _ in range(5)])
    assert kronecker_accf_identity_check(a, b, 0)
    composed = kronecker_compose(a, b)
    assert abs(accf_float(composed, composed, 0) - 20) < 1e-9


def test_kronecker_identity_multiples_of_inner_length():
    rng = random.Random(32)
    a = PhaseSequence(4, [rng.randrange(4) for _ in range(5)])
    b = PhaseSequence(4, [rng.randrange(4) for _ in range(3)])
    for q in range(5):
        assert kronecker_accf_identity_check(a, b, q * 3)


def test_kronecker_identity_exhaustive_small():
    rng = random.Random(33)
    for _ in range(20):
        lam = rng.randint(2, 12)
        a = PhaseSequence(lam, [rng.randrange(lam) for _ in range(rng.randint(1, 6))])
        b = PhaseSequence(lam, [rng.randrange(lam) for _ in range(rng.randint(1, 8))])
        total = len(a) * len(b)
        for tau in range(-total + 1, total):
            assert kronecker_accf_identity_check(a, b, tau)


def test_kronecker_identity_validation():
    a = PhaseSequence(4, [0, 1])
    b = PhaseSequence(4, [0, 1, 2])
    with pytest.raises(ValueError, match="out of range"):
        kronecker_accf_identity_check(a, b, 6)
    with pytest.raises(ValueError, match="modulus"):
        kronecker_accf_identity_check(a, PhaseSequence(6, [0]), 0)


def test_gcs_implies_any_mscs():
    sset = multi_prime_mscs([PrimeBlock(p=2, m=2), PrimeBlock(p=3, m=1)], 6)
    assert verify_gcs(sset).passed
    for S in (1, 2, 3, 5, 11):
        assert verify_mscs(sset, S).passed
