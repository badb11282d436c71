"""Direct constructions of MSCS, GCS and type-II ZCS families.

Three constructions are provided, all built from degree-2 functions over
prime-base digit variables:

* ``single_prime_mscs``: p sequences of length p^m forming a
  (p, p^m, p^(s-1))-MSCS.  The same set is a type-II ZCS whose zero zone
  covers every shift with |tau| > p^(s-1), i.e. width Z = p^m - p^(s-1).
* ``multi_prime_mscs``: the per-prime construction applied to k distinct
  primes at once, giving a (prod p_a, prod p_a^{m_a}, prod p_a^{s_a-1})
  MSCS.  With every s_a = 1 the set is a GCS.
* ``length_extended_mscs``: an all-s=1 multi-prime set with one extra
  distinct prime appended as the most significant length factor, giving a
  (prod p_a, p_ext * prod p_a^{m_a}, p_ext)-MSCS.

Each member sequence is the materialization of the block function plus a
member-dependent linear tag (lambda/p) * v_{a,pi_a(s_a)} * gamma_a; the
member index enumerates the tag vector gamma with block 1 fastest,
mirroring the flat index convention of :mod:`mscs.seqcore`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .seqcore import (
    MixedDomain,
    MultivariableFunction,
    PhaseSequence,
    SequenceSet,
    TabulatedComponent,
    _is_prime,
    materialize,
)


@dataclass(frozen=True)
class PrimeBlock:
    """Construction parameters for one prime block Z_p^m.

    pi       permutation of {s, ..., m} as an explicit tuple; None = identity.
    linear   coefficients (g_1, ..., g_m) of the linear part; None = zeros.
    constant additive constant.
    h_table  optional arbitrary head function of (v_1, ..., v_{s-1}) as a
             flat table of p^(s-1) values, first variable fastest.  Must be
             omitted when s = 1.

    Values may be passed unreduced; they are reduced mod lambda when the
    block is compiled against a target modulus.
    """

    p: int
    m: int
    s: int = 1
    pi: tuple[int, ...] | None = None
    linear: tuple[int, ...] | None = None
    constant: int = 0
    h_table: tuple[int, ...] | None = None


def _check_block(block: PrimeBlock, modulus: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...] | None]:
    """Validate one block against the modulus; return (pi, linear, h) normalized."""
    p, m, s = block.p, block.m, block.s
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not (1 <= s <= m):
        raise ValueError(f"s must satisfy 1 <= s <= m, got s={s} m={m}")
    if modulus % p != 0:
        raise ValueError(f"p={p} must divide the modulus {modulus}")

    pi = tuple(block.pi) if block.pi is not None else tuple(range(s, m + 1))
    if sorted(pi) != list(range(s, m + 1)):
        raise ValueError(f"pi={pi} is not a permutation of {{{s},...,{m}}}")

    linear = tuple(int(g) % modulus for g in block.linear) if block.linear is not None else (0,) * m
    if len(linear) != m:
        raise ValueError(f"linear coefficients need length m={m}, got {len(linear)}")

    h = None
    if block.h_table is not None:
        if s == 1:
            raise ValueError("h_table must be absent when s = 1")
        if len(block.h_table) != p ** (s - 1):
            raise ValueError(
                f"h_table needs {p ** (s - 1)} entries for s={s}, got {len(block.h_table)}"
            )
        h = tuple(int(t) % modulus for t in block.h_table)
    return pi, linear, h


def _block_terms(block: PrimeBlock, modulus: int, a: int):
    """Terms, constant and tabulated parts of one block's base function.

    ``a`` is the block position in the enclosing domain.  The quadratic
    path (lambda/p) * sum v_{pi(i)} v_{pi(i+1)} runs along the permuted
    variables; it is empty when s = m.
    """
    pi, linear, h = _check_block(block, modulus)
    q = modulus // block.p
    terms = []
    for i in range(block.s, block.m):
        u, v = pi[i - block.s], pi[i - block.s + 1]
        terms.append((q, (((a, u), 1), ((a, v), 1))))
    for i, g in enumerate(linear, start=1):
        if g:
            terms.append((g, (((a, i), 1),)))
    tabulated = []
    if h is not None:
        tabulated.append(TabulatedComponent(tuple((a, b) for b in range(1, block.s)), h))
    return terms, int(block.constant) % modulus, tabulated, pi


def _gamma_term(block: PrimeBlock, modulus: int, a: int, pi: tuple[int, ...], gamma: int):
    q = modulus // block.p
    return (q * gamma % modulus, (((a, pi[0]), 1),))


def _block_params_record(block: PrimeBlock, modulus: int) -> dict:
    pi, linear, h = _check_block(block, modulus)
    return {
        "p": block.p,
        "m": block.m,
        "s": block.s,
        "pi": list(pi),
        "linear": list(linear),
        "constant": int(block.constant) % modulus,
        "h_table": list(h) if h is not None else None,
    }


def single_prime_mscs(block: PrimeBlock, modulus: int) -> SequenceSet:
    """Construct the p-member (p, p^m, p^(s-1))-MSCS for one prime block.

    Member gamma is the materialization of the block function plus
    (lambda/p) * v_{pi(s)} * gamma.  The returned metadata also claims the
    type-II ZCS property of width p^m - p^(s-1).
    """
    terms, constant, tabulated, pi = _block_terms(block, modulus, 1)
    domain = MixedDomain(((block.p, block.m),))
    members = []
    for gamma in range(block.p):
        f = MultivariableFunction(
            domain,
            modulus,
            terms + [_gamma_term(block, modulus, 1, pi, gamma)],
            constant,
            tabulated,
        )
        members.append(materialize(f))
    S = block.p ** (block.s - 1)
    Z = block.p**block.m - S
    meta = {
        "construction": "single_prime",
        "params": {"lambda": modulus, "blocks": [_block_params_record(block, modulus)]},
        "claims": [{"kind": "MSCS", "S": S}, {"kind": "ZCS", "Z": Z}],
    }
    if S == 1:
        meta["claims"].insert(1, {"kind": "GCS"})
    return SequenceSet(members, meta)


def multi_prime_mscs(blocks: Sequence[PrimeBlock], modulus: int) -> SequenceSet:
    """Construct the (prod p_a, prod p_a^{m_a}, prod p_a^{s_a-1})-MSCS.

    The primes must be pairwise distinct.  Members are ordered by the tag
    vector gamma = (gamma_1, ..., gamma_k) with gamma_1 fastest.  With one
    block this reduces to :func:`single_prime_mscs`.
    """
    blocks = tuple(blocks)
    if not blocks:
        raise ValueError("need at least one prime block")
    primes = [b.p for b in blocks]
    if len(set(primes)) != len(primes):
        raise ValueError(f"primes must be pairwise distinct, got {primes}")

    compiled = [_block_terms(b, modulus, a) for a, b in enumerate(blocks, start=1)]
    base_terms = [t for terms, _, _, _ in compiled for t in terms]
    constant = sum(c for _, c, _, _ in compiled) % modulus
    tabulated = [comp for _, _, tabs, _ in compiled for comp in tabs]
    domain = MixedDomain(tuple((b.p, b.m) for b in blocks))

    members = []
    M = int(np.prod(primes))
    for member in range(M):
        rem = member
        gamma_terms = []
        for a, b in enumerate(blocks, start=1):
            gamma = rem % b.p
            rem //= b.p
            if gamma:
                gamma_terms.append(_gamma_term(b, modulus, a, compiled[a - 1][3], gamma))
        f = MultivariableFunction(domain, modulus, base_terms + gamma_terms, constant, tabulated)
        members.append(materialize(f))

    S = 1
    for b in blocks:
        S *= b.p ** (b.s - 1)
    meta = {
        "construction": "multi_prime",
        "params": {"lambda": modulus, "blocks": [_block_params_record(b, modulus) for b in blocks]},
        "claims": [{"kind": "MSCS", "S": S}],
    }
    if all(b.s == 1 for b in blocks):
        meta["claims"].append({"kind": "GCS"})
    return SequenceSet(members, meta)


def length_extended_mscs(
    blocks: Sequence[PrimeBlock],
    ext_prime: int,
    modulus: int,
    ext_linear: int = 0,
    ext_constant: int = 0,
) -> SequenceSet:
    """Append one extra prime as a length factor to an all-s=1 set.

    The base blocks must all have s_a = 1 (a GCS base); the extension prime
    must be distinct from every base prime and divide the modulus.  The
    extension contributes a single variable g1*v + g0 occupying the most
    significant index block, and the result is a
    (prod p_a, p_ext * prod p_a^{m_a}, p_ext)-MSCS with the same member
    count as the base set.
    """
    blocks = tuple(blocks)
    if not blocks:
        raise ValueError("need at least one base prime block")
    for b in blocks:
        if b.s != 1:
            raise ValueError(f"length extension requires s=1 in every base block, got s={b.s}")
    primes = [b.p for b in blocks]
    if len(set(primes)) != len(primes):
        raise ValueError(f"primes must be pairwise distinct, got {primes}")
    if not _is_prime(ext_prime):
        raise ValueError(f"extension prime must be prime, got {ext_prime}")
    if ext_prime in primes:
        raise ValueError(f"extension prime {ext_prime} duplicates a base prime")
    if modulus % ext_prime != 0:
        raise ValueError(f"extension prime {ext_prime} must divide the modulus {modulus}")

    k = len(blocks)
    compiled = [_block_terms(b, modulus, a) for a, b in enumerate(blocks, start=1)]
    base_terms = [t for terms, _, _, _ in compiled for t in terms]
    ext_linear = int(ext_linear) % modulus
    ext_constant = int(ext_constant) % modulus
    if ext_linear:
        base_terms.append((ext_linear, (((k + 1, 1), 1),)))
    constant = (sum(c for _, c, _, _ in compiled) + ext_constant) % modulus
    domain = MixedDomain(tuple((b.p, b.m) for b in blocks) + ((ext_prime, 1),))

    members = []
    M = int(np.prod(primes))
    for member in range(M):
        rem = member
        gamma_terms = []
        for a, b in enumerate(blocks, start=1):
            gamma = rem % b.p
            rem //= b.p
            if gamma:
                gamma_terms.append(_gamma_term(b, modulus, a, compiled[a - 1][3], gamma))
        f = MultivariableFunction(domain, modulus, base_terms + gamma_terms, constant, ())
        members.append(materialize(f))

    meta = {
        "construction": "length_extended",
        "params": {
            "lambda": modulus,
            "blocks": [_block_params_record(b, modulus) for b in blocks],
            "extension": {"p": ext_prime, "linear": ext_linear, "constant": ext_constant},
        },
        "claims": [{"kind": "MSCS", "S": ext_prime}],
    }
    return SequenceSet(members, meta)


def random_block(rng: random.Random, p: int, m: int, s: int, modulus: int) -> PrimeBlock:
    """Draw uniform construction parameters for one prime block.

    The permutation is uniform over orderings of {s, ..., m}; linear
    coefficients, the constant and (for s > 1) the head-function table are
    uniform over Z_modulus.  Any such draw satisfies the construction's
    claims, which makes seeded draws the property-test surface.
    """
    pi = list(range(s, m + 1))
    rng.shuffle(pi)
    h_table = None
    if s > 1:
        h_table = tuple(rng.randrange(modulus) for _ in range(p ** (s - 1)))
    return PrimeBlock(
        p=p,
        m=m,
        s=s,
        pi=tuple(pi),
        linear=tuple(rng.randrange(modulus) for _ in range(m)),
        constant=rng.randrange(modulus),
        h_table=h_table,
    )


def kronecker_compose(outer: PhaseSequence, inner: PhaseSequence) -> PhaseSequence:
    """Phase-domain Kronecker product: result[j*Li + i] = outer[j] + inner[i].

    The complex lift of the result equals the Kronecker product of the
    complex lifts of the factors.
    """
    if outer.modulus != inner.modulus:
        raise ValueError(
            f"modulus mismatch: outer {outer.modulus}, inner {inner.modulus}"
        )
    vals = (outer.values[:, None] + inner.values[None, :]).ravel()
    return PhaseSequence(outer.modulus, vals)
