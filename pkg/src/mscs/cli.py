"""Command line front end: build sets, verify claims, measure PMEPR.

Subcommands:

* ``generate``  construct a set from flags or a parameter file and write
  it as a JSON set document.
* ``verify``    exactly re-verify the correlation claim of a document.
* ``pmepr``     per-sequence and set PMEPR, bound check, optional IAPR
  curve export as comma separated values.
* ``selftest``  run the bundled end-to-end checks at reduced scale.

Exit codes: 0 success / claim verified, 1 verification or selftest
failure, 2 usage or parse error.  Documents are written with sorted keys
and fixed layout, so identical flags (and seed) give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import reference_sets
from .constructions import (
    PrimeBlock,
    length_extended_mscs,
    multi_prime_mscs,
    random_block,
    single_prime_mscs,
)
from .correlation import (
    NONZERO_TOL,
    ZERO_TOL,
    aacf_set_sum,
    is_zero,
    kronecker_accf_identity_check,
    verify_gcs,
    verify_mscs,
    verify_type2_zcs,
)
from .pmepr import (
    DEFAULT_OVERSAMPLING,
    energy_identity_check,
    iapr_curve,
    pmepr_set,
)
from .seqcore import PhaseSequence, SequenceSet

SCHEMA_VERSION = 1

CLAIM_KINDS = ("GCS", "MSCS", "ZCS")


@dataclass(frozen=True)
class SetDocument:
    """Serializable record of a sequence set and its correlation claim."""

    modulus: int
    length: int
    set_size: int
    claim: dict
    provenance: dict
    sequences: tuple[tuple[int, ...], ...]
    schema: int = SCHEMA_VERSION


def _check_claim(claim: dict) -> dict:
    kind = claim.get("kind")
    if kind not in CLAIM_KINDS:
        raise ValueError(f"claim kind must be one of {', '.join(CLAIM_KINDS)}, got {kind!r}")
    if kind == "MSCS" and "S" not in claim:
        raise ValueError("MSCS claim needs S")
    if kind == "ZCS" and "Z" not in claim:
        raise ValueError("ZCS claim needs Z")
    return dict(claim)


def document_from_set(sset: SequenceSet) -> SetDocument:
    """Wrap a constructed set as a document, claim taken from its metadata."""
    meta = sset.metadata
    claims = meta.get("claims")
    if not claims:
        raise ValueError("set carries no correlation claim")
    provenance = {"construction": meta.get("construction", "external")}
    if "params" in meta:
        provenance["params"] = meta["params"]
    return SetDocument(
        modulus=sset.modulus,
        length=sset.length,
        set_size=len(sset),
        claim=_check_claim(claims[0]),
        provenance=provenance,
        sequences=tuple(tuple(int(v) for v in s.values) for s in sset.sequences),
    )


def document_to_set(doc: SetDocument) -> SequenceSet:
    members = [PhaseSequence(doc.modulus, row) for row in doc.sequences]
    meta = {
        "construction": doc.provenance.get("construction", "external"),
        "claims": [dict(doc.claim)],
    }
    return SequenceSet(members, meta)


def document_to_json(doc: SetDocument) -> str:
    payload = {
        "schema": doc.schema,
        "lambda": doc.modulus,
        "length": doc.length,
        "set_size": doc.set_size,
        "claim": doc.claim,
        "provenance": doc.provenance,
        "sequences": [list(row) for row in doc.sequences],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def document_from_json(text: str) -> SetDocument:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"document is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ValueError("document root must be an object")
    schema = payload.get("schema")
    if schema != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {schema!r}")
    try:
        modulus = int(payload["lambda"])
        length = int(payload["length"])
        set_size = int(payload["set_size"])
        claim = _check_claim(payload["claim"])
        provenance = dict(payload["provenance"])
        rows = payload["sequences"]
    except KeyError as exc:
        raise ValueError(f"document is missing field {exc.args[0]!r}") from None
    if modulus < 2:
        raise ValueError(f"lambda {modulus} must be >= 2")
    if len(rows) != set_size:
        raise ValueError(f"document lists {len(rows)} sequences, set_size says {set_size}")
    sequences = []
    for row in rows:
        if len(row) != length:
            raise ValueError(f"sequence of length {len(row)} does not match length {length}")
        vals = [int(v) for v in row]
        if any(not (0 <= v < modulus) for v in vals):
            raise ValueError("sequence entries must lie in [0, lambda)")
        sequences.append(tuple(vals))
    return SetDocument(
        modulus=modulus,
        length=length,
        set_size=set_size,
        claim=claim,
        provenance=provenance,
        sequences=tuple(sequences),
        schema=schema,
    )


def write_document(doc: SetDocument, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(document_to_json(doc))


def read_document(path: str) -> SetDocument:
    with open(path) as fh:
        return document_from_json(fh.read())


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _block_from_dict(rec: dict, modulus: int, rng: random.Random | None) -> PrimeBlock:
    if "p" not in rec or "m" not in rec:
        raise ValueError("block parameters need at least p and m")
    p, m, s = int(rec["p"]), int(rec["m"]), int(rec.get("s", 1))
    base = random_block(rng, p, m, s, modulus) if rng is not None else PrimeBlock(p, m, s)
    pi = rec.get("pi")
    linear = rec.get("linear")
    h_table = rec.get("h_table")
    return PrimeBlock(
        p=p,
        m=m,
        s=s,
        pi=tuple(pi) if pi is not None else base.pi,
        linear=tuple(linear) if linear is not None else base.linear,
        constant=int(rec["constant"]) if "constant" in rec else base.constant,
        h_table=tuple(h_table) if h_table is not None else base.h_table,
    )


def _build_from_params(params: dict, rng: random.Random | None) -> SequenceSet:
    """Construct a set from a parameter-file record (flag names as keys)."""
    if "lambda" not in params:
        raise ValueError("parameter file needs lambda")
    modulus = int(params["lambda"])
    if "blocks" in params:
        blocks = [_block_from_dict(rec, modulus, rng) for rec in params["blocks"]]
    else:
        blocks = [_block_from_dict(params, modulus, rng)]
    if "extension" in params:
        ext = params["extension"]
        if "p" not in ext:
            raise ValueError("extension needs p")
        return length_extended_mscs(
            blocks,
            ext_prime=int(ext["p"]),
            modulus=modulus,
            ext_linear=int(ext.get("linear", 0)),
            ext_constant=int(ext.get("constant", 0)),
        )
    if len(blocks) == 1:
        return single_prime_mscs(blocks[0], modulus)
    return multi_prime_mscs(blocks, modulus)


def _run_claim_verification(sset: SequenceSet, claim: dict):
    kind = claim["kind"]
    if kind == "GCS":
        return verify_gcs(sset)
    if kind == "MSCS":
        return verify_mscs(sset, int(claim["S"]))
    return verify_type2_zcs(sset, int(claim["Z"]))


def cmd_generate(args) -> int:
    rng = random.Random(args.seed) if args.seed is not None else None
    if args.params is not None:
        with open(args.params) as fh:
            params = json.load(fh)
        sset = _build_from_params(params, rng)
    else:
        if args.p is None or args.m is None or args.modulus is None:
            raise ValueError("generate needs either --params or --p/--m/--lambda")
        rec = {"p": args.p, "m": args.m, "s": args.s, "lambda": args.modulus}
        if args.pi is not None:
            rec["pi"] = _parse_int_list(args.pi)
        if args.linear is not None:
            rec["linear"] = _parse_int_list(args.linear)
        if args.constant is not None:
            rec["constant"] = args.constant
        if args.h_table is not None:
            rec["h_table"] = _parse_int_list(args.h_table)
        sset = _build_from_params(rec, rng)
    doc = document_from_set(sset)
    if args.verify:
        report = _run_claim_verification(sset, doc.claim)
        if not report.passed:
            bad = ", ".join(str(t) for t in report.failing_shifts[:10])
            print(f"verification failed at shifts: {bad}", file=sys.stderr)
            return 1
    write_document(doc, args.out)
    claim = doc.claim
    tag = " ".join(f"{k}={v}" for k, v in sorted(claim.items()) if k != "kind")
    print(f"wrote {args.out}: M={doc.set_size} L={doc.length} lambda={doc.modulus} "
          f"claim={claim['kind']}{' ' + tag if tag else ''}")
    return 0


def _claim_from_args(doc: SetDocument, args) -> dict:
    if args.claim is None:
        return doc.claim
    kind = args.claim.upper()
    claim: dict = {"kind": kind}
    if kind == "MSCS":
        if args.S is not None:
            claim["S"] = args.S
        elif doc.claim.get("kind") == "MSCS":
            claim["S"] = doc.claim["S"]
        else:
            raise ValueError("MSCS claim needs --S")
    elif kind == "ZCS":
        if args.Z is not None:
            claim["Z"] = args.Z
        elif doc.claim.get("kind") == "ZCS":
            claim["Z"] = doc.claim["Z"]
        else:
            raise ValueError("ZCS claim needs --Z")
    return claim


def cmd_verify(args) -> int:
    doc = read_document(args.input)
    sset = document_to_set(doc)
    claim = _claim_from_args(doc, args)
    report = _run_claim_verification(sset, claim)
    tag = "".join(
        f" {k}={v}" for k, v in sorted(claim.items()) if k != "kind"
    )
    print(f"document: {args.input}")
    print(f"set: M={doc.set_size} L={doc.length} lambda={doc.modulus}")
    print(f"claim: {claim['kind']}{tag}")
    print(f"mode: {report.mode}")
    print(f"shifts checked: {len(report.shifts)}")
    if report.passed:
        print("verdict: pass")
        return 0
    failing = report.failing_shifts
    shown = " ".join(str(t) for t in failing[:20])
    more = "" if len(failing) <= 20 else f" (+{len(failing) - 20} more)"
    print(f"failing shifts: {shown}{more}")
    print("verdict: fail")
    return 1


def _claim_shift_parameter(claim: dict) -> int | None:
    """S to use in the M*S PMEPR bound, if the claim provides one."""
    if claim["kind"] == "MSCS":
        return int(claim["S"])
    if claim["kind"] == "GCS":
        return 1
    return None


def cmd_pmepr(args) -> int:
    if args.n_os < 1:
        raise ValueError(f"oversampling {args.n_os} must be >= 1")
    doc = read_document(args.input)
    sset = document_to_set(doc)
    print(f"document: {args.input}")
    print(f"set: M={doc.set_size} L={doc.length} lambda={doc.modulus}")
    print(f"oversampling: {args.n_os}")
    S = _claim_shift_parameter(doc.claim)
    if S is not None:
        report = pmepr_set(sset, S, args.n_os)
        for i, v in enumerate(report.per_sequence):
            print(f"pmepr[{i}]: {v:.6f}")
        print(f"set pmepr: {report.set_pmepr:.6f}")
        print(f"bound (M*S): {report.bound:g}")
        print(f"bound satisfied: {'yes' if report.bound_satisfied else 'NO'}")
    else:
        from .pmepr import pmepr as pmepr_one

        vals = [pmepr_one(s, args.n_os) for s in sset.sequences]
        for i, v in enumerate(vals):
            print(f"pmepr[{i}]: {v:.6f}")
        print(f"set pmepr: {max(vals):.6f}")
    if args.iapr_out is not None:
        curves = [iapr_curve(s, args.n_os) for s in sset.sequences]
        n = args.n_os * doc.length
        u = np.arange(n) / n
        with open(args.iapr_out, "w") as fh:
            fh.write(f"# iapr curves: M={doc.set_size} L={doc.length} "
                     f"lambda={doc.modulus} oversampling={args.n_os}\n")
            cols = ", ".join(f"iapr_{i}" for i in range(doc.set_size))
            fh.write(f"# columns: dft_t, {cols}\n")
            for j in range(n):
                row = ",".join(f"{c[j]:.10g}" for c in curves)
                fh.write(f"{u[j]:.10g},{row}\n")
        print(f"iapr curves written to {args.iapr_out}")
    return 0


def _selftest_checks():
    """Named reduced-scale checks; each returns None or a failure detail."""

    def check_mscs_3_27_3():
        report = verify_mscs(reference_sets.mscs_3_27_3(), 3)
        if report.mode != "exact":
            return f"expected exact mode, got {report.mode}"
        if not report.passed:
            return f"failing shifts {report.failing_shifts[:5]}"
        return None

    def check_zcs_3_27_24():
        report = verify_type2_zcs(reference_sets.mscs_3_27_3(), 24)
        if not report.passed:
            return f"failing shifts {report.failing_shifts[:5]}"
        return None

    def check_mscs_3_54_2():
        report = verify_mscs(reference_sets.mscs_3_54_2(), 2)
        if report.mode != "exact":
            return f"expected exact mode, got {report.mode}"
        if not report.passed:
            return f"failing shifts {report.failing_shifts[:5]}"
        return None

    def check_pmepr_3_54_2():
        report = pmepr_set(reference_sets.mscs_3_54_2(), 2)
        if not report.bound_satisfied:
            return f"set pmepr {report.set_pmepr:.4f} beyond bound {report.bound}"
        if abs(report.set_pmepr - 5.9465) > 0.05:
            return f"set pmepr {report.set_pmepr:.4f} not within 0.05 of 5.9465"
        return None

    def check_single_prime_sweep():
        rng = random.Random(101)
        for _ in range(24):
            p = rng.choice([2, 3, 5])
            m = rng.randint(1, 3)
            s = rng.randint(1, m)
            lam = rng.choice([p, 2 * p, p * p])
            block = random_block(rng, p, m, s, lam)
            sset = single_prime_mscs(block, lam)
            S = p ** (s - 1)
            if S < sset.length:
                report = verify_mscs(sset, S)
                if not report.passed:
                    return f"p={p} m={m} s={s} lam={lam} failed MSCS"
            Z = p**m - S
            if 1 <= Z < sset.length:
                report = verify_type2_zcs(sset, Z)
                if not report.passed:
                    return f"p={p} m={m} s={s} lam={lam} failed ZCS"
        return None

    def check_multi_prime_sweep():
        rng = random.Random(202)
        for _ in range(10):
            primes = rng.sample([2, 3, 5], 2)
            blocks = []
            lam = 1
            for p in primes:
                lam *= p
            S = 1
            for p in primes:
                m = rng.randint(1, 2)
                s = rng.randint(1, m)
                blocks.append(random_block(rng, p, m, s, lam))
                S *= p ** (s - 1)
            sset = multi_prime_mscs(blocks, lam)
            if S < sset.length:
                if not verify_mscs(sset, S).passed:
                    return f"primes={primes} failed MSCS S={S}"
            if all(b.s == 1 for b in blocks):
                if not verify_gcs(sset).passed:
                    return f"primes={primes} failed GCS"
        return None

    def check_kronecker_split():
        rng = random.Random(303)
        for _ in range(30):
            lam = rng.randint(2, 12)
            a = PhaseSequence(lam, [rng.randrange(lam) for _ in range(rng.randint(2, 6))])
            b = PhaseSequence(lam, [rng.randrange(lam) for _ in range(rng.randint(2, 8))])
            for tau in range(len(a) * len(b)):
                if not kronecker_accf_identity_check(a, b, tau):
                    return f"lam={lam} |a|={len(a)} |b|={len(b)} tau={tau}"
        return None

    def check_energy_identity():
        for build, S in ((reference_sets.mscs_3_27_3, 3), (reference_sets.mscs_3_54_2, 2)):
            sset = build()
            dev = energy_identity_check(sset, S)
            if dev >= 1e-9:
                return f"deviation {dev:.3e} for {build.__name__}"
        sset = reference_sets.mscs_3_27_3()
        flipped = list(sset.sequences)
        vals = flipped[0].values.copy()
        vals[0] = (vals[0] + 1) % sset.modulus
        flipped[0] = PhaseSequence(sset.modulus, vals)
        dev = energy_identity_check(SequenceSet(flipped), 3)
        if dev <= 1e-6:
            return f"phase-flip control deviation {dev:.3e} not detected"
        return None

    def check_exact_float_separation():
        sset = reference_sets.mscs_3_27_3()
        zeros = nonzeros = 0
        for tau in range(1, sset.length):
            total = aacf_set_sum(sset, tau)
            mag = abs(total.value())
            if is_zero(total):
                zeros += 1
                if mag >= ZERO_TOL:
                    return f"exact zero at tau={tau} but |sum|={mag:.3e}"
            else:
                nonzeros += 1
                if mag <= NONZERO_TOL:
                    return f"exact nonzero at tau={tau} but |sum|={mag:.3e}"
        if not zeros or not nonzeros:
            return f"degenerate split: {zeros} zeros, {nonzeros} nonzeros"
        return None

    def check_iapr_curves():
        sset = reference_sets.mscs_3_54_2()
        report = pmepr_set(sset, 2)
        peak = 0.0
        for s in sset.sequences:
            curve = iapr_curve(s)
            if abs(float(np.mean(curve)) - 1.0) > 1e-9:
                return f"curve mean {np.mean(curve):.12f} off unity"
            if float(np.max(curve)) > report.bound + 1e-9:
                return f"curve max {np.max(curve):.4f} beyond bound"
            peak = max(peak, float(np.max(curve)))
        if peak != report.set_pmepr:
            return f"curve peak {peak} != set pmepr {report.set_pmepr}"
        return None

    return [
        ("mscs-3-27-3", check_mscs_3_27_3),
        ("zcs-3-27-24", check_zcs_3_27_24),
        ("mscs-3-54-2", check_mscs_3_54_2),
        ("pmepr-3-54-2", check_pmepr_3_54_2),
        ("single-prime-sweep", check_single_prime_sweep),
        ("multi-prime-sweep", check_multi_prime_sweep),
        ("kronecker-split", check_kronecker_split),
        ("energy-identity", check_energy_identity),
        ("exact-float-separation", check_exact_float_separation),
        ("iapr-curves", check_iapr_curves),
    ]


def cmd_selftest(args) -> int:
    failures = 0
    checks = _selftest_checks()
    for name, fn in checks:
        start = time.perf_counter()
        try:
            detail = fn()
        except Exception as exc:  # a crash counts as a failure, not an abort
            detail = f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        if detail is None:
            print(f"ok   {name} ({elapsed:.2f}s)")
        else:
            failures += 1
            print(f"FAIL {name}: {detail}")
    print(f"selftest: {len(checks) - failures}/{len(checks)} ok")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mscs",
        description="Construct, verify and measure complementary sequence sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="construct a set and write a document")
    gen.add_argument("--params", help="JSON parameter file (flag names as keys)")
    gen.add_argument("--p", type=int, help="prime base")
    gen.add_argument("--m", type=int, help="number of digits")
    gen.add_argument("--s", type=int, default=1, help="shift exponent parameter (default 1)")
    gen.add_argument("--lambda", dest="modulus", type=int, help="phase modulus")
    gen.add_argument("--pi", help="permutation of {s..m}, comma separated")
    gen.add_argument("--linear", help="linear coefficients g_1..g_m, comma separated")
    gen.add_argument("--constant", type=int, help="additive constant")
    gen.add_argument("--h-table", help="head function table, comma separated")
    gen.add_argument("--seed", type=int, help="randomize unspecified parameters")
    gen.add_argument("--verify", action="store_true",
                     help="exactly verify the claim before writing")
    gen.add_argument("--out", required=True, help="output document path")
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify", help="verify the correlation claim of a document")
    ver.add_argument("input", help="set document path")
    ver.add_argument("--claim", choices=["gcs", "mscs", "zcs"],
                     help="override the document claim")
    ver.add_argument("--S", type=int, help="shift parameter for an MSCS claim")
    ver.add_argument("--Z", type=int, help="zone width for a ZCS claim")
    ver.set_defaults(func=cmd_verify)

    pme = sub.add_parser("pmepr", help="measure PMEPR of a document")
    pme.add_argument("input", help="set document path")
    pme.add_argument("--n-os", type=int, default=DEFAULT_OVERSAMPLING,
                     help=f"oversampling factor (default {DEFAULT_OVERSAMPLING})")
    pme.add_argument("--iapr-out", help="write IAPR curves to this path")
    pme.set_defaults(func=cmd_pmepr)

    selftest = sub.add_parser("selftest", help="run the bundled checks")
    selftest.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())
