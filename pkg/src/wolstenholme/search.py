"""Checkpointable, resumable desk-scale scans with deterministic output.

Each scan walks a totally ordered subject space (integers, primes, or prime
pairs) and emits ScanRecords as JSON lines.  Running a scan twice with the
same parameters produces byte-identical streams; interrupting at a
checkpoint and resuming reproduces the uninterrupted stream exactly,
because resumption replays the generator deterministically and drops
records for already-completed subjects.

Verdicts: "hit" marks a found subject matching the scan's expectation,
"fail" marks a record violating an assertion the scan makes (e.g. a Jones
hit that is not a prime >= 5), "pass" is reserved for verification-suite
records.  A scan with any "fail" record exits nonzero in CLI context.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterator

from .arith import binomial_mod, is_prime, primes_in, primes_upto, valuation
from .congruence import (
    PAIR_DIRECT_BUDGET,
    pair_criterion,
    pair_direct_check,
    w_mod,
    wilson_residue,
)
from .errors import CheckpointError, CorruptFile, ParamsMismatch, VersionMismatch

__all__ = [
    "ScanRecord",
    "Checkpoint",
    "ScanSummary",
    "FORMAT_VERSION",
    "KNOWN_PAIRS",
    "params_digest",
    "checkpoint_save",
    "checkpoint_load",
    "run_scan",
    "records_to_csv",
    "scan_names",
    "scan_wilson",
    "scan_wilson_cube",
    "scan_jones",
    "scan_wolstenholme_primes",
    "scan_mod5",
    "scan_new_conjecture",
    "scan_pair_units",
    "max_ratio_report",
]

FORMAT_VERSION = 1

# published pairs (p, q) with w(pq) = 1 (mod pq); the third is stretch-sized
KNOWN_PAIRS = ((29, 937), (787, 2543), (69239, 231433))

Subject = int | tuple[int, int]


@dataclass(frozen=True)
class ScanRecord:
    scan: str
    subject: Subject
    witness: dict
    verdict: str  # hit | fail | pass
    params_hash: str

    def to_json(self) -> str:
        subject = list(self.subject) if isinstance(self.subject, tuple) else self.subject
        payload = {
            "scan": self.scan,
            "subject": subject,
            "witness": {k: self.witness[k] for k in sorted(self.witness)},
            "verdict": self.verdict,
            "params_hash": self.params_hash,
        }
        return json.dumps(payload, separators=(",", ":"))


@dataclass(frozen=True)
class Checkpoint:
    scan: str
    params: dict
    params_hash: str
    last_subject: Subject
    records_emitted: int
    format_version: int = FORMAT_VERSION


def params_digest(params: dict) -> str:
    canonical = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def checkpoint_save(cp: Checkpoint, path: str) -> None:
    """Atomic write: temp file in the same directory, then rename."""
    payload = {
        "format_version": cp.format_version,
        "scan": cp.scan,
        "params": cp.params,
        "params_hash": cp.params_hash,
        "last_subject": list(cp.last_subject)
        if isinstance(cp.last_subject, tuple)
        else cp.last_subject,
        "records_emitted": cp.records_emitted,
    }
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def checkpoint_load(path: str, expected_params: dict | None = None) -> Checkpoint:
    """Load and validate a checkpoint; raises VersionMismatch / ParamsMismatch /
    CorruptFile as appropriate."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"cannot read checkpoint {path}: {exc}") from exc
    required = {
        "format_version",
        "scan",
        "params",
        "params_hash",
        "last_subject",
        "records_emitted",
    }
    if not isinstance(payload, dict) or not required.issubset(payload):
        raise CorruptFile(f"checkpoint {path} is missing fields")
    if payload["format_version"] != FORMAT_VERSION:
        raise VersionMismatch(
            f"checkpoint format {payload['format_version']} != {FORMAT_VERSION}"
        )
    if params_digest(payload["params"]) != payload["params_hash"]:
        raise CorruptFile(f"checkpoint {path} params digest does not match")
    if expected_params is not None and params_digest(expected_params) != payload["params_hash"]:
        raise ParamsMismatch(
            f"checkpoint {path} belongs to params {payload['params']}"
        )
    last = payload["last_subject"]
    if isinstance(last, list):
        last = tuple(last)
    return Checkpoint(
        scan=payload["scan"],
        params=payload["params"],
        params_hash=payload["params_hash"],
        last_subject=last,
        records_emitted=payload["records_emitted"],
        format_version=payload["format_version"],
    )


# --------------------------------------------------------------------------
# Scan generators: yield (subject, [records]) in strictly ascending subject
# order, one yield per subject, never skipping a subject of the scan's space.
# --------------------------------------------------------------------------


def _w_start(n: int) -> int:
    # w(n-1), cheap chunk entry point for the incremental recurrence
    return comb(2 * n - 3, n - 2) if n >= 2 else 1


def _gen_wilson(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    limit = params["limit"]
    a, b = max(2, lo or 2), min(limit, hi if hi is not None else limit)
    for p in primes_in(a, b):
        v = wilson_residue(p, 2)
        recs = []
        if v.holds:
            recs.append(
                ScanRecord(
                    "wilson",
                    p,
                    {"residue": str(v.residue.value), "modulus": str(v.modulus)},
                    "hit",
                    h,
                )
            )
        yield p, recs


def _gen_wilson_cube(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    limit = params["limit"]
    a, b = max(2, lo or 2), min(limit, hi if hi is not None else limit)
    for n in range(a, b + 1):
        recs = []
        # composite n > 4 has n | (n-1)!, so (n-1)! = 0 != -1 (mod n^3);
        # only primes and n = 4 need the modular product
        if n == 4 or is_prime(n):
            v = wilson_residue(n, 3)
            if v.holds:
                recs.append(
                    ScanRecord(
                        "wilson-cube",
                        n,
                        {"residue": str(v.residue.value), "modulus": str(v.modulus)},
                        "fail",  # the scan asserts no such n exists
                        h,
                    )
                )
        yield n, recs


def _gen_jones(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    limit = params["limit"]
    a, b = max(2, lo or 2), min(limit, hi if hi is not None else limit)
    w = _w_start(a)
    for n in range(a, b + 1):
        w = w * (2 * (2 * n - 1)) // n
        recs = []
        if w % n**3 == 1:
            prime_ok = n >= 5 and is_prime(n)
            reverified = w_mod(n, n**3).value == 1
            verdict = "hit" if prime_ok and reverified else "fail"
            recs.append(
                ScanRecord(
                    "jones",
                    n,
                    {
                        "modulus": str(n**3),
                        "prime": prime_ok,
                        "reverified": reverified,
                    },
                    verdict,
                    h,
                )
            )
        yield n, recs


def _gen_wolstenholme(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    limit = params["limit"]
    a, b = max(5, lo or 5), min(limit, hi if hi is not None else limit)
    for p in primes_in(a, b):
        recs = []
        if w_mod(p, p**4).value == 1:
            # independent route: prime-power binomial instead of the product
            reverified = binomial_mod(2 * p - 1, p - 1, p**4).value == 1
            recs.append(
                ScanRecord(
                    "wolstenholme-primes",
                    p,
                    {"modulus": str(p**4), "reverified": reverified},
                    "hit" if reverified else "fail",
                    h,
                )
            )
        yield p, recs


def _gen_mod5(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    limit = params["limit"]
    a, b = max(2, lo or 2), min(limit, hi if hi is not None else limit)
    w = _w_start(a)
    for n in range(a, b + 1):
        w = w * (2 * (2 * n - 1)) // n
        recs = []
        if w % n**5 == 1:
            recs.append(
                ScanRecord(
                    "mod5",
                    n,
                    {"modulus": str(n**5), "reverified": w_mod(n, n**5).value == 1},
                    "fail",  # the scan asserts no such n exists
                    h,
                )
            )
        yield n, recs


def _gen_new_conjecture(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    p_max, q_max = params["p_max"], params["q_max"]
    a, b = max(5, lo or 5), min(p_max, hi if hi is not None else p_max)
    qs = primes_upto(q_max)
    w = _w_start(a)
    n = a
    for p in primes_in(a, b):
        while n <= p:
            w = w * (2 * (2 * n - 1)) // n
            n += 1
        m = w - 1  # w(p) - 1, to be scanned for square prime divisors
        recs = []
        for q in qs:
            if q == p or m % (q * q):
                continue
            v = valuation(m, q)
            reverified = w_mod(p, q * q).value == 1
            verdict = "hit" if q < p and reverified else "fail"
            recs.append(
                ScanRecord(
                    "new-conjecture",
                    p,
                    {
                        "q": str(q),
                        "valuation": str(v),
                        "ratio_p_over_q": str(Fraction(p, q)),
                        "reverified": reverified,
                    },
                    verdict,
                    h,
                )
            )
        yield p, recs


def _pair_record(p: int, q: int, h: str, always: bool) -> list[ScanRecord]:
    res = pair_criterion(p, q, 1)
    if not res.combined and not always:
        return []
    witness: dict = {"left": res.left, "right": res.right}
    verdict = "hit" if res.combined else "fail"
    if res.combined and p * q <= PAIR_DIRECT_BUDGET:
        agrees = pair_direct_check(p, q, 1) == res.combined
        witness["direct_agrees"] = agrees
        if not agrees:
            verdict = "fail"
    elif res.combined:
        witness["direct_agrees"] = "skipped"
    return [ScanRecord("pairs", (p, q), witness, verdict, h)]


def _gen_pairs(params: dict, h: str, lo: int | None = None, hi: int | None = None):
    if params.get("known"):
        # published pairs are expected hits, so a miss is emitted as a fail
        pairs = KNOWN_PAIRS if params.get("stretch") else KNOWN_PAIRS[:2]
        for p, q in pairs:
            if lo is not None and p < lo:
                continue
            if hi is not None and p > hi:
                continue
            yield (p, q), _pair_record(p, q, h, always=True)
        return
    p_max, q_max = params["p_max"], params["q_max"]
    a, b = max(5, lo or 5), min(p_max, hi if hi is not None else p_max)
    for p in primes_in(a, b):
        for q in primes_in(p + 1, q_max):
            yield (p, q), _pair_record(p, q, h, always=False)


@dataclass(frozen=True)
class _ScanDef:
    name: str
    generate: Callable
    bounds: Callable[[dict], tuple[int, int]]
    required: tuple[str, ...]


def _pairs_bounds(params: dict) -> tuple[int, int]:
    if params.get("known"):
        return KNOWN_PAIRS[0][0], KNOWN_PAIRS[-1][0]
    return 5, params["p_max"]


_SCANS = {
    "wilson": _ScanDef("wilson", _gen_wilson, lambda p: (2, p["limit"]), ("limit",)),
    "wilson-cube": _ScanDef(
        "wilson-cube", _gen_wilson_cube, lambda p: (2, p["limit"]), ("limit",)
    ),
    "jones": _ScanDef("jones", _gen_jones, lambda p: (2, p["limit"]), ("limit",)),
    "wolstenholme-primes": _ScanDef(
        "wolstenholme-primes", _gen_wolstenholme, lambda p: (5, p["limit"]), ("limit",)
    ),
    "mod5": _ScanDef("mod5", _gen_mod5, lambda p: (2, p["limit"]), ("limit",)),
    "new-conjecture": _ScanDef(
        "new-conjecture",
        _gen_new_conjecture,
        lambda p: (5, p["p_max"]),
        ("p_max", "q_max"),
    ),
    "pairs": _ScanDef("pairs", _gen_pairs, _pairs_bounds, ()),
}


def scan_names() -> list[str]:
    return sorted(_SCANS)


# --------------------------------------------------------------------------
# Runner
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanSummary:
    scan: str
    params_hash: str
    subjects: int
    records: int
    hits: int
    fails: int


def _chunk_ranges(lo: int, hi: int, chunks: int) -> list[tuple[int, int]]:
    size = max(1, (hi - lo + 1 + chunks - 1) // chunks)
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def _subject_stream(sd: _ScanDef, params: dict, h: str, threads: int) -> Iterator:
    if threads <= 1:
        yield from sd.generate(params, h)
        return
    lo, hi = sd.bounds(params)
    ranges = _chunk_ranges(lo, hi, threads * 4)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(lambda r: list(sd.generate(params, h, r[0], r[1])), rng)
            for rng in ranges
        ]
        # merge in chunk order: chunks are contiguous, so subject order holds
        for fut in futures:
            yield from fut.result()


def run_scan(
    name: str,
    params: dict,
    sink,
    *,
    fmt: str = "jsonl",
    checkpoint_path: str | None = None,
    checkpoint_interval: int = 1000,
    threads: int = 1,
    limit_subjects: int | None = None,
    observer: Callable[[ScanRecord], None] | None = None,
) -> ScanSummary:
    """Drive a scan: emit records to sink, checkpointing as it goes.

    If checkpoint_path exists, the run resumes after its last completed
    subject (the caller should open sink in append mode).  Checkpoints are
    written only after the records they cover, so a checkpoint never claims
    unflushed work.  limit_subjects stops early after that many subjects
    (used to exercise interruption in tests).
    """
    if name not in _SCANS:
        raise ValueError(f"unknown scan {name!r}; choose from {scan_names()}")
    sd = _SCANS[name]
    missing = [k for k in sd.required if k not in params]
    if missing:
        raise ValueError(f"scan {name} missing params {missing}")
    h = params_digest(params)

    resume_after: Subject | None = None
    already_emitted = 0
    if checkpoint_path and os.path.exists(checkpoint_path):
        cp = checkpoint_load(checkpoint_path, expected_params=params)
        if cp.scan != name:
            raise ParamsMismatch(f"checkpoint is for scan {cp.scan!r}, not {name!r}")
        resume_after = cp.last_subject
        already_emitted = cp.records_emitted

    emit = _make_writer(sink, fmt, header=resume_after is None)
    subjects = records = hits = fails = 0
    replayed = 0
    last: Subject | None = resume_after
    since_checkpoint = 0

    for subject, recs in _subject_stream(sd, params, h, threads):
        if resume_after is not None and subject <= resume_after:
            replayed += len(recs)
            continue
        for rec in recs:
            emit(rec)
            if observer is not None:
                observer(rec)
            records += 1
            hits += rec.verdict == "hit"
            fails += rec.verdict == "fail"
        subjects += 1
        last = subject
        since_checkpoint += 1
        if checkpoint_path and since_checkpoint >= checkpoint_interval:
            _flush(sink)
            checkpoint_save(
                Checkpoint(name, params, h, last, already_emitted + records), checkpoint_path
            )
            since_checkpoint = 0
        if limit_subjects is not None and subjects >= limit_subjects:
            break

    if resume_after is not None and replayed != already_emitted:
        raise CheckpointError(
            f"replay produced {replayed} records before the checkpoint, "
            f"but it claims {already_emitted}; determinism violated"
        )
    _flush(sink)
    if checkpoint_path and last is not None:
        checkpoint_save(
            Checkpoint(name, params, h, last, already_emitted + records), checkpoint_path
        )
    return ScanSummary(name, h, subjects, records, hits, fails)


def _flush(sink) -> None:
    flush = getattr(sink, "flush", None)
    if flush:
        flush()


_CSV_COLUMNS = ("scan", "subject", "witness", "verdict", "params_hash")


def _make_writer(sink, fmt: str, header: bool):
    if fmt == "jsonl":
        def emit(rec: ScanRecord) -> None:
            sink.write(rec.to_json() + "\n")

        return emit
    if fmt == "csv":
        import csv

        writer = csv.writer(sink, lineterminator="\n")
        if header:
            writer.writerow(_CSV_COLUMNS)

        def emit(rec: ScanRecord) -> None:
            subject = (
                json.dumps(list(rec.subject))
                if isinstance(rec.subject, tuple)
                else rec.subject
            )
            witness = json.dumps(
                {k: rec.witness[k] for k in sorted(rec.witness)}, separators=(",", ":")
            )
            writer.writerow([rec.scan, subject, witness, rec.verdict, rec.params_hash])

        return emit
    raise ValueError(f"unknown format {fmt!r}")


def records_to_csv(records: list[ScanRecord], sink) -> None:
    emit = _make_writer(sink, "csv", header=True)
    for rec in records:
        emit(rec)


def _collect(name: str, params: dict) -> list[ScanRecord]:
    sd = _SCANS[name]
    h = params_digest(params)
    out: list[ScanRecord] = []
    for _, recs in sd.generate(params, h):
        out.extend(recs)
    return out


# --------------------------------------------------------------------------
# Library-level scan entry points
# --------------------------------------------------------------------------


def scan_wilson(limit: int) -> list[ScanRecord]:
    """Wilson primes up to limit: (p-1)! = -1 (mod p^2)."""
    return _collect("wilson", {"limit": limit})


def scan_wilson_cube(limit: int) -> list[ScanRecord]:
    """Integers n <= limit with (n-1)! = -1 (mod n^3); expected none."""
    return _collect("wilson-cube", {"limit": limit})


def scan_jones(limit: int) -> list[ScanRecord]:
    """All n <= limit with w(n) = 1 (mod n^3); hits must be primes >= 5."""
    return _collect("jones", {"limit": limit})


def scan_wolstenholme_primes(limit: int) -> list[ScanRecord]:
    """Primes p <= limit with w(p) = 1 (mod p^4)."""
    return _collect("wolstenholme-primes", {"limit": limit})


def scan_mod5(limit: int) -> list[ScanRecord]:
    """Integers n <= limit with w(n) = 1 (mod n^5); expected none."""
    return _collect("mod5", {"limit": limit})


def scan_new_conjecture(p_max: int, q_max: int) -> list[ScanRecord]:
    """For each prime p <= p_max, primes q != p, q <= q_max with q^2 | w(p)-1.

    Each hit is certified by exact trial division and re-verified through
    the modular route; all hits are expected to satisfy q < p.
    """
    return _collect("new-conjecture", {"p_max": p_max, "q_max": q_max})


def scan_pair_units(
    p_max: int | None = None,
    q_max: int | None = None,
    known: bool = False,
    stretch: bool = False,
) -> list[ScanRecord]:
    """Pairs p < q with w(pq) = 1 (mod pq), via the pair criterion.

    known=True checks the published pairs instead of a range; the third
    published pair only runs under stretch (it takes a while).
    """
    if known:
        params: dict = {"known": True, "stretch": stretch}
    else:
        if p_max is None or q_max is None:
            raise ValueError("range mode needs p_max and q_max")
        params = {"p_max": p_max, "q_max": q_max}
    return _collect("pairs", params)


def max_ratio_report(records: list[ScanRecord]) -> dict:
    """Summary of new-conjecture hits: the largest q/p ratio observed.

    The conjecture predicts q < p on all but finitely many hits, so the
    interesting statistic is how close q/p comes to 1 (published data at
    larger scale reports ratios around 1/100).
    """
    best: Fraction | None = None
    best_subject = None
    count = 0
    for rec in records:
        if rec.scan != "new-conjecture" or "q" not in rec.witness:
            continue
        count += 1
        ratio = Fraction(int(rec.witness["q"]), rec.subject)
        if best is None or ratio > best:
            best = ratio
            best_subject = (rec.subject, int(rec.witness["q"]))
    return {
        "hits": count,
        "max_q_over_p": str(best) if best is not None else None,
        "max_pair": list(best_subject) if best_subject else None,
    }
