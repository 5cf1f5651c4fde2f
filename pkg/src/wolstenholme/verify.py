"""Named verification suites: each runs one identity or property battery
up to a bound and yields a result per subject.

Suites are consumed by the CLI (violations printed as JSON lines, exit 1
on any) and by the acceptance tests (which pin the bounds from the
acceptance criteria).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .arith import is_prime, primes_upto
from .congruence import (
    divisor_product_check,
    factor_band_classify,
    w_exact,
    wilson_restatement_check,
)
from .errors import AssertionFailure
from .symmetric import (
    bayat_valuations,
    check_form,
    check_form2,
    check_int_expansion,
    check_sP_relation,
    elem_sym_rows,
    form4_eval,
    ident_doublefact,
    s_pm_mod_p,
    stirling1_via_form3,
    stirling_tables,
)
from .wpoly import construct_W, large_prime_divisor_check, trend_scan, verify_W

__all__ = ["SuiteResult", "suite_names", "default_bound", "run_suite"]


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    subject: int | tuple
    ok: bool
    detail: str = ""


def _suite_equ(bound: int) -> Iterator[SuiteResult]:
    for n in range(2, bound + 1):
        yield SuiteResult("equ", n, wilson_restatement_check(n))


def _suite_rel(bound: int) -> Iterator[SuiteResult]:
    for n in range(1, bound + 1):
        yield SuiteResult("rel", n, divisor_product_check(n))


def _suite_form(bound: int) -> Iterator[SuiteResult]:
    primes = set(primes_upto(bound))
    for tab in elem_sym_rows(max(bound - 1, 0)):
        p = tab.n + 1
        if p >= 5 and p in primes:
            yield SuiteResult("form", p, check_form(p, sym=tab))


def _suite_int(bound: int) -> Iterator[SuiteResult]:
    primes = set(primes_upto(bound))
    for tab in elem_sym_rows(bound):
        p = tab.n
        if p >= 5 and p in primes:
            ok = check_int_expansion(p, sym=tab) and s_pm_mod_p(p, sym=tab)
            yield SuiteResult("int", p, ok)


def _suite_fra(bound: int) -> Iterator[SuiteResult]:
    primes = set(primes_upto(bound))
    for tab in elem_sym_rows(max(bound - 1, 0)):
        p = tab.n + 1
        if p >= 5 and p in primes:
            try:
                bayat_valuations(p, sym=tab)
                yield SuiteResult("fra", p, True)
            except AssertionFailure as exc:
                yield SuiteResult("fra", p, False, str(exc))


def _suite_form2(bound: int) -> Iterator[SuiteResult]:
    st = stirling_tables(bound + 1)
    for tab in elem_sym_rows(bound):
        n = tab.n
        if n >= 1:
            ok = check_form2(n, sym=tab) and check_sP_relation(n, st=st)
            yield SuiteResult("form2", n, ok)


def _suite_form3(bound: int) -> Iterator[SuiteResult]:
    st = stirling_tables(max(2 * (bound - 1), 1))
    for n in range(1, bound + 1):
        ok = all(
            stirling1_via_form3(n, k, st=st) == st.s1(n, n - k) for k in range(n)
        )
        yield SuiteResult("form3", n, ok)


def _suite_form4(bound: int) -> Iterator[SuiteResult]:
    st = stirling_tables(max(2 * (bound - 2), 1))
    primes = set(primes_upto(bound))
    for tab in elem_sym_rows(bound):
        p = tab.n
        if p >= 5 and p in primes:
            ok = all(
                form4_eval(p, k, st=st) == tab[p - k] for k in range(1, p - 1, 2)
            )
            yield SuiteResult("form4", p, ok)


def _suite_ident(bound: int) -> Iterator[SuiteResult]:
    st = stirling_tables(2 * bound)
    for k in range(1, bound + 1):
        yield SuiteResult("ident", k, ident_doublefact(k, st=st))


def _suite_bands(bound: int) -> Iterator[SuiteResult]:
    for p in primes_upto(bound):
        if p < 5:
            continue
        bands = factor_band_classify(p)
        bad = [b.q for b in bands if b.predicted_divides != b.actual_divides]
        yield SuiteResult("bands", p, not bad, f"mismatched q={bad}" if bad else "")


def _trial_prime_divisors(m: int, above: int, limit: int = 10**6) -> list[int]:
    # prime divisors of m greater than `above`, found by bounded trial
    # division; a surviving prime cofactor counts, a composite one does not
    found = []
    f = 2
    while f <= limit and f * f <= m:
        if m % f == 0:
            if f > above:
                found.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1 and m > above and is_prime(m):
        found.append(m)
    return found


def _suite_wpoly(bound: int) -> Iterator[SuiteResult]:
    st = stirling_tables(max(2 * bound - 4, 1))
    for p in primes_upto(bound):
        if p < 5:
            continue
        problems = []
        w_poly = construct_W(p, st=st)
        try:
            verify_W(p, w_poly)
        except AssertionFailure as exc:
            problems.append(str(exc))
        n_over_p3 = (w_exact(p) - 1) // p**3
        for q in _trial_prime_divisors(n_over_p3, above=2 * p):
            if not large_prime_divisor_check(p, q, w_poly=w_poly):
                problems.append(f"divisor equivalence failed at q={q}")
        content = 0
        for c in w_poly.coeffs:
            content = math.gcd(content, c)
        for rec in trend_scan(p, -10 * p * p, -1):
            if rec.divides_w1:
                if rec.r_exceeds_2p:
                    problems.append(f"trend violated at n={rec.n}, r={rec.r}")
                elif content % rec.r != 0:
                    problems.append(
                        f"unexplained double divisor at n={rec.n}, r={rec.r}"
                    )
                # r < 2p dividing the coefficient content divides W and W'
                # identically; not a trend statement
        yield SuiteResult("wpoly", p, not problems, "; ".join(problems))


_SUITES: dict[str, tuple[Callable[[int], Iterator[SuiteResult]], int]] = {
    "equ": (_suite_equ, 2000),
    "rel": (_suite_rel, 2000),
    "form": (_suite_form, 199),
    "int": (_suite_int, 199),
    "fra": (_suite_fra, 199),
    "form2": (_suite_form2, 200),
    "form3": (_suite_form3, 60),
    "form4": (_suite_form4, 61),
    "ident": (_suite_ident, 200),
    "bands": (_suite_bands, 500),
    "wpoly": (_suite_wpoly, 61),
}

_ALIASES = {"form3-cross": "form3", "form4-cross": "form4", "w-properties": "wpoly"}


def suite_names() -> list[str]:
    return sorted(_SUITES)


def _resolve(name: str) -> str:
    name = _ALIASES.get(name.lower(), name.lower())
    if name not in _SUITES:
        raise KeyError(name)
    return name


def default_bound(name: str) -> int:
    return _SUITES[_resolve(name)][1]


def run_suite(name: str, bound: int | None = None) -> Iterator[SuiteResult]:
    """Run the named suite up to bound (suite default if omitted)."""
    key = _resolve(name)
    fn, default = _SUITES[key]
    return fn(bound if bound is not None else default)
