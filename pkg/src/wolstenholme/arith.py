"""Exact integer and rational primitives.

Primality testing, prime streams, modular inverses, and factorial/binomial
arithmetic modulo prime powers.  Everything here is pure and deterministic;
big integers are plain ``int``, exact rationals are ``fractions.Fraction``
(already normalized: positive denominator, sign in the numerator, gcd 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import (
    DenominatorNotCoprime,
    FactoringBudgetExceeded,
    NotInvertible,
    ZeroNumerator,
)

__all__ = [
    "ResidueClass",
    "PrimalityCheck",
    "prime_check",
    "is_prime",
    "primes_in",
    "primes_upto",
    "mod_inv",
    "factorial_exact",
    "double_factorial",
    "legendre_valuation",
    "carry_count",
    "factorial_unit",
    "binomial_exact",
    "binomial_mod_prime_power",
    "binomial_mod",
    "valuation",
    "num_valuation",
    "factor_completely",
]


@dataclass(frozen=True)
class ResidueClass:
    """A value together with its modulus; result type of modular computations."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} not reduced mod {self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> "ResidueClass":
        return cls(value % modulus, modulus)

    def __int__(self) -> int:
        return self.value


# --------------------------------------------------------------------------
# Primality
# --------------------------------------------------------------------------

# Strong-probable-prime bases.  Testing against the first 12 primes is a
# proven deterministic criterion for n < 3317044064679887385961981 (> 2^64);
# above that bound the same fixed base set is used but the verdict is only
# probabilistic, and the result says so.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROVEN_BOUND = 3317044064679887385961981


@dataclass(frozen=True)
class PrimalityCheck:
    n: int
    is_prime: bool
    probabilistic: bool


def _strong_probable_prime(n: int, base: int) -> bool:
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def prime_check(n: int) -> PrimalityCheck:
    """Primality of n with metadata; deterministic and exact below 2^64."""
    if n < 2:
        return PrimalityCheck(n, False, False)
    for p in _MR_BASES:
        if n == p:
            return PrimalityCheck(n, True, False)
        if n % p == 0:
            return PrimalityCheck(n, False, False)
    probabilistic = n >= _MR_PROVEN_BOUND
    for base in _MR_BASES:
        if not _strong_probable_prime(n, base):
            return PrimalityCheck(n, False, False)
    return PrimalityCheck(n, True, probabilistic)


def is_prime(n: int) -> bool:
    """True iff n is prime (probable prime beyond the proven MR bound)."""
    return prime_check(n).is_prime


@lru_cache(maxsize=8)
def _small_primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_SEGMENT = 1 << 16


def primes_in(lo: int, hi: int):
    """Yield exactly the primes in [lo, hi], ascending.

    Segmented sieve: memory stays bounded by the segment size plus the base
    primes up to sqrt(hi), so large ranges stream.
    """
    if hi < lo or hi < 2:
        return
    lo = max(lo, 2)
    root = isqrt(hi)
    base = _small_primes_upto(root)
    for p in base:
        if lo <= p <= hi:
            yield p
    start = max(lo, root + 1)
    for left in range(start, hi + 1, _SEGMENT):
        right = min(left + _SEGMENT - 1, hi)
        seg = bytearray([1]) * (right - left + 1)
        for p in base:
            first = max(p * p, (left + p - 1) // p * p)
            for multiple in range(first, right + 1, p):
                seg[multiple - left] = 0
        for offset, flag in enumerate(seg):
            if flag:
                yield left + offset


def primes_upto(n: int) -> list[int]:
    """All primes <= n as a list."""
    return list(primes_in(2, n))


# --------------------------------------------------------------------------
# Modular and factorial arithmetic
# --------------------------------------------------------------------------


def mod_inv(a: int, m: int) -> ResidueClass:
    """x with a*x = 1 (mod m); raises NotInvertible when gcd(a, m) != 1."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    try:
        return ResidueClass(pow(a % m, -1, m), m)
    except ValueError:
        raise NotInvertible(
            f"{a} is not invertible mod {m} (gcd={math.gcd(a, m)})"
        ) from None


def factorial_exact(n: int) -> int:
    """n! as an exact integer."""
    return math.factorial(n)


def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)... down to 1 or 2; 0!! = 1."""
    if n < 0:
        raise ValueError("double factorial requires n >= 0")
    return math.prod(range(n, 0, -2))


def binomial_exact(n: int, k: int) -> int:
    """C(n, k) exactly; 0 when k > n or k < 0."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def legendre_valuation(n: int, q: int) -> int:
    """Exponent of the prime q in n!, via the floor-sum formula."""
    total = 0
    while n:
        n //= q
        total += n
    return total


def carry_count(a: int, b: int, q: int) -> int:
    """Number of carries when adding a and b in base q.

    By Kummer's theorem this is the exponent of q in C(a+b, a).
    """
    carries = carry = 0
    while a or b or carry:
        carry = 1 if a % q + b % q + carry >= q else 0
        carries += carry
        a //= q
        b //= q
    return carries


def valuation(n: int, q: int) -> int:
    """Exponent of q in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = abs(n)
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


# Prefix tables of unit products make repeated factorial_unit calls for the
# same (q, e) O(log n); above this modulus size a direct partial-block loop
# is used instead (bounded by n per call, no table memory).
_UNIT_TABLE_MAX = 1 << 17


@lru_cache(maxsize=64)
def _unit_prefix(q: int, e: int) -> tuple[int, ...]:
    Q = q**e
    table = [1] * Q
    acc = 1
    for r in range(1, Q):
        if r % q:
            acc = acc * r % Q
        table[r] = acc
    return tuple(table)


def _partial_block(limit: int, q: int, Q: int) -> int:
    acc = 1
    for a in range(1, limit + 1):
        if a % q:
            acc = acc * a % Q
    return acc


def factorial_unit(n: int, q: int, e: int = 1) -> tuple[int, ResidueClass]:
    """Split n! as q^val * unit with q not dividing unit.

    Returns (val, unit mod q^e) where val is the Legendre valuation and
    unit = n!/q^val, i.e. q^val * unit reconstructs n! mod q^(val+e).
    Uses the Wilson-block recursion n! = (n!)_q * q^(n//q) * (n//q)!, where
    (m!)_q, the product of 1..m with multiples of q skipped, is a full-block
    unit product raised to m // q^e times a partial block.
    """
    Q = q**e
    val = legendre_valuation(n, q)
    table = _unit_prefix(q, e) if Q <= _UNIT_TABLE_MAX else None
    unit = 1
    full = None
    m = n
    while m > 0:
        blocks, rem = divmod(m, Q)
        if table is not None:
            part = table[rem]
            full = table[Q - 1]
        else:
            part = _partial_block(rem, q, Q)
            if blocks and full is None:
                full = _partial_block(Q - 1, q, Q)
        if blocks:
            unit = unit * pow(full, blocks, Q) % Q
        unit = unit * part % Q
        m //= q
    return val, ResidueClass(unit, Q)


def binomial_mod_prime_power(n: int, k: int, q: int, e: int) -> ResidueClass:
    """C(n, k) mod q^e for prime q, via generalized factorials.

    The valuation of C(n, k) at q is the base-q carry count of k + (n-k);
    when it reaches e the residue is 0 and no unit work is needed.
    """
    Q = q**e
    if k < 0 or k > n:
        return ResidueClass(0, Q)
    c = carry_count(k, n - k, q)
    if c >= e:
        return ResidueClass(0, Q)
    _, un = factorial_unit(n, q, e)
    _, uk = factorial_unit(k, q, e)
    _, unk = factorial_unit(n - k, q, e)
    u = un.value * pow(uk.value * unk.value % Q, -1, Q) % Q
    return ResidueClass(q**c * u % Q, Q)


_TRIAL_LIMIT = 10**6
_EXACT_FALLBACK_LIMIT = 200_000


def factor_completely(m: int, trial_limit: int = _TRIAL_LIMIT) -> dict[int, int]:
    """Factor m by trial division up to trial_limit plus one primality check.

    Moduli in this package are built from known primes, so this nearly always
    completes; raises FactoringBudgetExceeded (with the partial factorization)
    when a composite cofactor survives.
    """
    if m < 1:
        raise ValueError("factorization requires m >= 1")
    factors: dict[int, int] = {}
    rest = m
    for p in range(2, trial_limit + 1):
        if p * p > rest:
            break
        while rest % p == 0:
            factors[p] = factors.get(p, 0) + 1
            rest //= p
    if rest > 1:
        if rest <= trial_limit * trial_limit or is_prime(rest):
            factors[rest] = factors.get(rest, 0) + 1
        else:
            raise FactoringBudgetExceeded(m, factors, rest)
    return factors


def _crt(residues: list[tuple[int, int]]) -> tuple[int, int]:
    x, m = residues[0]
    for r, n in residues[1:]:
        h = (r - x) * pow(m % n, -1, n) % n
        x += m * h
        m *= n
    return x % m, m


def binomial_mod(n: int, k: int, m: int) -> ResidueClass:
    """C(n, k) mod m for any modulus m >= 2.

    Factors m, reduces per prime power, and recombines by CRT.  When m
    resists factoring within the budget, falls back to exact-then-reduce
    (bounded by n <= 200000); beyond that the factoring error propagates.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if k < 0 or k > n:
        return ResidueClass(0, m)
    try:
        factors = factor_completely(m)
    except FactoringBudgetExceeded:
        if n <= _EXACT_FALLBACK_LIMIT:
            exact = factorial_exact(n) // (factorial_exact(k) * factorial_exact(n - k))
            return ResidueClass(exact % m, m)
        raise
    parts = [
        (binomial_mod_prime_power(n, k, q, a).value, q**a)
        for q, a in sorted(factors.items())
    ]
    value, modulus = _crt(parts)
    assert modulus == m
    return ResidueClass(value, m)


def num_valuation(r: Fraction, q: int) -> int:
    """Exponent of the prime q in the numerator of r.

    This is the fractional-congruence valuation: it requires gcd(den, q) = 1
    and a nonzero numerator.
    """
    if r.denominator % q == 0:
        raise DenominatorNotCoprime(f"{q} divides denominator of {r}")
    if r.numerator == 0:
        raise ZeroNumerator("numerator valuation of 0 is undefined")
    return valuation(r.numerator, q)
