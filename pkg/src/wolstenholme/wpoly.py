"""Integer polynomials and the Wolstenholme polynomial W(p).

W(p) is the degree 2p-7 integer polynomial with
(w(p) - 1)/p^3 = (p+1) * W(p) / ((2p-4)! (p-1)!).  It is assembled from
basis polynomials D(x+1, k)/((x+1+j) * x * (x+1)) where D(n, k) is the
product (n-k)(n-k+1)...(n+k); one term per odd k <= p-2, weighted by
alternating binomial sums of second-kind Stirling numbers.  The module also
carries the Taylor-shift/Hensel divisibility toolkit built on top of W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import double_factorial, factorial_exact, is_prime, valuation
from .congruence import w_exact
from .errors import (
    AssertionFailure,
    ConstructionAssertFailure,
    InexactDivision,
    NotApplicable,
)
from .symmetric import StirlingTables, stirling_tables

__all__ = [
    "IntPoly",
    "TermBasis",
    "TrendRecord",
    "WReport",
    "CoeffProfile",
    "poly_eval",
    "poly_eval_mod",
    "poly_derivative",
    "poly_shift",
    "poly_divexact_x",
    "term_basis",
    "construct_W",
    "verify_W",
    "coeff_profile",
    "large_prime_divisor_check",
    "hensel_lift",
    "shift_divisibility_check",
    "trend_scan",
]


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, coefficients ascending, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = self.coeffs
        if c and c[-1] == 0:
            while c and c[-1] == 0:
                c = c[:-1]
            object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0


def poly_eval(f: IntPoly, x: int) -> int:
    """f(x) by Horner's rule, exact."""
    acc = 0
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def poly_eval_mod(f: IntPoly, x: int, m: int) -> int:
    """f(x) mod m by Horner's rule; avoids huge intermediates."""
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % m
    return acc


def poly_derivative(f: IntPoly) -> IntPoly:
    return IntPoly(tuple(i * c for i, c in enumerate(f.coeffs) if i > 0))


def poly_shift(f: IntPoly, n: int) -> IntPoly:
    """Coefficients of f(x + n): eval(shift(f, n), t) = eval(f, t + n)."""
    a = list(f.coeffs)
    d = len(a)
    for i in range(d - 1):
        for j in range(d - 2, i - 1, -1):
            a[j] += n * a[j + 1]
    return IntPoly(tuple(a))


def poly_divexact_x(f: IntPoly) -> IntPoly:
    """f / x; requires a zero constant term."""
    if f.coeffs and f.coeffs[0] != 0:
        raise InexactDivision(f"constant term {f.coeffs[0]} is not zero")
    return IntPoly(f.coeffs[1:])


def _mul_linear(coeffs: list[int], c: int) -> list[int]:
    # multiply by (x + c)
    out = [0] * (len(coeffs) + 1)
    for i, a in enumerate(coeffs):
        out[i] += a * c
        out[i + 1] += a
    return out


def _div_linear(coeffs: list[int], c: int) -> list[int]:
    # exact division by (x + c), i.e. synthetic division at root -c
    out = [0] * (len(coeffs) - 1)
    carry = 0
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry
        out[i - 1] = carry
        carry = -c * carry
    if coeffs[0] + carry != 0:
        raise InexactDivision(f"(x + {c}) does not divide polynomial")
    return out


@dataclass(frozen=True)
class TermBasis:
    """One basis polynomial D(x+1, k)/((x+1+j) * x * (x+1)) of degree 2k-2."""

    k: int
    j: int
    basis: IntPoly


def term_basis(k: int, j: int) -> TermBasis:
    """Build the (k, j) basis as an explicit product of linear factors.

    D(x+1, k) runs over x+v for v = 1-k .. 1+k; the three removed factors
    x, x+1, x+1+j are distinct members of that range for 1 <= j <= k.
    """
    if not 1 <= j <= k:
        raise ValueError(f"need 1 <= j <= k, got (k={k}, j={j})")
    coeffs = [1]
    for v in range(1 - k, k + 2):
        if v in (0, 1, 1 + j):
            continue
        coeffs = _mul_linear(coeffs, v)
    poly = IntPoly(tuple(coeffs))
    assert poly.degree == 2 * k - 2
    return TermBasis(k, j, poly)


def _check_prime_ge5(p: int) -> None:
    if p < 5 or not is_prime(p):
        raise ValueError(f"requires a prime p >= 5, got {p}")


def construct_W(p: int, st: StirlingTables | None = None) -> IntPoly:
    """Build W for the prime p; integer coefficients, degree 2p-7.

    One term per odd k <= p-2:
      x^(p-k-3) * (2p-4)!/(2k)! * sum_j (-1)^(j+k) C(2k, k+j) S(j+k, j) * basis(k, j)
    where the k = p-2 power x^(-1) is realized by an exact division by x of
    the inner sum (its constant term must vanish).  The evaluation identity
    against the exact w(p) is asserted before returning.
    """
    _check_prime_ge5(p)
    if st is None or st.n_max < 2 * p - 4:
        st = stirling_tables(2 * p - 4)
    f_top = factorial_exact(2 * p - 4)
    acc = [0] * (2 * p - 6)
    for k in range(1, p - 1, 2):
        base = [1]
        for v in range(1 - k, k + 2):
            if v not in (0, 1):
                base = _mul_linear(base, v)
        inner = [0] * (2 * k - 1)
        for j in range(1, k + 1):
            c = (-1) ** (j + k) * math.comb(2 * k, k + j) * st.s2(j + k, j)
            basis = _div_linear(base, 1 + j)
            for i, b in enumerate(basis):
                inner[i] += c * b
        scale = f_top // factorial_exact(2 * k)
        inner = [ci * scale for ci in inner]
        if k == p - 2:
            if inner[0] != 0:
                raise ConstructionAssertFailure(
                    f"k = p-2 inner sum has nonzero constant term at p={p}"
                )
            inner = inner[1:]
            offset = 0
        else:
            offset = p - k - 3
        for i, ci in enumerate(inner):
            acc[offset + i] += ci
    w_poly = IntPoly(tuple(acc))
    if w_poly.degree != 2 * p - 7:
        raise ConstructionAssertFailure(
            f"degree {w_poly.degree} != 2p-7 = {2 * p - 7} at p={p}"
        )
    lhs = poly_eval(w_poly, p) * (p + 1) * p**3
    rhs = (w_exact(p) - 1) * f_top * factorial_exact(p - 1)
    if lhs != rhs:
        raise ConstructionAssertFailure(f"evaluation identity failed at p={p}")
    return w_poly


@dataclass(frozen=True)
class WReport:
    p: int
    degree: int
    leading: int
    a0: int
    w_at_p: int


def verify_W(p: int, w_poly: IntPoly | None = None) -> WReport:
    """Check all structural claims about W: degree 2p-7, leading coefficient
    (2p-5)!!, (p-3)! divides a0, and the evaluation identity.

    Raises AssertionFailure naming the failing clause.
    """
    _check_prime_ge5(p)
    if w_poly is None:
        w_poly = construct_W(p)
    if w_poly.degree != 2 * p - 7:
        raise AssertionFailure("degree != 2p-7", p=p, degree=w_poly.degree)
    leading = w_poly.coeffs[-1]
    if leading != double_factorial(2 * p - 5):
        raise AssertionFailure("leading coefficient != (2p-5)!!", p=p, leading=leading)
    a0 = w_poly.coeff(0)
    if a0 % factorial_exact(p - 3) != 0:
        raise AssertionFailure("(p-3)! does not divide a0", p=p, a0=a0)
    value = poly_eval(w_poly, p)
    if value * (p + 1) * p**3 != (w_exact(p) - 1) * factorial_exact(
        2 * p - 4
    ) * factorial_exact(p - 1):
        raise AssertionFailure("evaluation identity failed", p=p)
    return WReport(p=p, degree=w_poly.degree, leading=leading, a0=a0, w_at_p=value)


@dataclass(frozen=True)
class CoeffProfile:
    """Observed (not asserted) coefficient trends: where the largest
    coefficient sits and whether signs alternate above index p-4."""

    p: int
    argmax_index: int
    argmax_is_p_minus_4: bool
    high_signs: tuple[int, ...]  # signs of a_i for i = p-4 .. 2p-7
    signs_alternate: bool


def coeff_profile(p: int, w_poly: IntPoly | None = None) -> CoeffProfile:
    """Report which |a_i| is largest and the sign pattern of the top half.

    These are empirical observations, not theorems, so deviations are
    flagged in the returned profile rather than raised.
    """
    _check_prime_ge5(p)
    if w_poly is None:
        w_poly = construct_W(p)
    argmax = max(range(len(w_poly.coeffs)), key=lambda i: abs(w_poly.coeffs[i]))
    signs = tuple(
        1 if w_poly.coeff(i) > 0 else (-1 if w_poly.coeff(i) < 0 else 0)
        for i in range(p - 4, 2 * p - 6)
    )
    alternate = all(
        signs[i] != 0 and signs[i] == -signs[i + 1] for i in range(len(signs) - 1)
    )
    return CoeffProfile(
        p=p,
        argmax_index=argmax,
        argmax_is_p_minus_4=argmax == p - 4,
        high_signs=signs,
        signs_alternate=alternate,
    )


def large_prime_divisor_check(
    p: int, q: int, w_poly: IntPoly | None = None
) -> bool:
    """Does the prime q > p divide (w(p)-1)/p^3?

    Asserts the two structural facts: a prime q > p dividing w(p)-1 must
    exceed 2p (every prime in (p, 2p-1] divides w(p) itself), and for
    q > 2p divisibility of (w(p)-1)/p^3 is equivalent to q | W(p).
    """
    _check_prime_ge5(p)
    if q <= p or not is_prime(q):
        raise ValueError(f"requires a prime q > p, got q={q}")
    wp1 = w_exact(p) - 1
    divides = wp1 % q == 0
    if divides and q <= 2 * p:
        raise AssertionFailure("prime q in (p, 2p] divides w(p)-1", p=p, q=q)
    result = (wp1 // p**3) % q == 0
    assert result == divides  # q != p, so q | w(p)-1 iff q | (w(p)-1)/p^3
    if q > 2 * p:
        if w_poly is None:
            w_poly = construct_W(p)
        via_poly = poly_eval_mod(w_poly, p, q) == 0
        if via_poly != result:
            raise AssertionFailure(
                "q | (w(p)-1)/p^3 disagrees with q | W(p)", p=p, q=q
            )
    return result


def hensel_lift(f: IntPoly, r: int, n: int) -> int:
    """Lift a simple root of f mod r to the unique root s mod r^2.

    Requires r | f(n) and r not dividing f'(n); returns s in [0, r^2) with
    s = n (mod r) and r^2 | f(s), via one Newton step
    s = n - f(n) * f'(n)^-1 mod r^2.
    """
    fn = poly_eval(f, n)
    if fn % r != 0:
        raise NotApplicable(f"r={r} does not divide f({n})={fn}")
    d = poly_eval(poly_derivative(f), n)
    if d % r == 0:
        raise NotApplicable(f"r={r} divides f'({n})={d}: root is not simple")
    r2 = r * r
    s = (n - fn * pow(d, -1, r2)) % r2
    assert poly_eval(f, s) % r2 == 0 and (s - n) % r == 0
    return s


def shift_divisibility_check(f: IntPoly, p: int, n: int) -> bool:
    """Check the Taylor-shift divisibility biconditionals at d = p - n.

    d | f(p) iff d | f(n) always (integer polynomial); when d | f'(n),
    additionally d^2 | f(p) iff d^2 | f(n).
    """
    if p == n:
        raise ValueError("requires p != n")
    d = abs(p - n)
    fp = poly_eval(f, p)
    fn = poly_eval(f, n)
    ok = (fp % d == 0) == (fn % d == 0)
    if poly_eval(poly_derivative(f), n) % d == 0:
        d2 = d * d
        ok = ok and (fp % d2 == 0) == (fn % d2 == 0)
    return ok


@dataclass(frozen=True)
class TrendRecord:
    """A prime r = p - n > p dividing W(n), and whether it divides W'(n) too.

    r_exceeds_2p marks the regime where r can actually divide (w(p)-1)/p^3:
    a prime in (p, 2p] always divides w(p) itself, and every prime in
    (p, 2p-5] divides the coefficient content of W outright, so only
    r > 2p records bear on the observed trend.
    """

    p: int
    n: int
    r: int
    divides_w: bool
    divides_w1: bool
    r_exceeds_2p: bool


def trend_scan(p: int, n_lo: int, n_hi: int) -> list[TrendRecord]:
    """Scan n in [n_lo, n_hi] (all negative, so r = p - n > p is prime-sized).

    Emits a record for each prime r = p - n dividing W(n).  The observed
    trend is that r never also divides W'(n); that holds in the r > 2p
    regime, while r < 2p records hit the coefficient content of W (primes
    up to 2p-5 divide every coefficient) and divide both polynomials
    trivially.  Callers flag divides_w1 records with r_exceeds_2p set.
    """
    _check_prime_ge5(p)
    if n_hi >= 0:
        raise ValueError("requires n_hi < 0 so that r = p - n > p")
    if n_lo > n_hi:
        raise ValueError("empty range")
    w_poly = construct_W(p)
    w1 = poly_derivative(w_poly)
    records = []
    for n in range(n_lo, n_hi + 1):
        r = p - n
        if not is_prime(r):
            continue
        if poly_eval_mod(w_poly, n, r) == 0:
            records.append(
                TrendRecord(
                    p=p,
                    n=n,
                    r=r,
                    divides_w=True,
                    divides_w1=poly_eval_mod(w1, n, r) == 0,
                    r_exceeds_2p=r > 2 * p,
                )
            )
    return records
