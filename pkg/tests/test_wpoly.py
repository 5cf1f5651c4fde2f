import math
import random

import pytest

from wolstenholme.arith import double_factorial, factorial_exact, primes_upto
from wolstenholme.congruence import w_exact
from wolstenholme.errors import (
    AssertionFailure,
    InexactDivision,
    NotApplicable,
)
from wolstenholme.symmetric import stirling_tables
from wolstenholme.wpoly import (
    IntPoly,
    coeff_profile,
    construct_W,
    hensel_lift,
    large_prime_divisor_check,
    poly_derivative,
    poly_divexact_x,
    poly_eval,
    poly_eval_mod,
    poly_shift,
    shift_divisibility_check,
    term_basis,
    trend_scan,
    verify_W,
)

W5_COEFFS = (30, 345, -30, 15)  # 15x^3 - 30x^2 + 345x + 30, W(5) = 2880


class TestPolyOps:
    def test_canonicalization(self):
        assert IntPoly((1, 2, 0, 0)).coeffs == (1, 2)
        assert IntPoly((0, 0, 0)).coeffs == ()
        assert IntPoly(()).degree == -1

    def test_eval_examples(self):
        assert poly_eval(IntPoly(W5_COEFFS), 5) == 2880
        assert poly_eval(IntPoly(()), 3) == 0

    def test_eval_mod_matches_eval(self):
        f = IntPoly((7, -3, 0, 11, 5))
        for x in range(-20, 21):
            for m in (2, 7, 97):
                assert poly_eval_mod(f, x, m) == poly_eval(f, x) % m

    def test_derivative(self):
        assert poly_derivative(IntPoly((0, 0, 0, 1))).coeffs == (0, 0, 3)
        assert poly_derivative(IntPoly((5,))).coeffs == ()
        assert poly_derivative(IntPoly(W5_COEFFS)).coeffs == (345, -60, 45)

    def test_shift_example(self):
        assert poly_shift(IntPoly((0, 0, 1)), 1).coeffs == (1, 2, 1)

    def test_shift_property_random(self):
        # eval(shift(f, n), t) = eval(f, t + n) on wide random inputs
        rng = random.Random(42)
        bound = 1 << 128
        for _ in range(100):
            deg = rng.randrange(0, 51)
            f = IntPoly(tuple(rng.randrange(-bound, bound) for _ in range(deg + 1)))
            n = rng.randrange(-bound, bound)
            t = rng.randrange(-bound, bound)
            assert poly_eval(poly_shift(f, n), t) == poly_eval(f, t + n)

    def test_divexact_x(self):
        assert poly_divexact_x(IntPoly((0, 4, 7))).coeffs == (4, 7)
        with pytest.raises(InexactDivision):
            poly_divexact_x(IntPoly((3, 1)))


class TestTermBasis:
    def test_degree_invariant(self):
        for k in range(1, 12, 2):
            for j in range(1, k + 1):
                tb = term_basis(k, j)
                assert tb.basis.degree == 2 * k - 2

    def test_divides_full_product(self):
        # basis * (x+1+j) * x * (x+1) = D(x+1, k) pointwise
        for k, j in ((3, 1), (3, 2), (5, 4)):
            tb = term_basis(k, j)
            for x in range(2, 10):
                d = math.prod(range(x + 1 - k, x + 2 + k))
                assert poly_eval(tb.basis, x) * (x + 1 + j) * x * (x + 1) == d

    def test_rejects_bad_j(self):
        with pytest.raises(ValueError):
            term_basis(3, 0)
        with pytest.raises(ValueError):
            term_basis(3, 4)


class TestConstructW:
    def test_w5_frozen_coefficients(self):
        assert construct_W(5).coeffs == W5_COEFFS

    def test_w7_degree_and_leading(self):
        w7 = construct_W(7)
        assert w7.degree == 7
        assert w7.coeffs[-1] == 945  # 9!!

    def test_verify_examples(self):
        rep = verify_W(5)
        assert rep.leading == 15 and rep.a0 == 30 and rep.w_at_p == 2880
        rep = verify_W(7)
        assert rep.leading == 945

    def test_verify_sweep_to_31(self):
        st = stirling_tables(2 * 31 - 4)
        for p in primes_upto(31):
            if p < 5:
                continue
            w_poly = construct_W(p, st=st)
            rep = verify_W(p, w_poly)
            assert rep.degree == 2 * p - 7
            assert rep.leading == double_factorial(2 * p - 5)
            assert rep.a0 % factorial_exact(p - 3) == 0

    def test_evaluation_identity_exact(self):
        for p in (5, 7, 11, 13):
            w_poly = construct_W(p)
            lhs = poly_eval(w_poly, p) * (p + 1) * p**3
            rhs = (w_exact(p) - 1) * factorial_exact(2 * p - 4) * factorial_exact(p - 1)
            assert lhs == rhs

    def test_verify_rejects_tampered_poly(self):
        w_poly = construct_W(5)
        bad = IntPoly(w_poly.coeffs[:-1] + (w_poly.coeffs[-1] + 1,))
        with pytest.raises(AssertionFailure):
            verify_W(5, bad)

    def test_rejects_nonprime(self):
        with pytest.raises(ValueError):
            construct_W(9)


class TestCoeffProfile:
    def test_p5(self):
        prof = coeff_profile(5)
        assert prof.argmax_index == 1 == 5 - 4
        assert prof.argmax_is_p_minus_4
        assert prof.high_signs == (1, -1, 1)
        assert prof.signs_alternate

    def test_observed_trends_to_31(self):
        # sign alternation holds throughout; the argmax observation holds
        # only for small p under this normalization and is flagged, not
        # asserted, beyond that
        for p in primes_upto(31):
            if p < 5:
                continue
            prof = coeff_profile(p)
            assert prof.signs_alternate
            assert prof.argmax_is_p_minus_4 == (p <= 13)


class TestLargePrimeDivisors:
    def test_examples(self):
        assert large_prime_divisor_check(13, 263) is True  # 2367 = 9 * 263
        assert large_prime_divisor_check(13, 17) is False
        assert large_prime_divisor_check(7, 11) is False  # (1716-1)/343 = 5

    def test_rejects_q_not_above_p(self):
        with pytest.raises(ValueError):
            large_prime_divisor_check(13, 11)


class TestHensel:
    def test_spec_examples(self):
        w5 = IntPoly(W5_COEFFS)
        assert hensel_lift(w5, 2, 0) == 2  # W(2) = 720 = 0 (mod 4)
        assert hensel_lift(IntPoly((-1, 0, 1)), 3, 1) == 1

    def test_not_applicable(self):
        w5 = IntPoly(W5_COEFFS)
        with pytest.raises(NotApplicable):
            hensel_lift(w5, 3, 0)  # 3 | W'(0) = 345
        with pytest.raises(NotApplicable):
            hensel_lift(w5, 7, 0)  # 7 does not divide W(0) = 30

    def test_lift_property_random(self):
        rng = random.Random(7)
        lifted = 0
        while lifted < 50:
            deg = rng.randrange(1, 6)
            f = IntPoly(tuple(rng.randrange(-100, 100) for _ in range(deg + 1)))
            r = rng.choice((2, 3, 5, 7, 11, 13))
            n = rng.randrange(0, r)
            try:
                s = hensel_lift(f, r, n)
            except NotApplicable:
                continue
            assert poly_eval(f, s) % (r * r) == 0
            assert (s - n) % r == 0
            assert 0 <= s < r * r
            lifted += 1


class TestShiftDivisibility:
    def test_examples(self):
        w5 = IntPoly(W5_COEFFS)
        assert shift_divisibility_check(w5, 5, 0)  # 5 | 30 and 5 | 2880
        assert shift_divisibility_check(IntPoly((0, 0, 1)), 4, 2)
        assert shift_divisibility_check(w5, 5, -2)  # 7 divides neither

    def test_random_consistency(self):
        rng = random.Random(99)
        for _ in range(300):
            deg = rng.randrange(0, 8)
            f = IntPoly(tuple(rng.randrange(-50, 50) for _ in range(deg + 1)))
            p = rng.randrange(-30, 30)
            n = rng.randrange(-30, 30)
            if p != n:
                assert shift_divisibility_check(f, p, n)


class TestTrendScan:
    def test_p5_empty_window(self):
        assert trend_scan(5, -30, -1) == []
        assert trend_scan(5, -2, -2) == []

    def test_known_r_above_2p_record(self):
        # 263 = 13 - (-250) divides (w(13)-1)/13^3, and the trend holds there
        recs = trend_scan(13, -250, -250)
        assert len(recs) == 1
        rec = recs[0]
        assert rec.r == 263 and rec.r_exceeds_2p
        assert rec.divides_w and not rec.divides_w1

    def test_small_r_records_are_content_artifacts(self):
        # primes p < r < 2p divide every coefficient of W, hence W and W'
        # both; such records carry no trend information
        p = 17
        w_poly = construct_W(p)
        content = 0
        for c in w_poly.coeffs:
            content = math.gcd(content, c)
        recs = trend_scan(p, -10 * p * p, -1)
        doubles = [r for r in recs if r.divides_w1]
        assert doubles, "expected content-driven records at p=17"
        for rec in doubles:
            assert not rec.r_exceeds_2p
            assert content % rec.r == 0

    def test_no_trend_violations_above_2p_small(self):
        for p in primes_upto(23):
            if p < 5:
                continue
            for rec in trend_scan(p, -10 * p * p, -1):
                if rec.r_exceeds_2p:
                    assert not rec.divides_w1, rec

    def test_range_validation(self):
        with pytest.raises(ValueError):
            trend_scan(5, -10, 0)
        with pytest.raises(ValueError):
            trend_scan(5, -1, -5)


def test_wpoly_verify_suite_clean():
    # bundles verify_W, the large-prime divisor equivalence, and the trend
    # regime accounting for each prime
    from wolstenholme.verify import run_suite

    results = list(run_suite("wpoly", 37))
    assert [r.subject for r in results] == [5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    bad = [r for r in results if not r.ok]
    assert not bad, bad
