import math

import numpy as np
import pytest

from elltrace import curves, polys
from elltrace._kernels import chi_table3, cube_table, fiber_aps_python
from elltrace.arith import sieve_primes
from elltrace.curves import (
    BadPrimeError,
    HyperellipticFiber,
    ReductionKind,
    WeierstrassFamily,
    ap_short,
)


def test_family_invariants(legendre):
    assert legendre.delta == (0, 0, 16, -32, 16)
    # 1728 Delta = c4^3 - c6^2 (internal consistency of the b/c machinery)
    lhs = polys.scale(legendre.delta, 1728)
    rhs = polys.sub(polys.mul(polys.mul(legendre.c4, legendre.c4), legendre.c4),
                    polys.mul(legendre.c6, legendre.c6))
    assert lhs == rhs


def test_zero_discriminant_rejected():
    with pytest.raises(ValueError):
        WeierstrassFamily()  # all-zero curve has Delta = 0


def test_from_short_expands():
    f = WeierstrassFamily.from_short((0, -1), (0, 0, 1))
    assert f.a4 == (0, -1) and f.a6 == (0, 0, 1)
    assert f.a1 == () and f.a2 == () and f.a3 == ()


def test_ap_short_examples():
    r = ap_short(1, 0, 5)
    assert r.kind == ReductionKind.GOOD and r.ap == 2
    r = ap_short(0, 1, 5)
    assert r.kind == ReductionKind.GOOD and r.ap == 0
    r = ap_short(0, 0, 5)
    assert r.kind == ReductionKind.ADDITIVE and r.ap == 0
    with pytest.raises(ValueError):
        ap_short(1, 1, 3)


def test_ap_short_vs_naive_count():
    # ap = p + 1 - #E for good curves, against brute point enumeration
    for p in (5, 7, 11, 13):
        for A in range(p):
            for B in range(p):
                if (4 * A**3 + 27 * B**2) % p == 0:
                    continue
                npts = 1 + sum(1 for x in range(p) for y in range(p)
                               if (y * y - (x**3 + A * x + B)) % p == 0)
                assert ap_short(A, B, p).ap == p + 1 - npts


def test_hasse_on_good_fibers():
    for p in (5, 13, 37):
        for A in range(p):
            for B in range(p):
                if (4 * A**3 + 27 * B**2) % p:
                    r = ap_short(A, B, p)
                    assert r.ap * r.ap < 4 * p


def test_specialize_legendre_node(legendre):
    # t = 0 fiber is a node; split iff -1 is a square mod p
    for p in (5, 7, 13, 19, 29):
        r = curves.specialize(legendre, 0, p)
        want = (ReductionKind.SPLIT_MULTIPLICATIVE if p % 4 == 1
                else ReductionKind.NONSPLIT_MULTIPLICATIVE)
        assert r.kind == want and r.ap == (1 if p % 4 == 1 else -1)


def test_specialize_good(legendre):
    r = curves.specialize(legendre, 2, 7)
    assert r.kind == ReductionKind.GOOD and r.ap * r.ap < 28


def test_specialize_constant(constant):
    r = curves.specialize(constant, 3, 5)
    assert r.kind == ReductionKind.GOOD and r.ap == 0


def test_bad_prime_is_signalled(legendre, quad_twist):
    with pytest.raises(BadPrimeError):
        curves.specialize(legendre, 0, 2)
    assert not legendre.is_good_prime(2)
    # 23 divides the leading coefficient of Delta for the quadratic family
    assert not quad_twist.is_good_prime(23)
    with pytest.raises(BadPrimeError):
        curves.fiber_power_sum(quad_twist, 23, 2)


def test_fiber_power_sum_trivial(constant):
    assert curves.fiber_power_sum(constant, 5, 1) == 0
    assert curves.fiber_power_sum(constant, 5, 2) == 0


def test_fiber_power_sum_regression(legendre):
    # frozen from the naive oracle
    assert curves.fiber_power_sum(legendre, 5, 2) == 14


def test_fiber_power_sum_vs_naive_all_small(legendre, rank1, sextic):
    for fam in (legendre, rank1, sextic):
        for p in sieve_primes(100):
            if not fam.is_good_prime(p):
                continue
            for n in (1, 2):
                assert (curves.fiber_power_sum(fam, p, n)
                        == curves.fiber_power_sum_naive(fam, p, n)), (fam.label, p, n)


def test_kernel_vs_python_mirror(legendre):
    for p in (11, 31):
        A, B = legendre.short_form_mod(p)
        chi3, cube = chi_table3(p), cube_table(p)
        out_k = np.zeros(p, dtype=np.int64)
        out_p = np.zeros(p, dtype=np.int64)
        from elltrace._kernels import HAVE_NUMBA, fiber_aps_kernel
        vk = (fiber_aps_kernel if HAVE_NUMBA else fiber_aps_python)(p, A, B, chi3, cube, out_k)
        vp = fiber_aps_python(p, A, B, chi3, cube, out_p)
        assert vk == vp == 0
        assert (out_k == out_p).all()


def test_even_power_sum_nonnegative(legendre):
    for p in (5, 7, 11, 13, 17):
        assert curves.fiber_power_sum(legendre, p, 2) >= 0
        assert curves.fiber_power_sum(legendre, p, 4) >= 0


def test_quadratic_twist_covariance():
    # ap(d^2 A, d^3 B) = -ap(A, B) for every nonresidue d, exhaustively p <= 50
    for p in sieve_primes(50):
        if p <= 3:
            continue
        xs = np.arange(p, dtype=np.int64)
        cube = ((xs * xs) % p * xs) % p
        chi2 = np.concatenate([_chi(p), _chi(p)])
        ap = np.zeros((p, p), dtype=np.int64)
        for A in range(p):
            vals = (cube + A * xs) % p
            ap[A] = -chi2[vals[None, :] + xs[:, None]].sum(axis=1)
        nonres = [d for d in range(1, p) if _chi(p)[d] == -1]
        good = np.nonzero((4 * (xs[:, None]**3) + 27 * (xs[None, :]**2)) % p)
        for d in nonres:
            twisted = ap[(d * d * good[0]) % p, (pow(d, 3, p) * good[1]) % p]
            assert (twisted == -ap[good]).all(), (p, d)


def _chi(p):
    xs = np.arange(p, dtype=np.int64)
    chi = np.full(p, -1, dtype=np.int64)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return chi


def test_hyperelliptic():
    assert curves.ap_hyperelliptic((0, 1, 0, 1), 5) == 2  # x^3 + x matches ap_short(1,0,5)
    assert curves.ap_hyperelliptic((0, 0, 0, 1), 5) == 0  # cusp y^2 = x^3
    w = curves.ap_hyperelliptic((1, 0, 0, 0, 0, 1), 7)    # x^5 + 1, genus 2
    assert abs(w) <= 10
    fib = HyperellipticFiber.from_poly((1, 0, 0, 0, 0, 1), 7)
    assert fib.genus == 2
    assert curves.ap_hyperelliptic(fib, 7) == w
    with pytest.raises(ValueError):
        HyperellipticFiber.from_poly((1, 0, 1), 5)  # even degree
    with pytest.raises(ValueError):
        curves.ap_hyperelliptic((0, 1, 0, 1), 2)


def test_ap_hyperelliptic_vs_naive():
    for p in (5, 7, 11, 13):
        for coeffs in [(0, 1, 0, 1), (1, 2, 3, 1), (1, 0, 0, 0, 0, 1), (2, 1, 0, 1, 0, 0, 0, 1)]:
            npts = 1 + sum(1 for x in range(p) for y in range(p)
                           if (y * y - polys.evaluate(coeffs, x)) % p == 0)
            assert curves.ap_hyperelliptic(coeffs, p) == p + 1 - npts, (p, coeffs)


def test_ap_of_curve_level11():
    a11 = (0, -1, 1, -10, -20)
    known = {2: -2, 3: -1, 5: 1, 7: -2, 13: 4, 31: 7}
    for p, ap in known.items():
        assert curves.ap_of_curve(a11, p) == ap
    with pytest.raises(BadPrimeError):
        curves.ap_of_curve(a11, 11)


def test_parse_family_text():
    fam = curves.parse_family_text("A = [0, -1]\nB = [0, 0, 1]\n")
    assert fam.a4 == (0, -1) and fam.a6 == (0, 0, 1)
    # defaulting rule: unset a-invariants are zero
    fam = curves.parse_family_text("a1 = [1]\na6 = [0, 1]\nlabel = x\n")
    assert fam.a1 == (1,) and fam.a2 == () and fam.a6 == (0, 1) and fam.label == "x"
    # a1 alone parses under the defaulting rule but defines y^2 + xy = x^3,
    # whose discriminant vanishes identically; the family type rejects that
    with pytest.raises(ValueError, match="identically zero"):
        curves.parse_family_text("a1 = [1]\n")
    with pytest.raises(curves.FamilyParseError, match="2"):
        curves.parse_family_text("label = ok\nA = [x]\nB = [1]\n")
    with pytest.raises(curves.FamilyParseError, match="unknown key"):
        curves.parse_family_text("a5 = [1]\n")
    with pytest.raises(curves.FamilyParseError, match="mix"):
        curves.parse_family_text("A = [1]\na4 = [1]\nB = [1]\n")
    with pytest.raises(curves.FamilyParseError, match="no a-invariants"):
        curves.parse_family_text("label = empty\n")
