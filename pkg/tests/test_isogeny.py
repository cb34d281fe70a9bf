import math

import pytest
from hypothesis import given, settings, strategies as st

from elltrace import isogeny as iso
from elltrace.arith import sieve_primes
from elltrace.classnum import psi

ORDINARY = [(a, p) for p in sieve_primes(60) if p >= 5
            for a in range(-math.isqrt(4 * p), math.isqrt(4 * p) + 1)
            if a != 0 and a * a < 4 * p]


def test_frobenius_class():
    fc = iso.FrobeniusClass.make(2, 5)
    assert fc.disc.disc == -16 and fc.disc.conductor == 2
    with pytest.raises(ValueError):
        iso.FrobeniusClass.make(0, 5)
    with pytest.raises(ValueError):
        iso.FrobeniusClass.make(5, 5)


def test_valid_conductor_gaps():
    assert iso.valid_conductor_gaps(2, 5) == [1, 2]
    assert iso.valid_conductor_gaps(2, 11) == [1]
    assert iso.valid_conductor_gaps(4, 13) == [1, 3]


def test_valid_conductor_gaps_definition():
    # f valid iff f^2 | a^2-4p and the quotient is 0 or 1 mod 4
    for a, p in ORDINARY[::7]:
        d = a * a - 4 * p
        want = [f for f in range(1, math.isqrt(-d) + 1)
                if d % (f * f) == 0 and (d // (f * f)) % 4 in (0, 1)]
        assert iso.valid_conductor_gaps(a, p) == want, (a, p)


def test_sigma_examples():
    assert iso.sigma(2, 1, 11, 5) == 1
    assert iso.sigma(1, 1, 5, 3) == 0
    assert iso.sigma(3, 1, 5, 1) == 1
    with pytest.raises(ValueError):
        iso.sigma(2, 1, 11, 4)
    with pytest.raises(ValueError):
        iso.sigma(2, 3, 11, 5)  # 3 is not a valid gap for (2, 11)


@settings(max_examples=200)
@given(st.sampled_from(ORDINARY), st.sampled_from([1, 3, 5, 9, 15, 27, 35]))
def test_sigma_symmetry(ap, M):
    a, p = ap
    for f in iso.valid_conductor_gaps(a, p):
        assert iso.sigma(a, f, p, M) == iso.sigma(-a, f, p, M)


def test_count_mine_examples():
    assert iso.count_mine(4, 3, 13, 3) == 4
    assert iso.count_mine(4, 1, 13, 3) == 1
    assert iso.count_mine(2, 1, 11, 5) == 1


def test_count_ito_examples():
    assert iso.count_ito(4, 3, 13, 3, 1) == 4
    assert iso.count_ito(4, 1, 13, 3, 1) == 1
    assert iso.count_ito(2, 1, 11, 5, 1) == 1
    with pytest.raises(ValueError):
        iso.count_ito(4, 1, 13, 2, 1)


def test_count_ogg_examples():
    assert iso.count_ogg(1, 5, 3) == 0  # (-19|3) = -1
    assert iso.count_ogg(1, 5, 1) == 1
    # -11 = 3 mod 7 is a non-residue (squares mod 7 are {1,2,4}), so the
    # product is 1 + (-1) = 0; count_mine and the subgroup oracle concur
    assert iso.count_ogg(1, 3, 7) == 0
    assert iso.count_mine(1, 1, 3, 7) == 0
    assert iso.frobenius_subgroup_oracle(1, 1, 3, 7) == 0
    with pytest.raises(ValueError):
        iso.count_ogg(1, 5, 19)  # 19 | a^2-4p = -19


def test_quad_roots_count():
    assert iso.quad_roots_count(4, 13, 3, 1, 2) == 1
    # x^2 - x + 5 has no root mod 3 (disc -19 = 2 mod 3, a non-residue),
    # consistent with sigma(1, 1, 5, 3) = 0 above
    assert iso.quad_roots_count(1, 5, 3, 1, 1) == 0
    # nonresidue discriminant mod 5: x^2 - x + 1 has disc -3 = 2 mod 5
    assert iso.quad_roots_count(1, 1, 5, 1, 1) == 0
    with pytest.raises(ValueError):
        iso.quad_roots_count(1, 1, 2, 1, 1)


def test_quad_roots_closed_form_branches():
    # branch (a): disc(g) = -4 l^(2m0) for g = x^2 - 2x + (1 + l^(2m0))
    for l in (3, 5, 7):
        for m0 in (1, 2):
            bb = 1 + l ** (2 * m0)
            # unique root mod l^m0 at the full depth l^(2m0)
            assert iso.quad_roots_count(2, bb, l, m0, 2 * m0) == 1, (l, m0)
            for m in range(1, m0 + 1):
                # residues mod l^m solving to depth l^m: l^(m - [(m+1)/2])
                assert iso.quad_roots_count(2, bb, l, m, m) == l ** (m - (m + 1) // 2)
                # residues mod l^m0 solving to depth l^m: l^(m0 - [(m+1)/2])
                assert iso.quad_roots_count(2, bb, l, m0, m) == l ** (m0 - (m + 1) // 2)
    # branch (b): l || disc: unique root mod l, none mod l^n for n > 1
    assert iso.quad_roots_count(1, 1, 3, 1, 1) == 1  # disc = -3
    assert iso.quad_roots_count(1, 1, 3, 2, 2) == 0


def test_subgroup_oracle_examples():
    assert iso.frobenius_subgroup_oracle(4, 3, 13, 3) == 4
    assert iso.frobenius_subgroup_oracle(2, 1, 11, 5) == 1
    assert iso.frobenius_subgroup_oracle(2, 1, 11, 1) == 1


def test_p1_reps_count_and_orders():
    for M in (3, 5, 9, 15, 25, 27, 45, 105):
        reps = iso._p1_reps(M)
        assert len(reps) == psi(M)
        for (u, v) in reps:
            assert math.gcd(math.gcd(u, v), M) == 1  # exact order M
        # distinct subgroups: canonical membership sets
        groups = {frozenset(((k * u) % M, (k * v) % M) for k in range(M))
                  for (u, v) in reps}
        assert len(groups) == psi(M)


def test_oracle_matches_literal_subgroup_count():
    # independent re-derivation: enumerate *all* cyclic subgroups by brute
    # force and count the pi-stable ones via explicit membership
    def brute(a, f, p, M):
        disc = iso._check_gap(a, f, p)
        d_e = disc.disc // (f * f)
        u = (a - f * d_e) // 2
        m = ((u % M, (-f * (d_e * d_e - d_e) // 4) % M),
             (f % M, (u + f * d_e) % M))
        groups = set()
        for x in range(M):
            for y in range(M):
                if math.gcd(math.gcd(x, y), M) != 1:
                    continue
                groups.add(frozenset(((k * x) % M, (k * y) % M) for k in range(M)))
        count = 0
        for g in groups:
            gen = next(v for v in g if math.gcd(math.gcd(v[0], v[1]), M) == 1)
            img = ((m[0][0] * gen[0] + m[0][1] * gen[1]) % M,
                   (m[1][0] * gen[0] + m[1][1] * gen[1]) % M)
            if img in g:
                count += 1
        return count

    for (a, f, p, M) in [(4, 3, 13, 3), (4, 1, 13, 9), (2, 1, 11, 5),
                         (1, 1, 61, 9), (1, 3, 61, 3), (1, 9, 61, 15),
                         (3, 1, 7, 15), (2, 2, 5, 9)]:
        assert iso.frobenius_subgroup_oracle(a, f, p, M) == brute(a, f, p, M), (a, f, p, M)


def test_three_way_small_sweep():
    for p in [q for q in sieve_primes(40) if q >= 5]:
        for a in range(1, math.isqrt(4 * p) + 1):
            if a * a >= 4 * p:
                continue
            for f in iso.valid_conductor_gaps(a, p):
                for l in (3, 5):
                    for eps in (1, 2, 3):
                        M = l ** eps
                        mine = iso.count_mine(a, f, p, M)
                        assert mine == iso.count_ito(a, f, p, l, eps), (a, f, p, M)
                        assert mine == iso.frobenius_subgroup_oracle(a, f, p, M), (a, f, p, M)
                        if math.gcd(M, 2 * (a * a - 4 * p)) == 1 and f == 1:
                            assert mine == iso.count_ogg(a, p, M), (a, p, M)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(ORDINARY),
       st.sampled_from([(3, 5), (3, 25), (9, 5), (3, 35), (9, 35), (15, 7)]))
def test_count_mine_multiplicative(ap, m1m2):
    a, p = ap
    m1, m2 = m1m2
    for f in iso.valid_conductor_gaps(a, p):
        assert (iso.count_mine(a, f, p, m1 * m2)
                == iso.count_mine(a, f, p, m1) * iso.count_mine(a, f, p, m2))


def test_psi_ratio_integral():
    for (a, p) in ORDINARY[::5]:
        for f in iso.valid_conductor_gaps(a, p):
            for M in (3, 9, 15, 27, 45):
                mf = math.gcd(M, f)
                assert psi(M) % psi(M // mf) == 0


def test_supersingular_and_even_rejected():
    with pytest.raises(ValueError):
        iso.count_mine(0, 1, 5, 3)
    with pytest.raises(ValueError):
        iso.count_mine(2, 1, 11, 6)
    with pytest.raises(ValueError):
        iso.frobenius_subgroup_oracle(2, 1, 11, 4)
