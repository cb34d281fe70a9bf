"""Counting F_p-rational cyclic M-subgroups of ordinary elliptic curves.

Four independent routes to N_{a,f,p}(M), the number of rational cyclic
order-M subgroups of a curve with Frobenius trace a and endomorphism ring of
discriminant (a^2-4p)/f^2:

  count_mine    Psi(M)/Psi(M/(M,f)) * sigma(a,f,p,M)  (congruence count)
  count_ito     the case analysis in epsilon_a, epsilon_E at prime powers
  count_ogg     prod (1 + (d|q)) on its restricted domain gcd(M, 2d) = 1
  frobenius_subgroup_oracle
                brute enumeration of cyclic subgroups of (Z/M)^2 stable
                under the matrix of Frobenius acting on the CM order

Supersingular traces (a = 0) and even M are rejected throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import DiscriminantFactorization, divisors, factor_discriminant, jacobi, ord_at
from .classnum import psi


@dataclass(frozen=True)
class FrobeniusClass:
    """An ordinary Frobenius trace: a != 0, a^2 < 4p, with factored discriminant."""

    a: int
    p: int
    disc: DiscriminantFactorization

    @classmethod
    def make(cls, a: int, p: int) -> "FrobeniusClass":
        _check_ordinary(a, p)
        return cls(a=a, p=p, disc=factor_discriminant(a * a - 4 * p))


@dataclass(frozen=True)
class ConductorGap:
    """f = c_a / c_E at a fixed prime l, with the two valuations."""

    f: int
    eps_a: int
    eps_e: int

    def __post_init__(self):
        assert self.eps_e <= self.eps_a


def _check_ordinary(a: int, p: int) -> None:
    if a == 0:
        raise ValueError("supersingular trace a = 0 is out of scope here")
    if a * a >= 4 * p:
        raise ValueError(f"need a^2 < 4p, got a={a}, p={p}")


def _check_odd(M: int) -> None:
    if M < 1 or M % 2 == 0:
        raise ValueError(f"M must be odd and positive, got {M}")


def valid_conductor_gaps(a: int, p: int) -> list[int]:
    """All f > 0 with f^2 | a^2-4p and (a^2-4p)/f^2 a valid discriminant.

    These are exactly the divisors of the conductor of a^2 - 4p.
    """
    _check_ordinary(a, p)
    return divisors(factor_discriminant(a * a - 4 * p).conductor)


def _check_gap(a: int, f: int, p: int) -> DiscriminantFactorization:
    disc = factor_discriminant(a * a - 4 * p)
    if f < 1 or disc.conductor % f != 0:
        raise ValueError(f"f={f} is not a valid conductor gap for a={a}, p={p}")
    return disc


def sigma(a: int, f: int, p: int, M: int) -> int:
    """#{x mod M : x^2 - ax + p = 0 mod (M,f)*M}.

    Well-defined on residues mod M because (M,f) divides the conductor of
    Z[pi_a], which forces the derivative 2x - a into 0 mod M at any root.
    """
    _check_odd(M)
    _check_ordinary(a, p)
    _check_gap(a, f, p)
    modulus = math.gcd(M, f) * M
    return sum(1 for x in range(M) if (x * x - a * x + p) % modulus == 0)


def count_mine(a: int, f: int, p: int, M: int) -> int:
    """N_{a,f,p}(M) = Psi(M)/Psi(M/(M,f)) * sigma(a,f,p,M)."""
    s = sigma(a, f, p, M)
    mf = math.gcd(M, f)
    num, den = psi(M), psi(M // mf)
    assert num % den == 0, "Psi ratio must be integral"
    return (num // den) * s


def conductor_gap_at(a: int, p: int, f: int, l: int) -> ConductorGap:
    """The valuations eps_a = ord_l(c_a) and eps_E = ord_l(c_a / f)."""
    disc = _check_gap(a, f, p)
    eps_a = ord_at(disc.conductor, l)
    return ConductorGap(f=f, eps_a=eps_a, eps_e=eps_a - ord_at(f, l))


def count_ito(a: int, f: int, p: int, l: int, eps: int) -> int:
    """N_{a,f,p}(l^eps) by the ordinary case analysis (l odd prime, eps >= 1)."""
    if l == 2:
        raise ValueError("l = 2 is out of scope (odd level only)")
    if eps < 1:
        raise ValueError("eps must be >= 1")
    gap = conductor_gap_at(a, p, f, l)
    eps_a, eps_e = gap.eps_a, gap.eps_e
    if eps <= eps_a - eps_e:
        return (l + 1) * l ** (eps - 1)
    if eps <= eps_a + eps_e:
        return l ** ((eps + eps_a - eps_e) // 2)
    symbol = jacobi(factor_discriminant(a * a - 4 * p).fundamental % l, l)
    if symbol == 1:  # split
        return 2 * l ** eps_a
    if symbol == -1:  # inert
        return 0
    # ramified
    return l ** eps_a if eps == eps_a + eps_e + 1 else 0


def count_ogg(a: int, p: int, M: int) -> int:
    """prod over primes q | M of (1 + (a^2-4p | q)); needs gcd(M, 2(a^2-4p)) = 1."""
    _check_ordinary(a, p)
    d = a * a - 4 * p
    if M < 1 or math.gcd(M, 2 * d) != 1:
        raise ValueError(f"Ogg's product needs gcd(M, 2(a^2-4p)) = 1, got M={M}")
    result = 1
    m = M
    q = 3
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            result *= 1 + jacobi(d % q, q)
        q += 2
    if m > 1:
        result *= 1 + jacobi(d % m, m)
    return result


def quad_roots_count(aa: int, bb: int, l: int, m: int, target: int) -> int:
    """#{x mod l^m : x^2 - aa*x + bb = 0 mod l^target}, by direct enumeration.

    l odd.  The count is representative-independent whenever l^m divides
    g'(x) * l^m ... in all uses here target <= 2m and any root is a double
    root to the needed depth, so the answer does not depend on lifts.
    """
    if l == 2:
        raise ValueError("l = 2 is out of scope")
    if m < 0 or target < 0:
        raise ValueError("m and target must be nonnegative")
    mod_small = l ** m
    mod_big = l ** target
    return sum(1 for x in range(mod_small) if (x * x - aa * x + bb) % mod_big == 0)


def _prime_power_factors(M: int) -> list[tuple[int, int]]:
    """[(q, q^e)] over the prime-power factors of M."""
    out = []
    m = M
    q = 2
    while q * q <= m:
        if m % q == 0:
            qe = 1
            while m % q == 0:
                m //= q
                qe *= q
            out.append((q, qe))
        q += 1 if q == 2 else 2
    if m > 1:
        out.append((m, m))
    return out


@lru_cache(maxsize=64)
def _p1_reps(M: int) -> list[tuple[int, int]]:
    """Representatives of the cyclic order-M subgroups of (Z/M)^2.

    One generator per subgroup: per prime power q^e the lines are (1, b) for
    b mod q^e plus (q*s, 1) for s mod q^(e-1); glued by CRT.  Every
    representative has exact order M (a unit coordinate at each prime).
    """
    reps = [(1, 0)]
    mod_so_far = 1
    for q, qe in _prime_power_factors(M):
        local = [(1, b) for b in range(qe)] + [(q * s % qe, 1) for s in range(qe // q)]
        reps = _crt_combine(reps, mod_so_far, local, qe)
        mod_so_far *= qe
    assert mod_so_far == M
    return reps


def _crt_combine(reps_a, mod_a, reps_b, mod_b):
    if mod_a == 1:
        return reps_b
    g, inv_a, inv_b = _crt_coeffs(mod_a, mod_b)
    out = []
    for (u1, v1) in reps_a:
        for (u2, v2) in reps_b:
            u = (u1 * inv_b + u2 * inv_a) % (mod_a * mod_b)
            v = (v1 * inv_b + v2 * inv_a) % (mod_a * mod_b)
            out.append((u, v))
    return out


def _crt_coeffs(mod_a, mod_b):
    # inv_a = 1 mod mod_b, 0 mod mod_a; inv_b the reverse
    g = math.gcd(mod_a, mod_b)
    assert g == 1
    inv = pow(mod_a, -1, mod_b)
    inv_a = mod_a * inv % (mod_a * mod_b)
    inv_b = (1 - inv_a) % (mod_a * mod_b)
    return g, inv_a, inv_b


def frobenius_subgroup_oracle(a: int, f: int, p: int, M: int) -> int:
    """Count cyclic order-M subgroups of (Z/M)^2 stable under Frobenius.

    Models E[M] as a free rank-1 module over the endomorphism order of
    discriminant d_E = (a^2-4p)/f^2 with basis {1, w}, w^2 = d_E*w -
    (d_E^2-d_E)/4; Frobenius is pi = (a - f*d_E)/2 + f*w.  A subgroup
    generated by v of exact order M is stable iff det(v, pi*v) = 0 mod M.
    """
    _check_odd(M)
    disc = _check_gap(a, f, p)
    if M == 1:
        return 1
    d_e = disc.disc // (f * f)
    assert (a - f * d_e) % 2 == 0, "parity failure: invalid conductor gap"
    u = (a - f * d_e) // 2
    m00, m01 = u % M, (-f * (d_e * d_e - d_e) // 4) % M
    m10, m11 = f % M, (u + f * d_e) % M
    # sanity: trace and determinant of Frobenius
    assert (m00 + m11) % M == a % M
    assert (m00 * m11 - m01 * m10) % M == p % M
    reps = _p1_reps(M)
    assert len(reps) == psi(M), "subgroup enumeration self-check failed"
    count = 0
    for (x, y) in reps:
        wx = (m00 * x + m01 * y) % M
        wy = (m10 * x + m11 * y) % M
        if (x * wy - y * wx) % M == 0:
            count += 1
    return count
