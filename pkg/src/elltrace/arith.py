"""Shared integer arithmetic: primes, quadratic characters, discriminant factoring.

Everything here is exact and pure.  Discriminant factoring is by trial
division: the values we ever factor are |D| <= 4 * prime-limit, so trial
division is cheap next to the point counting that produces them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit, ascending.  limit < 2 gives []."""
    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if mask[q]:
            mask[q * q :: q] = False
    return [int(p) for p in np.nonzero(mask)[0]]


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0]=spf[1]=0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for q in range(2, math.isqrt(limit) + 1):
        if spf[q] == 0:
            block = spf[q * q :: q]
            block[block == 0] = q
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return spf


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1; Legendre symbol when n is prime."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi requires odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def ord_at(n: int, l: int) -> int:
    """Largest e with l^e | n.  n = 0 is rejected."""
    if n == 0:
        raise ValueError("ord_at undefined at 0")
    e = 0
    n = abs(n)
    while n % l == 0:
        n //= l
        e += 1
    return e


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    result = n
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            result -= result // q
        q += 1 if q == 2 else 2
    if m > 1:
        result -= result // m
    return result


def divisors(n: int) -> list[int]:
    """Positive divisors of n > 0, ascending."""
    if n < 1:
        raise ValueError(f"divisors requires n >= 1, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def is_discriminant(D: int) -> bool:
    """Valid negative quadratic discriminant: D < 0 and D = 0 or 1 mod 4."""
    return D < 0 and D % 4 in (0, 1)


@dataclass(frozen=True)
class DiscriminantFactorization:
    """D = conductor**2 * fundamental with fundamental the field discriminant."""

    disc: int
    fundamental: int
    conductor: int

    def __post_init__(self):
        assert self.conductor ** 2 * self.fundamental == self.disc


def factor_discriminant(D: int) -> DiscriminantFactorization:
    """Split D < 0 into c^2 * d_K with d_K fundamental, by trial division."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a negative discriminant (need D<0, D=0,1 mod 4)")
    n = -D
    c = 1
    m = 1  # squarefree part of n
    q = 2
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            c *= q ** (e // 2)
            if e % 2:
                m *= q
        q += 1 if q == 2 else 2
    if n > 1:
        m *= n
    # D = c^2 * (-m), m squarefree.  -m is fundamental iff -m = 1 mod 4;
    # otherwise the fundamental discriminant is -4m and c must shed a 2.
    if (-m) % 4 == 1:
        dk = -m
    else:
        dk = -4 * m
        if c % 2:
            raise AssertionError(f"impossible: odd conductor with -m = {-m % 4} mod 4")
        c //= 2
    return DiscriminantFactorization(disc=D, fundamental=dk, conductor=c)
