"""Class numbers of imaginary quadratic orders and Hurwitz-weighted variants.

h(D) counts primitive reduced binary quadratic forms (a,b,c) of discriminant
D = b^2 - 4ac: |b| <= a <= c with b >= 0 whenever |b| = a or a = c.  The
weighted value h_w halves at D = -4 and thirds at D = -3 (extra units); it is
always stored as an exact integer number of sixths.  Sums over h_w stay in
sixths until a report boundary divides them out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import is_discriminant


@dataclass(frozen=True)
class HurwitzValue:
    """A class-number value as an exact multiple of 1/6."""

    sixths: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.sixths, 6)

    def __float__(self) -> float:
        return self.sixths / 6.0


def class_number(D: int) -> int:
    """h(D) by direct enumeration of primitive reduced forms."""
    if not is_discriminant(D):
        raise ValueError(f"{D} is not a negative discriminant")
    h = 0
    b = D & 1
    while 3 * b * b <= -D:
        n4 = b * b - D
        if n4 % 4 == 0:
            n = n4 // 4
            for a in range(max(b, 1), math.isqrt(n) + 1):
                if n % a == 0:
                    c = n // a
                    if math.gcd(math.gcd(a, b), c) == 1:
                        # (a,-b,c) is a distinct reduced form unless b=0, b=a or a=c
                        h += 1 if (b == 0 or b == a or a == c) else 2
        b += 2
    return h


def hurwitz_weighted(D: int) -> HurwitzValue:
    """h_w(D): h(D) for D < -4, 1/2 at D = -4, 1/3 at D = -3."""
    if D == -3:
        return HurwitzValue(2)
    if D == -4:
        return HurwitzValue(3)
    return HurwitzValue(6 * class_number(D))


def psi(m: int) -> int:
    """The index of Gamma_0(m): m * prod_{q | m} (1 + 1/q)."""
    if m < 1:
        raise ValueError(f"psi requires m >= 1, got {m}")
    result = m
    n = m
    q = 2
    while q * q <= n:
        if n % q == 0:
            while n % q == 0:
                n //= q
            result += result // q
        q += 1 if q == 2 else 2
    if n > 1:
        result += result // n
    return result


class HurwitzTable:
    """Batched h_w over all valid discriminants -limit <= D <= -3.

    Built by a single numpy sweep over reduced forms (cost O(limit^(3/2))).
    `kronecker_sixths` additionally carries the conductor-summed values
    H(n) = sum_{f^2 | n, valid} h_w(-n/f^2), indexed by n = |D|, which is the
    M = 1 inner weight in the trace-formula machinery.
    """

    def __init__(self, limit: int):
        if limit < 3:
            raise ValueError("hurwitz_table requires limit >= 3")
        self.limit = limit
        self.sixths = _form_count_sweep(limit)
        if limit >= 3:
            self.sixths[3] = 2
        if limit >= 4:
            self.sixths[4] = 3
        self.kronecker_sixths = _conductor_sum(self.sixths)

    def __contains__(self, D: int) -> bool:
        return is_discriminant(D) and -D <= self.limit

    def __getitem__(self, D: int) -> HurwitzValue:
        if D not in self:
            raise KeyError(D)
        return HurwitzValue(int(self.sixths[-D]))

    def items(self):
        for n in range(3, self.limit + 1):
            if (-n) % 4 in (0, 1):
                yield -n, HurwitzValue(int(self.sixths[n]))


def _form_count_sweep(limit: int) -> np.ndarray:
    """6*h(D) for every |D| <= limit by enumerating primitive reduced forms."""
    sixths = np.zeros(limit + 1, dtype=np.int64)
    amax = math.isqrt(limit // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            cmax = (b * b + limit) // (4 * a)
            if cmax < a:
                continue
            c = np.arange(a, cmax + 1, dtype=np.int64)
            if b < 0:
                c = c[c != a]  # b < 0 forbidden when a = c
                if c.size == 0:
                    continue
            n = 4 * a * c - b * b
            keep = (n <= limit) & (np.gcd(np.gcd(a, b), c) == 1)
            n = n[keep]
            if n.size:
                sixths += 6 * np.bincount(n, minlength=limit + 1)
    return sixths


def _conductor_sum(sixths: np.ndarray) -> np.ndarray:
    limit = len(sixths) - 1
    out = sixths.copy()
    f = 2
    while f * f * 3 <= limit:
        m = np.arange(3, limit // (f * f) + 1, dtype=np.int64)
        m = m[(-m) % 4 <= 1]
        out[m * f * f] += sixths[m]
        f += 1
    return out


def hurwitz_table(limit: int) -> HurwitzTable:
    return HurwitzTable(limit)
