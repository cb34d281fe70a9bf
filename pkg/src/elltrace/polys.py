"""Dense univariate polynomials with exact coefficients (ascending degree).

Integer polynomials are tuples of ints; rational work (gcd, exact division,
Yun's squarefree decomposition) goes through Fraction coefficients and comes
back as primitive integer polynomials.  No floating point anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction

IntPoly = tuple[int, ...]

ZERO: IntPoly = ()


def trim(coeffs) -> IntPoly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: IntPoly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(f) - 1


def is_zero(f: IntPoly) -> bool:
    return len(f) == 0


def add(f: IntPoly, g: IntPoly) -> IntPoly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def neg(f: IntPoly) -> IntPoly:
    return tuple(-c for c in f)


def sub(f: IntPoly, g: IntPoly) -> IntPoly:
    return add(f, neg(g))


def mul(f: IntPoly, g: IntPoly) -> IntPoly:
    if not f or not g:
        return ZERO
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def scale(f: IntPoly, k: int) -> IntPoly:
    if k == 0:
        return ZERO
    return tuple(k * c for c in f)


def derivative(f: IntPoly) -> IntPoly:
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f: IntPoly, t: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = acc * t + c
    return acc


def eval_mod(f: IntPoly, t: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * t + c) % p
    return acc


def content(f: IntPoly) -> int:
    """GCD of coefficients, with the sign of the leading coefficient."""
    if not f:
        return 0
    g = 0
    for c in f:
        g = math.gcd(g, c)
    return g if f[-1] > 0 else -g


def primitive_part(f: IntPoly) -> IntPoly:
    if not f:
        return ZERO
    c = content(f)
    return tuple(x // c for x in f)


# Rational-coefficient helpers used by gcd / Yun.  Represented as lists of
# Fractions, trimmed, same ascending convention.


def _to_q(f: IntPoly) -> list[Fraction]:
    return [Fraction(c) for c in f]


def _q_trim(f: list[Fraction]) -> list[Fraction]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _q_divmod(f: list[Fraction], g: list[Fraction]):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = f[:]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        k = len(f) - len(g)
        c = f[-1] / g[-1]
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] -= c * b
        _q_trim(f)
    return _q_trim(q), f


def _q_gcd_monic(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    f, g = _q_trim(f[:]), _q_trim(g[:])
    while g:
        _, r = _q_divmod(f, g)
        f, g = g, r
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def _from_q(f: list[Fraction]) -> IntPoly:
    """Clear denominators and take the primitive part (positive leading coeff)."""
    if not f:
        return ZERO
    den = 1
    for c in f:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = trim([int(c * den) for c in f])
    return primitive_part(ints)


def gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd over Q, returned with positive leading coefficient."""
    if not f:
        return primitive_part(g)
    if not g:
        return primitive_part(f)
    return _from_q(_q_gcd_monic(_to_q(f), _to_q(g)))


def exact_div(f: IntPoly, g: IntPoly) -> IntPoly:
    """f / g when g | f over Q; raises if the division is not exact."""
    q, r = _q_divmod(_to_q(f), _to_q(g))
    if r:
        raise ValueError("exact_div: division not exact")
    return _from_q(q)


def _q_derivative(f: list[Fraction]) -> list[Fraction]:
    return _q_trim([i * f[i] for i in range(1, len(f))])


def _q_sub(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    n = max(len(f), len(g))
    return _q_trim([(f[i] if i < len(f) else Fraction(0))
                    - (g[i] if i < len(g) else Fraction(0)) for i in range(n)])


def squarefree_decomposition(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm over Q: f ~ prod g_i^i with the g_i squarefree, coprime.

    Returns [(g_i, i)] for the factors of positive degree, as primitive
    integer polynomials; constants (and the overall content) are dropped.
    """
    if is_zero(f):
        raise ValueError("squarefree decomposition of the zero polynomial")
    if degree(f) == 0:
        return []
    fq = _to_q(f)
    a = _q_gcd_monic(fq, _q_derivative(fq))
    b, _ = _q_divmod(fq, a)
    c, _ = _q_divmod(_q_derivative(fq), a)
    d = _q_sub(c, _q_derivative(b))
    out = []
    i = 1
    while len(b) > 1:
        g = _q_gcd_monic(b, d)
        if len(g) > 1:
            out.append((_from_q(g), i))
        b, _ = _q_divmod(b, g)
        c, _ = _q_divmod(d, g)
        d = _q_sub(c, _q_derivative(b))
        i += 1
    return out
