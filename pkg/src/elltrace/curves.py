"""Elliptic (and odd-degree hyperelliptic) fibrations over the affine t-line.

A family is given by long-Weierstrass coefficient polynomials a1..a6 in Z[t].
Per-prime work reduces mod p, converts to short form y^2 = x^3 + Ax + B
(valid for p > 3) and counts points with a quadratic-character table.

Conventions.  For a good fiber ap = p + 1 - #E(F_p).  For a bad fiber
ap = p - #(nonsingular points), i.e. +1 / -1 / 0 for split multiplicative /
nonsplit multiplicative / additive, matching the local L-factor.  Both cases
are the same character sum -sum_x chi(x^3 + Ax + B), which is what the hot
kernel computes fiber by fiber.

The fiber at t = infinity is omitted: all sums run over affine t only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import polys
from ._kernels import (
    HAVE_NUMBA,
    chi_table,
    chi_table3,
    cube_table,
    fiber_aps_kernel,
    fiber_aps_python,
)
from .polys import IntPoly


class BadPrimeError(ValueError):
    """The family does not have good reduction at this prime: skip it."""


class ReductionKind(enum.Enum):
    GOOD = "good"
    SPLIT_MULTIPLICATIVE = "split_multiplicative"
    NONSPLIT_MULTIPLICATIVE = "nonsplit_multiplicative"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class FiberReduction:
    kind: ReductionKind
    ap: int


@dataclass(frozen=True)
class WeierstrassFamily:
    """Long Weierstrass model over Z[t]; coefficient tuples are ascending in t."""

    a1: IntPoly = ()
    a2: IntPoly = ()
    a3: IntPoly = ()
    a4: IntPoly = ()
    a6: IntPoly = ()
    label: str = ""

    b2: IntPoly = field(init=False, compare=False, repr=False)
    b4: IntPoly = field(init=False, compare=False, repr=False)
    b6: IntPoly = field(init=False, compare=False, repr=False)
    b8: IntPoly = field(init=False, compare=False, repr=False)
    c4: IntPoly = field(init=False, compare=False, repr=False)
    c6: IntPoly = field(init=False, compare=False, repr=False)
    delta: IntPoly = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        trimmed = {k: polys.trim(getattr(self, k)) for k in ("a1", "a2", "a3", "a4", "a6")}
        for k, v in trimmed.items():
            object.__setattr__(self, k, v)
        a1, a2, a3, a4, a6 = (trimmed[k] for k in ("a1", "a2", "a3", "a4", "a6"))
        P = polys
        b2 = P.add(P.mul(a1, a1), P.scale(a2, 4))
        b4 = P.add(P.scale(a4, 2), P.mul(a1, a3))
        b6 = P.add(P.mul(a3, a3), P.scale(a6, 4))
        b8 = P.add(
            P.sub(
                P.add(P.mul(P.mul(a1, a1), a6), P.scale(P.mul(a2, a6), 4)),
                P.mul(P.mul(a1, a3), a4),
            ),
            P.sub(P.mul(a2, P.mul(a3, a3)), P.mul(a4, a4)),
        )
        delta = P.add(
            P.sub(
                P.scale(P.mul(P.mul(b2, b2), b8), -1),
                P.add(P.scale(P.mul(P.mul(b4, b4), b4), 8), P.scale(P.mul(b6, b6), 27)),
            ),
            P.scale(P.mul(P.mul(b2, b4), b6), 9),
        )
        c4 = P.sub(P.mul(b2, b2), P.scale(b4, 24))
        c6 = P.add(
            P.sub(P.scale(P.mul(P.mul(b2, b2), b2), -1), P.scale(b6, 216)),
            P.scale(P.mul(b2, b4), 36),
        )
        for k, v in [("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8),
                     ("c4", c4), ("c6", c6), ("delta", delta)]:
            object.__setattr__(self, k, v)
        if polys.is_zero(delta):
            raise ValueError("discriminant polynomial is identically zero")

    @classmethod
    def from_short(cls, A, B, label: str = "") -> "WeierstrassFamily":
        """y^2 = x^3 + A(t) x + B(t)."""
        return cls(a4=polys.trim(A), a6=polys.trim(B), label=label)

    def is_good_prime(self, p: int) -> bool:
        """Good-reduction filter for the fixed model: p > 3, p not dividing the
        leading coefficient of Delta(t) nor the content of c4(t) (when c4 != 0)."""
        if p <= 3:
            return False
        if self.delta[-1] % p == 0:
            return False
        if self.c4 and polys.content(self.c4) % p == 0:
            return False
        return True

    def short_form_mod(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectors A(t), B(t) mod p over all t in F_p (short-form coefficients)."""
        ts = np.arange(p, dtype=np.int64)
        c4v = _eval_poly_mod_vec(self.c4, ts, p)
        c6v = _eval_poly_mod_vec(self.c6, ts, p)
        return (-27 * c4v) % p, (-54 * c6v) % p


def _eval_poly_mod_vec(coeffs: IntPoly, ts: np.ndarray, p: int) -> np.ndarray:
    acc = np.zeros_like(ts)
    for c in reversed(coeffs):
        acc = (acc * ts + (c % p)) % p
    return acc


def ap_short(A: int, B: int, p: int) -> FiberReduction:
    """Classify and count the fiber y^2 = x^3 + Ax + B over F_p (p > 3)."""
    if p <= 3:
        raise ValueError("ap_short requires p > 3")
    A %= p
    B %= p
    chi = chi_table(p)
    s = 0
    for x in range(p):
        s += int(chi[(x * x * x + A * x + B) % p])
    ap = -s
    if (4 * A * A * A + 27 * B * B) % p != 0:
        if ap * ap >= 4 * p:
            raise AssertionError(f"Hasse violated: ap={ap}, p={p}")
        return FiberReduction(ReductionKind.GOOD, ap)
    if A == 0 and B == 0:
        assert ap == 0
        return FiberReduction(ReductionKind.ADDITIVE, 0)
    # node at x = -3B/(2A); tangent-slope discriminant is 3x
    r = (-3 * B) * pow(2 * A, p - 2, p) % p
    split = int(chi[3 * r % p]) == 1
    assert ap == (1 if split else -1)
    kind = ReductionKind.SPLIT_MULTIPLICATIVE if split else ReductionKind.NONSPLIT_MULTIPLICATIVE
    return FiberReduction(kind, ap)


def specialize(F: WeierstrassFamily, t: int, p: int) -> FiberReduction:
    """Reduce the family mod p, specialize T = t, classify the fiber."""
    if not F.is_good_prime(p):
        raise BadPrimeError(f"{p} is a bad prime for family {F.label!r}")
    c4v = polys.eval_mod(F.c4, t, p)
    c6v = polys.eval_mod(F.c6, t, p)
    return ap_short(-27 * c4v, -54 * c6v, p)


def fiber_aps(F: WeierstrassFamily, p: int) -> np.ndarray:
    """Vector of ap over all affine fibers t in F_p (bad-fiber convention included)."""
    if not F.is_good_prime(p):
        raise BadPrimeError(f"{p} is a bad prime for family {F.label!r}")
    A, B = F.short_form_mod(p)
    chi3 = chi_table3(p)
    cube = cube_table(p)
    out = np.zeros(p, dtype=np.int64)
    runner = fiber_aps_kernel if HAVE_NUMBA else fiber_aps_python
    violations = runner(p, A, B, chi3, cube, out)
    if violations:
        raise AssertionError(f"Hasse violated on {violations} fibers at p={p}")
    return out


# int64 power sums are safe while p * (2*sqrt(p))^n < 2**63; beyond that the
# sum switches to arbitrary precision.  The switch is by this static bound,
# never by runtime overflow detection.
def _int64_sum_safe(p: int, n: int) -> bool:
    return p * math.isqrt(4 * p) ** n < 2 ** 62


def power_sum_from_aps(aps: np.ndarray, p: int, n: int) -> int:
    """Exact sum of ap^n over a per-fiber trace vector."""
    if _int64_sum_safe(p, n):
        total = int(np.sum(aps ** n))
    else:
        total = sum(int(a) ** n for a in aps)
    if n % 2 == 0 and total < 0:
        raise AssertionError("even power sum came out negative")
    return total


def fiber_power_sum(F: WeierstrassFamily, p: int, n: int) -> int:
    """A_p(n) = sum over t in F_p of ap(fiber at t)^n, exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return power_sum_from_aps(fiber_aps(F, p), p, n)


def fiber_power_sum_naive(F: WeierstrassFamily, p: int, n: int) -> int:
    """Oracle: the same A_p(n) by per-fiber point enumeration, no character sums."""
    if not F.is_good_prime(p):
        raise BadPrimeError(f"{p} is a bad prime for family {F.label!r}")
    ysq = [0] * p
    for y in range(p):
        ysq[y * y % p] += 1
    total = 0
    for t in range(p):
        A = (-27 * polys.eval_mod(F.c4, t, p)) % p
        B = (-54 * polys.eval_mod(F.c6, t, p)) % p
        good = (4 * A * A * A + 27 * B * B) % p != 0
        nonsing = 1  # point at infinity
        for x in range(p):
            v = (x * x * x + A * x + B) % p
            if v == 0:
                if (3 * x * x + A) % p != 0:
                    nonsing += 1
            else:
                nonsing += ysq[v]
        ap = (p + 1 - nonsing) if good else (p - nonsing)
        total += ap ** n
    return total


@dataclass(frozen=True)
class HyperellipticFiber:
    """y^2 = f(x) with f of odd degree 2g + 1, coefficients mod p."""

    f: IntPoly
    genus: int

    @classmethod
    def from_poly(cls, f, p: int | None = None) -> "HyperellipticFiber":
        f = polys.trim(tuple(c % p for c in f) if p else f)
        d = polys.degree(f)
        if d < 1 or d % 2 == 0:
            raise ValueError(f"need odd degree >= 1, got degree {d}")
        return cls(f=f, genus=(d - 1) // 2)


def ap_hyperelliptic(fiber: HyperellipticFiber | IntPoly, p: int) -> int:
    """p + 1 - #X(F_p) for y^2 = f(x), counted naively (one point at infinity)."""
    if p <= 2:
        raise ValueError("ap_hyperelliptic requires p > 2")
    if not isinstance(fiber, HyperellipticFiber):
        fiber = HyperellipticFiber.from_poly(fiber, p)
    chi = chi_table(p)
    s = 0
    for x in range(p):
        s += int(chi[polys.eval_mod(fiber.f, x, p)])
    return -s


def count_points_long(ainvs: tuple[int, int, int, int, int], p: int) -> int:
    """#E(F_p) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, brute force.

    For good reduction at any p >= 2 (used where p <= 3 rules out short form).
    """
    a1, a2, a3, a4, a6 = (a % p for a in ainvs)
    count = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y) % p == rhs:
                count += 1
    return count


class FamilyParseError(ValueError):
    """Malformed family file; the message carries the offending line number."""


_LONG_KEYS = ("a1", "a2", "a3", "a4", "a6")


def parse_family_text(text: str, source: str = "<family>") -> WeierstrassFamily:
    """Parse the plain-text family format.

    One `key = [c0, c1, ...]` per line (integer coefficients, ascending
    degree), keys among a1..a6 for long form or A, B for the short-form
    convenience y^2 = x^3 + A(t) x + B(t); `label = <string>` names the
    family.  Unknown keys and mixing A/B with a1..a6 are rejected.
    """
    values: dict[str, IntPoly] = {}
    label = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FamilyParseError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "label":
            label = value
            continue
        if key not in _LONG_KEYS and key not in ("A", "B"):
            raise FamilyParseError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise FamilyParseError(f"{source}:{lineno}: duplicate key {key!r}")
        if not (value.startswith("[") and value.endswith("]")):
            raise FamilyParseError(f"{source}:{lineno}: expected a [..] coefficient list")
        body = value[1:-1].strip()
        try:
            coeffs = tuple(int(tok.strip()) for tok in body.split(",")) if body else ()
        except ValueError as exc:
            raise FamilyParseError(f"{source}:{lineno}: bad integer in list: {exc}") from None
        values[key] = coeffs
    short = {k for k in values if k in ("A", "B")}
    long_form = {k for k in values if k in _LONG_KEYS}
    if short and long_form:
        raise FamilyParseError(f"{source}: cannot mix A/B with a1..a6 keys")
    if not short and not long_form:
        raise FamilyParseError(f"{source}: no a-invariants and no A/B given")
    if short:
        return WeierstrassFamily.from_short(values.get("A", ()), values.get("B", ()), label=label)
    return WeierstrassFamily(
        a1=values.get("a1", ()), a2=values.get("a2", ()), a3=values.get("a3", ()),
        a4=values.get("a4", ()), a6=values.get("a6", ()), label=label,
    )


def ap_of_curve(ainvs: tuple[int, int, int, int, int], p: int) -> int:
    """Trace of Frobenius of a single curve given by integer a-invariants.

    Requires good reduction at p, checked via the discriminant of the given
    model (so the model should be minimal at p).
    """
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    delta = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if delta % p == 0:
        raise BadPrimeError(f"curve has bad reduction at {p}")
    if p <= 3:
        return p + 1 - count_points_long(ainvs, p)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    return ap_short(-27 * c4, -54 * c6, p).ap
