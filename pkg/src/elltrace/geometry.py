"""Arithmetic bookkeeping for fibered surfaces and fiber squares.

Everything here is formula evaluation on user-supplied or polynomial-derived
data: Shioda-Tate rank counts, singular-point and divisor counts on fiber
squares, the alternating rank sum for fiber powers, the multi-component
fiber trace, and discriminant root multiplicities (the m-gon data of a
semistable fibration, read off the squarefree decomposition of Delta(t)).

Rational versus geometric counts: component data over F_p is whatever the
caller supplies; this module never guesses Galois orbits.  "Rational
component" means irreducible over F_p, not necessarily geometrically
irreducible (that reading is what makes the point-count relation close on
fibers like a union of two conjugate curves).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import polys
from .curves import WeierstrassFamily
from .polys import IntPoly


@dataclass(frozen=True)
class FiberConfiguration:
    """Mordell-Weil generator count and per-singular-fiber component counts."""

    mw_rank: int
    components: tuple[int, ...]

    def __post_init__(self):
        if self.mw_rank < 0 or any(m < 1 for m in self.components):
            raise ValueError("mw_rank >= 0 and every m(t) >= 1 required")


@dataclass(frozen=True)
class ComponentData:
    """Data of one fiber over F_p for the multi-component trace formula.

    component_ap: one a_p value per F_p-irreducible component;
    incidence: multiplicities nu(x) >= 2 at rational points where components
    meet (nu = 1 points contribute nothing and may be omitted);
    m_rational: number of reduced F_p-rational components.
    """

    component_ap: tuple[int, ...]
    incidence: tuple[int, ...] = ()
    m_rational: int = 1

    def __post_init__(self):
        if any(v < 1 for v in self.incidence):
            raise ValueError("incidence multiplicities must be >= 1")


def shioda_tate_rank(cfg: FiberConfiguration) -> int:
    """rank NS = mw_rank + 2 + sum (m(t) - 1): sections, zero section, one
    vertical fiber, and the non-identity components of each singular fiber."""
    return cfg.mw_rank + 2 + sum(m - 1 for m in cfg.components)


def fiber_square_singular_count(components) -> int:
    """The fiber square of a semistable fibration has m^2 ordinary double
    points over each m-gon fiber."""
    return sum(m * m for m in components)


def divisor_count_list2(rank_ns: int, sing_count: int) -> int:
    """Size of the natural divisor collection on the blown-up fiber square:
    2 rank NS + (number of rational singular points)."""
    return 2 * rank_ns + sing_count


def thm_e2_rhs(n: int, b, ranks) -> int:
    """-1 + sum_{j=1}^n (-1)^j C(n,j) (b_j - rank_j); requires b_1 = 0."""
    b = list(b)
    ranks = list(ranks)
    if n < 2:
        raise ValueError("n must be >= 2")
    if len(b) != n or len(ranks) != n:
        raise ValueError("need exactly n values of b_j and rank_j")
    if b[0] != 0:
        raise ValueError("b_1 must be 0 (the first fiber power is smooth)")
    return -1 + sum((-1) ** j * math.comb(n, j) * (b[j - 1] - ranks[j - 1])
                    for j in range(1, n + 1))


def ap_fibered_surface(data: ComponentData, p: int) -> tuple[int, int]:
    """(a_p(S_t), #S_t(F_p)) for a multi-component fiber.

    a_p = sum_i a_p(C_i) + sum_x (nu(x) - 1) - (m - 1) and the point count
    follows as #S_t = 1 - a_p + p + (m - 1) p.
    """
    ap = (sum(data.component_ap)
          + sum(nu - 1 for nu in data.incidence)
          - (data.m_rational - 1))
    n_points = 1 - ap + p + (data.m_rational - 1) * p
    return ap, n_points


@dataclass(frozen=True)
class DiscFactor:
    """One squarefree factor of Delta(t): multiplicity i, with a flag telling
    whether the fibers over its roots are multiplicative (I_i m-gons)."""

    factor: IntPoly
    multiplicity: int
    is_multiplicative: bool

    @property
    def degree(self) -> int:
        return polys.degree(self.factor)


@dataclass(frozen=True)
class DiscProfile:
    factors: tuple[DiscFactor, ...]
    multiset: tuple[int, ...] = field(init=False)
    semistable: bool = field(init=False)

    def __post_init__(self):
        ms = []
        for f in self.factors:
            ms.extend([f.multiplicity] * f.degree)
        object.__setattr__(self, "multiset", tuple(sorted(ms)))
        object.__setattr__(self, "semistable", all(f.is_multiplicative for f in self.factors))


def disc_multiplicities(F: WeierstrassFamily) -> DiscProfile:
    """Root multiplicities of Delta(t) by exact squarefree decomposition.

    The multiset holds deg(g_i) copies of i for Delta ~ prod g_i^i.  A
    factor is flagged multiplicative when c4 does not vanish at any of its
    roots, i.e. gcd(g_i, c4) is constant; only then is i valid I_m data.
    """
    factors = []
    for g, mult in polys.squarefree_decomposition(F.delta):
        if polys.is_zero(F.c4):
            multiplicative = False
        else:
            multiplicative = polys.degree(polys.gcd(g, F.c4)) == 0
        factors.append(DiscFactor(factor=g, multiplicity=mult,
                                  is_multiplicative=multiplicative))
    return DiscProfile(factors=tuple(factors))
