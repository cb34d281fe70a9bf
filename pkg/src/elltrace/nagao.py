"""Partial-sum estimators for Nagao rank sums and a_p^n residues.

The raw estimator at a cutoff X is sign * (1/X) * sum_{p <= X} log(p) *
A_p / p^lambda, with A_p the exact integer fiber sum (or weighted moment).
Raw values oscillate; the reported headline is the Cesaro mean of the raw
values over a geometric checkpoint grid (ratio 1.25, first checkpoint 1000
by default), which stabilizes slow convergence without moving the limit.

Sign conventions: the family estimators carry the -log p weight of the
underlying Dirichlet series, so a family whose normalized fiber sums average
to c reports a residue near -c (Legendre at n=2, lambda=2 sits near -1).
The weighted estimator reports the positive main-term constant
n!/((n/2)!(n/2+1)!); its negative is the residue of the -log p series, and
the CLI prints both.

The exact layer (integer A_p accumulator) and the float accumulator are both
part of the serializable state, so long runs can checkpoint and resume
bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import curves, moments, polys
from .arith import sieve_primes
from .curves import WeierstrassFamily

DEFAULT_RATIO = 1.25
# Cesaro smoothing over a grid that starts too low inherits the systematic
# theta(X)/X deficit of small cutoffs; from 1000 the bias is under 1% while
# the acceptance-scale runs still average 11+ checkpoints.
DEFAULT_FIRST = 1000


def preset_lambda(name: str, n: int) -> int:
    """Normalization presets: 'thm-e2' uses lambda = n, 'thm-modular' uses
    lambda = floor(n/2) + 1.  They agree only at n = 2."""
    if name == "thm-e2":
        return n
    if name == "thm-modular":
        return n // 2 + 1
    raise ValueError(f"unknown preset {name!r}")


def geometric_grid(xmax: int, ratio: float = DEFAULT_RATIO, first: int = DEFAULT_FIRST) -> list[int]:
    """Checkpoint cutoffs first, ~first*ratio, ... capped and ending at xmax.

    The grid depends only on (ratio, first), never on xmax, so extending a
    run extends the checkpoint list without altering earlier entries.
    """
    if xmax < 2:
        raise ValueError("xmax too small")
    if ratio <= 1:
        raise ValueError("ratio must exceed 1")
    grid = []
    x = float(first)
    while int(math.ceil(x)) < xmax:
        nxt = int(math.ceil(x))
        if grid and nxt <= grid[-1]:
            nxt = grid[-1] + 1
        if nxt >= xmax:
            break
        grid.append(nxt)
        x *= ratio
    grid.append(xmax)
    return grid


def parse_grid_spec(spec: str) -> tuple[float, int]:
    """'geometric:RATIO' or 'geometric:RATIO:FIRST' -> (ratio, first)."""
    parts = spec.split(":")
    if parts[0] != "geometric" or len(parts) > 3:
        raise ValueError(f"unknown checkpoint grid spec {spec!r}")
    ratio = float(parts[1]) if len(parts) > 1 else DEFAULT_RATIO
    first = int(parts[2]) if len(parts) > 2 else DEFAULT_FIRST
    return ratio, first


@dataclass(frozen=True)
class Checkpoint:
    X: int
    raw: float
    smoothed: float


@dataclass
class SeriesState:
    """Serializable accumulator state; folding is ascending-prime, so a
    restored state continues bit-exactly."""

    float_acc: float = 0.0
    exact_acc: int = 0
    p_last: int = 0
    raws: list[float] = field(default_factory=list)
    grid_index: int = 0


@dataclass
class ResidueSeries:
    label: str
    n: int
    lam: Fraction
    checkpoints: list[Checkpoint]
    state: SeriesState

    @property
    def final_raw(self) -> float:
        return self.checkpoints[-1].raw

    @property
    def final_smoothed(self) -> float:
        return self.checkpoints[-1].smoothed


class SeriesEngine:
    """Folds per-prime exact terms into raw/smoothed checkpoint values."""

    def __init__(self, grid: list[int], sign: int, state: SeriesState | None = None):
        self.grid = grid
        self.sign = sign
        self.state = state or SeriesState()
        self.checkpoints: list[Checkpoint] = []
        # rebuild smoothing prefix for a resumed run
        self._raw_sum = 0.0
        for i, r in enumerate(self.state.raws):
            self._raw_sum += r
            self.checkpoints.append(
                Checkpoint(self.grid[i], r, self._raw_sum / (i + 1)))

    def _emit(self, X: int) -> None:
        raw = self.sign * self.state.float_acc / X
        self.state.raws.append(raw)
        self._raw_sum += raw
        self.checkpoints.append(Checkpoint(X, raw, self._raw_sum / len(self.state.raws)))

    def flush_below(self, p: int) -> bool:
        """Emit checkpoints with cutoff < p; True if any were emitted."""
        emitted = False
        s = self.state
        while s.grid_index < len(self.grid) and self.grid[s.grid_index] < p:
            self._emit(self.grid[s.grid_index])
            s.grid_index += 1
            emitted = True
        return emitted

    def add(self, p: int, value: float, exact: int) -> None:
        self.state.float_acc += value
        self.state.exact_acc += exact
        self.state.p_last = p

    def finish(self) -> None:
        s = self.state
        while s.grid_index < len(self.grid):
            self._emit(self.grid[s.grid_index])
            s.grid_index += 1


def _power_denominator(p: int, lam: Fraction) -> float | int:
    if lam.denominator == 1:
        return p ** lam.numerator
    return float(p) ** float(lam)


def residue_series_multi(F: WeierstrassFamily, specs, X: int,
                         ratio: float = DEFAULT_RATIO, first: int = DEFAULT_FIRST,
                         engines: dict | None = None,
                         on_checkpoint=None) -> dict[tuple[int, Fraction], "ResidueSeries"]:
    """Residue estimators for several (n, lambda) pairs in one prime sweep.

    The per-fiber trace vector (the O(p^2) part) is computed once per prime;
    each requested power sum is read off it.  Keys are (n, Fraction(lambda)).
    """
    specs = [(n, Fraction(lam)) for n, lam in specs]
    if engines is None:
        engines = {key: SeriesEngine(geometric_grid(X, ratio, first), sign=-1)
                   for key in specs}
    p_done = max(e.state.p_last for e in engines.values())
    for p in sieve_primes(X):
        if p <= p_done:
            continue
        emitted = False
        for e in engines.values():
            emitted = e.flush_below(p) or emitted
        if emitted and on_checkpoint:
            on_checkpoint(engines)
        if not F.is_good_prime(p):
            continue
        aps = curves.fiber_aps(F, p)
        logp = math.log(p)
        for (n, lam), e in engines.items():
            apn = curves.power_sum_from_aps(aps, p, n)
            e.add(p, logp * (apn / _power_denominator(p, lam)), apn)
    out = {}
    for (n, lam), e in engines.items():
        e.finish()
        out[(n, lam)] = ResidueSeries(label=F.label, n=n, lam=lam,
                                      checkpoints=e.checkpoints, state=e.state)
    if on_checkpoint:
        on_checkpoint(engines)
    return out


def residue_estimate(F: WeierstrassFamily, n: int, lam, X: int,
                     ratio: float = DEFAULT_RATIO, first: int = DEFAULT_FIRST,
                     engine: SeriesEngine | None = None,
                     on_checkpoint=None) -> ResidueSeries:
    """Estimate the residue of sum_p (-log p / p^(s+lambda)) A_p(n) at s = 1.

    raw(X) = -(1/X) sum_{p <= X, p good} log(p) A_p(n) / p^lambda.
    """
    lam = Fraction(lam)
    engines = None
    if engine is not None:
        engines = {(n, lam): engine}
    wrap = None
    if on_checkpoint is not None:
        wrap = lambda engs: on_checkpoint(next(iter(engs.values())))
    result = residue_series_multi(F, [(n, lam)], X, ratio, first,
                                  engines=engines, on_checkpoint=wrap)
    return result[(n, lam)]


def nagao_rank_sum(F: WeierstrassFamily, X: int) -> float:
    """S(F, X) = -(1/X) sum_{p <= X} (log p / p) A_p(1): the rank estimator.

    Exactly the (n=1, lambda=1) residue estimator's raw value at X.
    """
    if X < 5:
        raise ValueError("X must be >= 5")
    return residue_estimate(F, 1, 1, X).final_raw


def weighted_residue_series(M: int, n_values, X: int,
                            ratio: float = DEFAULT_RATIO, first: int = DEFAULT_FIRST,
                            engines: dict[int, SeriesEngine] | None = None,
                            on_checkpoint=None) -> dict[int, "ResidueSeries"]:
    """Weighted estimators for several even n in one sweep over p <= X.

    raw(X) = +(1/X) sum_{p <= X, p not | M} log(p) W-moment(p, n, M) / p^(n/2+1);
    converges to n!/((n/2)!(n/2+1)!) (the displayed residue is its negative).
    """
    n_values = list(n_values)
    if any(n < 1 for n in n_values):
        raise ValueError("n must be >= 1")
    if engines is None:
        engines = {n: SeriesEngine(geometric_grid(X, ratio, first), sign=+1)
                   for n in n_values}
    ctx = moments.WeightContext(X, M)
    p_done = max(e.state.p_last for e in engines.values())
    for p in sieve_primes(X):
        if p <= 3 or p <= p_done or M % p == 0:
            continue
        emitted = False
        for e in engines.values():
            emitted = e.flush_below(p) or emitted
        if emitted and on_checkpoint:
            on_checkpoint(engines)
        weights = ctx.weights(p)
        logp = math.log(p)
        for n, e in engines.items():
            sixths = moments.weighted_moment_sixths(p, n, M, weights)
            e.add(p, logp * (sixths / (6 * p ** (n // 2 + 1))), sixths)
    out = {}
    for n, e in engines.items():
        e.finish()
        out[n] = ResidueSeries(label=f"X0({M})", n=n, lam=Fraction(n // 2 + 1),
                               checkpoints=e.checkpoints, state=e.state)
    if on_checkpoint:
        on_checkpoint(engines)
    return out


def weighted_residue_estimate(M: int, n: int, X: int,
                              ratio: float = DEFAULT_RATIO,
                              first: int = DEFAULT_FIRST) -> ResidueSeries:
    if n % 2:
        raise ValueError("weighted_residue_estimate needs even n")
    return weighted_residue_series(M, [n], X, ratio, first)[n]


# ---------------------------------------------------------------------------
# Isotrivial classification


@dataclass(frozen=True)
class IsotrivialClass:
    """twist_order None means not isotrivial; predicted_residue None means
    unknown.  confident is False on the constant-j fallback path."""

    twist_order: int | None
    predicted_residue: int | None
    confident: bool = True


def _multiplicity_gcd(f) -> int:
    g = 0
    for _, mult in polys.squarefree_decomposition(f):
        g = math.gcd(g, mult)
    return g


def classify_isotrivial(F: WeierstrassFamily) -> IsotrivialClass:
    """Classify a family by the twist order of its (constant-j) fibers.

    j(t) = c4^3 / Delta is constant iff c4^3 and Delta are proportional.
    j = 0 families are g-twists of y^2 = x^3 + 1 with twist order
    6 / gcd(6, e), e the gcd of the root multiplicities of g (similarly
    4 / gcd(4, e) at j = 1728); other constant-j families are quadratic
    twist families.  Cubic/quartic/sextic orders predict residue 0,
    quadratic predicts -1.  Constant-j families matching no clean pattern
    (including split families) fall back to order 2 with confident=False.
    """
    c4, c6, delta = F.c4, F.c6, F.delta
    if polys.is_zero(c4):  # j = 0
        e = _multiplicity_gcd(c6) if polys.degree(c6) > 0 else 0
        order = 6 // math.gcd(6, e) if e else 1
        if order > 1:
            return IsotrivialClass(order, 0 if order > 2 else -1)
        return IsotrivialClass(2, -1, confident=False)
    if polys.is_zero(c6):  # j = 1728
        e = _multiplicity_gcd(c4) if polys.degree(c4) > 0 else 0
        order = 4 // math.gcd(4, e) if e else 1
        if order > 1:
            return IsotrivialClass(order, 0 if order > 2 else -1)
        return IsotrivialClass(2, -1, confident=False)
    c4cubed = polys.mul(polys.mul(c4, c4), c4)
    if polys.sub(polys.scale(c4cubed, delta[-1]), polys.scale(delta, c4cubed[-1])):
        return IsotrivialClass(None, None)
    # constant j not 0 or 1728: quadratic twist family.  Confident when the
    # twist function g = c6/c4 is an honest polynomial (A = u g^2, B = v g^3).
    g = polys.gcd(c6, c4)
    den_degree = polys.degree(c4) - polys.degree(g)
    return IsotrivialClass(2, -1, confident=den_degree == 0)
