"""Class-number-weighted moments of Frobenius traces and the trace formula.

The chain being cross-validated, per odd level M and prime p with p not
dividing M:

  brute_moment(p, n)                exhaustive sum of ap^n over nonsingular
                                    (A, B) in F_p^2  (M = 1 only)
  weighted_moment(p, n, M)          (1/2) sum_{0 < a^2 < 4p} a^n W_M(a)
  moment_via_trace(p, n, M)         the same value reassembled from traces of
                                    Hecke operators via the recoupling
                                    coefficients c_p(n/2, i)
  eichler_selberg_trace(p, 2k, M)   the trace formula itself, validated
                                    against the weight-12 eta product (tau)
                                    and dim S_2 = 0 for genus-zero levels

where W_M(a) = sum_f h_w((a^2-4p)/f^2) Psi(M)/Psi(M/(M,f)) sigma(a,f,p,M),
f over the divisors of the conductor of a^2 - 4p.  All W-sums are exact
integers in sixths; divisions happen once at the report boundary with an
exactness assertion.

The trace formula sums over every a^2 < 4p including a = 0, while the
weighted moment excludes a = 0; the two agree exactly because
sum_i c_p(n, i) Q(0, i) = 0 for n >= 1 (zero recoupling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from . import curves
from ._kernels import HAVE_NUMBA, chi_table3, class_weight_kernel, cube_table, curve_trace_histogram_kernel
from .arith import divisors, euler_phi, factor_discriminant, smallest_prime_factors
from .classnum import HurwitzTable, hurwitz_weighted, psi


# ---------------------------------------------------------------------------
# Q-weights and recoupling coefficients


def q_weight(a: int, p: int, k: int) -> int:
    """Q(pi, k) = (pi^(2k+1) - conj^(2k+1)) / (pi - conj), pi a root of x^2-ax+p.

    Integer recurrence Q_0 = 1, Q_1 = a^2 - p,
    Q_{k+1} = (a^2 - 2p) Q_k - p^2 Q_{k-1}.  At a = 0 this is (-p)^k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    q0, q1 = 1, a * a - p
    if k == 0:
        return q0
    for _ in range(k - 1):
        q0, q1 = q1, (a * a - 2 * p) * q1 - p * p * q0
    return q1


def q_weight_oracle(a: int, p: int, k: int) -> int:
    """Independent route: D_m = (pi^m - conj^m)/(pi - conj) by the basic
    two-term recurrence D_m = a D_{m-1} - p D_{m-2}; Q(pi, k) = D_{2k+1}."""
    d0, d1 = 0, 1
    for _ in range(2 * k):
        d0, d1 = d1, a * d1 - p * d0
    return d1


def c_coeff(n: int, i: int, p: int) -> int:
    """c_p(n, i) = (2i+1) (2n)! / ((n-i)! (n+i+1)!) * p^(n-i), exactly."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    num = (2 * i + 1) * math.factorial(2 * n)
    den = math.factorial(n - i) * math.factorial(n + i + 1)
    assert num % den == 0
    return (num // den) * p ** (n - i)


def c_coeff_poly(n: int, i: int) -> tuple[int, ...]:
    """Closed form as a polynomial in p (ascending coefficients)."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    num = (2 * i + 1) * math.factorial(2 * n)
    den = math.factorial(n - i) * math.factorial(n + i + 1)
    assert num % den == 0
    return (0,) * (n - i) + (num // den,)


@lru_cache(maxsize=None)
def c_coeff_recurrence_poly(n: int, i: int) -> tuple[int, ...]:
    """The same coefficient from the defining recurrence (oracle), symbolically.

    c(1,1) = 1, c(1,0) = p;   c(n+1, n+1) = 1,   c(n+1, n) = c(n, n-1) + 2p,
    c(n+1, i) = p^2 c(n, i+1) + 2p c(n, i) + c(n, i-1)    (1 <= i < n),
    c(n+1, 0) = p^2 c(n, 1) + p c(n, 0).
    """
    from . import polys

    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    if n == 0:
        return (1,)
    if n == 1:
        return (1,) if i == 1 else (0, 1)
    m = n - 1
    shift = lambda f, k: (0,) * k + f  # multiply by p^k
    if i == n:
        return (1,)
    if i == n - 1:
        return polys.add(c_coeff_recurrence_poly(m, m - 1), (0, 2))
    if i == 0:
        return polys.add(shift(c_coeff_recurrence_poly(m, 1), 2),
                         shift(c_coeff_recurrence_poly(m, 0), 1))
    return polys.add(
        polys.add(shift(c_coeff_recurrence_poly(m, i + 1), 2),
                  polys.scale(shift(c_coeff_recurrence_poly(m, i), 1), 2)),
        c_coeff_recurrence_poly(m, i - 1),
    )


def main_term(p: int, n: int) -> int:
    """p^(n/2+1) * n! / ((n/2)! (n/2+1)!)  (the constant is a Catalan number)."""
    if n < 2 or n % 2:
        raise ValueError("main_term needs even n >= 2")
    h = n // 2
    num = math.factorial(n)
    den = math.factorial(h) * math.factorial(h + 1)
    assert num % den == 0
    return p ** (h + 1) * (num // den)


# ---------------------------------------------------------------------------
# Class-number weights W_M(a)


def _sigma_all(a: int, f: int, p: int, M: int) -> int:
    """sigma extended to a = 0 (the trace formula's a-sum includes it)."""
    modulus = math.gcd(M, f) * M
    return sum(1 for x in range(M) if (x * x - a * x + p) % modulus == 0)


def class_weight_sixths(p: int, M: int, table: HurwitzTable | None = None) -> list[int]:
    """W_M(a) in sixths for a = 0 .. floor(2*sqrt(p)), pure python reference."""
    if M < 1 or M % 2 == 0:
        raise ValueError("M must be odd and positive")
    if M % p == 0:
        raise ValueError("p | M is rejected")
    amax = math.isqrt(4 * p)
    psi_m = psi(M)
    out = []
    for a in range(amax + 1):
        disc = factor_discriminant(a * a - 4 * p)
        total = 0
        for f in divisors(disc.conductor):
            d2 = disc.disc // (f * f)
            hw = table[d2].sixths if table is not None and d2 in table \
                else hurwitz_weighted(d2).sixths
            ratio = psi_m // psi(M // math.gcd(M, f))
            total += hw * ratio * _sigma_all(a, f, p, M)
        out.append(total)
    return out


class WeightContext:
    """Shared tables for many-prime W_M sweeps (batched Hurwitz table + SPF)."""

    def __init__(self, pmax: int, M: int):
        if M < 1 or M % 2 == 0:
            raise ValueError("M must be odd and positive")
        self.M = M
        self.pmax = pmax
        self.table = HurwitzTable(4 * pmax)
        self._psi_ratio = np.array(
            [psi(M) // psi(M // g) if g and M % g == 0 else 0 for g in range(M + 1)],
            dtype=np.int64,
        )
        self._spf = smallest_prime_factors(4 * pmax) if HAVE_NUMBA else None

    def weights(self, p: int) -> np.ndarray:
        """W_M(a) sixths, index a = 0 .. floor(2*sqrt(p))."""
        if 4 * p > self.table.limit:
            raise ValueError(f"prime {p} exceeds context bound {self.pmax}")
        if self.M % p == 0:
            raise ValueError("p | M is rejected")
        amax = math.isqrt(4 * p)
        if self.M == 1:
            a = np.arange(amax + 1, dtype=np.int64)
            return self.table.kronecker_sixths[4 * p - a * a]
        if HAVE_NUMBA:
            out = np.zeros(amax + 1, dtype=np.int64)
            class_weight_kernel(p, self.M, self._psi_ratio, self.table.sixths,
                                self._spf, out)
            return out
        return np.array(class_weight_sixths(p, self.M, self.table), dtype=np.int64)


def weighted_moment_sixths(p: int, n: int, M: int,
                           weights: np.ndarray | list[int] | None = None) -> int:
    """(1/2) sum over 0 < a^2 < 4p of a^n W_M(a), exact in sixths.

    Odd n vanishes identically (sigma(a) = sigma(-a)); for even n the half
    of the symmetric sum is the single-signed sum, so no division happens.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2:
        return 0
    if weights is None:
        weights = class_weight_sixths(p, M)
    return sum(a ** n * int(weights[a]) for a in range(1, len(weights)))


def weighted_moment(p: int, n: int, M: int) -> Fraction:
    if p <= 3:
        raise ValueError("weighted_moment needs p > 3")
    return Fraction(weighted_moment_sixths(p, n, M), 6)


# ---------------------------------------------------------------------------
# Brute-force moments over all curves (the M = 1 oracle)


@lru_cache(maxsize=64)
def curve_trace_counts(p: int) -> tuple[int, ...]:
    """#{(A,B) in F_p^2 nonsingular with trace a}, index a + floor(2*sqrt(p)).

    Exhaustive O(p^3) enumeration; keep p <= a few hundred.
    """
    if p <= 3:
        raise ValueError("needs p > 3")
    amax = math.isqrt(4 * p)
    counts = np.zeros(2 * amax + 1, dtype=np.int64)
    if HAVE_NUMBA:
        curve_trace_histogram_kernel(p, chi_table3(p), cube_table(p), counts)
    else:
        _histogram_numpy(p, counts)
    return tuple(int(c) for c in counts)


def _histogram_numpy(p: int, counts: np.ndarray) -> None:
    """Vectorized mirror of the histogram kernel (also the numba cross-check)."""
    amax = counts.shape[0] // 2
    xs = np.arange(p, dtype=np.int64)
    cube = ((xs * xs) % p * xs) % p
    chi2 = np.concatenate([_chi(p), _chi(p)])
    bs = np.arange(p, dtype=np.int64)
    for a in range(p):
        vals = (cube + a * xs) % p
        s = chi2[(vals[None, :] + bs[:, None])].sum(axis=1)
        good = (4 * a * a * a + 27 * bs * bs) % p != 0
        ap = -s[good]
        counts += np.bincount(ap + amax, minlength=counts.shape[0])


def _chi(p: int) -> np.ndarray:
    xs = np.arange(p, dtype=np.int64)
    chi = np.full(p, -1, dtype=np.int64)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return chi


def brute_moment(p: int, n: int) -> int:
    """sum of ap(E_{A,B})^n over all nonsingular (A, B) in F_p^2, exact."""
    counts = curve_trace_counts(p)
    amax = len(counts) // 2
    return sum(counts[a + amax] * a ** n for a in range(-amax, amax + 1))


# ---------------------------------------------------------------------------
# The trace formula and the moment identity through it


def phi_correction(M: int, p: int) -> int:
    """sum of phi((c, M/c)) over c | M with (c, M/c) | (M, p-1)."""
    total = 0
    for c in divisors(M):
        g = math.gcd(c, M // c)
        if math.gcd(M, p - 1) % g == 0:
            total += euler_phi(g)
    return total


def _trace_sixths(p: int, weight: int, M: int,
                  weights: np.ndarray | list[int] | None = None) -> int:
    if weight < 2 or weight % 2:
        raise ValueError("weight must be even and >= 2")
    if M < 1 or M % 2 == 0:
        raise ValueError("level must be odd and positive")
    if M % p == 0:
        raise ValueError("p | M is rejected")
    k = weight // 2
    if weights is None:
        weights = class_weight_sixths(p, M)
    total = 0
    for a in range(len(weights)):
        term = q_weight(a, p, k - 1) * int(weights[a])
        total += term if a == 0 else 2 * term
    assert total % 2 == 0
    sixths = -total // 2 - 6 * phi_correction(M, p) + (6 * (p + 1) if weight == 2 else 0)
    return sixths


def eichler_selberg_trace(p: int, weight: int, M: int) -> Fraction:
    """trace(T_p, S_weight(Gamma_0(M))) for even weight >= 2, odd M, p not | M.

    Exact; integral in every tested case (returned as a Fraction regardless).
    """
    return Fraction(_trace_sixths(p, weight, M), 6)


def moment_via_trace(p: int, n: int, M: int) -> Fraction:
    """The weighted moment reassembled from Hecke traces.

    sum_{i=0}^{n/2} c_p(n/2, i) * [ -trace(T_p, S_{2i+2}(Gamma_0(M)))
                                    - phi_correction + (p+1 if i = 0) ].
    """
    if n < 2 or n % 2:
        raise ValueError("moment_via_trace needs even n >= 2")
    if p <= 3:
        raise ValueError("needs p > 3")
    weights = class_weight_sixths(p, M)
    corr = phi_correction(M, p)
    total = 0
    for i in range(n // 2 + 1):
        bracket = -_trace_sixths(p, 2 * i + 2, M, weights) - 6 * corr
        if i == 0:
            bracket += 6 * (p + 1)
        total += c_coeff(n // 2, i, p) * bracket
    return Fraction(total, 6)


# ---------------------------------------------------------------------------
# Eta-product oracle (Ramanujan tau) and the level-11 curve model


def eta_tau(limit: int) -> list[int]:
    """tau(1..limit) from q * prod_{m>=1} (1 - q^m)^24, exact integers.

    Euler's pentagonal expansion gives prod (1 - q^m); 24th power by four
    squarings and one multiplication; tau(m) is the q^(m-1) coefficient of
    the product (the leading q shifts indices by one).
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    e = [0] * limit
    e[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 < limit:
        s = -1 if k % 2 else 1
        e[k * (3 * k - 1) // 2] += s
        g2 = k * (3 * k + 1) // 2
        if g2 < limit:
            e[g2] += s
        k += 1
    e2 = _series_mul(e, e, limit)
    e4 = _series_mul(e2, e2, limit)
    e8 = _series_mul(e4, e4, limit)
    e16 = _series_mul(e8, e8, limit)
    return _series_mul(e16, e8, limit)


def _series_mul(f: list[int], g: list[int], limit: int) -> list[int]:
    out = [0] * limit
    for i, a in enumerate(f):
        if a:
            jmax = limit - i
            for j in range(min(jmax, len(g))):
                if g[j]:
                    out[i + j] += a * g[j]
    return out


def tau(m: int) -> int:
    return eta_tau(m)[m - 1]


def level11_ainvs() -> tuple[int, int, int, int, int]:
    """a-invariants of the standard level-11 model, from the data file."""
    text = resources.files("elltrace").joinpath("data/x0_11.txt").read_text()
    fam = curves.parse_family_text(text)
    for name in ("a1", "a2", "a3", "a4", "a6"):
        if len(getattr(fam, name)) > 1:
            raise ValueError("level-11 data file must define a constant curve")
    grab = lambda c: c[0] if c else 0
    return tuple(grab(getattr(fam, n)) for n in ("a1", "a2", "a3", "a4", "a6"))


def level11_ap(p: int) -> int:
    """ap of the level-11 curve (good reduction at every p != 11)."""
    return curves.ap_of_curve(level11_ainvs(), p)


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class MomentReport:
    p: int
    n: int
    M: int
    brute: int | None
    weighted_sixths: int
    via_trace_sixths: int
    main_term: int
    ok: bool


def moment_report(p: int, n: int, M: int, with_brute: bool = False) -> MomentReport:
    """One row of the moment identity chain; ok means every identity closed."""
    weights = class_weight_sixths(p, M)
    w = weighted_moment_sixths(p, n, M, weights)
    if n % 2 == 0:
        v = moment_via_trace(p, n, M)
        assert v.denominator in (1, 2, 3, 6)
        v_sixths = v.numerator * (6 // v.denominator)
        m = main_term(p, n)
    else:
        v_sixths = 0
        m = 0
    ok = w == v_sixths
    brute = None
    if with_brute and M == 1:
        brute = brute_moment(p, n)
        ok = ok and brute * 6 == (p - 1) * w  # brute = (p-1) * weighted
    return MomentReport(p=p, n=n, M=M, brute=brute, weighted_sixths=w,
                        via_trace_sixths=v_sixths, main_term=m, ok=ok)
