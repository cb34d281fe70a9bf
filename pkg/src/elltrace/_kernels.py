"""Hot loops, jitted when numba is available.

Every kernel has exact integer semantics: per-fiber traces are bounded by
Hasse (|ap| < 2*sqrt(p)), per-a class weights stay far below 2**63, so int64
never overflows here.  Arbitrary-precision outer sums happen in the callers.
The pure-python mirrors (used when numba is missing or ELLTRACE_NO_NUMBA is
set, and as oracles in tests) compute identical values.
"""

from __future__ import annotations

import math
import os

import numpy as np

HAVE_NUMBA = False
if not os.environ.get("ELLTRACE_NO_NUMBA"):
    try:
        # the default TBB layer is too old in some images and warns loudly
        os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")
        from numba import njit, prange

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        pass

if not HAVE_NUMBA:
    def njit(*args, **kwargs):  # noqa: D103
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range


def set_worker_threads(n: int) -> int:
    """Clamp and apply the worker-thread count; returns the effective value.

    Thread count never changes results (all parallel reductions are exact
    integer sums); it only changes timing.
    """
    if n < 1:
        raise ValueError("workers must be >= 1")
    if not HAVE_NUMBA:
        return 1
    import numba

    effective = min(n, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(effective)
    return effective


def chi_table(p: int) -> np.ndarray:
    """Quadratic character mod p as int8, one byte per residue."""
    xs = np.arange(p, dtype=np.int64)
    chi = np.full(p, -1, dtype=np.int8)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return chi


def chi_table3(p: int) -> np.ndarray:
    """chi extended to [0, 3p) so one reduction mod p can be skipped."""
    chi = chi_table(p)
    return np.concatenate([chi, chi, chi])


def cube_table(p: int) -> np.ndarray:
    xs = np.arange(p, dtype=np.int64)
    return ((xs * xs) % p * xs) % p


@njit(cache=True, parallel=True)
def fiber_aps_kernel(p, A, B, chi3, cube, ap_out):
    """ap(t) = -sum_x chi(x^3 + A_t x + B_t) for every t in F_p.

    The same character sum is p - #(nonsingular points) on singular fibers,
    which is exactly the {+1, -1, 0} bad-fiber convention, so no branching
    is needed.  Returns the number of Hasse violations on good fibers
    (must be zero).
    """
    violations = 0
    for t in prange(p):
        a = A[t]
        b = B[t]
        s = 0
        r = 0
        for x in range(p):
            s += chi3[cube[x] + r + b]
            r += a
            if r >= p:
                r -= p
        ap = -s
        ap_out[t] = ap
        d = (4 * ((a * a) % p) * a + 27 * ((b * b) % p)) % p
        if d != 0 and ap * ap >= 4 * p:
            violations += 1
    return violations


def fiber_aps_python(p, A, B, chi3, cube, ap_out):
    """Reference mirror of fiber_aps_kernel (identical semantics)."""
    violations = 0
    for t in range(p):
        a = int(A[t])
        b = int(B[t])
        s = 0
        r = 0
        for x in range(p):
            s += int(chi3[cube[x] + r + b])
            r += a
            if r >= p:
                r -= p
        ap = -s
        ap_out[t] = ap
        if (4 * a * a * a + 27 * b * b) % p != 0 and ap * ap >= 4 * p:
            violations += 1
    return violations


@njit(cache=True)
def curve_trace_histogram_kernel(p, chi3, cube, counts):
    """counts[a + offset] = #{(A,B) nonsingular with trace a}, offset = len//2."""
    off = counts.shape[0] // 2
    for a in range(p):
        for b in range(p):
            d = (4 * ((a * a) % p) * a + 27 * ((b * b) % p)) % p
            if d == 0:
                continue
            s = 0
            r = 0
            for x in range(p):
                s += chi3[cube[x] + r + b]
                r += a
                if r >= p:
                    r -= p
            counts[-s + off] += 1


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, parallel=True)
def class_weight_kernel(p, M, psi_ratio, hw_sixths, spf, out):
    """out[a] = sum_f h_w((a^2-4p)/f^2) * Psi(M)/Psi(M/(M,f)) * sigma(a,f,p,M).

    In sixths, for 0 <= a <= floor(2*sqrt(p)); f runs over the divisors of
    the conductor of a^2 - 4p.  psi_ratio[g] holds Psi(M)/Psi(M/g) for g | M.
    """
    amax = out.shape[0] - 1
    for a in prange(amax + 1):
        n = 4 * p - a * a
        qs = np.empty(16, dtype=np.int64)
        es = np.empty(16, dtype=np.int64)
        nq = 0
        m = n
        while m > 1:
            q = spf[m]
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            qs[nq] = q
            es[nq] = e
            nq += 1
        c = 1
        sqf = 1
        for i in range(nq):
            for _ in range(es[i] // 2):
                c *= qs[i]
            if es[i] % 2 == 1:
                sqf *= qs[i]
        # a^2 - 4p = c^2 * (-sqf); -sqf fundamental iff sqf = 3 mod 4,
        # else the fundamental discriminant is -4*sqf and c sheds a 2.
        if sqf % 4 != 3:
            c //= 2
        divs = np.empty(1024, dtype=np.int64)
        divs[0] = 1
        nd = 1
        cc = c
        while cc > 1:
            q = spf[cc]
            e = 0
            while cc % q == 0:
                cc //= q
                e += 1
            base = nd
            mult = 1
            for _ in range(e):
                mult *= q
                for j in range(base):
                    divs[nd] = divs[j] * mult
                    nd += 1
        total = 0
        for j in range(nd):
            f = divs[j]
            g = _gcd(M, f)
            modulus = g * M
            sig = 0
            for x in range(M):
                if (x * x - a * x + p) % modulus == 0:
                    sig += 1
            if sig != 0:
                total += hw_sixths[n // (f * f)] * psi_ratio[g] * sig
        out[a] = total


def isqrt_floor_2sqrt(p: int) -> int:
    """floor(2*sqrt(p)), exactly."""
    return math.isqrt(4 * p)
