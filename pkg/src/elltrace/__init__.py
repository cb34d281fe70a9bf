"""elltrace: exact cross-validation of fiber-sum, class-number and
trace-formula identities for elliptic fibrations, plus partial-sum residue
estimators at desk scale."""

from .arith import DiscriminantFactorization, factor_discriminant, jacobi, sieve_primes
from .classnum import HurwitzValue, class_number, hurwitz_table, hurwitz_weighted, psi
from .curves import (
    BadPrimeError,
    FiberReduction,
    HyperellipticFiber,
    ReductionKind,
    WeierstrassFamily,
    ap_hyperelliptic,
    ap_short,
    fiber_power_sum,
    specialize,
)
from .geometry import (
    ComponentData,
    FiberConfiguration,
    ap_fibered_surface,
    disc_multiplicities,
    divisor_count_list2,
    fiber_square_singular_count,
    shioda_tate_rank,
    thm_e2_rhs,
)
from .isogeny import (
    FrobeniusClass,
    count_ito,
    count_mine,
    count_ogg,
    frobenius_subgroup_oracle,
    quad_roots_count,
    sigma,
    valid_conductor_gaps,
)
from .moments import (
    MomentReport,
    brute_moment,
    c_coeff,
    eichler_selberg_trace,
    eta_tau,
    main_term,
    moment_via_trace,
    q_weight,
    weighted_moment,
)
from .nagao import (
    IsotrivialClass,
    ResidueSeries,
    classify_isotrivial,
    nagao_rank_sum,
    residue_estimate,
    weighted_residue_estimate,
)

__version__ = "0.1.0"
