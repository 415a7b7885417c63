"""Certified interval estimates for averages of squarefree-supported functions.

Everything exported here carries a containment guarantee: returned Interval
values enclose the exact real quantity, and every EstimateReport's bound is
falsifiable (and falsified or confirmed) by the brute-force oracle sweep.
"""

from .errors import Mu2BoundsError
from .interval import (
    GAMMA,
    PI,
    Interval,
    NamedConstant,
    arithmetic,
    decimal_bound,
    elementary,
    interval_to_json,
    make_interval,
)
from .primes import (
    SieveWindow,
    euler_phi,
    factorize,
    kappa,
    kappa_s,
    liouville,
    mobius,
    phi_s,
    primes_up_to,
    sieve_window,
)
from .zeta import ZetaValue, partial_power_sum, zeta_rigorous, zeta_value
from .tailconst import (
    DeltaConstant,
    delta_constant,
    powersum_estimate,
    validate_delta_for_theorem,
)
from .eulerprod import (
    DecayCertificate,
    FunctionSpec,
    PrimeFactorSpec,
    PrimeTermSpec,
    TailComponent,
    certified_prime_product,
    certified_prime_sum,
    convolution_kernel,
    general_log_derivative,
    get_preset,
    H_at,
    hbar_error_product,
    mathfrak_a,
    mathfrak_b,
    preset_names,
    ramare_product,
    T_f_q,
    verify_decay,
)
from .supsearch import (
    SupResult,
    empty_range_sup_log,
    empty_range_sup_power,
    verified_sup_weighted_residual,
)
from .estimator import (
    ComparisonRow,
    CriticalConstants,
    E_alpha_v,
    EstimateReport,
    MainTerm,
    MainTermDescriptor,
    comparison_table,
    convolution_estimate,
    coprime_power_estimate,
    critical_constants,
    critical_estimate,
    mu2_square_tail,
    ra13_comparison,
    squarefree_count_bound,
    squarefree_count_report,
)
from .oracle import (
    SweepRow,
    bound_sweep,
    default_grid,
    direct_average,
    empirical_sup,
    rows_to_csv,
    sweep_passes,
    sweep_report,
    verify_squarefree_counts,
)
from .constants import ConstantResult, compute_constant, constant_names

__version__ = "0.1.0"
