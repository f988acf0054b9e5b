"""Identification probability of m-ary orthogonal channels.

A receiver that picks the largest of m matched-filter outputs identifies
the transmitted signal with probability Q_m(x), where the single invariant
x = (1 - delta) * sqrt(P_s / P_n) * sqrt(B) carries all continuous channel
parameters. This package evaluates Q_m and its slope, inverts Q_m(x) = q*
to recover any one parameter, quantifies how ill-conditioned that
inversion is, computes the invariant interval [a_m, b_m] on which it is
well-posed, and plans parameter tuning that places the invariant inside
that interval. A seeded Monte Carlo simulator provides an independent
statistical check of everything.
"""

from .conditioning import (
    PARAM_NAMES,
    TuningProblem,
    TuningResult,
    WellPosedInterval,
    check_condition5,
    is_well_posed,
    recovery_error_bound,
    slope_peak,
    tune,
    well_posed_interval,
)
from .errors import (
    ChannelModelError,
    ConvergenceError,
    DegenerateInvariant,
    DomainError,
    InfeasibleParameter,
    InfeasibleTarget,
    ThresholdTooHigh,
)
from .forward import (
    DEFAULT_QUADRATURE,
    MAX_M,
    ChannelParams,
    QuadratureConfig,
    dq_dx,
    invariant,
    q_m,
    q_m_reference,
    snr_g,
)
from .inverse import (
    InverseQuery,
    RecoveryResult,
    condition_number,
    invert_q,
    recover_base,
    recover_delta,
    recover_m,
    recover_pn,
    recover_ps,
)
from .mc import BRUTE_FORCE_MAX_M, McConfig, McEstimate, simulate_q, simulate_q_params
from .special import (
    log_std_normal_cdf,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelModelError",
    "DomainError",
    "ConvergenceError",
    "InfeasibleTarget",
    "InfeasibleParameter",
    "DegenerateInvariant",
    "ThresholdTooHigh",
    "ChannelParams",
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "MAX_M",
    "snr_g",
    "invariant",
    "q_m",
    "q_m_reference",
    "dq_dx",
    "std_normal_pdf",
    "std_normal_cdf",
    "log_std_normal_cdf",
    "std_normal_quantile",
    "InverseQuery",
    "RecoveryResult",
    "invert_q",
    "condition_number",
    "recover_delta",
    "recover_ps",
    "recover_pn",
    "recover_base",
    "recover_m",
    "PARAM_NAMES",
    "WellPosedInterval",
    "TuningProblem",
    "TuningResult",
    "slope_peak",
    "well_posed_interval",
    "check_condition5",
    "is_well_posed",
    "tune",
    "recovery_error_bound",
    "McConfig",
    "McEstimate",
    "BRUTE_FORCE_MAX_M",
    "simulate_q",
    "simulate_q_params",
    "__version__",
]
