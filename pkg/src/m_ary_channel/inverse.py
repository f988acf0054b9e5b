"""Inversion of the identification probability and single-parameter recovery.

Given a target probability q*, solve Q_m(x) = q* for the invariant with a
safeguarded Newton iteration inside a bisection bracket, then unwind
x = (1 - delta) * g * sqrt(B) for whichever single physical parameter is
unknown. The reciprocal slope 1/Q_m'(x) is reported as the condition
number of the inversion: it is the first-order amplification factor from
errors in q* to errors in x, and it is what makes the ill-posedness of the
problem measurable.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

from .errors import (
    ConvergenceError,
    DegenerateInvariant,
    DomainError,
    InfeasibleParameter,
    InfeasibleTarget,
)
from .forward import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    _check_finite,
    _check_m,
    dq_dx,
    q_m,
    snr_g,
)

__all__ = [
    "InverseQuery",
    "RecoveryResult",
    "invert_q",
    "recover_delta",
    "recover_ps",
    "recover_pn",
    "recover_base",
    "recover_m",
    "condition_number",
]

# q*-level slack at the bracket endpoints: targets this close to Q_m(x_lo) or
# Q_m(x_hi) are snapped to the endpoint instead of raising, so exact anchors
# such as q* = 1/m survive quadrature-level noise.
_BRACKET_Q_TOL = 1e-9

_MAX_NEWTON_ITER = 200


@dataclass(frozen=True)
class InverseQuery:
    """Target probability, alphabet size, search bracket and x tolerance."""

    q_star: float
    m: int
    x_lo: float = 0.0
    x_hi: float = 50.0
    tol_x: float = 1e-12

    def __post_init__(self) -> None:
        object.__setattr__(self, "q_star", _check_finite(self.q_star, "q_star"))
        object.__setattr__(self, "m", _check_m(self.m))
        object.__setattr__(self, "x_lo", _check_finite(self.x_lo, "x_lo"))
        object.__setattr__(self, "x_hi", _check_finite(self.x_hi, "x_hi"))
        object.__setattr__(self, "tol_x", _check_finite(self.tol_x, "tol_x"))
        if not 0.0 < self.q_star < 1.0:
            raise DomainError(f"q_star must be in (0, 1), got {self.q_star}")
        if self.m < 2:
            raise DomainError("inversion needs m >= 2 (Q_1 is identically 1)")
        if not self.x_lo < self.x_hi:
            raise DomainError(f"bracket must satisfy x_lo < x_hi, got [{self.x_lo}, {self.x_hi}]")
        if self.tol_x <= 0.0:
            raise DomainError(f"tol_x must be positive, got {self.tol_x}")


@dataclass(frozen=True)
class RecoveryResult:
    """Solved invariant, recovered parameter value, and inversion diagnostics.

    ``condition_number`` is 1/Q_m'(x_star) (math.inf when the slope
    underflowed); ``residual`` is |Q_m(x_star) - q_star| and is always
    reported, never hidden.
    """

    x_star: float
    value: float | int
    condition_number: float
    residual: float


def invert_q(query: InverseQuery, cfg: QuadratureConfig | None = None) -> float:
    """Solve Q_m(x) = q_star for x inside the query bracket.

    Bisection bracket maintained throughout; Newton steps (using the
    analytic slope) are taken whenever they stay inside the bracket and
    fall back to the midpoint otherwise. Deterministic.

    Raises
    ------
    InfeasibleTarget
        If q_star lies outside [Q_m(x_lo), Q_m(x_hi)]. On the default
        physical bracket this includes q* < 1/m, which would need x < 0.
    ConvergenceError
        If the iteration budget is exhausted.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    if not isinstance(query, InverseQuery):
        raise DomainError(f"query must be InverseQuery, got {type(query).__name__}")
    q_star = query.q_star
    m = query.m
    lo, hi = query.x_lo, query.x_hi
    q_lo = q_m(lo, m, cfg)
    q_hi = q_m(hi, m, cfg)
    if q_star < q_lo - _BRACKET_Q_TOL:
        raise InfeasibleTarget(
            f"q_star={q_star} is below Q_{m}({lo}) = {q_lo:.12g}; "
            "no solution on the bracket"
        )
    if q_star <= q_lo + _BRACKET_Q_TOL:
        # symmetric snap band: exact anchors such as q* = 1/m land here
        # regardless of the sign of the quadrature's last-ulp error
        return lo
    if q_star >= q_hi:
        if q_star - q_hi <= _BRACKET_Q_TOL:
            return hi
        raise InfeasibleTarget(
            f"q_star={q_star} is above Q_{m}({hi}) = {q_hi:.12g}; "
            "no solution on the bracket"
        )

    x = 0.5 * (lo + hi)
    for _ in range(_MAX_NEWTON_ITER):
        qx = q_m(x, m, cfg)
        if qx < q_star:
            lo = x
        else:
            hi = x
        slope = dq_dx(x, m, cfg)
        if slope > 0.0:
            x_new = x - (qx - q_star) / slope
            if not lo < x_new < hi:
                x_new = 0.5 * (lo + hi)
        else:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= query.tol_x or (hi - lo) <= query.tol_x:
            return x_new
        x = x_new
    raise ConvergenceError(f"inversion did not converge within {_MAX_NEWTON_ITER} iterations")


def condition_number(x, m, cfg: QuadratureConfig | None = None) -> float:
    """Sensitivity |dx/dq*| = 1/Q_m'(x) of the inversion at x.

    Returns math.inf when the slope underflows to zero.
    """
    m = _check_m(m)
    if m < 2:
        raise DomainError("condition number needs m >= 2 (Q_1 carries no information)")
    slope = dq_dx(x, m, cfg)
    return math.inf if slope == 0.0 else 1.0 / slope


def _solve(q_star: float, m: int, cfg: QuadratureConfig | None) -> tuple[float, float]:
    x = invert_q(InverseQuery(q_star=q_star, m=m), cfg)
    residual = abs(q_m(x, m, cfg) - q_star)
    return x, residual


def _cond(x: float, m: int, cfg: QuadratureConfig | None) -> float:
    slope = dq_dx(x, m, cfg)
    return math.inf if slope == 0.0 else 1.0 / slope


def recover_delta(q_star, p_s, p_n, base, m, cfg: QuadratureConfig | None = None) -> RecoveryResult:
    """Recover the cancel-interval thickness delta from q* and the other parameters.

    Raises InfeasibleParameter when the implied delta falls outside [0, 1),
    i.e. when g*sqrt(B) < x_star (or x_star = 0, which would force delta = 1).
    """
    base = _check_finite(base, "base")
    if base <= 0.0:
        raise DomainError(f"base must be positive, got {base}")
    g_root_b = snr_g(p_s, p_n) * math.sqrt(base)
    x, residual = _solve(_check_finite(q_star, "q_star"), _check_m(m), cfg)
    delta = 1.0 - x / g_root_b
    if -1e-9 <= delta < 0.0:  # roundoff at the delta = 0 boundary
        delta = 0.0
    if not 0.0 <= delta < 1.0:
        raise InfeasibleParameter(
            f"implied delta = {delta:.6g} is outside [0, 1): "
            f"g*sqrt(B) = {g_root_b:.6g} vs x_star = {x:.6g}"
        )
    return RecoveryResult(x_star=x, value=delta, condition_number=_cond(x, m, cfg), residual=residual)


def recover_ps(q_star, delta, p_n, base, m, cfg: QuadratureConfig | None = None) -> RecoveryResult:
    """Recover the signal power P_s; needs x_star > 0 (else the SNR degenerates)."""
    delta = _check_finite(delta, "delta")
    if not 0.0 <= delta < 1.0:
        raise DomainError(f"delta must be in [0, 1), got {delta}")
    p_n = _check_finite(p_n, "p_n")
    if p_n <= 0.0:
        raise DomainError(f"p_n must be positive, got {p_n}")
    base = _check_finite(base, "base")
    if base <= 0.0:
        raise DomainError(f"base must be positive, got {base}")
    x, residual = _solve(_check_finite(q_star, "q_star"), _check_m(m), cfg)
    if x == 0.0:
        raise DegenerateInvariant("x_star = 0 implies g = 0; the signal power is undetermined")
    g = x / ((1.0 - delta) * math.sqrt(base))
    return RecoveryResult(
        x_star=x, value=g * g * p_n, condition_number=_cond(x, m, cfg), residual=residual
    )


def recover_pn(q_star, delta, p_s, base, m, cfg: QuadratureConfig | None = None) -> RecoveryResult:
    """Recover the noise power P_n; needs x_star > 0 (else P_n is unbounded)."""
    delta = _check_finite(delta, "delta")
    if not 0.0 <= delta < 1.0:
        raise DomainError(f"delta must be in [0, 1), got {delta}")
    p_s = _check_finite(p_s, "p_s")
    if p_s <= 0.0:
        raise DomainError(f"p_s must be positive, got {p_s}")
    base = _check_finite(base, "base")
    if base <= 0.0:
        raise DomainError(f"base must be positive, got {base}")
    x, residual = _solve(_check_finite(q_star, "q_star"), _check_m(m), cfg)
    if x == 0.0:
        raise DegenerateInvariant("x_star = 0 gives no handle on the noise power")
    g = x / ((1.0 - delta) * math.sqrt(base))
    return RecoveryResult(
        x_star=x, value=p_s / (g * g), condition_number=_cond(x, m, cfg), residual=residual
    )


def recover_base(q_star, delta, p_s, p_n, m, cfg: QuadratureConfig | None = None) -> RecoveryResult:
    """Recover the signal base B; needs x_star > 0 (else B is undetermined)."""
    delta = _check_finite(delta, "delta")
    if not 0.0 <= delta < 1.0:
        raise DomainError(f"delta must be in [0, 1), got {delta}")
    g = snr_g(p_s, p_n)
    x, residual = _solve(_check_finite(q_star, "q_star"), _check_m(m), cfg)
    if x == 0.0:
        raise DegenerateInvariant("x_star = 0 gives no handle on the signal base")
    root_b = x / ((1.0 - delta) * g)
    return RecoveryResult(
        x_star=x, value=root_b * root_b, condition_number=_cond(x, m, cfg), residual=residual
    )


def recover_m(q_star, x, m_max, cfg: QuadratureConfig | None = None) -> RecoveryResult:
    """Recover the alphabet size from q* at a known invariant x.

    Q_m(x) decreases strictly in m at fixed x > 0, so a binary search
    brackets the crossing and the better of the two straddling integers is
    returned (ties go to the smaller m, for determinism). The residual
    |Q_m*(x) - q*| is always reported; when no integer attains q* the best
    approximant is returned rather than an error, because q* from measured
    statistics is never exact.

    At x = 0 the relation is Q_m(0) = 1/m exactly and the search reduces to
    integer division. Negative x is rejected.
    """
    q_star = _check_finite(q_star, "q_star")
    if not 0.0 < q_star < 1.0:
        raise DomainError(f"q_star must be in (0, 1), got {q_star}")
    x = _check_finite(x, "x")
    if x < 0.0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if isinstance(m_max, bool) or not isinstance(m_max, numbers.Integral):
        raise DomainError(f"m_max must be an integer, got {m_max!r}")
    m_max = int(m_max)
    if m_max < 2:
        raise DomainError(f"m_max must be >= 2, got {m_max}")
    m_max = min(m_max, 10**6)

    if x == 0.0:
        # best integer around 1/q*; |1/m - q*| is what we minimise
        k = max(1, min(m_max, math.floor(1.0 / q_star)))
        candidates = {k, min(m_max, k + 1)}
        best = min(candidates, key=lambda mm: (abs(1.0 / mm - q_star), mm))
        residual = abs(1.0 / best - q_star)
        cond = _cond(x, best, cfg) if best >= 2 else math.inf
        return RecoveryResult(x_star=x, value=best, condition_number=cond, residual=residual)

    lo, hi = 1, m_max  # q_m(x, 1) = 1 >= q_star always holds
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if q_m(x, mid, cfg) >= q_star:
            lo = mid
        else:
            hi = mid - 1
    candidates = {lo, min(m_max, lo + 1)}
    best = min(candidates, key=lambda mm: (abs(q_m(x, mm, cfg) - q_star), mm))
    residual = abs(q_m(x, best, cfg) - q_star)
    cond = _cond(x, best, cfg) if best >= 2 else math.inf
    return RecoveryResult(x_star=x, value=best, condition_number=cond, residual=residual)
