"""Well-posedness of the inversion and regularization by parameter tuning.

The inversion of Q_m is stable exactly where the slope Q_m' is large. We
define the well-posed interval [a_m, b_m] as the maximal connected set
around the slope peak on which Q_m'(x) >= epsilon. For small m the slope
at x = 0 already exceeds any reasonable threshold and a_m = 0; for large
alphabets the slope near the origin collapses (Q_m there is pinned near
1/m) and a_m lifts off zero.

Tuning turns an ill-posed recovery into a well-posed one. The invariant
factorizes multiplicatively,

    x = (1 - delta) * sqrt(P_s) * (1 / sqrt(P_n)) * sqrt(B),

and every factor is positive and monotone in its parameter, so parameter
ranges map to factor intervals by their endpoints. If the unknown's factor
ranges over [u_min, u_max] and the remaining factors multiply to c, the
containment a_m <= c*u <= b_m for every admissible u is equivalent to

    c in W = [a_m / u_min, b_m / u_max]     (lower bound dropped if a_m = 0),

and the achievable c form an interval as well. Feasibility is interval
intersection; the chosen setting maximizes the attained invariant (larger
x means higher identification probability) and is allocated across the
adjustables in log space, deterministically.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import ConvergenceError, DomainError, ThresholdTooHigh
from .forward import (
    DEFAULT_QUADRATURE,
    ChannelParams,
    QuadratureConfig,
    _check_finite,
    _check_m,
    dq_dx,
    invariant,
)

__all__ = [
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
]

#: The four tunable channel parameters, in canonical order.
PARAM_NAMES = ("delta", "ps", "pn", "base")

_PEAK_SEARCH_HI = 40.0  # beyond any slope peak for m <= 10^6
_ROOT_TOL_X = 1e-7  # endpoint bisection resolution (spec-level 1e-6 with margin)
_CERT_GRID = 200

# Relative stand-off from the closed interval endpoints when choosing the
# tuning target, so the attained range stays inside [a_m, b_m] under roundoff.
# Far below any physical tolerance.
_EDGE_MARGIN = 1e-9


@dataclass(frozen=True)
class WellPosedInterval:
    """Invariant interval [a_m, b_m] on which Q_m'(x) >= epsilon."""

    m: int
    epsilon: float
    a_m: float
    b_m: float


def slope_peak(m, cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """Location and value of the maximum of Q_m' over x >= 0 (golden section)."""
    m = _check_m(m)
    if m < 2:
        raise DomainError("the slope of Q_1 is identically zero")
    cfg = cfg or DEFAULT_QUADRATURE
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, _PEAK_SEARCH_HI
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = dq_dx(c, m, cfg)
    fd = dq_dx(d, m, cfg)
    while b - a > 1e-10:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = dq_dx(c, m, cfg)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = dq_dx(d, m, cfg)
    x_peak = 0.5 * (a + b)
    return x_peak, dq_dx(x_peak, m, cfg)


def _bisect_slope(target, lo, hi, m, cfg, rising: bool) -> tuple[float, float]:
    """Bracketed bisection of Q_m'(x) = target; returns (sub, supra) endpoints."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        above = dq_dx(mid, m, cfg) >= target
        if above == rising:
            hi = mid
        else:
            lo = mid
        if hi - lo <= _ROOT_TOL_X:
            break
    return (lo, hi) if rising else (hi, lo)


@lru_cache(maxsize=256)
def _interval_cached(m: int, epsilon: float, cfg: QuadratureConfig) -> WellPosedInterval:
    x_peak, peak = slope_peak(m, cfg)
    if epsilon > peak:
        raise ThresholdTooHigh(
            f"epsilon = {epsilon} exceeds the peak slope {peak:.6g} of Q_{m}' "
            f"(at x = {x_peak:.4g})"
        )
    if dq_dx(0.0, m, cfg) >= epsilon:
        a_m = 0.0
    else:
        _, a_m = _bisect_slope(epsilon, 0.0, x_peak, m, cfg, rising=True)
    _, b_m = _bisect_slope(epsilon, x_peak, x_peak + 20.0, m, cfg, rising=False)
    itv = WellPosedInterval(m=m, epsilon=epsilon, a_m=a_m, b_m=b_m)
    _certify(itv, cfg)
    return itv


def _certify(itv: WellPosedInterval, cfg: QuadratureConfig) -> None:
    # Unimodality of Q_m' is numerical evidence, not a theorem; grid-verify
    # the suprathreshold claim for every interval we hand out.
    step = (itv.b_m - itv.a_m) / (_CERT_GRID + 1)
    for i in range(1, _CERT_GRID + 1):
        x = itv.a_m + i * step
        if dq_dx(x, itv.m, cfg) < itv.epsilon:
            raise ConvergenceError(
                f"slope certification failed for m={itv.m}: Q' dips below "
                f"epsilon={itv.epsilon} at x={x:.6g} inside [{itv.a_m:.6g}, {itv.b_m:.6g}]"
            )


def well_posed_interval(m, epsilon, cfg: QuadratureConfig | None = None) -> WellPosedInterval:
    """Compute [a_m, b_m]: the maximal slope-suprathreshold interval around the peak.

    a_m is 0 whenever Q_m'(0) >= epsilon; otherwise both endpoints are
    bisection roots of Q_m'(x) = epsilon, returned on the suprathreshold
    side so the closed interval is certified. Results are memoized per
    (m, epsilon, cfg); the returned object is an immutable value.

    Raises
    ------
    ThresholdTooHigh
        If epsilon exceeds the peak slope.
    """
    m = _check_m(m)
    if m < 2:
        raise DomainError("no inverse problem exists for m = 1 (Q_1 is identically 1)")
    epsilon = _check_finite(epsilon, "epsilon")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    return _interval_cached(m, epsilon, cfg or DEFAULT_QUADRATURE)


def check_condition5(x, interval: WellPosedInterval) -> bool:
    """True iff a_m <= x <= b_m (closed endpoints)."""
    x = _check_finite(x, "x")
    return interval.a_m <= x <= interval.b_m


def is_well_posed(params: ChannelParams, epsilon, cfg: QuadratureConfig | None = None) -> bool:
    """Whether the channel's invariant sits inside the well-posed interval."""
    return check_condition5(invariant(params), well_posed_interval(params.m, epsilon, cfg))


# --------------------------------------------------------------------------
# Tuning
# --------------------------------------------------------------------------

_TO_FACTOR = {
    "delta": lambda v: 1.0 - v,
    "ps": math.sqrt,
    "pn": lambda v: 1.0 / math.sqrt(v),
    "base": math.sqrt,
}
_FROM_FACTOR = {
    "delta": lambda f: 1.0 - f,
    "ps": lambda f: f * f,
    "pn": lambda f: 1.0 / (f * f),
    "base": lambda f: f * f,
}
# parameter -> factor map is decreasing for these two
_DECREASING = frozenset({"delta", "pn"})


def _validate_range(name: str, lo: float, hi: float) -> tuple[float, float]:
    lo = _check_finite(lo, f"{name} range low")
    hi = _check_finite(hi, f"{name} range high")
    if lo > hi:
        raise DomainError(f"{name} range has lo > hi: [{lo}, {hi}]")
    if name == "delta":
        if lo < 0.0 or hi >= 1.0:
            raise DomainError(f"delta range must lie inside [0, 1), got [{lo}, {hi}]")
    elif lo <= 0.0:
        raise DomainError(f"{name} range must be positive, got [{lo}, {hi}]")
    return lo, hi


def _validate_value(name: str, v: float) -> float:
    v = _check_finite(v, name)
    if name == "delta":
        if not 0.0 <= v < 1.0:
            raise DomainError(f"delta must be in [0, 1), got {v}")
    elif v <= 0.0:
        raise DomainError(f"{name} must be positive, got {v}")
    return v


def _factor_interval(name: str, lo: float, hi: float) -> tuple[float, float]:
    f1 = _TO_FACTOR[name](lo)
    f2 = _TO_FACTOR[name](hi)
    return (f2, f1) if name in _DECREASING else (f1, f2)


@dataclass(frozen=True)
class TuningProblem:
    """One unknown parameter with a range, adjustable parameters with ranges,
    the rest fixed; together they must partition {delta, ps, pn, base}."""

    m: int
    unknown: str
    unknown_range: tuple[float, float]
    adjustables: tuple[tuple[str, tuple[float, float]], ...]
    fixed: Mapping[str, float]
    epsilon: float = 0.03

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", _check_m(self.m))
        if self.m < 2:
            raise DomainError("tuning needs m >= 2")
        object.__setattr__(self, "epsilon", _check_finite(self.epsilon, "epsilon"))
        if self.epsilon <= 0.0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        if self.unknown not in PARAM_NAMES:
            raise DomainError(f"unknown must be one of {PARAM_NAMES}, got {self.unknown!r}")
        adjustables = tuple((str(n), (float(r[0]), float(r[1]))) for n, r in self.adjustables)
        object.__setattr__(self, "adjustables", adjustables)
        object.__setattr__(self, "fixed", dict(self.fixed))
        names = [self.unknown] + [n for n, _ in adjustables] + sorted(self.fixed)
        if sorted(names) != sorted(PARAM_NAMES):
            raise DomainError(
                f"unknown/adjustables/fixed must partition {PARAM_NAMES}, got {sorted(names)}"
            )
        object.__setattr__(
            self, "unknown_range", _validate_range(self.unknown, *self.unknown_range)
        )
        for n, (lo, hi) in adjustables:
            _validate_range(n, lo, hi)
        for n, v in self.fixed.items():
            _validate_value(n, v)


@dataclass(frozen=True)
class TuningResult:
    """Outcome of a tuning request.

    When feasible, ``settings`` holds one value per adjustable and
    ``x_range`` is the invariant span swept by the unknown under those
    settings, guaranteed inside the closed interval. When infeasible,
    ``settings`` is empty, ``x_range`` is None and ``reason`` names the
    blocking bound. Infeasibility is an answer, not an error.
    """

    feasible: bool
    settings: Mapping[str, float]
    x_range: tuple[float, float] | None
    interval: WellPosedInterval
    reason: str | None = None


def _allocate(target_log: float, log_los: Sequence[float], log_his: Sequence[float]) -> list[float]:
    # One shared interpolation parameter across all adjustables: depends only
    # on the required log sum and the ranges, never on declaration order.
    span = sum(h - l for l, h in zip(log_los, log_his))
    if span <= 0.0:
        t = 0.0
    else:
        t = (target_log - sum(log_los)) / span
        t = min(max(t, 0.0), 1.0)
    return [l + t * (h - l) for l, h in zip(log_los, log_his)]


def tune(problem: TuningProblem, cfg: QuadratureConfig | None = None) -> TuningResult:
    """Choose adjustable values so that a_m <= x <= b_m holds for every
    admissible value of the unknown.

    Among feasible settings the largest attainable invariant is preferred
    (identification probability is monotone in x). Deterministic.
    """
    if not isinstance(problem, TuningProblem):
        raise DomainError(f"problem must be TuningProblem, got {type(problem).__name__}")
    cfg = cfg or DEFAULT_QUADRATURE
    itv = well_posed_interval(problem.m, problem.epsilon, cfg)

    u_min, u_max = _factor_interval(problem.unknown, *problem.unknown_range)
    # canonical (name-sorted) arithmetic order, so bit-identical results never
    # depend on how the caller ordered the adjustable or fixed parameters
    c_fixed = 1.0
    for name in sorted(problem.fixed):
        c_fixed *= _TO_FACTOR[name](problem.fixed[name])
    adj = sorted((n, _factor_interval(n, lo, hi)) for n, (lo, hi) in problem.adjustables)
    c_min = c_fixed
    c_max = c_fixed
    for _, (f_lo, f_hi) in adj:
        c_min *= f_lo
        c_max *= f_hi

    w_hi = itv.b_m / u_max
    w_lo = itv.a_m / u_min if itv.a_m > 0.0 else 0.0

    if w_lo > w_hi:
        return TuningResult(
            feasible=False,
            settings={},
            x_range=None,
            interval=itv,
            reason=(
                f"unknown range too wide: a_m/u_min = {w_lo:.6g} exceeds "
                f"b_m/u_max = {w_hi:.6g}, so no single setting covers the whole range"
            ),
        )
    if c_max < w_lo:
        return TuningResult(
            feasible=False,
            settings={},
            x_range=None,
            interval=itv,
            reason=(
                f"lower bound a_m = {itv.a_m:.6g} blocks: largest attainable invariant "
                f"{c_max * u_min:.6g} at the unknown's weak end stays below it"
            ),
        )
    if c_min > w_hi:
        return TuningResult(
            feasible=False,
            settings={},
            x_range=None,
            interval=itv,
            reason=(
                f"upper bound b_m = {itv.b_m:.6g} blocks: smallest attainable invariant "
                f"{c_min * u_max:.6g} at the unknown's strong end already exceeds it"
            ),
        )

    upper = min(c_max, w_hi)
    lower = max(c_min, w_lo)
    c_target = upper if upper < w_hi else w_hi * (1.0 - _EDGE_MARGIN)
    if c_target < lower:
        c_target = lower if (lower > w_lo or w_lo == 0.0) else w_lo * (1.0 + _EDGE_MARGIN)
    if not lower <= c_target <= upper:  # window thinner than the margins
        c_target = math.sqrt(lower * upper)

    target_log = math.log(c_target) - math.log(c_fixed)
    log_los = [math.log(f_lo) for _, (f_lo, _) in adj]
    log_his = [math.log(f_hi) for _, (_, f_hi) in adj]
    chosen = {
        name: _FROM_FACTOR[name](math.exp(log_f))
        for (name, _), log_f in zip(adj, _allocate(target_log, log_los, log_his))
    }
    # report in the caller's declared order
    settings = {name: chosen[name] for name, _ in problem.adjustables}

    def x_at(unknown_value: float) -> float:
        values = {problem.unknown: unknown_value, **problem.fixed, **settings}
        return invariant(
            ChannelParams(
                delta=values["delta"],
                p_s=values["ps"],
                p_n=values["pn"],
                base=values["base"],
                m=problem.m,
            )
        )

    x_ends = sorted((x_at(problem.unknown_range[0]), x_at(problem.unknown_range[1])))
    return TuningResult(
        feasible=True,
        settings=settings,
        x_range=(x_ends[0], x_ends[1]),
        interval=itv,
        reason=None,
    )


def recovery_error_bound(q_error, x, m, cfg: QuadratureConfig | None = None) -> float:
    """First-order bound on the invariant error: |dx| <= q_error / Q_m'(x).

    Inside a well-posed interval with threshold epsilon this is at most
    q_error / epsilon. Returns math.inf when the slope underflows.
    """
    q_error = _check_finite(q_error, "q_error")
    if q_error <= 0.0:
        raise DomainError(f"q_error must be positive, got {q_error}")
    m = _check_m(m)
    if m < 2:
        raise DomainError("error propagation needs m >= 2")
    slope = dq_dx(x, m, cfg)
    return math.inf if slope == 0.0 else q_error / slope
