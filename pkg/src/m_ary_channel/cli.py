"""Command-line front end.

Scalar results are printed as a deterministic JSON envelope on stdout
(sorted keys, floats at 17 significant digits, so reruns are bit-identical
and values round-trip losslessly); bulk curve data goes to a CSV file.

Exit codes: 0 success (an infeasible tuning verdict is still an answer),
2 argument errors, 3 domain or infeasibility errors, 4 numerical
non-convergence, 5 I/O errors.
"""

from __future__ import annotations

import argparse
import math
import sys

from .conditioning import (
    PARAM_NAMES,
    TuningProblem,
    slope_peak,
    tune,
    well_posed_interval,
)
from .errors import (
    ConvergenceError,
    DegenerateInvariant,
    DomainError,
    InfeasibleParameter,
    InfeasibleTarget,
    ThresholdTooHigh,
)
from .forward import ChannelParams, invariant, q_m
from .inverse import (
    InverseQuery,
    condition_number,
    invert_q,
    recover_base,
    recover_delta,
    recover_m,
    recover_pn,
    recover_ps,
)
from .mc import McConfig, simulate_q

_DEFAULT_EPSILON = 0.03
_DEFAULT_M_MAX = 10**6


class _UsageError(Exception):
    """Malformed command-line input (exit code 2)."""


# --------------------------------------------------------------------------
# Deterministic JSON
# --------------------------------------------------------------------------


def _json_escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dumps(obj) -> str:
    """Serialize with sorted keys and floats at 17 significant digits."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float cannot be serialized: {obj}")
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return _json_escape(obj)
    if isinstance(obj, dict):
        items = ", ".join(f"{_json_escape(str(k))}: {dumps(obj[k])}" for k in sorted(obj))
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _envelope(command: str, inputs: dict, result: dict, diagnostics: dict | None = None) -> dict:
    diag = {"warnings": []}
    if diagnostics:
        diag.update(diagnostics)
    return {"command": command, "inputs": inputs, "result": result, "diagnostics": diag}


def _finite_or_none(value: float, warnings: list, label: str):
    if value is None or math.isfinite(value):
        return value
    warnings.append(f"{label} overflowed (slope underflowed to zero)")
    return None


# --------------------------------------------------------------------------
# Flag parsing helpers
# --------------------------------------------------------------------------


def _parse_range(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"{flag} expects lo:hi, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise _UsageError(f"{flag} expects numeric lo:hi, got {text!r}") from None


def _parse_named_range(text: str, flag: str) -> tuple[str, tuple[float, float]]:
    name, sep, rng = text.partition("=")
    if not sep:
        raise _UsageError(f"{flag} expects name=lo:hi, got {text!r}")
    if name not in PARAM_NAMES:
        raise _UsageError(f"{flag}: unknown parameter {name!r} (choose from {PARAM_NAMES})")
    return name, _parse_range(rng, flag)


def _parse_named_value(text: str, flag: str) -> tuple[str, float]:
    name, sep, val = text.partition("=")
    if not sep:
        raise _UsageError(f"{flag} expects name=value, got {text!r}")
    if name not in PARAM_NAMES:
        raise _UsageError(f"{flag}: unknown parameter {name!r} (choose from {PARAM_NAMES})")
    try:
        return name, float(val)
    except ValueError:
        raise _UsageError(f"{flag} expects a numeric value, got {text!r}") from None


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--x expects lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"--x expects numeric lo:hi:step, got {text!r}") from None
    if step <= 0.0 or hi < lo:
        raise _UsageError(f"--x needs hi >= lo and step > 0, got {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def _parse_m_list(text: str) -> list[int]:
    try:
        values = [int(p) for p in text.split(",") if p]
    except ValueError:
        raise _UsageError(f"-m expects a comma-separated integer list, got {text!r}") from None
    if not values:
        raise _UsageError("-m list is empty")
    return values


# --------------------------------------------------------------------------
# Command handlers (each returns an envelope dict, or raises)
# --------------------------------------------------------------------------


def _cmd_forward(args) -> dict:
    warnings: list[str] = []
    direct = args.x is not None
    physical = [args.delta, args.ps, args.pn, args.base]
    if direct and any(v is not None for v in physical):
        raise _UsageError("give either -x or the physical parameters, not both")
    if not direct and any(v is None for v in physical):
        raise _UsageError("forward needs -x, or all of --delta --ps --pn --base")
    if direct:
        x = args.x
        if not math.isfinite(x):
            raise DomainError("x must be finite")
    else:
        params = ChannelParams(
            delta=args.delta, p_s=args.ps, p_n=args.pn, base=args.base, m=args.m
        )
        x = invariant(params)
    q = q_m(x, args.m)
    well_posed = None
    interval_payload = None
    if args.m >= 2:
        try:
            itv = well_posed_interval(args.m, args.epsilon)
        except ThresholdTooHigh as exc:
            warnings.append(str(exc))
        else:
            well_posed = bool(itv.a_m <= x <= itv.b_m)
            interval_payload = {"a_m": itv.a_m, "b_m": itv.b_m}
    else:
        warnings.append("well-posedness is undefined for m = 1")
    inputs = {
        "delta": args.delta,
        "ps": args.ps,
        "pn": args.pn,
        "base": args.base,
        "x": args.x,
        "m": args.m,
        "epsilon": args.epsilon,
    }
    result = {
        "x": x,
        "q": q,
        "well_posed": well_posed,
        "interval": interval_payload,
        "epsilon": args.epsilon,
    }
    return _envelope("forward", inputs, result, {"warnings": warnings})


def _cmd_invert(args) -> dict:
    warnings: list[str] = []
    x_lo, x_hi = _parse_range(args.bracket, "--bracket")
    query = InverseQuery(q_star=args.q_star, m=args.m, x_lo=x_lo, x_hi=x_hi)
    x_star = invert_q(query)
    residual = abs(q_m(x_star, args.m) - args.q_star)
    cond = _finite_or_none(condition_number(x_star, args.m), warnings, "condition_number")
    inputs = {"q_star": args.q_star, "m": args.m, "bracket": [x_lo, x_hi]}
    return _envelope(
        "invert",
        inputs,
        {"x_star": x_star},
        {"condition_number": cond, "residual": residual, "warnings": warnings},
    )


def _cmd_recover(args) -> dict:
    warnings: list[str] = []
    unknown = args.unknown

    def need(flag_value, flag_name):
        if flag_value is None:
            raise _UsageError(f"recover --unknown {unknown} needs {flag_name}")
        return flag_value

    if unknown == "m":
        x = need(args.x, "-x")
        res = recover_m(args.q_star, x, args.m_max)
    else:
        m = need(args.m, "-m")
        if unknown == "delta":
            res = recover_delta(
                args.q_star, need(args.ps, "--ps"), need(args.pn, "--pn"),
                need(args.base, "--base"), m,
            )
        elif unknown == "ps":
            res = recover_ps(
                args.q_star, need(args.delta, "--delta"), need(args.pn, "--pn"),
                need(args.base, "--base"), m,
            )
        elif unknown == "pn":
            res = recover_pn(
                args.q_star, need(args.delta, "--delta"), need(args.ps, "--ps"),
                need(args.base, "--base"), m,
            )
        else:
            res = recover_base(
                args.q_star, need(args.delta, "--delta"), need(args.ps, "--ps"),
                need(args.pn, "--pn"), m,
            )
    cond = _finite_or_none(res.condition_number, warnings, "condition_number")
    inputs = {
        "unknown": unknown,
        "q_star": args.q_star,
        "delta": args.delta,
        "ps": args.ps,
        "pn": args.pn,
        "base": args.base,
        "m": args.m,
        "x": args.x,
        "m_max": args.m_max if unknown == "m" else None,
    }
    result = {"unknown": unknown, "value": res.value, "x_star": res.x_star}
    return _envelope(
        "recover",
        inputs,
        result,
        {"condition_number": cond, "residual": res.residual, "warnings": warnings},
    )


def _cmd_interval(args) -> dict:
    itv = well_posed_interval(args.m, args.epsilon)
    x_peak, peak = slope_peak(args.m)
    inputs = {"m": args.m, "epsilon": args.epsilon}
    result = {
        "a_m": itv.a_m,
        "b_m": itv.b_m,
        "epsilon": args.epsilon,
        "peak_slope": peak,
        "peak_x": x_peak,
    }
    return _envelope("interval", inputs, result)


def _cmd_tune(args) -> dict:
    unknown_name, unknown_range = _parse_named_range(args.unknown, "--unknown")
    adjustables = [_parse_named_range(a, "--adjust") for a in args.adjust or []]
    fixed = dict(_parse_named_value(f, "--fix") for f in args.fix or [])
    declared = [unknown_name] + [n for n, _ in adjustables] + sorted(fixed)
    if len(set(declared)) != len(declared):
        raise _UsageError(f"parameter declared more than once: {sorted(declared)}")
    if sorted(declared) != sorted(PARAM_NAMES):
        missing = sorted(set(PARAM_NAMES) - set(declared))
        raise _UsageError(f"every parameter needs a role; missing: {missing}")
    problem = TuningProblem(
        m=args.m,
        unknown=unknown_name,
        unknown_range=unknown_range,
        adjustables=tuple(adjustables),
        fixed=fixed,
        epsilon=args.epsilon,
    )
    res = tune(problem)
    inputs = {
        "m": args.m,
        "epsilon": args.epsilon,
        "unknown": {"name": unknown_name, "range": list(unknown_range)},
        "adjustables": [{"name": n, "range": list(r)} for n, r in adjustables],
        "fixed": fixed,
    }
    result = {
        "feasible": res.feasible,
        "settings": dict(res.settings),
        "x_range": list(res.x_range) if res.x_range is not None else None,
        "interval": {"a_m": res.interval.a_m, "b_m": res.interval.b_m},
        "epsilon": args.epsilon,
        "reason": res.reason,
    }
    return _envelope("tune", inputs, result)


def _cmd_plot(args) -> dict:
    m_values = _parse_m_list(args.m)
    xs = _parse_grid(args.x)
    lines = ["x,m,q"]
    for m in m_values:
        for x in xs:
            lines.append(f"{format(x, '.17g')},{m},{format(q_m(x, m), '.17g')}")
    text = "\n".join(lines) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    inputs = {"m": m_values, "x": args.x, "out": args.out}
    result = {"path": args.out, "rows": len(lines) - 1, "curves": len(m_values)}
    return _envelope("plot", inputs, result)


def _cmd_mc(args) -> dict:
    warnings: list[str] = []
    est = simulate_q(args.x, args.m, McConfig(n_samples=args.n, seed=args.seed))
    q_quad = q_m(args.x, args.m)
    diff = abs(est.q_hat - q_quad)
    if diff == 0.0:
        z_score = 0.0
    elif est.std_err > 0.0:
        z_score = diff / est.std_err
    else:
        z_score = None
        warnings.append("z-score undefined: zero standard error with nonzero deviation")
    inputs = {"x": args.x, "m": args.m, "n": args.n, "seed": args.seed}
    result = {
        "q_hat": est.q_hat,
        "std_err": est.std_err,
        "n": est.n,
        "q_quadrature": q_quad,
        "z_score": z_score,
    }
    return _envelope("mc", inputs, result, {"warnings": warnings})


# --------------------------------------------------------------------------
# Parser and dispatch
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="m-ary-channel",
        description="Identification probability of m-ary orthogonal channels: "
        "forward evaluation, inversion, conditioning and tuning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="evaluate q from physical parameters or the invariant")
    p.add_argument("--delta", type=float)
    p.add_argument("--ps", type=float)
    p.add_argument("--pn", type=float)
    p.add_argument("--base", type=float)
    p.add_argument("-x", type=float, dest="x")
    p.add_argument("-m", type=int, required=True, dest="m")
    p.add_argument("--epsilon", type=float, default=_DEFAULT_EPSILON)
    p.set_defaults(handler=_cmd_forward)

    p = sub.add_parser("invert", help="solve Q_m(x) = q* for the invariant")
    p.add_argument("--q-star", type=float, required=True, dest="q_star")
    p.add_argument("-m", type=int, required=True, dest="m")
    p.add_argument("--bracket", type=str, default="0:50")
    p.set_defaults(handler=_cmd_invert)

    p = sub.add_parser("recover", help="recover one unknown channel parameter from q*")
    p.add_argument("--unknown", required=True, choices=[*PARAM_NAMES, "m"])
    p.add_argument("--q-star", type=float, required=True, dest="q_star")
    p.add_argument("--delta", type=float)
    p.add_argument("--ps", type=float)
    p.add_argument("--pn", type=float)
    p.add_argument("--base", type=float)
    p.add_argument("-m", type=int, dest="m")
    p.add_argument("-x", type=float, dest="x")
    p.add_argument("--m-max", type=int, default=_DEFAULT_M_MAX, dest="m_max")
    p.set_defaults(handler=_cmd_recover)

    p = sub.add_parser("interval", help="compute the well-posed invariant interval [a_m, b_m]")
    p.add_argument("-m", type=int, required=True, dest="m")
    p.add_argument("--epsilon", type=float, default=_DEFAULT_EPSILON)
    p.set_defaults(handler=_cmd_interval)

    p = sub.add_parser("tune", help="choose adjustable parameters so recovery is well-posed")
    p.add_argument("--unknown", required=True, metavar="name=lo:hi")
    p.add_argument("--adjust", action="append", metavar="name=lo:hi")
    p.add_argument("--fix", action="append", metavar="name=value")
    p.add_argument("-m", type=int, required=True, dest="m")
    p.add_argument("--epsilon", type=float, default=_DEFAULT_EPSILON)
    p.set_defaults(handler=_cmd_tune)

    p = sub.add_parser("plot", help="write q(x) curves for several m as CSV")
    p.add_argument("-m", type=str, required=True, metavar="m1,m2,...")
    p.add_argument("--x", type=str, required=True, metavar="lo:hi:step")
    p.add_argument("--out", type=str, required=True)
    p.set_defaults(handler=_cmd_plot)

    p = sub.add_parser("mc", help="Monte Carlo estimate of q with quadrature cross-check")
    p.add_argument("-x", type=float, required=True, dest="x")
    p.add_argument("-m", type=int, required=True, dest="m")
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_mc)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    try:
        envelope = args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        DomainError,
        InfeasibleTarget,
        InfeasibleParameter,
        DegenerateInvariant,
        ThresholdTooHigh,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    print(dumps(envelope))
    return 0


def entrypoint() -> None:
    raise SystemExit(main())
