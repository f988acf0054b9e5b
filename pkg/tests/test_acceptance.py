"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete.
"""

import json
import math

import numpy as np
import pytest

from m_ary_channel import (
    ChannelParams,
    InverseQuery,
    McConfig,
    TuningProblem,
    check_condition5,
    condition_number,
    invariant,
    invert_q,
    q_m,
    q_m_reference,
    recover_base,
    recover_delta,
    recover_m,
    recover_pn,
    recover_ps,
    simulate_q,
    std_normal_cdf,
    tune,
    well_posed_interval,
)
from m_ary_channel.cli import main as cli_main

SQRT2 = math.sqrt(2.0)
EPSILON = 0.03

# one line per criterion; conftest prints these in the terminal summary so
# they survive pytest's output capture
REPORT_LINES: list[str] = []


def report(num: int, name: str, ok: bool, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}{suffix}"
    REPORT_LINES.append(line)
    print(line)
    assert ok, line


def test_c01_symmetry_anchor():
    ms = sorted(set(np.linspace(1, 1000, 50).astype(int)))
    worst = max(abs(q_m(0.0, int(m)) - 1.0 / int(m)) for m in ms)
    report(1, "symmetry anchor q_m(0, m) = 1/m", worst <= 1e-10, f"worst {worst:.2e}")


def test_c02_closed_form_m2():
    grid = np.arange(-5.0, 8.0 + 1e-9, 0.1)
    worst = max(abs(q_m(float(x), 2) - std_normal_cdf(float(x) / SQRT2)) for x in grid)
    report(2, "closed-form equivalence at m = 2", worst <= 1e-10, f"worst {worst:.2e}")


def test_c03_cross_method_quadrature():
    worst = 0.0
    for m in (2, 10, 100, 10**4):
        for x in np.arange(0.0, 10.0 + 1e-9, 0.5):
            worst = max(worst, abs(q_m(float(x), m) - q_m_reference(float(x), m)))
    report(3, "cross-method quadrature agreement", worst <= 1e-9, f"worst {worst:.2e}")


def test_c04_monte_carlo_validation():
    worst_z = 0.0
    for i_m, m in enumerate((2, 8, 100, 10**4)):
        for i_x, x in enumerate((0.0, 1.0, 2.0, 3.0, 5.0)):
            seed = 20260811 + 100 * i_m + i_x
            est = simulate_q(x, m, McConfig(n_samples=10**6, seed=seed))
            z = abs(est.q_hat - q_m(x, m)) / est.std_err
            worst_z = max(worst_z, z)
    report(4, "Monte Carlo validation at 4 sigma", worst_z <= 4.0, f"worst z {worst_z:.2f}")


def test_c05_curve_reconstruction(tmp_path, capsys):
    out_path = tmp_path / "curves.csv"
    code = cli_main(["plot", "-m", "2,8,32,100", "--x", "0:8:0.05", "--out", str(out_path)])
    capsys.readouterr()
    assert code == 0
    by_m: dict[int, list[tuple[float, float]]] = {}
    lines = out_path.read_text().splitlines()
    assert lines[0] == "x,m,q"
    for line in lines[1:]:
        x_s, m_s, q_s = line.split(",")
        by_m.setdefault(int(m_s), []).append((float(x_s), float(q_s)))
    ok = set(by_m) == {2, 8, 32, 100} and all(len(v) == 161 for v in by_m.values())
    # (a) monotone increasing in x
    for pts in by_m.values():
        qs = [q for _, q in pts]
        ok = ok and all(b > a for a, b in zip(qs, qs[1:]))
    # (b) pointwise decreasing in m for x > 0
    for i in range(1, 161):
        col = [by_m[m][i][1] for m in (2, 8, 32, 100)]
        ok = ok and all(b < a for a, b in zip(col, col[1:]))
    # (c) 1/m at x = 0
    for m, pts in by_m.items():
        ok = ok and abs(pts[0][1] - 1.0 / m) <= 1e-10
    report(5, "identification curves reconstruction", ok)


def test_c06_interval_claims():
    details = []
    ok = True
    for m in range(2, 31):
        itv = well_posed_interval(m, EPSILON)
        if itv.a_m != 0.0:
            ok = False
            details.append(f"a_{m} = {itv.a_m}")
    for m in (2, 4, 8, 16, 32, 64, 100):
        itv = well_posed_interval(m, EPSILON)
        if not 2.9 <= itv.b_m <= 5.1:
            ok = False
            details.append(f"b_{m} = {itv.b_m}")
    for m in (300, 512, 1000):
        itv = well_posed_interval(m, EPSILON)
        if not itv.a_m > 0.0:
            ok = False
            details.append(f"a_{m} = {itv.a_m}")
    # m = 2 upper endpoint against the closed form phi(x/sqrt2)/sqrt2 = eps
    b2_closed = SQRT2 * math.sqrt(-2.0 * math.log(EPSILON * SQRT2 * math.sqrt(2 * math.pi)))
    b2 = well_posed_interval(2, EPSILON).b_m
    if abs(b2 - b2_closed) > 0.01:
        ok = False
        details.append(f"b_2 = {b2} vs closed form {b2_closed}")
    report(6, "well-posed interval claims", ok, "; ".join(details) or f"b_2 = {b2:.4f}")


def test_c07_ill_posedness_witness():
    x_hi = invert_q(InverseQuery(q_star=0.9999, m=2))
    x_lo = invert_q(InverseQuery(q_star=0.8, m=2))
    ratio = condition_number(x_hi, 2) / condition_number(x_lo, 2)
    report(7, "ill-posedness witness ratio >= 50", ratio >= 50.0, f"ratio {ratio:.0f}")


def _random_tuples(count: int):
    rng = np.random.default_rng(424242)
    ms = (2, 10, 100)
    intervals = {m: well_posed_interval(m, EPSILON) for m in ms}
    for i in range(count):
        m = ms[i % len(ms)]
        itv = intervals[m]
        x = rng.uniform(itv.a_m + 0.1, itv.b_m - 0.1)
        delta = rng.uniform(0.05, 0.85)
        p_n = 10.0 ** rng.uniform(-1, 1)
        base = 10.0 ** rng.uniform(0, 2)
        g = x / ((1.0 - delta) * math.sqrt(base))
        p_s = g * g * p_n
        yield ChannelParams(delta=delta, p_s=p_s, p_n=p_n, base=base, m=m)


def test_c08_round_trip_recovery():
    worst = 0.0
    ok = True
    for params in _random_tuples(1000):
        q_star = q_m(invariant(params), params.m)
        m = params.m
        rel_errors = (
            abs(recover_delta(q_star, params.p_s, params.p_n, params.base, m).value - params.delta)
            / params.delta,
            abs(recover_ps(q_star, params.delta, params.p_n, params.base, m).value - params.p_s)
            / params.p_s,
            abs(recover_pn(q_star, params.delta, params.p_s, params.base, m).value - params.p_n)
            / params.p_n,
            abs(recover_base(q_star, params.delta, params.p_s, params.p_n, m).value - params.base)
            / params.base,
        )
        worst = max(worst, *rel_errors)
        if worst > 1e-6:
            ok = False
            break
    rng = np.random.default_rng(31337)
    exact = True
    for _ in range(1000):
        m = int(rng.integers(2, 513))
        x = float(rng.uniform(1.0, 5.0))
        if recover_m(q_m(x, m), x, 1024).value != m:
            exact = False
            break
    report(
        8,
        "round-trip recovery",
        ok and exact,
        f"worst continuous rel err {worst:.2e}; recover_m exact: {exact}",
    )


def _random_problems(count: int):
    rng = np.random.default_rng(777)
    ms = (2, 8, 100)
    names = ("delta", "ps", "pn", "base")
    for i in range(count):
        m = ms[i % len(ms)]
        order = list(rng.permutation(4))
        unknown = names[order[0]]
        n_adj = int(rng.integers(1, 3))
        adjustables = [names[j] for j in order[1 : 1 + n_adj]]
        fixed_names = [names[j] for j in order[1 + n_adj :]]

        def draw_range(name):
            if name == "delta":
                lo = rng.uniform(0.0, 0.7)
                return (float(lo), float(min(0.94, lo + rng.uniform(0.05, 0.25))))
            center = 10.0 ** rng.uniform(-1.5, 1.5)
            span = rng.uniform(1.5, 8.0)
            return (float(center / span), float(center * span))

        def draw_value(name):
            if name == "delta":
                return float(rng.uniform(0.0, 0.9))
            return float(10.0 ** rng.uniform(-1.5, 1.5))

        yield TuningProblem(
            m=m,
            unknown=unknown,
            unknown_range=draw_range(unknown),
            adjustables=tuple((n, draw_range(n)) for n in adjustables),
            fixed={n: draw_value(n) for n in fixed_names},
            epsilon=EPSILON,
        )


def _sweep_passes(problem: TuningProblem, result, n: int = 100) -> bool:
    lo, hi = problem.unknown_range
    for i in range(n):
        u = lo + (hi - lo) * i / (n - 1) if n > 1 else lo
        values = {problem.unknown: u, **problem.fixed, **dict(result.settings)}
        x = invariant(
            ChannelParams(
                delta=values["delta"], p_s=values["ps"], p_n=values["pn"],
                base=values["base"], m=problem.m,
            )
        )
        if not check_condition5(x, result.interval):
            return False
    return True


def _grid_feasible(problem: TuningProblem, interval, points: int) -> bool:
    """Brute force over adjustable settings; unknown checked at its endpoints
    (x is monotone in the unknown, so endpoints are exact)."""
    axes = [np.linspace(lo, hi, points) for _, (lo, hi) in problem.adjustables]
    mesh = np.meshgrid(*axes, indexing="ij") if axes else []
    flat = [m.ravel() for m in mesh]
    n_pts = flat[0].size if flat else 1
    inside = np.ones(n_pts, dtype=bool)
    for u in problem.unknown_range:
        values = {problem.unknown: np.full(n_pts, u)}
        for name, v in problem.fixed.items():
            values[name] = np.full(n_pts, v)
        for (name, _), arr in zip(problem.adjustables, flat):
            values[name] = arr
        x = (
            (1.0 - values["delta"])
            * np.sqrt(values["ps"] / values["pn"])
            * np.sqrt(values["base"])
        )
        inside &= (x >= interval.a_m) & (x <= interval.b_m)
    return bool(inside.any())


def test_c09_tuning_soundness_and_completeness():
    n_feasible = 0
    n_infeasible = 0
    failures = []
    for idx, problem in enumerate(_random_problems(200)):
        result = tune(problem)
        interval = result.interval
        if result.feasible:
            n_feasible += 1
            if not _sweep_passes(problem, result):
                failures.append(f"#{idx}: feasible settings fail the containment sweep")
        else:
            n_infeasible += 1
        grid_says = _grid_feasible(problem, interval, 50)
        if grid_says != result.feasible:
            if result.feasible:
                # the planner produced a concrete witness; the sweep already
                # verified it, so a coarse grid miss is not a disagreement,
                # but re-check densely to be sure the verdict is honest
                if not _grid_feasible(problem, interval, 400) and not _sweep_passes(
                    problem, result
                ):
                    failures.append(f"#{idx}: feasible verdict unsupported")
            else:
                failures.append(f"#{idx}: oracle found a setting the planner called infeasible")
    ok = not failures
    report(
        9,
        "tuning soundness & completeness",
        ok,
        f"{n_feasible} feasible / {n_infeasible} infeasible" + ("; " + failures[0] if failures else ""),
    )


def test_c10_determinism(tmp_path, capsys):
    commands = [
        ["forward", "--delta", "0.5", "--ps", "4", "--pn", "1", "--base", "4", "-m", "2"],
        ["forward", "-x", "3", "-m", "100"],
        ["invert", "--q-star", "0.8", "-m", "2"],
        ["recover", "--unknown", "delta", "--q-star", "0.9213504",
         "--ps", "4", "--pn", "1", "--base", "4", "-m", "2"],
        ["recover", "--unknown", "m", "--q-star", "0.125", "-x", "0"],
        ["interval", "-m", "100"],
        ["tune", "--unknown", "delta=0:0.5", "--adjust", "base=1:64",
         "--fix", "ps=1", "--fix", "pn=1", "-m", "2"],
        ["mc", "-x", "2", "-m", "2", "-n", "100000", "--seed", "7"],
    ]
    ok = True
    for argv in commands:
        outs = []
        for _ in range(2):
            code = cli_main(argv)
            outs.append(capsys.readouterr().out)
            ok = ok and code == 0
        ok = ok and outs[0] == outs[1] and json.loads(outs[0])
    csvs = []
    for run in range(2):
        path = tmp_path / f"det{run}.csv"
        code = cli_main(["plot", "-m", "2,8", "--x", "0:4:0.25", "--out", str(path)])
        capsys.readouterr()
        ok = ok and code == 0
        csvs.append(path.read_bytes())
    ok = ok and csvs[0] == csvs[1]
    cfg = McConfig(n_samples=10**5, seed=99)
    ok = ok and simulate_q(1.5, 64, cfg) == simulate_q(1.5, 64, cfg)
    report(10, "bit-identical reruns", ok)
