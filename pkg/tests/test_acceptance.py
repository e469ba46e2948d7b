"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one ``PASS``/``FAIL`` line (visible without ``-s``) and then
asserts, so ``pytest tests/test_acceptance.py -v`` doubles as a report.
"""
import math
import time
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest

from igsrelay import analytic, optimize
from igsrelay.mc import estimate_outage
from igsrelay.model import SignalConfig, SystemParams, db_to_linear, default_params
from igsrelay.sweep import load_sweep_config, run_sweep

from .conftest import random_params, random_scenarios

CONFIGS = Path(__file__).resolve().parent.parent / "scripts" / "configs"

# Saturation constant value pinned by acceptance criterion 5 (evaluated from the
# printed constant, see the criterion 5 test).
K_PINNED = 0.085665


@pytest.fixture
def report(capsys):
    def emit(name, passed, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if passed else 'FAIL'}  {name:<44s} {detail}")
        return passed
    return emit


def worked_example():
    return SystemParams(p_s=1, p_max=1, pi_sr=100, pi_rd=100, pi_rr=10, pi_sd=2, rate=1)


def test_c1_pgs_closed_form_composition(report):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        params = random_params(rng)
        p_r = params.p_max * rng.uniform(0.01, 1)
        composed = analytic.compose(analytic.p_sr_pgs(params, p_r), analytic.p_rd_pgs(params, p_r))
        worst = max(worst, abs(analytic.p_e2e_pgs(params, p_r) - composed))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    assert report("1 pgs e2e == composed hops", ok, f"max|diff|={worst:.2e} t={elapsed:.2f}s")


def test_c2_quadrature_vs_closed_form(report):
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        params = random_params(rng)
        p_r = params.p_max * rng.uniform(0.01, 1)
        quad = analytic.p_sr_exact(params, SignalConfig(p_r, 0.0))
        worst = max(worst, abs(quad - analytic.p_sr_pgs(params, p_r)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 10.0
    assert report("2 quadrature at c_x=0 == closed form", ok, f"max|diff|={worst:.2e} t={elapsed:.2f}s")


def test_c3_monte_carlo_oracle(report):
    params = default_params()
    n, seed = 10**6, 103
    t0 = time.perf_counter()
    runs = {c: estimate_outage(params, SignalConfig(1.0, c), n, seed + i)
            for i, c in enumerate((0.0, 0.3, 0.5, 0.8, 1.0))}
    z = {
        "pgs e2e": runs[0.0].e2e.z_score(analytic.p_e2e_pgs(params, 1.0)),
        "p_sr c=0.3": runs[0.3].sr.z_score(analytic.p_sr_exact(params, SignalConfig(1.0, 0.3))),
        "p_sr c=0.8": runs[0.8].sr.z_score(analytic.p_sr_exact(params, SignalConfig(1.0, 0.8))),
    }
    for c in (0.0, 0.5, 1.0):
        z[f"p_rd c={c}"] = runs[c].rd.z_score(analytic.p_rd_exact(params, SignalConfig(1.0, c)))
    elapsed = time.perf_counter() - t0
    ok = max(z.values()) <= 4.0 and elapsed < 60.0
    detail = " ".join(f"{k}:{v:.2f}" for k, v in z.items())
    assert report("3 analytic within 4 se of monte carlo", ok, f"{detail} t={elapsed:.1f}s")


def test_c4_jensen_bound_direction(report):
    rng = np.random.default_rng(104)
    t0 = time.perf_counter()
    worst = -math.inf
    for _ in range(1000):
        params = random_params(rng)
        sig = SignalConfig(params.p_max * rng.uniform(0.01, 1), rng.uniform(0, 1))
        worst = max(worst, analytic.p_sr_exact(params, sig) - analytic.p_sr_upper_bound(params, sig))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 60.0
    assert report("4 jensen bound >= exact - 1e-8", ok, f"max(exact-bound)={worst:.2e} t={elapsed:.1f}s")


def test_c5a_rsi_saturation(report):
    params = worked_example()
    t0 = time.perf_counter()
    grid = [params.with_(pi_rr=db_to_linear(d)) for d in np.arange(0.0, 80.5, 1.0)]
    pgs = np.array([analytic.p_e2e_pgs(p, 1.0) for p in grid])
    ub = np.array([analytic.p_e2e_upper_bound(p, SignalConfig(1.0, 1.0)) for p in grid])
    k = analytic.rsi_saturation_constant(params, 1.0)
    elapsed = time.perf_counter() - t0
    rel = abs(ub[-1] - k) / k
    ok = pgs[-1] > 0.999 and rel <= 0.01 and np.all(np.diff(ub) >= 0) and elapsed < 1.0
    assert report("5a pgs->1, c_x=1 bound within 1% of K", ok,
                  f"pgs(80dB)={pgs[-1]:.6f} ub(80dB)={ub[-1]:.6f} K={k:.6f} rel={rel:.1e} t={elapsed:.3f}s")


def test_c5b_saturation_constant_pinned_value(report):
    """The pinned 0.085665 comes from the printed constant, whose R-D exponent
    lacks the factor 2 that the c_x = 1 limit produces. Both halves of the
    criterion cannot hold at once; this half is expected to fail."""
    params = worked_example()
    k = analytic.rsi_saturation_constant(params, 1.0)
    with mp.workdps(30):
        g, b = mp.mpf(3), mp.mpf(200)
        printed = float(1 - b * mp.exp(-(g / 100 + g / 100)) / (b + g * 2))
        limit = float(1 - b * mp.exp(-(g / b + g / 100)) / (b + g * 2))
    ok = abs(k - K_PINNED) <= 1e-6
    assert report("5b K equals pinned 0.085665", ok,
                  f"K={k:.10f} pinned={K_PINNED} printed-formula={printed:.6f} limit={limit:.6f}")


def test_c6_unimodality(report):
    rng = np.random.default_rng(106)
    grid = np.linspace(0.0, 1.0, 10_000)
    t0 = time.perf_counter()
    violations = 0
    for _ in range(10_000):
        params = random_params(rng)
        v = analytic.ub_objective(params, params.p_max * rng.uniform(0.01, 1), grid)
        d = np.diff(v)
        # steps at rounding level carry no sign
        s = np.sign(d[np.abs(d) > 8 * np.finfo(float).eps * np.abs(v[1:])])
        if np.count_nonzero(s[1:] != s[:-1]) > 1:
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 300
    assert report("6 bound in c_x turns at most once", ok, f"violations={violations}/10000 t={elapsed:.1f}s")


def test_c7_optimizers_vs_grid(report):
    t0 = time.perf_counter()
    cx = [abs(optimize.optimize_cx(p, pr).objective - optimize.grid_search_cx(p, pr).objective)
          for p, pr in random_scenarios(107, 100)]
    joint = [abs(optimize.optimize_joint(p).objective - optimize.grid_search_joint(p).objective)
             for p, _ in random_scenarios(207, 20)]
    elapsed = time.perf_counter() - t0
    ok = max(cx) <= 1e-8 and max(joint) <= 1e-6 and elapsed < 300
    assert report("7 optimizers match grid oracles", ok,
                  f"cx max|diff|={max(cx):.1e} joint max|diff|={max(joint):.1e} t={elapsed:.1f}s")


def _sweep(name):
    t0 = time.perf_counter()
    spec = load_sweep_config(CONFIGS / name)
    rows = run_sweep(spec)
    elapsed = time.perf_counter() - t0
    table = {}
    for r in rows:
        table.setdefault((r.scenario, r.method), []).append(r)
    return spec, table, elapsed


def _col(rows, attr="p_out"):
    return np.array([getattr(r, attr) for r in rows])


def test_c8_fig2_rsi_sweep(report):
    spec, table, elapsed = _sweep("fig2_rsi.ini")
    ok, parts = elapsed < 120, []
    for params, label in spec.scenarios:
        pgs = _col(table[(label, "pgs-mpa")])
        igs = _col(table[(label, "igs-1d-cx")])
        k = analytic.rsi_saturation_constant(params, params.p_max)
        rel = abs(igs[-1] - k) / k
        ok &= bool(np.all(np.diff(pgs) >= 0) and pgs[-1] > 0.9
                   and np.all(np.diff(igs) >= 0) and rel <= 0.01)
        parts.append(f"{label}: pgs(40dB)={pgs[-1]:.3f} igs/K-1={rel:.1e}")
    assert report("8 fig2 pgs->1, igs->K", ok, f"{'; '.join(parts)} t={elapsed:.1f}s")


def test_c8_fig3_power_sweep(report):
    _, table, elapsed = _sweep("fig3_power.ini")
    mpa = _col(table[("base", "pgs-mpa")])
    opt = _col(table[("base", "pgs-opt-power")])
    igs = _col(table[("base", "igs-2d-joint")])
    c_x = _col(table[("base", "igs-2d-joint")], "c_x_used")
    turn = int(np.argmin(mpa))
    breakeven = 0 < turn < len(mpa) - 1 and np.all(np.diff(mpa[turn:]) > 0)
    flat = np.ptp(opt[turn:]) < 1e-9
    ok = (breakeven and flat and np.all(np.diff(igs) <= 1e-12) and c_x[-1] > 0.99 and elapsed < 120)
    budgets = _col(table[("base", "pgs-mpa")], "value")
    assert report("8 fig3 pgs breakeven, igs decreasing", ok,
                  f"breakeven~{budgets[turn]:.1f}W igs {igs[0]:.3f}->{igs[-1]:.4f} "
                  f"c_x(10W)={c_x[-1]:.3f} t={elapsed:.1f}s")


def test_c8_fig4_sr_gain_sweep(report):
    _, table, elapsed = _sweep("fig4_sr_gain.ini")
    gaps = {}
    for label in ("R=0.5", "R=1"):
        pgs = _col(table[(label, "pgs-opt-power")])
        igs = _col(table[(label, "igs-2d-joint")])
        gaps[label] = (pgs - igs) / pgs
    ok = elapsed < 120
    for g in gaps.values():
        peak = int(np.argmax(g))
        ok &= bool(np.all(np.diff(g[peak:]) <= 2e-3) and abs(g[-1]) < 1e-3 * g[peak])
    ok &= bool(gaps["R=0.5"].max() > gaps["R=1"].max() and gaps["R=0.5"].mean() > gaps["R=1"].mean())
    detail = " ".join(f"{k}: peak={v.max():.3f} end={v[-1]:.1e}" for k, v in gaps.items())
    assert report("8 fig4 gap shrinks with pi_sr, wider at R=0.5", ok, f"{detail} t={elapsed:.1f}s")


def test_c8_fig5_position_strong_rsi(report):
    _, table, elapsed = _sweep("fig5_position.ini")
    pgs = _col(table[("pi_rr=15dB", "pgs-opt-power")])
    igs = _col(table[("pi_rr=15dB", "igs-2d-joint")])
    pos = _col(table[("pi_rr=15dB", "pgs-opt-power")], "value")
    ends = [abs(igs[i] - pgs[i]) / pgs[i] for i in (0, -1)]
    mid = (pos >= 0.25) & (pos <= 0.75)
    ok = max(ends) <= 1e-2 and np.all(igs[mid] < pgs[mid]) and elapsed < 120
    assert report("8 fig5 pi_rr=15dB ends equal, mid advantage", ok,
                  f"end rel diff={max(ends):.1e} mid min gain={np.min((pgs - igs)[mid] / pgs[mid]):.2f} "
                  f"t={elapsed:.1f}s")


def test_c8_fig5_position_weak_rsi(report):
    """Expected to fail: with the adopted path-loss normalization the joint
    design turns maximally improper for relays past the midpoint even at 0 dB
    RSI (up to ~9% lower outage than tuned proper signaling)."""
    _, table, elapsed = _sweep("fig5_position.ini")
    c_x = _col(table[("pi_rr=0dB", "igs-2d-joint")], "c_x_used")
    pgs = _col(table[("pi_rr=0dB", "pgs-opt-power")])
    igs = _col(table[("pi_rr=0dB", "igs-2d-joint")])
    pos = _col(table[("pi_rr=0dB", "igs-2d-joint")], "value")
    improper = pos[c_x > 0]
    ok = improper.size == 0 and elapsed < 120
    assert report("8 fig5 pi_rr=0dB igs == pgs", ok,
                  f"c_x>0 at positions {improper.round(2).tolist()} "
                  f"max igs gain={np.max((pgs - igs) / pgs):.3f} t={elapsed:.1f}s")


def test_c9_derivatives_vs_finite_differences(report):
    rng = np.random.default_rng(109)
    t0 = time.perf_counter()
    worst_a = worst_b = 0.0
    # second derivative of the S-R exponent in g_rr, against mpmath differences
    for _ in range(100):
        params = random_params(rng)
        sig = SignalConfig(params.p_max * rng.uniform(0.05, 1), rng.uniform(0.01, 0.99))
        g = params.pi_rr * rng.uniform(0.01, 5)
        A, B, C, D, F = (mp.mpf(v) for v in analytic._jensen_coeffs(params, sig))
        fd = mp.diff(lambda x: mp.sqrt(A * x * x + B * x + C) - (D * x + F), mp.mpf(g), 2)
        exact = analytic.jensen_argument_second_derivative(g, params, sig)
        worst_a = max(worst_a, abs(exact - float(fd)) / abs(float(fd)))
    # c_x derivative of the end-to-end bound, central differences with step 1e-6
    for params, p_r in random_scenarios(209, 100):
        x = rng.uniform(0.01, 0.99)
        exact = optimize.ub_derivative_cx(params, SignalConfig(p_r, x))
        fd = (analytic.ub_objective(params, p_r, x + 1e-6) - analytic.ub_objective(params, p_r, x - 1e-6)) / 2e-6
        worst_b = max(worst_b, abs(exact - fd) / max(abs(fd), 1e-300))
    elapsed = time.perf_counter() - t0
    ok = worst_a <= 1e-4 and worst_b <= 1e-4 and elapsed < 1.0
    assert report("9 derivatives match finite differences", ok,
                  f"second-deriv rel={worst_a:.1e} cx-deriv rel={worst_b:.1e} t={elapsed:.2f}s")
