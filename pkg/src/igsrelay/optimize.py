"""Outage-minimizing relay signaling.

The end-to-end bound is monotone or unimodal in the circularity coefficient,
so the 1-D problem is solved by bisection on the sign of its derivative,
bracketed by a coarse pre-scan, with both endpoints always evaluated. Relay
power is handled the same way through the derivative of the log success
probability. The joint problem alternates the two 1-D solvers. Grid searches
are shipped alongside as oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sopt

from .analytic import pgs_objective, rd_threshold, ub_objective
from .model import SignalConfig, SystemParams, psi

SCAN_POINTS = 64
MAX_BISECTIONS = 200
POWER_SCAN_DECADES = 6


@dataclass(frozen=True)
class OptimResult:
    p_r_opt: float
    c_x_opt: float
    objective: float
    evals: int
    converged: bool
    reason: str = ""

    def __post_init__(self):
        if not 0.0 <= self.c_x_opt <= 1.0:
            raise ValueError(f"c_x_opt={self.c_x_opt} outside [0, 1]")
        if not self.p_r_opt > 0.0:
            raise ValueError(f"p_r_opt={self.p_r_opt} must be positive")


# --------------------------------------------------------------------------
# derivative of the bound in c_x

def _shape_constants(params: SystemParams, p_r):
    """(a, b, c, d) of the bound written as a function of c_x alone."""
    w = p_r * params.pi_rr
    a = 1.0 / (p_r * params.pi_rd)
    b = (w + 1.0) / (params.p_s * params.pi_sr)
    c = w / (w + 1.0)
    d = params.p_s * params.pi_sd / (p_r * params.pi_rd)
    return a, b, c, d


def s_function(params: SystemParams, p_r, x):
    """Sign-carrying factor S of the bound's c_x-derivative, on all of [0, 1].

    Written in the variable ``z = psi(x) + 2``, where every apparent 0/0 at
    ``x = 1`` has already cancelled. The bound decreases in ``x`` wherever
    S is positive.
    """
    gamma = params.gamma
    a, b, c, d = _shape_constants(params, p_r)
    x = np.asarray(x, dtype=float)
    z = psi(x, gamma) + 2.0
    core = gamma**2 / (z**2 * (z - 1.0))
    s = (d * gamma / z + 1.0) * (-a * core + b * gamma * c**2 / (psi(c * x, gamma) + 1.0)) - d * core
    return float(s) if np.ndim(s) == 0 else s


def _ub_cx_derivative(params: SystemParams, p_r, x):
    gamma = params.gamma
    a, b, c, d = _shape_constants(params, p_r)
    x = np.asarray(x, dtype=float)
    q_norm = gamma / (np.sqrt(1.0 + gamma * (1.0 - x * x)) + 1.0)   # psi(x) / (1 - x^2)
    success = np.exp(-a * q_norm - b * psi(c * x, gamma))
    out = -x * success / (d * q_norm + 1.0) ** 2 * s_function(params, p_r, x)
    return float(out) if np.ndim(out) == 0 else out


def ub_derivative_cx(params: SystemParams, sig: SignalConfig) -> float:
    """d(outage upper bound)/d(c_x) on the open interval (0, 1)."""
    if not 0.0 < sig.c_x < 1.0:
        raise ValueError("derivative is evaluated on the open interval 0 < c_x < 1")
    return _ub_cx_derivative(params, sig.p_r, sig.c_x)


def descartes_coefficients(params: SystemParams, sig: SignalConfig):
    """Descending coefficients of the cubic numerator T(z) of S, frozen at ``sig.c_x``.

    Returns ``(coeffs, z)``. ``t_z`` depends on ``x`` and is evaluated pointwise.
    """
    gamma = params.gamma
    a, b, c, d = _shape_constants(params, sig.p_r)
    x = sig.c_x
    z = psi(x, gamma) + 2.0
    t_z = (psi(c * x, gamma) + 1.0) / (z - 1.0)
    coeffs = (
        b * c**2 * gamma,
        b * c**2 * d * gamma**2,
        -(a + d) * gamma**2 * t_z,
        -a * d * gamma**3 * t_z,
    )
    return coeffs, z


def descartes_root_count(params: SystemParams, sig: SignalConfig) -> int:
    """Sign changes in T(z)'s coefficients: an upper bound on its positive roots.

    Coefficients below 1e-15 of the largest in magnitude count as zero, so a
    vanishing RSI link (c -> 0) is reported as the monotone case.
    """
    coeffs, _ = descartes_coefficients(params, sig)
    scale = max(abs(v) for v in coeffs)
    signs = [math.copysign(1.0, v) for v in coeffs if abs(v) > 1e-15 * scale]
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


# --------------------------------------------------------------------------
# derivatives in relay power (of log success = log(1 - outage))

def _log_success_grad_ub(params: SystemParams, p_r, c_x):
    gamma = params.gamma
    p_r = np.asarray(p_r, dtype=float)
    k = rd_threshold(params, 1.0, c_x)          # rd threshold is k / p_r
    k_sd = params.p_s * params.pi_sd * k
    w = p_r * params.pi_rr
    v = (1.0 - c_x**2) * w + 1.0
    root = np.sqrt((w + 1.0) ** 2 + gamma * ((1.0 - c_x**2) * w * w + 2.0 * w + 1.0))
    lead = (w + 1.0) + gamma * v
    dpen_dw = (gamma * ((1.0 - c_x**2) * w * (w + 2.0) + 1.0) + (gamma * v) ** 2) / (root * (lead + root))
    return (k / p_r**2
            - params.pi_rr * dpen_dw / (params.p_s * params.pi_sr)
            + (k_sd / p_r**2) / (1.0 + k_sd / p_r))


def _log_success_grad_pgs(params: SystemParams, p_r):
    eta = params.eta
    p_r = np.asarray(p_r, dtype=float)
    return (1.0 / p_r + eta / (p_r**2 * params.pi_rd)
            - params.pi_rr * eta / (params.p_s * params.pi_sr + p_r * params.pi_rr * eta)
            - params.pi_rd / (p_r * params.pi_rd + params.p_s * params.pi_sd * eta))


def ub_derivative_power(params: SystemParams, sig: SignalConfig) -> float:
    """d(outage upper bound)/d(P_r) at fixed c_x."""
    p = ub_objective(params, sig.p_r, sig.c_x)
    return float(-(1.0 - p) * _log_success_grad_ub(params, sig.p_r, sig.c_x))


def pgs_derivative_power(params: SystemParams, p_r: float) -> float:
    """d(exact proper-signaling outage)/d(P_r)."""
    p = pgs_objective(params, p_r)
    return float(-(1.0 - p) * _log_success_grad_pgs(params, p_r))


# --------------------------------------------------------------------------
# 1-D solvers

def _bisect_sign(fn, lo: float, hi: float, tol: float, *, geometric: bool = False):
    """Shrink [lo, hi] with fn(lo) > 0 >= fn(hi) until hi - lo <= tol."""
    steps = 0
    while hi - lo > tol and steps < MAX_BISECTIONS:
        mid = math.sqrt(lo * hi) if geometric and lo > 0 else 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fn(mid) > 0:
            lo = mid
        else:
            hi = mid
        steps += 1
    return lo, hi, steps


def optimize_cx(params: SystemParams, p_r: float, tol: float = 1e-10,
                scan_points: int = SCAN_POINTS) -> OptimResult:
    """Minimize the outage upper bound over c_x in [0, 1] at fixed relay power."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    grid = np.linspace(0.0, 1.0, scan_points)
    s = s_function(params, p_r, grid)
    evals = scan_points
    candidates = [0.0, 1.0]
    converged, reason = True, "monotone: best endpoint"
    # bound decreasing (s > 0) then increasing (s <= 0) brackets a minimum
    for i in np.flatnonzero((s[:-1] > 0) & (s[1:] <= 0)):
        lo, hi, steps = _bisect_sign(lambda x: s_function(params, p_r, x), grid[i], grid[i + 1], tol)
        evals += steps
        candidates.append(0.5 * (lo + hi))
        if hi - lo > tol:
            converged, reason = False, f"bracket [{lo:.17g}, {hi:.17g}] wider than tol"
        else:
            reason = "unimodal: interior stationary point"
    values = ub_objective(params, p_r, np.array(candidates))
    evals += len(candidates)
    best = int(np.argmin(values))
    if best < 2 and reason.startswith("unimodal"):
        reason = "unimodal bracket, endpoint better"
    return OptimResult(p_r_opt=float(p_r), c_x_opt=float(candidates[best]),
                       objective=float(values[best]), evals=evals,
                       converged=converged, reason=reason)


def _minimize_power(objective, grad, p_max: float, tol: float):
    """Minimize ``objective`` over (0, p_max] using the sign of ``grad``
    (gradient of log success: positive means outage still falling)."""
    grid = p_max * np.logspace(-POWER_SCAN_DECADES, 0.0, SCAN_POINTS)
    g = grad(grid)
    evals = SCAN_POINTS
    candidates = [p_max]
    converged, reason = True, "monotone: full power"
    for i in np.flatnonzero((g[:-1] > 0) & (g[1:] <= 0)):
        lo, hi, steps = _bisect_sign(grad, grid[i], grid[i + 1], tol * p_max)
        evals += steps
        candidates.append(0.5 * (lo + hi))
        if hi - lo > tol * p_max:
            converged, reason = False, f"bracket [{lo:.17g}, {hi:.17g}] wider than tol"
        else:
            reason = "unimodal: interior stationary point"
    if g[0] <= 0:
        # optimum lies below the scanned range; no sign change to bracket
        res = sopt.minimize_scalar(objective, bounds=(0.0, grid[0]), method="bounded",
                                   options={"xatol": tol * p_max})
        evals += res.nfev
        candidates.append(float(res.x))
        reason = "fallback: bounded scalar search below scan range"
        converged = converged and bool(res.success)
    values = np.array([objective(p) for p in candidates])
    evals += len(candidates)
    best = int(np.argmin(values))
    return float(candidates[best]), float(values[best]), evals, converged, reason


def optimize_power_pgs(params: SystemParams, tol: float = 1e-10) -> OptimResult:
    """Relay power minimizing the exact proper-signaling outage."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    p_r, value, evals, converged, reason = _minimize_power(
        lambda p: pgs_objective(params, p), lambda p: _log_success_grad_pgs(params, p),
        params.p_max, tol)
    return OptimResult(p_r_opt=p_r, c_x_opt=0.0, objective=value, evals=evals,
                       converged=converged, reason=reason)


def optimize_power_ub(params: SystemParams, c_x: float, tol: float = 1e-10) -> OptimResult:
    """Relay power minimizing the outage upper bound at fixed c_x."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    p_r, value, evals, converged, reason = _minimize_power(
        lambda p: ub_objective(params, p, c_x), lambda p: _log_success_grad_ub(params, p, c_x),
        params.p_max, tol)
    return OptimResult(p_r_opt=p_r, c_x_opt=float(c_x), objective=value, evals=evals,
                       converged=converged, reason=reason)


def optimize_joint(params: SystemParams, tol: float = 1e-12, max_rounds: int = 200) -> OptimResult:
    """Coordinate descent over (P_r, c_x), alternating the two 1-D solvers.

    Stops once a full round improves the bound by less than ``tol``; the best
    visited point is returned either way.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    step_tol = 1e-12
    current = optimize_cx(params, params.p_max, step_tol)
    best, evals = current, current.evals
    for _ in range(max_rounds):
        power = optimize_power_ub(params, current.c_x_opt, step_tol)
        current = optimize_cx(params, power.p_r_opt, step_tol)
        evals += power.evals + current.evals
        improvement = best.objective - current.objective
        if current.objective < best.objective:
            best = current
        if improvement < tol:
            return OptimResult(best.p_r_opt, best.c_x_opt, best.objective, evals,
                               True, "round improvement below tol")
    return OptimResult(best.p_r_opt, best.c_x_opt, best.objective, evals,
                       False, f"no convergence after {max_rounds} rounds")


# --------------------------------------------------------------------------
# grid-search oracles

def grid_search_cx(params: SystemParams, p_r: float, n: int = 10_000) -> OptimResult:
    grid = np.linspace(0.0, 1.0, n)
    values = ub_objective(params, p_r, grid)
    i = int(np.argmin(values))
    return OptimResult(float(p_r), float(grid[i]), float(values[i]), n, True, "grid")


def grid_search_power_pgs(params: SystemParams, n: int = 10_000) -> OptimResult:
    grid = params.p_max * np.arange(1, n + 1) / n
    values = pgs_objective(params, grid)
    i = int(np.argmin(values))
    return OptimResult(float(grid[i]), 0.0, float(values[i]), n, True, "grid")


def grid_search_joint(params: SystemParams, n_power: int = 300, n_cx: int = 300) -> OptimResult:
    powers = params.p_max * np.arange(1, n_power + 1) / n_power
    cxs = np.linspace(0.0, 1.0, n_cx)
    values = ub_objective(params, powers[:, None], cxs[None, :])
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return OptimResult(float(powers[i]), float(cxs[j]), float(values[i, j]),
                       n_power * n_cx, True, "grid")
