"""Closed-form and quadrature outage probabilities for proper and improper relaying.

Hop-level results are composed end to end as ``1 - (1 - p_sr)(1 - p_rd)``;
the two hops depend on disjoint gain pairs and are independent.

The array-level helpers (``sr_upper_bound``, ``rd_outage``, ``ub_objective``)
broadcast over ``p_r`` and ``c_x`` and back the grid searches in
:mod:`igsrelay.optimize`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import integrate

from .model import MAX_IMPROPER_EPS, QUAD_ABS_TOL, SignalConfig, SystemParams, psi

OutageKind = Literal["exact-quadrature", "exact-closed-form", "upper-bound", "asymptotic"]


@dataclass(frozen=True)
class OutageBreakdown:
    p_sr: float
    p_rd: float
    p_e2e: float
    kind: OutageKind

    def __post_init__(self):
        for name in ("p_sr", "p_rd", "p_e2e"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")


def compose(p_sr, p_rd):
    """End-to-end outage of two independent hops."""
    return 1.0 - (1.0 - p_sr) * (1.0 - p_rd)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


# --------------------------------------------------------------------------
# array-level building blocks

def rsi_penalty(params: SystemParams, w, c_x):
    """(w + 1) * psi(c_x w / (w + 1)) for RSI power w = P_r g_rr (or P_r pi_rr)."""
    w = np.asarray(w, dtype=float)
    return (w + 1.0) * psi(c_x * w / (w + 1.0), params.gamma)


def rd_threshold(params: SystemParams, p_r, c_x):
    """psi(c_x) / (P_r pi_rd (1 - c_x^2)); finite at c_x = 1."""
    c_x = np.asarray(c_x, dtype=float)
    gamma = params.gamma
    u = 1.0 - c_x * c_x
    general = gamma / ((np.sqrt(1.0 + gamma * u) + 1.0) * p_r * params.pi_rd)
    limit = gamma / (2.0 * p_r * params.pi_rd)
    return _scalar(np.where(u < MAX_IMPROPER_EPS, limit, general))


def rd_outage(params: SystemParams, p_r, c_x):
    q = rd_threshold(params, p_r, c_x)
    return _scalar(-np.expm1(-q - np.log1p(params.p_s * params.pi_sd * q)))


def sr_upper_bound(params: SystemParams, p_r, c_x):
    w = np.asarray(p_r, dtype=float) * params.pi_rr
    return _scalar(-np.expm1(-rsi_penalty(params, w, c_x) / (params.p_s * params.pi_sr)))


def ub_objective(params: SystemParams, p_r, c_x):
    """End-to-end outage upper bound, broadcasting over ``p_r`` and ``c_x``."""
    w = np.asarray(p_r, dtype=float) * params.pi_rr
    q = rd_threshold(params, p_r, c_x)
    exponent = q + rsi_penalty(params, w, c_x) / (params.p_s * params.pi_sr)
    return _scalar(-np.expm1(-exponent - np.log1p(params.p_s * params.pi_sd * q)))


def pgs_objective(params: SystemParams, p_r):
    """Exact end-to-end outage with proper signaling, broadcasting over ``p_r``."""
    p_r = np.asarray(p_r, dtype=float)
    eta = params.eta
    a = params.p_s * params.pi_sr
    b = p_r * params.pi_rd
    log_success = (np.log(a) + np.log(b) - eta * (1.0 / a + 1.0 / b)
                   - np.log(a + p_r * params.pi_rr * eta)
                   - np.log(b + params.p_s * params.pi_sd * eta))
    return _scalar(-np.expm1(log_success))


# --------------------------------------------------------------------------
# first hop

def p_sr_pgs(params: SystemParams, p_r: float) -> float:
    a = params.p_s * params.pi_sr
    eta = params.eta
    return 1.0 - a * math.exp(-eta / a) / (a + p_r * params.pi_rr * eta)


def p_sr_upper_bound(params: SystemParams, sig: SignalConfig) -> float:
    """Jensen bound on the S-R outage: the RSI gain replaced by its mean."""
    return sr_upper_bound(params, sig.p_r, sig.c_x)


def p_sr_exact(params: SystemParams, sig: SignalConfig, *, return_error: bool = False):
    """S-R outage averaged over the exponential RSI gain by adaptive quadrature.

    The semi-infinite integral over g_rr is mapped onto [0, 1) with
    ``g = pi_rr t / (1 - t)``. A breakpoint is placed where the conditional
    success probability decays, which keeps QUADPACK from missing a narrow
    feature when pi_rr and the S-R SNR live on very different scales.
    """
    p_r, c_x = sig.p_r, sig.c_x
    a = params.p_s * params.pi_sr
    gamma = params.gamma
    pi_rr = params.pi_rr

    def integrand(t):
        if t >= 1.0:
            return 0.0
        x = pi_rr * t / (1.0 - t)
        w = p_r * x
        # (w + 1) psi(c_x w / (w + 1)) inlined; this runs per quadrature node
        u = gamma * (1.0 - c_x * c_x) * w * w + gamma * (2.0 * w + 1.0)
        penalty = u / (math.sqrt((w + 1.0) ** 2 + u) + (w + 1.0))
        return math.exp(-t / (1.0 - t) - penalty / a) / (1.0 - t) ** 2

    # the penalty bends where P_r g_rr ~ 1 and, for c_x < 1, decays the
    # integrand where P_r g_rr psi(c_x) ~ P_s pi_sr
    knees = [1.0 / p_r]
    psi_c = psi(c_x, gamma)
    if psi_c > 0.0:
        knees.append(a / (p_r * psi_c))
    points = sorted({x / (x + pi_rr) for x in knees if 0.0 < x / (x + pi_rr) < 1.0})
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(integrand, 0.0, 1.0, points=points,
                                        epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200)
        except integrate.IntegrationWarning as exc:
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, err = integrate.quad(integrand, 0.0, 1.0, points=points,
                                        epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200)
            warnings.warn(f"first-hop quadrature did not converge "
                          f"(error estimate {err:.3g}): {exc}", RuntimeWarning, stacklevel=2)
    p = min(max(1.0 - value, 0.0), 1.0)
    return (p, err) if return_error else p


# --------------------------------------------------------------------------
# second hop

def p_rd_exact(params: SystemParams, sig: SignalConfig) -> float:
    """R-D outage averaged over the interfering direct-link gain."""
    return rd_outage(params, sig.p_r, sig.c_x)


def p_rd_pgs(params: SystemParams, p_r: float) -> float:
    b = p_r * params.pi_rd
    eta = params.eta
    return 1.0 - b * math.exp(-eta / b) / (b + params.p_s * params.pi_sd * eta)


def p_rd_maximally_improper(params: SystemParams, p_r: float) -> float:
    gamma = params.gamma
    b = 2.0 * p_r * params.pi_rd
    return 1.0 - b * math.exp(-gamma / b) / (b + gamma * params.p_s * params.pi_sd)


# --------------------------------------------------------------------------
# end to end

def p_e2e_pgs(params: SystemParams, p_r: float) -> float:
    eta = params.eta
    a = params.p_s * params.pi_sr
    b = p_r * params.pi_rd
    num = a * b * math.exp(-eta * (1.0 / a + 1.0 / b))
    den = (a + p_r * params.pi_rr * eta) * (b + params.p_s * params.pi_sd * eta)
    return 1.0 - num / den


def p_e2e_upper_bound(params: SystemParams, sig: SignalConfig) -> float:
    """Upper bound on end-to-end outage for an improper relay signal."""
    return ub_objective(params, sig.p_r, sig.c_x)


def p_e2e_exact(params: SystemParams, sig: SignalConfig) -> float:
    """End-to-end outage with the first hop evaluated by quadrature."""
    return compose(p_sr_exact(params, sig), p_rd_exact(params, sig))


def p_e2e_ub_maximally_improper(params: SystemParams, p_r: float) -> float:
    gamma = params.gamma
    b = 2.0 * p_r * params.pi_rd
    w = p_r * params.pi_rr
    first_hop = (w + 1.0) / (params.p_s * params.pi_sr) * psi(w / (w + 1.0), gamma)
    return 1.0 - b * math.exp(-(gamma / b + first_hop)) / (b + gamma * params.p_s * params.pi_sd)


def rsi_saturation_constant(params: SystemParams, p_r: float) -> float:
    """Limit of the maximally improper bound as the mean RSI gain grows without bound.

    The first-hop exponent tends to gamma / (P_s pi_sr) and the second hop keeps
    its maximally improper form, with exponent gamma / (2 P_r pi_rd).
    """
    gamma = params.gamma
    b = 2.0 * p_r * params.pi_rd
    exponent = gamma / b + gamma / (params.p_s * params.pi_sr)
    return 1.0 - b * math.exp(-exponent) / (b + gamma * params.p_s * params.pi_sd)


def breakdown(params: SystemParams, sig: SignalConfig, kind: OutageKind = "upper-bound") -> OutageBreakdown:
    """Hop-by-hop outage for one signaling choice.

    ``exact-closed-form`` is only available for proper signaling and
    ``asymptotic`` only for maximally improper signaling (its first hop is the
    saturated value reached as pi_rr grows without bound).
    """
    p_rd = p_rd_exact(params, sig)
    if kind == "upper-bound":
        p_sr = p_sr_upper_bound(params, sig)
    elif kind == "exact-quadrature":
        p_sr = p_sr_exact(params, sig)
    elif kind == "exact-closed-form":
        if sig.c_x != 0.0:
            raise ValueError("closed-form first hop exists only for c_x = 0")
        p_sr = p_sr_pgs(params, sig.p_r)
        p_rd = p_rd_pgs(params, sig.p_r)
    elif kind == "asymptotic":
        if sig.c_x != 1.0:
            raise ValueError("the saturation limit is defined for c_x = 1")
        p_sr = -math.expm1(-params.gamma / (params.p_s * params.pi_sr))
    else:
        raise ValueError(f"unknown outage kind {kind!r}")
    return OutageBreakdown(p_sr=p_sr, p_rd=p_rd, p_e2e=compose(p_sr, p_rd), kind=kind)


# --------------------------------------------------------------------------
# convexity of the first-hop exponent in g_rr

def _jensen_coeffs(params: SystemParams, sig: SignalConfig):
    gamma = params.gamma
    scale = params.p_s * params.pi_sr
    A = sig.p_r**2 * (1.0 + gamma * (1.0 - sig.c_x**2)) / scale**2
    B = 2.0 * (1.0 + gamma) * sig.p_r / scale**2
    C = (1.0 + gamma) / scale**2
    D = sig.p_r / scale
    F = 1.0 / scale
    return A, B, C, D, F


def jensen_argument(g_rr, params: SystemParams, sig: SignalConfig):
    """Exponent f(g_rr) of the conditional S-R success probability exp(-f)."""
    A, B, C, D, F = _jensen_coeffs(params, sig)
    g_rr = np.asarray(g_rr, dtype=float)
    return _scalar(np.sqrt(A * g_rr**2 + B * g_rr + C) - (D * g_rr + F))


def jensen_argument_second_derivative(g_rr, params: SystemParams, sig: SignalConfig):
    """Second derivative of :func:`jensen_argument`; never positive."""
    A, B, C, D, F = _jensen_coeffs(params, sig)
    g_rr = np.asarray(g_rr, dtype=float)
    if np.any(g_rr < 0):
        raise ValueError("g_rr must be non-negative")
    # 4AC - B^2 in factored form, exact zero for proper signaling
    gamma = params.gamma
    disc = -4.0 * gamma * (1.0 + gamma) * (sig.p_r * sig.c_x) ** 2 / (params.p_s * params.pi_sr) ** 4
    return _scalar(disc / (4.0 * (C + g_rr * (B + A * g_rr)) ** 1.5))
