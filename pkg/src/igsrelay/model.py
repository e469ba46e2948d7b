"""Scenario parameters and the scalar helpers shared by every other module.

All quantities are linear (watts, dimensionless gains). Noise variances at the
relay and the destination are fixed to one and never stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# Numerical tolerances used across the package.
IDENTITY_TOL = 1e-12       # algebraic identities (hop composition, unit round trips)
QUAD_ABS_TOL = 1e-10       # absolute tolerance requested from the first-hop quadrature
MAX_IMPROPER_EPS = 1e-9    # 1 - c_x**2 below this uses the maximally improper limit
GAIN_CAP = 1e6             # cap on linear gains produced by diverging path loss


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def db_to_linear(x_db):
    return _scalar_or_array(np.power(10.0, np.asarray(x_db, dtype=float) / 10.0))


def linear_to_db(x):
    return _scalar_or_array(10.0 * np.log10(np.asarray(x, dtype=float)))


def gamma_of(rate):
    """Threshold on the squared-SINR form of the rate: 2**(2R) - 1."""
    return _scalar_or_array(np.expm1(2.0 * np.asarray(rate, dtype=float) * math.log(2.0)))


def eta_of(rate):
    """SINR threshold for a proper link: 2**R - 1."""
    return _scalar_or_array(np.expm1(np.asarray(rate, dtype=float) * math.log(2.0)))


def psi(x, gamma):
    """sqrt(1 + gamma (1 - x^2)) - 1, written without cancellation.

    ``x`` must lie in [0, 1]; arrays are accepted.
    """
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)) or np.any(np.isnan(x)):
        raise ValueError("psi is defined for x in [0, 1]")
    u = gamma * (1.0 - x * x)
    out = u / (np.sqrt(1.0 + u) + 1.0)
    return _scalar_or_array(out)


@dataclass(frozen=True)
class SystemParams:
    """Static scenario: powers in watts, mean link gains linear, rate in b/s/Hz."""

    p_s: float
    p_max: float
    pi_sr: float
    pi_rd: float
    pi_rr: float
    pi_sd: float
    rate: float

    def __post_init__(self):
        for name in ("p_s", "p_max", "pi_sr", "pi_rd", "pi_rr", "pi_sd", "rate"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive number, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def gamma(self) -> float:
        return gamma_of(self.rate)

    @property
    def eta(self) -> float:
        return eta_of(self.rate)

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @classmethod
    def from_db(cls, *, p_s=1.0, p_max=1.0, pi_sr_db=20.0, pi_rd_db=20.0,
                pi_rr_db=10.0, pi_sd_db=3.0, rate=1.0) -> "SystemParams":
        return cls(p_s=p_s, p_max=p_max, pi_sr=db_to_linear(pi_sr_db),
                   pi_rd=db_to_linear(pi_rd_db), pi_rr=db_to_linear(pi_rr_db),
                   pi_sd=db_to_linear(pi_sd_db), rate=rate)


def default_params(**overrides) -> SystemParams:
    """Reference operating point: 20/20/10/3 dB gains, 1 W budgets, R = 1."""
    return SystemParams.from_db(**overrides)


@dataclass(frozen=True)
class SignalConfig:
    """Relay decision variables: transmit power and circularity coefficient."""

    p_r: float
    c_x: float

    def __post_init__(self):
        if not (math.isfinite(self.p_r) and self.p_r > 0):
            raise ValueError(f"p_r must be positive, got {self.p_r!r}")
        if not (0.0 <= self.c_x <= 1.0):
            raise ValueError(f"c_x must lie in [0, 1], got {self.c_x!r}")
        object.__setattr__(self, "p_r", float(self.p_r))
        object.__setattr__(self, "c_x", float(self.c_x))

    def check(self, params: SystemParams) -> "SignalConfig":
        if self.p_r > params.p_max * (1 + IDENTITY_TOL):
            raise ValueError(f"p_r={self.p_r} exceeds p_max={params.p_max}")
        return self
