"""Outage analysis and signaling optimization for full-duplex decode-and-forward
relaying with improper Gaussian signals at the relay."""

from .analytic import (
    OutageBreakdown,
    breakdown,
    p_e2e_exact,
    p_e2e_pgs,
    p_e2e_ub_maximally_improper,
    p_e2e_upper_bound,
    p_rd_exact,
    p_sr_exact,
    p_sr_pgs,
    p_sr_upper_bound,
    rsi_saturation_constant,
)
from .mc import OutageEstimate, estimate_outage, sample_channel
from .model import SignalConfig, SystemParams, db_to_linear, default_params, eta_of, gamma_of, psi
from .optimize import OptimResult, optimize_cx, optimize_joint, optimize_power_pgs
from .rates import ChannelDraw, rate_rd, rate_sr

__all__ = [
    "ChannelDraw", "OptimResult", "OutageBreakdown", "OutageEstimate", "SignalConfig",
    "SystemParams", "breakdown", "db_to_linear", "default_params", "estimate_outage",
    "eta_of", "gamma_of", "optimize_cx", "optimize_joint", "optimize_power_pgs",
    "p_e2e_exact", "p_e2e_pgs", "p_e2e_ub_maximally_improper", "p_e2e_upper_bound",
    "p_rd_exact", "p_sr_exact", "p_sr_pgs", "p_sr_upper_bound", "psi", "rate_rd",
    "rate_sr", "rsi_saturation_constant", "sample_channel",
]
