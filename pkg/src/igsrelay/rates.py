"""Per-hop achievable rates of the full-duplex relay link.

Every function broadcasts over numpy arrays in the gains, so a whole batch of
fading blocks can be pushed through at once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SignalConfig, SystemParams


@dataclass(frozen=True)
class ChannelDraw:
    """Instantaneous link gains |h_ij|^2 of one block (or a batch of blocks)."""

    g_sr: np.ndarray | float
    g_rd: np.ndarray | float
    g_rr: np.ndarray | float
    g_sd: np.ndarray | float

    def __post_init__(self):
        for name in ("g_sr", "g_rd", "g_rr", "g_sd"):
            if np.any(np.asarray(getattr(self, name)) < 0):
                raise ValueError(f"{name} must be non-negative")


def circularity_coeffs_relay_rx(draw: ChannelDraw, params: SystemParams, sig: SignalConfig):
    """Circularity coefficients of the received signal and of the
    interference-plus-noise at the relay."""
    rsi = sig.p_r * np.asarray(draw.g_rr, dtype=float)
    improper = rsi * sig.c_x
    c_y = improper / (params.p_s * np.asarray(draw.g_sr, dtype=float) + rsi + 1.0)
    c_i = improper / (rsi + 1.0)
    return c_y, c_i


def rate_sr(draw: ChannelDraw, params: SystemParams, sig: SignalConfig):
    """S-R rate with the relay's own improper signal as self-interference."""
    rsi = sig.p_r * np.asarray(draw.g_rr, dtype=float)
    improper = rsi * sig.c_x
    desired = params.p_s * np.asarray(draw.g_sr, dtype=float)
    den = (rsi + 1.0 - improper) * (rsi + 1.0 + improper)
    assert np.all(den > 0), "S-R rate denominator must be positive"
    num = (desired + rsi + 1.0 - improper) * (desired + rsi + 1.0 + improper)
    return 0.5 * np.log2(num / den)


def rate_rd(draw: ChannelDraw, params: SystemParams, sig: SignalConfig):
    """R-D rate with the direct source signal treated as noise."""
    signal = sig.p_r * np.asarray(draw.g_rd, dtype=float)
    improper = signal * sig.c_x
    interference = params.p_s * np.asarray(draw.g_sd, dtype=float) + 1.0
    num = (signal + interference - improper) * (signal + interference + improper)
    return 0.5 * np.log2(num / interference**2)


def rate_sr_sinr_form(draw: ChannelDraw, params: SystemParams, sig: SignalConfig):
    """S-R rate as proper-SINR capacity plus the impropriety correction term.

    Algebraically equal to :func:`rate_sr`; kept as an independent check.
    """
    rsi = sig.p_r * np.asarray(draw.g_rr, dtype=float)
    sinr = params.p_s * np.asarray(draw.g_sr, dtype=float) / (rsi + 1.0)
    c_y, c_i = circularity_coeffs_relay_rx(draw, params, sig)
    return np.log2(1.0 + sinr) + 0.5 * np.log2((1.0 - c_y**2) / (1.0 - c_i**2))
