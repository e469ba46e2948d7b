"""Seeded Monte Carlo estimates of hop and end-to-end outage.

Outage events are read off the rate formulas directly, so these estimates
share no algebra with :mod:`igsrelay.analytic`.

Reproducibility: the sample budget ``n`` is split into ``workers`` shares, and
share ``i`` draws from child ``i`` of ``SeedSequence(seed)``. The output is a
function of ``(seed, n, workers)`` only. Use ``n >= 100 / p`` for the normal
approximation behind ``std_err`` to be trustworthy.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import SignalConfig, SystemParams
from .rates import ChannelDraw, rate_rd, rate_sr

BLOCK = 1 << 18


@dataclass(frozen=True)
class OutageEstimate:
    p_hat: float
    std_err: float
    n_samples: int
    seed: int

    @classmethod
    def from_count(cls, count: int, n: int, seed: int) -> "OutageEstimate":
        p = count / n
        return cls(p_hat=p, std_err=math.sqrt(p * (1.0 - p) / n), n_samples=n, seed=seed)

    def z_score(self, reference: float) -> float:
        """Deviation of ``reference`` from the estimate, in standard errors."""
        if self.std_err == 0.0:
            return 0.0 if reference == self.p_hat else math.inf
        return abs(reference - self.p_hat) / self.std_err


class MonteCarloOutage(NamedTuple):
    sr: OutageEstimate
    rd: OutageEstimate
    e2e: OutageEstimate


def sample_channel(params: SystemParams, rng: np.random.Generator, size=None) -> ChannelDraw:
    """Independent exponential gains with means pi_sr, pi_rd, pi_rr, pi_sd."""
    return ChannelDraw(
        g_sr=rng.exponential(params.pi_sr, size),
        g_rd=rng.exponential(params.pi_rd, size),
        g_rr=rng.exponential(params.pi_rr, size),
        g_sd=rng.exponential(params.pi_sd, size),
    )


def _split(n: int, workers: int) -> list[int]:
    base, extra = divmod(n, workers)
    return [base + (i < extra) for i in range(workers)]


def _count_share(params, sig, n, seed_seq) -> tuple[int, int, int]:
    rng = np.random.default_rng(seed_seq)
    sr = rd = e2e = 0
    remaining = n
    while remaining:
        size = min(BLOCK, remaining)
        draw = sample_channel(params, rng, size)
        out_sr = rate_sr(draw, params, sig) < params.rate
        out_rd = rate_rd(draw, params, sig) < params.rate
        sr += int(out_sr.sum())
        rd += int(out_rd.sum())
        e2e += int((out_sr | out_rd).sum())
        remaining -= size
    return sr, rd, e2e


def estimate_outage(params: SystemParams, sig: SignalConfig, n: int, seed: int,
                    workers: int = 1) -> MonteCarloOutage:
    """Estimate S-R, R-D and end-to-end outage from ``n`` fading blocks.

    An end-to-end outage is declared when either hop is in outage; the hops
    use disjoint gains, so this matches the product form of the analysis.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    shares = _split(n, workers)
    children = np.random.SeedSequence(seed).spawn(workers)
    if workers == 1:
        counts = [_count_share(params, sig, shares[0], children[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda job: _count_share(params, sig, *job),
                                   zip(shares, children)))
    sr, rd, e2e = (sum(c[i] for c in counts) for i in range(3))
    return MonteCarloOutage(
        sr=OutageEstimate.from_count(sr, n, seed),
        rd=OutageEstimate.from_count(rd, n, seed),
        e2e=OutageEstimate.from_count(e2e, n, seed),
    )
