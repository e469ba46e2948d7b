"""Monte Carlo cross-checks of the analytic outage expressions.

Each check compares an analytic value against a seeded simulation and passes
when the deviation stays within ``Z_LIMIT`` binomial standard errors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytic, mc
from .model import SignalConfig, SystemParams, db_to_linear, default_params

Z_LIMIT = 4.0


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    deviation: float   # in standard errors, except where noted in ``detail``
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    seed: int
    n: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'}  {c.name:<32s} dev={c.deviation:7.3f}  {c.detail}"
                for c in self.checks]


def _agree(name, estimate: mc.OutageEstimate, reference: float) -> Check:
    z = estimate.z_score(reference)
    return Check(name, z <= Z_LIMIT, z,
                 f"analytic={reference:.6g} mc={estimate.p_hat:.6g} se={estimate.std_err:.2g}")


def validate(seed: int, n: int, params: SystemParams | None = None) -> ValidationReport:
    """Run the analytic-vs-simulation suite at ``params`` (reference scenario by default)."""
    if n < 10_000:
        raise ValueError("validation needs at least 10^4 samples")
    params = params or default_params()
    p_r = params.p_max
    seeds = np.random.SeedSequence(seed).generate_state(8, np.uint64)
    runs = {c: mc.estimate_outage(params, SignalConfig(p_r, c), n, int(s))
            for c, s in zip((0.0, 0.3, 0.5, 0.8, 1.0), seeds)}

    checks = [_agree("pgs e2e closed form", runs[0.0].e2e, analytic.p_e2e_pgs(params, p_r))]
    for c in (0.3, 0.8):
        checks.append(_agree(f"s-r quadrature c_x={c}", runs[c].sr,
                             analytic.p_sr_exact(params, SignalConfig(p_r, c))))
    for c in (0.0, 0.5, 1.0):
        checks.append(_agree(f"r-d closed form c_x={c}", runs[c].rd,
                             analytic.p_rd_exact(params, SignalConfig(p_r, c))))
    checks.append(_agree("e2e quadrature c_x=0.5", runs[0.5].e2e,
                         analytic.p_e2e_exact(params, SignalConfig(p_r, 0.5))))
    for c in (0.3, 0.8):
        est = runs[c].sr
        bound = analytic.p_sr_upper_bound(params, SignalConfig(p_r, c))
        z = (est.p_hat - bound) / est.std_err
        checks.append(Check(f"s-r bound above mc c_x={c}", z <= Z_LIMIT, z,
                            f"bound={bound:.6g} mc={est.p_hat:.6g} (dev signed, bound below mc if > 0)"))

    strong = params.with_(pi_rr=db_to_linear(30.0))
    proper = mc.estimate_outage(strong, SignalConfig(p_r, 0.0), n, int(seeds[5])).e2e
    improper = mc.estimate_outage(strong, SignalConfig(p_r, 1.0), n, int(seeds[6])).e2e
    checks.append(Check("impropriety helps at 30 dB rsi", improper.p_hat <= proper.p_hat,
                        proper.p_hat - improper.p_hat,
                        f"mc c_x=1: {improper.p_hat:.6g}  mc c_x=0: {proper.p_hat:.6g} (dev is the gap)"))
    return ValidationReport(tuple(checks), seed, n)
