import numpy as np
import pytest

from igsrelay.analytic import ub_objective
from igsrelay.model import SystemParams, db_to_linear


def random_params(rng, *, rate=(0.25, 2.0)) -> SystemParams:
    p_max = 10 ** rng.uniform(-1, 1)
    return SystemParams(
        p_s=p_max, p_max=p_max,
        pi_sr=db_to_linear(rng.uniform(0, 35)), pi_rd=db_to_linear(rng.uniform(0, 35)),
        pi_rr=db_to_linear(rng.uniform(-10, 30)), pi_sd=db_to_linear(rng.uniform(-5, 10)),
        rate=rng.uniform(*rate),
    )


def random_scenarios(seed, count, *, lo=1e-9, hi=0.99):
    """(params, p_r) pairs whose bound at c_x = 0.5 is neither saturated nor vanishing."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        params = random_params(rng)
        p_r = params.p_max * rng.uniform(0.05, 1.0)
        if lo < ub_objective(params, p_r, 0.5) < hi:
            out.append((params, p_r))
    return out


@pytest.fixture
def example():
    """The worked example: 20/20/10 dB gains, pi_sd = 2, unit powers, R = 1."""
    return SystemParams(p_s=1, p_max=1, pi_sr=100, pi_rd=100, pi_rr=10, pi_sd=2, rate=1)
