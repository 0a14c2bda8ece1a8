import numpy as np
import pytest

from rankcontest import (
    ExponentialCost,
    LinearCost,
    QuadraticPlusCost,
    RewardVector,
    solve,
)

GOLDEN_COST = LinearCost(c0=0.25, slope=1.0)


@pytest.fixture(scope="session")
def golden_interior():
    """n=2, prizes (1, 0), c(q)=q+0.25: everything closed-form."""
    return solve(RewardVector((1.0, 0.0)), GOLDEN_COST)


@pytest.fixture(scope="session")
def golden_full():
    """n=2, prizes (1, 0.5), c(q)=q+0.25: full participation regime."""
    return solve(RewardVector((1.0, 0.5)), GOLDEN_COST)


def random_cost(rng):
    family = rng.integers(3)
    if family == 0:
        return LinearCost(c0=rng.uniform(0.05, 0.6), slope=rng.uniform(0.5, 2.0))
    if family == 1:
        return ExponentialCost(k=rng.uniform(0.5, 2.0))
    return QuadraticPlusCost(
        c0=rng.uniform(0.05, 0.6), a=rng.uniform(0.3, 1.5), b=rng.uniform(0.0, 2.0)
    )


def random_rewards(rng, n, cost, full_share=0.3):
    """Monotone prizes with a top prize well above the entry cost;
    roughly ``full_share`` of draws land in the full-entry regime."""
    c0 = cost.entry_cost
    values = np.cumsum(rng.exponential(size=n)[::-1])[::-1]
    values *= c0 * rng.uniform(1.3, 4.0) / values[0]
    if rng.random() < full_share:
        values += c0 * rng.uniform(0.1, 1.0)
    return RewardVector(tuple(values))


def random_instance(rng, n_max=10):
    n = int(rng.integers(2, n_max + 1))
    cost = random_cost(rng)
    return random_rewards(rng, n, cost), cost
