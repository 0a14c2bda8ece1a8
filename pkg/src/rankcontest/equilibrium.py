"""Symmetric mixed-strategy equilibrium of a monotone rank-order contest.

With n identical potential entrants, prizes a_1 >= ... >= a_n and cost
c(q), a symmetric equilibrium is a participation probability p together
with a quality CDF G supported on an interval [0, qbar].  Write

    x = p * (1 - G(q))

for the *competitor pressure* at quality q: the probability that one
given rival both enters and beats q.  Ranks against the other n-1
agents are then Binomial(n-1, x), so the expected prize from entering
at quality q is

    benefit(x) = sum_{i=0}^{n-1} a_{i+1} * C(n-1, i) * x**i * (1-x)**(n-1-i),

which is strictly decreasing in x whenever the prizes are monotone with
a strict step.  Equilibrium play makes entrants indifferent across the
support:

    benefit(x(q)) - c(q) = shift     for all q in [0, qbar],

where shift = max(a_n - c(0), 0) is the equilibrium profit level (zero
under free entry with p < 1, positive only when even the last prize
covers the entry cost and everyone enters).

Three regimes:

* ``no_entry``  a_1 <= c(0): entering cannot pay even unopposed; p = 0
  and no quality CDF is defined.
* ``interior``  a_n < c(0) < a_1: p in (0, 1) solves benefit(p) = c(0).
* ``full``      a_n >= c(0): p = 1.

The support endpoint solves c(qbar) = a_1 - shift.  Because the benefit
function is strictly decreasing, every CDF query reduces to bracketed
bisection with guaranteed convergence; the solver carries no state
beyond the scalars above, and solutions are immutable and safe to share
across threads.
"""

from dataclasses import dataclass, field

import numpy as np

from .binom import pmf_matrix
from .costs import CostModel
from .errors import DomainError, StateError
from .mechanism import RewardVector

REGIME_NO_ENTRY = "no_entry"
REGIME_INTERIOR = "interior"
REGIME_FULL = "full"

_X_SLACK = 1e-12
_BISECT_ITERS = 64


def _as_unit_interval(x, name: str) -> tuple[np.ndarray, bool]:
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < -_X_SLACK) or np.any(arr > 1.0 + _X_SLACK):
        raise DomainError(f"{name} must lie in [0, 1]")
    return np.clip(arr, 0.0, 1.0), scalar


def expected_benefit(x, rewards: RewardVector):
    """Expected prize from entering when each rival independently beats
    you with probability ``x``.

    Equals a_1 at x = 0 and a_n at x = 1, and is strictly decreasing in
    between.  Accepts scalars or arrays.
    """
    arr, scalar = _as_unit_interval(x, "competitor pressure")
    out = rewards.as_array() @ pmf_matrix(rewards.n - 1, arr)
    return float(out[0]) if scalar else out


def benefit_slope(x, rewards: RewardVector):
    """Derivative of :func:`expected_benefit` in x.

    Evaluates (n-1) * sum_i (a_{i+2} - a_{i+1}) C(n-2, i) x**i
    (1-x)**(n-2-i), which is <= 0 everywhere and strictly negative on
    (0, 1) for a monotone schedule with a strict step.
    """
    arr, scalar = _as_unit_interval(x, "competitor pressure")
    steps = np.diff(rewards.as_array())
    out = (rewards.n - 1) * (steps @ pmf_matrix(rewards.n - 2, arr))
    return float(out[0]) if scalar else out


def _benefit_scalar(a: tuple[float, ...], x: float) -> float:
    # pure-python twin of expected_benefit for the scalar hot path: the
    # same mass recurrence, without numpy's per-call overhead
    m = len(a) - 1
    if x <= 0.0:
        return a[0]
    if x >= 1.0:
        return a[m]
    acc = 0.0
    if x <= 0.5:
        t = (1.0 - x) ** m
        ratio = x / (1.0 - x)
        acc = a[0] * t
        for i in range(m):
            t = t * ((m - i) / (i + 1)) * ratio
            acc += a[i + 1] * t
    else:
        t = x**m
        ratio = (1.0 - x) / x
        acc = a[m] * t
        for i in range(m, 0, -1):
            t = t * (i / (m - i + 1)) * ratio
            acc += a[i - 1] * t
    return acc


def _invert_benefit(targets: np.ndarray, rewards: RewardVector, hi: float) -> np.ndarray:
    """Solve expected_benefit(x) = target on [0, hi] for each target.

    The benefit is strictly decreasing, so plain bisection always
    converges; targets outside the attainable range clamp to the nearer
    endpoint.
    """
    if targets.size == 1:
        a = rewards.prizes
        target = float(targets[0])
        lo, high = 0.0, hi
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + high)
            if _benefit_scalar(a, mid) > target:
                lo = mid
            else:
                high = mid
        return np.array([0.5 * (lo + high)])
    a = rewards.as_array()
    m = rewards.n - 1
    lo = np.zeros_like(targets)
    high = np.full_like(targets, hi)
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + high)
        value = a @ pmf_matrix(m, mid)
        above = value > targets
        lo = np.where(above, mid, lo)
        high = np.where(above, high, mid)
    return 0.5 * (lo + high)


def participation_probability(rewards: RewardVector, cost: CostModel) -> float:
    """Equilibrium entry probability.

    0 when even the top prize cannot cover the entry cost, 1 when the
    last prize does, and otherwise the unique root of
    expected_benefit(p) = c(0) in (0, 1).
    """
    c0 = cost.entry_cost
    if rewards.top <= c0:
        return 0.0
    if rewards.last >= c0:
        return 1.0
    return float(_invert_benefit(np.array([c0]), rewards, 1.0)[0])


def payoff_shift(rewards: RewardVector, cost: CostModel) -> float:
    """Equilibrium profit level max(a_n - c(0), 0)."""
    return max(rewards.last - cost.entry_cost, 0.0)


def support_endpoint(rewards: RewardVector, cost: CostModel) -> float:
    """Highest quality played in equilibrium: solves c(qbar) = a_1 - shift.

    Reported as 0 in the no-entry regime, where no quality is played at
    all.
    """
    c0 = cost.entry_cost
    if rewards.top <= c0:
        return 0.0
    return float(cost.inverse(rewards.top - payoff_shift(rewards, cost)))


@dataclass(frozen=True, eq=False)
class EquilibriumSolution:
    """Solved equilibrium: (p, G) plus the scalars that pin it down.

    ``cdf``/``pressure``/``quantile``/``payoff_residual`` evaluate the
    equilibrium objects on demand; all accept scalars or arrays.  An
    optional monotone evaluation grid (``grid_q``, ``grid_cdf``) can be
    requested at solve time for plotting or tabulation; the analytical
    queries never interpolate.
    """

    rewards: RewardVector
    cost: CostModel
    p: float
    qbar: float
    shift: float
    regime: str
    arg_tol: float = 1e-12
    grid_q: np.ndarray | None = field(default=None, repr=False)
    grid_cdf: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.rewards.n

    def _require_entry(self):
        if self.regime == REGIME_NO_ENTRY:
            raise StateError(
                "no-entry equilibrium: the quality distribution is undefined"
            )

    def _check_support(self, q) -> tuple[np.ndarray, bool]:
        scalar = np.ndim(q) == 0
        arr = np.atleast_1d(np.asarray(q, dtype=float))
        slack = _X_SLACK * max(1.0, self.qbar)
        if np.any(arr < -slack) or np.any(arr > self.qbar + slack):
            raise DomainError(f"quality must lie in [0, qbar={self.qbar}]")
        return np.clip(arr, 0.0, self.qbar), scalar

    def pressure(self, q):
        """Competitor pressure x(q) = p * (1 - G(q)) on the support."""
        self._require_entry()
        arr, scalar = self._check_support(q)
        targets = np.asarray(self.cost.value(arr), dtype=float) + self.shift
        x = _invert_benefit(targets, self.rewards, self.p)
        return float(x[0]) if scalar else x

    def cdf(self, q):
        """Equilibrium quality CDF G(q) on [0, qbar]."""
        x = self.pressure(q)
        return 1.0 - x / self.p

    def quantile(self, u):
        """Exact inverse CDF: the quality at which G first reaches ``u``.

        Closed form: the indifference condition gives
        q(u) = c^{-1}(benefit(p * (1 - u)) - shift).
        """
        self._require_entry()
        arr, scalar = _as_unit_interval(u, "quantile level")
        targets = expected_benefit(self.p * (1.0 - arr), self.rewards) - self.shift
        q = np.asarray(self.cost.inverse(targets), dtype=float)
        q = np.clip(q, 0.0, self.qbar)
        return float(q[0]) if scalar else q

    def payoff_residual(self, q):
        """Entry payoff at quality q minus the equilibrium profit level.

        Zero across the support (to solver tolerance).  Above the
        support the deviator wins the top prize outright, so the
        residual is a_1 - c(q) - shift, which is strictly negative:
        deviating past qbar only adds cost.
        """
        scalar = np.ndim(q) == 0
        arr = np.atleast_1d(np.asarray(q, dtype=float))
        if np.any(arr < 0.0):
            raise DomainError("quality must be nonnegative")
        costs = np.asarray(self.cost.value(arr), dtype=float)
        out = self.rewards.top - costs - self.shift
        if self.regime != REGIME_NO_ENTRY:
            inside = arr <= self.qbar
            if np.any(inside):
                x = self.pressure(arr[inside])
                gains = expected_benefit(x, self.rewards)
                out[inside] = gains - costs[inside] - self.shift
        return float(out[0]) if scalar else out


def solve(
    rewards,
    cost: CostModel,
    *,
    arg_tol: float = 1e-12,
    grid_nodes: int = 0,
) -> EquilibriumSolution:
    """Compute the symmetric mixed-strategy equilibrium.

    ``arg_tol`` is the bisection argument tolerance recorded on the
    solution (the fixed iteration count drives the bracket well below
    it).  ``grid_nodes > 0`` additionally tabulates the CDF on that many
    Chebyshev-spaced nodes across [0, qbar] at construction time, so the
    solution stays immutable afterwards.
    """
    if not isinstance(rewards, RewardVector):
        rewards = RewardVector(tuple(rewards))
    c0 = cost.entry_cost
    if rewards.last < 0.0 and c0 == 0.0:
        raise DomainError(
            "negative last prize with zero entry cost is not supported: "
            "the marginal entrant would face an unbounded incentive to "
            "undercut at zero quality"
        )
    shift = payoff_shift(rewards, cost)
    if rewards.top <= c0:
        regime, p, qbar = REGIME_NO_ENTRY, 0.0, 0.0
    elif rewards.last >= c0:
        regime, p = REGIME_FULL, 1.0
        qbar = support_endpoint(rewards, cost)
    else:
        regime = REGIME_INTERIOR
        p = participation_probability(rewards, cost)
        qbar = support_endpoint(rewards, cost)
    sol = EquilibriumSolution(
        rewards=rewards,
        cost=cost,
        p=p,
        qbar=qbar,
        shift=shift,
        regime=regime,
        arg_tol=arg_tol,
    )
    if grid_nodes > 0 and regime != REGIME_NO_ENTRY:
        theta = np.linspace(np.pi, 0.0, grid_nodes)
        q_grid = 0.5 * qbar * (1.0 + np.cos(theta))
        cdf_grid = sol.cdf(q_grid)
        sol = EquilibriumSolution(
            rewards=rewards,
            cost=cost,
            p=p,
            qbar=qbar,
            shift=shift,
            regime=regime,
            arg_tol=arg_tol,
            grid_q=q_grid,
            grid_cdf=cdf_grid,
        )
    return sol
