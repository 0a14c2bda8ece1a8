"""Tour of the equilibrium solver on a hand-checkable instance.

Two agents, prizes (1, 0), cost c(q) = q + 0.25.  Everything has a
closed form here: entry probability 0.75, qualities uniform on
[0, 0.75], so the solver output can be read against exact values.
"""

import numpy as np

import rankcontest as rc

cost = rc.LinearCost(c0=0.25, slope=1.0)
rewards = rc.RewardVector((1.0, 0.0))
sol = rc.solve(rewards, cost)

print("== interior regime ==")
print(f"prizes {rewards.prizes}, cost {cost.spec_string()}")
print(f"regime={sol.regime}  p={sol.p:.6f}  qbar={sol.qbar:.6f}  shift={sol.shift}")
print()

print("quality CDF against the exact q/0.75 line:")
grid = np.linspace(0.0, sol.qbar, 7)
for q in grid:
    print(f"  G({q:.3f}) = {sol.cdf(q):.6f}   exact {q / 0.75:.6f}")
print()

print("entrants are indifferent across the support (payoff residual ~ 0),")
print("and overshooting the support only adds cost:")
for q in [0.0, 0.2, 0.5, 0.75, 0.9, 1.1]:
    print(f"  residual({q:.2f}) = {sol.payoff_residual(q):+.2e}")
print()

print("== full-entry regime ==")
full = rc.solve(rc.RewardVector((1.0, 0.5)), cost)
print("raising the last prize to 0.5 (above the entry cost) pulls everyone in:")
print(f"regime={full.regime}  p={full.p}  qbar={full.qbar:.6f}  shift={full.shift}")
print("each entrant now keeps a profit equal to the shift:")
print(f"  residual(0.2) = {full.payoff_residual(0.2):+.2e}  (profit level {full.shift})")
print()

print("== no-entry regime ==")
dead = rc.solve(rc.RewardVector((0.2, 0.0)), cost)
print(f"top prize 0.2 < entry cost 0.25: regime={dead.regime}, p={dead.p}")
print()

print("== headline statistics of the interior instance ==")
report = rc.contest_metrics(sol)
print(f"expected payout        {report.budget:.6f}   (exact 0.9375)")
print(f"expected best quality  {report.eq_max:.6f}   (exact 0.421875)")
print(f"expected avg quality   {report.eq_avg:.6f}   (exact 0.28125)")
print(f"rank probabilities     {[round(w, 5) for w in report.rank_prob]} (sum = p)")
