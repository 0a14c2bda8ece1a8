"""Playing the contest literally: simulation against analytics.

Agents flip entry coins, draw qualities through the inverse equilibrium
CDF, and get paid by realized rank.  The empirical statistics must land
on the analytic ones, and a designated deviator who pins her quality
anywhere in the support must earn exactly the equilibrium profit level,
up to noise.  Fixed seeds reproduce results bit for bit.
"""

import numpy as np

import rankcontest as rc

cost = rc.LinearCost(c0=0.25, slope=1.0)
sol = rc.solve(rc.RewardVector((1.0, 0.0)), cost)
trials = 100000

report = rc.run(sol, trials, seed=2024)
print(f"{trials} simulated rounds of the (1, 0) contest:")
rows = [
    ("best quality", report.empirical_eq_max, report.eq_max_se, rc.expected_max_quality(sol)),
    ("avg quality", report.empirical_eq_avg, report.eq_avg_se, rc.expected_avg_quality(sol)),
    ("total payout", report.empirical_payout, report.payout_se, rc.expected_budget(sol)),
]
for name, value, se, want in rows:
    sigma = abs(value - want) / se
    print(f"  {name:13s} {value:.5f} +- {se:.5f}   analytic {want:.5f}   ({sigma:.2f} sigma)")
print(f"  entrant counts {report.entrant_histogram} vs Binomial(2, {sol.p})")
print()

print("one concrete round, replayed from its per-trial stream:")
out = rc.play_round(sol, rc.trial_streams(seed=2024, trial=17, n=sol.n))
print(f"  entrants {out.entrants}, qualities {tuple(round(q, 4) for q in out.qualities)}")
print(f"  ranking {out.ranking}, payments {out.payments}")
print()

print("deviation payoffs (always enter at fixed q, rivals play equilibrium):")
grid = np.linspace(0.0, sol.qbar + 0.2, 9)
for point in rc.deviation_check(sol, grid, 40000, seed=99):
    marker = "in support" if point.q <= sol.qbar + 1e-12 else "above support"
    print(
        f"  q={point.q:.3f}: payoff {point.mean_payoff:+.5f} +- {point.stderr:.5f}  ({marker})"
    )
print()
print(f"flat at the profit level {sol.shift} inside the support, falling beyond it.")
