"""Designing attention rewards under per-rank caps.

Attention paid to rank i cannot be moved to another rank, only
curtailed.  The best schedule saturates every cap except the last
rank's, which is cut to the entry cost: paying the worst contributor
more than entry costs only subsidizes low effort, while paying less
scares off entry.  A brute-force lattice search certifies the claim.
"""

import numpy as np

import rankcontest as rc

cost = rc.LinearCost(c0=0.3, slope=1.0)
caps = rc.AttentionCaps((1.0, 0.5, 0.4))

schedule = rc.optimal_attention(caps, cost)
print(f"caps {caps.caps}, entry cost {cost.entry_cost}")
print(f"prescribed schedule: {schedule.prizes}  (last rank cut to c(0))")
print()

cert = rc.attention_certificate(caps, cost)
print(f"certificate over {cert.candidates} cap-fraction schedules:")
print(f"  best quality   {cert.eq_max:.6f} vs best alternative {cert.best_candidate_max:.6f}")
print(f"  avg quality    {cert.eq_avg:.6f} vs best alternative {cert.best_candidate_avg:.6f}")
print(f"  optimal for both objectives: {cert.max_optimal and cert.avg_optimal}")
print()

print("why the last rank behaves differently: the response of the")
print("equilibrium to each prize, d[p(1-G)]/da, by rank:")
base = rc.RewardVector((1.0, 0.5, 0.2))
for rank in (1, 2, 3):
    rep = rc.reward_sensitivity(base, cost, rank)
    print(f"  rank {rank}: {rep.sign}  (entry response dp/da = {rep.dp:+.4f})")
print()
rich_tail = rc.RewardVector((1.0, 0.5, 0.45))
rep = rc.reward_sensitivity(rich_tail, cost, 3)
print(f"with the last prize above c(0) ({rich_tail.prizes}): rank 3 turns {rep.sign}")
print()

print("binding vs slack caps:")
for caps_values in [(1.0, 0.5, 0.2), (1.0, 1.0, 1.0), (2.0, 0.31, 0.305)]:
    out = rc.optimal_attention(rc.AttentionCaps(caps_values), cost)
    print(f"  caps {caps_values} -> {tuple(np.round(out.prizes, 3))}")
