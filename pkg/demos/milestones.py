"""Watching |B_t| against the day-by-day milestones.

Runs a few hundred trials at n = 550 with a 6-vertex advantage and compares
the observed Blue camp sizes with the ceilings the bounds promise.
"""

import numpy as np

from majority_gnp import Coloring, Seed, gen_gnp, run
from majority_gnp import bounds as bd
from majority_gnp import experiments as ex

params = bd.BoundParams(550, 0.5, 6, 0.01, 0.01, 0.3)
ms = bd.milestones(params)

# one trajectory up close
g = gen_gnp(550, 0.5, Seed(1, 0))
traj = run(g, Coloring.first_red(550, 281))
print("blue sizes:", traj.blue_sizes, "winner:", traj.winner, "on day", traj.last_day)
print("milestones:", [round(m, 1) for m in ms])

# many trajectories
cfg = ex.TrialConfig(n=550, p=0.5, trials=500, master_seed=3, red=281)
stats = ex.run_trials(cfg, params)
eb = stats.early_blue
for t in range(5):
    col = eb[:, t]
    print(f"day {t}: median |B| = {np.median(col):6.1f}, max = {col.max():4d}, milestone {ms[t]:7.2f}, "
          f"met in {stats.milestone_hits[t]}/{cfg.trials}")

for m in ex.milestone_check(cfg, params, stats=stats):
    print(f"day {m.day}: conditional frequency {m.frequency:.4f}, threshold {m.threshold:.4f}")
