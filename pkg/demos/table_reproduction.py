"""A scaled-down winner / last-day table.

5001 Red against 4999 Blue on G(10^4, 1/2).  200 trials take well under a
minute on one core; raise TRIALS for tighter confidence intervals.
"""

import time

from majority_gnp import experiments as ex

TRIALS = 200
cfg = ex.TrialConfig(n=10_000, p=0.5, trials=TRIALS, master_seed=2024, red=5001)

t0 = time.perf_counter()
stats = ex.run_trials(cfg)
print(f"{TRIALS} trials in {time.perf_counter() - t0:.1f}s\n")

print("winner  last_day  count  percent")
for row in ex.table_rows(stats):
    print(f"{row['winner']:6}  {row['last_day']!s:>8}  {row['count']:5d}  {100 * row['frequency']:6.2f}%")

f = stats.frequency("red")
print(f"\nRed wins {100 * f:.2f}% +/- {100 * ex.ci95(f, TRIALS):.2f}% (95% CI)")
print("most common last day:", stats.modal_last_day())
