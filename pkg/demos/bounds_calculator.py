"""How large an advantage does Red need?

Evaluates the day-by-day failure bounds at n = 550, p = 1/2 for a range of
initial advantages c and prints the resulting lower bound on Red winning
within four days.
"""

from majority_gnp import PreconditionViolated
from majority_gnp import bounds as bd

n, p = 550, 0.5

# the reference point first
params = bd.BoundParams(n, p, 6, eps1=0.01, eps2=0.01, r=0.3)
rep = bd.theorem_report(params)
print("milestones |B_t| <=", [round(m, 2) for m in rep.milestones])
for t, v in enumerate(rep.p_values, 1):
    print(f"  P{t} = {v:.6g}")
print(f"Red wins by day 4 with probability >= {rep.win_lower_bound:.4f}")

# the day-1 term is the only one that depends on c
print("\n c   P1        win bound")
for c in range(1, 11):
    try:
        r = bd.theorem_report(bd.BoundParams(n, p, c, 0.01, 0.01, 0.3))
        print(f"{c:2d}   {r.p_values[0]:.5f}   {r.win_lower_bound:.4f}")
    except PreconditionViolated as e:
        print(f"{c:2d}   precondition fails: {e.condition}")

# P3 as used above versus the raw union-bound form, which is vacuous here
print(f"\nday-3 term {bd.p3(params):.3g}, union-bound form {bd.day3_lemma_bound(params):.3g}")
