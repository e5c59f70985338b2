"""Universal reduction on small graphs, checked exhaustively.

A graph universally reduces m1 to m2 if every colouring with at most m1 Blue
vertices has at most m2 Blue vertices one day later.  For small n we can just
try every colouring, and compare with the probabilistic bound.
"""

from majority_gnp import Seed, gen_gnp
from majority_gnp import bounds as bd
from majority_gnp.dynamics import check_universal_reduction

n, p, trials = 20, 0.9, 200

for m1 in (1, 2, 3):
    m2 = m1 - 1
    hits = sum(check_universal_reduction(gen_gnp(n, p, Seed(5, i)), m1, m2) for i in range(trials))
    # bad_set_bound(n, n0, m, p) bounds Pr(G: n0 -> m - 1); a negative value is vacuous
    lb = bd.bad_set_bound(n, m1, m2 + 1, p)
    print(f"G: {m1} -> {m2}  observed {hits / trials:.3f}   lower bound {lb:.3f}")

# the degree route: every degree above s p (n-1) reduces s p (n-1)/2 Blue to 0
s = 0.6
print(f"\nPr(all degrees > {s} p (n-1)) >= {bd.degree_reduction_prob(550, 0.5, s):.10f} at n=550, p=1/2")
