"""What is one extra Red vertex worth?

rho(k) is the Red win frequency starting from ceil(n/2) + k Red vertices and
v(k) = rho(k) - rho(k-1) is the value of the k-th defector.  All k share the
same graphs (common seeds), which keeps the differences from drowning in noise.  At n = 550 the advantage
saturates within a couple of vertices.
"""

from majority_gnp import experiments as ex

n, trials = 550, 400
values = ex.defector_values(4, n, 0.5, trials, master_seed=7)

print(" k   rho     v(k)    +/-")
print(" 0   0.500")
for v in values:
    print(f"{v.k:2d}   {v.rho:.3f}   {v.value:+.3f}  {v.ci95_halfwidth:.3f}")

for k, ok in ex.values_decreasing(values):
    if not ok:
        print(f"v({k}) < v({k + 1}) beyond the CI")
print("sum of v(k):", round(sum(v.value for v in values), 6), "= rho(4) - 1/2")
