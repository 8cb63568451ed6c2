"""Closed-form boundary laws and the non-probability measures they define."""

# %%
import math

from sosmap import boundary as bl
from sosmap.field import Field

theta, k = 0.5, 2
f = Field.geometric_normalized(theta)
laws = {"left": bl.left_infinite(theta, k, f),
        "right": bl.right_infinite(theta, k, f),
        "both": bl.both_infinite(theta, k, 1.0, f)}

# %%
# z_i for small |i|. Each law blows up on at least one side, so everything
# downstream works with log z.
for name, law in laws.items():
    print(name, [f"{bl.z_value(law, i):.4g}" for i in range(-3, 4)])

# %%
# Truncated check of the fixed-point equation. The residual shrinks like 1/N:
# the growing side contributes terms of constant size, so both sums grow linearly.
for name, law in laws.items():
    res = [bl.verify_solution_ratio(law, 1, n)[0] for n in (100, 400, 1600)]
    print(f"{name:>5} residual at i=1, N=100/400/1600:", [f"{r:.2e}" for r in res])

# %%
# Series conditions each law needs, and whether they hold.
for name, law in laws.items():
    conds = bl.law_conditions(law)
    print(name, "valid:", conds.pop("valid"), conds)

# %%
# None of them normalises, so the measures are not probability measures.
for name, law in laws.items():
    print(name, "normalisable:", bl.normalisability_check(law, 100).status.value)

# %%
# Cylinder weight on the radius-2 ball, as a log.
tree = bl.CayleySubtree.build(k, 2)
spins = [0, 1, -1, 2, 1, 0, -2, -1, 3, 2]
lm = bl.cylinder_log_measure(tree, laws["both"], spins)
print(f"\n{tree.n_vertices} vertices, log-measure {lm:.6f} (measure {math.exp(lm):.4g})")
