"""Orbits of the height map at the figure presets.

Run with ``python3 demos/01_trajectories.py``.
"""

# %%
# Every preset fixes k, the field value h(n >= 1), tau and the starting pair
# (y0, x1). The orbit starts at (x1, 1) and each step uses the next h(n).
import numpy as np

from sosmap import lab, mapcore as mc

for name, pre in lab.PRESETS.items():
    t = mc.iterate(pre.params(), pre.n_steps)
    print(f"{name:>5}  k={pre.k} tau={pre.tau:<4} steps={pre.n_steps:<6} "
          f"first x<=0: {t.first_nonpositive}  escaped at: {t.escaped_at}  "
          f"max|x|: {t.max_abs:.4g}")

# %%
# With h = 0.5 the orbit circles the interior fixed point at x* = 1/(h(tau-y0-x1)).
p = lab.PRESETS["fig12"].params()
t = mc.iterate(p, 200)
xstar = (p.tau - 2) / (p.bulk_h() * (p.tau - p.y0 - p.x1))
r = np.hypot(t.xs - xstar, t.ys - xstar)
print(f"\nfig12: x* = {xstar:.6f}, distance from x* in [{r.min():.4f}, {r.max():.4f}]")

# %%
# Raising h to 1.05 moves x* inward. In float64 the orbit still stays
# positive through the captioned 95 steps.
p13 = lab.PRESETS["fig13"].params()
t13 = mc.iterate(p13, 95)
print(f"fig13: min x over 95 steps = {t13.xs.min():.6f}")

# %%
# The orbit at fig1 runs for thousands of steps near a closed curve. Rounding
# eventually pushes it off and it goes negative, then escapes.
t1 = mc.iterate(lab.PRESETS["fig1"].params(), 3000)
print(f"fig1: first x<=0 at step {t1.first_nonpositive}, escape at {t1.escaped_at}")
