"""Positivity horizon over a grid of starting pairs."""

# %%
import csv
import io

import numpy as np

from sosmap import lab
from sosmap.field import Field

spec = lab.SweepSpec(k=2, tau=3.0, field=Field.constant(1.05),
                     y0_range=(0.1, 2.8, 28), x1_range=(0.1, 2.8, 28), n_steps=300)
text = lab.sweep(spec)  # pass workers=N to fan rows out over processes
rows = list(csv.DictReader(io.StringIO(text)))

# %%
# Crude text map: '.' stays positive for all steps, '#' goes negative, ' ' is
# outside y0 + x1 < tau.
grid = {}
for r in rows:
    if r["admissible"] == "0":
        ch = " "
    else:
        ch = "." if r["horizon"].startswith(">=") else "#"
    grid[(float(r["y0"]), float(r["x1"]))] = ch
y0s, x1s = spec.axes()
for y0 in y0s[::-1]:
    print(f"{y0:5.2f} " + "".join(grid[(float(y0), float(x1))] for x1 in x1s))
print("      x1 from", x1s[0], "to", x1s[-1])

# %%
horizons = [int(r["horizon"]) for r in rows if r["admissible"] == "1" and r["horizon"].isdigit()]
print(f"\n{len(horizons)} starts go negative; median horizon {np.median(horizons):.0f}")
