"""Fixed points and their eigenvalues as tau varies."""

# %%
import math

import numpy as np

from sosmap import mapcore as mc, spectral as sp

# The origin is always a saddle with eigenvalues theta and 1/theta.
p = mc.make_params(2, 3.0, 1.0, 0.5, 1.48589)
r0, r1 = sp.spectral_reports(p)
print("origin:", r0.type_tag.value, [f"{abs(e):.6f}" for e in r0.eigenvalues])
print("interior:", r1.type_tag.value, r1.regime.value,
      f"rotation = {r1.rotation_angle:.6f} (pi/3 = {math.pi / 3:.6f})")

# %%
# The interior point has trace 2k - (k-1) tau. It sits on the unit circle until
# tau = 2(k+1)/(k-1), where both eigenvalues meet at -1, then becomes a saddle.
for k in (2, 3, 4):
    upper, quarter = sp.regime_thresholds(k)
    print(f"\nk={k}: elliptic for tau < {upper:.4f}, eigenvalues +-i at tau = {quarter:.4f}")
    for tau in np.linspace(2.2, upper + 1.0, 6):
        rep = sp.spectral_reports(mc.make_params(k, float(tau), 1.0, 0.4 * tau, 0.4 * tau))[1]
        angle = "" if rep.rotation_angle is None else f" angle={rep.rotation_angle:.4f}"
        print(f"  tau={tau:6.3f} trace={rep.trace:+.4f} {rep.regime.value}{angle}")

# %%
# k=3, tau=4 lands on the double -1 case.
rep = sp.spectral_reports(mc.make_params(3, 4.0, 1.0, 1.2, 0.8))[1]
print("\nk=3 tau=4:", rep.eigenvalues, sorted(r.value for r in rep.resonances))
