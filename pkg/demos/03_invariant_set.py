"""The candidate invariant region I and a grid check of F(I) in I."""

# %%
import numpy as np

from sosmap import geometry as geo, mapcore as mc

p = mc.make_params(2, 3.0, 1.0, 0.5, 1.48589)
spec = geo.invariant_set(p)
print(f"a = {spec.a:.6f}, x_hat = {spec.x_hat:.6f}, x_hat0 = {spec.x_hat0:.6f}")
print(f"tau bound for k=2: {geo.invariance_tau_bound(2)}; condition holds: {spec.condition_ok}")

# %%
# Map a 100 x 100 grid of I forward once and count images outside I.
violations, worst = geo.verify_invariance(spec, p, 100)
print(f"grid check: {violations} of 10000 images leave I, worst margin {worst:.4f}")

# %%
# The corner (a, a) is in I, since psi(a) - a <= a <= psi(a). Its image
# has x = psi(a) - a, which is 0 here, and y = a. A point with x = 0 needs
# y = 0, so the image is outside.
corner = (spec.a, spec.a)
img = mc.step_forward(p, corner)
print(f"corner in I: {geo.contains(spec, corner)}; image ({img.x:.3g}, {img.y:.6f}) "
      f"in I: {geo.contains(spec, img)}")

# %%
# The map is conjugate to its inverse by the coordinate swap.
rng = np.random.default_rng(0)
print("conjugacy residual:", geo.conjugacy_residual(p, rng.uniform(0, 2, size=(1000, 2))))
