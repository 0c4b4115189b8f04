"""Numerical check of the Rademacher complexity bounds on a tiny instance.

Builds a small random dataset and initialization, then compares:
  - the exhaustive Monte-Carlo feasible estimate (exact over all 2^n sign
    vectors, projected gradient ascent per sign vector),
  - the path-norm upper bound,
  - the Frobenius-product upper bound,
  - the ReLU lower bound.
The estimate is a certified lower bound on the true complexity, so it must
land between the theoretical lower and upper bounds.

Run:  python3 demos/rademacher_probe.py
"""

import numpy as np

from snnbounds import (RELU, RadConfig, init_kaiming, make_rng,
                       mc_rad_estimate, rad_lower, rad_upper_frob,
                       rad_upper_path)
from snnbounds.bounds import class_bound_inputs
from snnbounds.datasets import Dataset

n, d, m = 8, 4, 4
R_V = 1.0
rng = make_rng(0)
X = rng.standard_normal((d, n))
X /= np.linalg.norm(X, axis=0)
_, snap = init_kaiming(rng, m, d, 1)
W0 = np.asarray(snap.W0)
r0 = float(np.min(np.linalg.norm(W0, axis=1)))
R_W = r0 + 0.5  # the lower bound needs R_W >= min_j ||w_j0||

est = mc_rad_estimate(X, W0, R_W, R_V, RELU,
                      cfg=RadConfig(pga_steps=200, pga_restarts=5, seed=0))
ds = Dataset(X, np.ones(n))
inputs = class_bound_inputs(ds, W0, RELU, R_W=R_W, R_V=R_V)

print(f"instance: n={n} d={d} m={m}  R_W={R_W:.3f} R_V={R_V}")
print(f"lower bound (theory)     {rad_lower(inputs, r0):.6f}")
print(f"MC estimate (exhaustive) {est.mean:.6f}  +- {est.std_error:.6f}")
print(f"upper bound (path-norm)  {rad_upper_path(inputs):.6f}")
print(f"upper bound (Frobenius)  {rad_upper_frob(inputs):.6f}")
assert rad_lower(inputs, r0) <= rad_upper_path(inputs)
assert est.mean <= rad_upper_path(inputs)
print("sandwich holds")
