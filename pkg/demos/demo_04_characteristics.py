"""
Tracing characteristics
=======================

Along a backward Minus curve ``dX/dtau = -c(u)`` the quantity
``R/sqrt(c)`` should never increase when lambda = 0. The tracer checks
that on the stored solution.
"""

import numpy as np

from rwlab import Grid, SolverConfig, gaussian_bump, simulate, tanh_speed, trace, weighted_monotonicity_report
from rwlab.characteristics import random_anchors, speed_sandwich_ok

ws = tanh_speed(2.0, 1.0)
grid = Grid(-30.0, 30.0, 1500)
traj = simulate(gaussian_bump(1.0, 0.0, 2.0, 0.5, grid.x), grid, ws, SolverConfig(t_end=5.0, output_every=5))

curve = trace(traj, (4.0, -3.0), "minus")
print(f"Minus curve from (4, -3) starts at X(0) = {curve.X[0]:.4f}")
print("first samples (tau, X, R/sqrt(c)):")
print(np.array2string(curve.rows()[:4], precision=4))

# %%
# A batch of random anchors in each direction.
rng = np.random.default_rng(1)
for direction in ("minus", "plus"):
    reps = [weighted_monotonicity_report(trace(traj, a, direction)) for a in random_anchors(traj, direction, 10, rng)]
    print(f"{direction:>5}: {sum(r.passed for r in reps)}/10 pass, "
          f"worst increase rate {max(r.max_increase_rate for r in reps):.2e} (tol {reps[0].tol:.3f})")

# %%
# Curve slopes stay between c_star and c_sup.
print("speed sandwich holds:", speed_sandwich_ok(curve, ws.c_star, ws.c_sup))
