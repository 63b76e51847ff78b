"""
Certifying the sandwich bound
=============================

For lambda = 0 the Riemann variables stay between the envelope
``y(t) = P + (m0 - P) exp(A P t)`` and the constant ``P``. Here we run a
modest grid and check every stored frame.
"""

import numpy as np

from rwlab import Grid, SolverConfig, bound_constants, certify, envelope_y, gaussian_bump, simulate, tanh_speed

ws = tanh_speed(2.0, 1.0)
grid = Grid(-40.0, 40.0, 2000)
data = gaussian_bump(1.0, 0.0, 2.0, 0.5, grid.x)
traj = simulate(data, grid, ws, SolverConfig(t_end=10.0, output_every=20))

k = bound_constants(traj.frames[0].R, traj.frames[0].S, ws)
print(f"P={k.P:.4f}  m0={k.m0:.4f}  A={k.A:.6f}")

# %%
# The envelope falls quickly: the lower bound is generous, the upper bound
# is where the data lives.
for t in (0, 2, 5, 10):
    print(f"y({t:>2}) = {envelope_y(k, t):10.3f}")

# %%
# Margins per frame; negative means inside the bound.
cert = certify(traj, k)
print(f"tol={cert.tol:.3g}  verdict={cert.verdict}")
print(f"max(R,S) - P never exceeds {cert.max_upper_violation:+.3f}")
print(f"y - min(R,S) never exceeds {cert.max_lower_violation + 0.0:+.3f}")
worst = max(cert.frames, key=lambda f: max(f.maxR_minus_P, f.maxS_minus_P))
print(f"closest approach to P at t={worst.t:.3f}")
