"""
Energy, and what lambda changes
===============================

At lambda = 1 the energy ``int u_t^2 + c^2 u_x^2`` is conserved. The same
quadratic terms that make it conserved can also drive gradients to
blow up, which the lambda = 0 equation rules out.
"""

import warnings

from rwlab import Grid, Order, SolverConfig, detect_blowup, gaussian_bump, simulate, simple_wave_data, tanh_speed
from rwlab.diagnostics import relative_energy_drift

ws = tanh_speed(2.0, 1.0)

# %%
# Energy drift shrinks as the grid is refined.
for n in (1000, 2000):
    grid = Grid(-40.0, 40.0, n)
    traj = simulate(gaussian_bump(1.0, 0.0, 2.0, 0.0, grid.x), grid, ws,
                    SolverConfig(t_end=5.0, lam=1.0, order=Order.MUSCL2, output_every=50))
    print(f"lambda=1, n={n}: relative energy drift {relative_energy_drift(traj):.2e}")

# %%
# A steep left-moving simple wave: S0 = 0 and R0 is large on one flank.
grid = Grid(-10.0, 10.0, 1500)
data = simple_wave_data(gaussian_bump(3.0, 0.0, 0.4, 0.0, grid.x), ws)
for lam in (0.0, 1.0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        traj = simulate(data, grid, ws, SolverConfig(t_end=3.0, lam=lam, order=Order.MUSCL2, output_every=2))
    rep = detect_blowup(traj, 30.0)
    peak = (rep.peak_history[:, 1] + rep.peak_history[:, 2]).max()
    when = f"at t={rep.t_detect:.3f}" if rep.detected else "never"
    print(f"lambda={lam:.0f}: peak sup|u_t|+sup|u_x| = {peak:6.1f}, crosses 30 {when}")
    if rep.riccati_fit and rep.riccati_fit.t_star:
        print(f"          heuristic 1/sup|u_x| extrapolation hits zero near t={rep.riccati_fit.t_star:.3f}")
