"""
Convergence against d'Alembert
==============================

With a constant speed the equation is linear and d'Alembert gives the
exact answer, so grid refinement exposes the order of each scheme.
"""

import numpy as np

from rwlab import Grid, LinearWaveOracle, Order, SolverConfig, constant_speed, gaussian_bump, simulate
from rwlab.oracles import dalembert_periodic

ws = constant_speed(2.0)


def l1_error(n, order, t=3.0):
    grid = Grid(-20.0, 20.0, n)
    data = gaussian_bump(1.0, 0.0, 2.0, 0.0, grid.x)
    u = simulate(data, grid, ws, SolverConfig(t_end=t, order=order, output_every=10**6)).final.u
    exact = dalembert_periodic(LinearWaveOracle.from_data(data, 2.0), t, grid.x, grid.length)
    return grid.dx * np.sum(np.abs(u - exact))


# %%
# Halving dx should halve the upwind error and quarter the MUSCL one.
for order in Order:
    errs = [l1_error(n, order) for n in (500, 1000, 2000)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    print(f"{order.value:>8}: " + "  ".join(f"{e:.3e}" for e in errs)
          + "   ratios " + ", ".join(f"{r:.2f}" for r in ratios))
