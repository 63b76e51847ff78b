"""
Wave speeds and the damping constant
====================================

Every run starts from a wave speed ``c(u)``. The bounds need three numbers
from it: the floor ``c_star``, the ceiling ``c_sup`` and
``A = sup c'/(2c)``.
"""

import numpy as np

from rwlab import arctan_speed, construct, logistic_speed, tanh_speed, validate
from rwlab.wavespeed import damping_constant

# %%
# The three built-in families, side by side.
for ws in (tanh_speed(2.0, 1.0), logistic_speed(1.0, 3.0), arctan_speed(2.0, 1.0)):
    print(f"{ws.describe()['family']:>8}: c_star={ws.c_star:.5f}  c_sup={ws.c_sup:.5f}  A={ws.damping_A:.10f}")

# %%
# For tanh the maximiser of c'/(2c) solves a quadratic in s = tanh(theta),
# and A = 2 - sqrt(3) at (c0, delta) = (2, 1).
print("tanh(2,1) closed form:", 2 - np.sqrt(3))

# %%
# A is estimated by dense sampling then golden-section polishing. The raw
# sampled maximum can only grow as the sample grid is refined.
ws = tanh_speed(2.0, 1.0)
for n in (65, 257, 1025, 4097):
    print(f"n={n:5d}  raw={damping_constant(ws, n_samples=n, refine=False):.12f}"
          f"  polished={damping_constant(ws, n_samples=n):.16f}")

# %%
# A user-supplied speed is checked the same way. This one decreases, which
# breaks the monotonicity assumption, and validate() says where.
bad = construct("custom", c=lambda th: 2 - np.tanh(th), c_prime=lambda th: -1 / np.cosh(th) ** 2,
                c_star=1.0, c_sup=3.0)
print(validate(bad, (-5, 5), 1001).summary())
