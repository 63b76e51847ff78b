"""
Riemann variables
=================

``R = u_t + c u_x`` travels left, ``S = u_t - c u_x`` travels right, and
both pick up quadratic sources weighted by ``c'/(4c)``.
"""

import numpy as np

from rwlab import from_riemann, source_terms, source_terms_lambda0, to_riemann

R, S = to_riemann(1.0, 2.0, 3.0)
print("to_riemann(1, 2, c=3) ->", (R, S))
print("from_riemann back     ->", from_riemann(R, S, 3.0))

# %%
# Sources at one point for each lambda. At lambda = 1 they are equal and
# opposite; at lambda = 0 the specialised form agrees.
for lam in (0.0, 0.5, 1.0, 1.5, 2.0):
    fR, fS = source_terms(2.0, 1.0, 1.0, 0.5, lam)
    print(f"lambda={lam:.1f}: f_R={fR:+.4f}  f_S={fS:+.4f}")
print("lambda=0 specialised:", tuple(source_terms_lambda0(2.0, 1.0, 1.0, 0.5)))

# %%
# Where R == S (no spatial gradient) the sources vanish exactly, not just
# approximately, for every lambda.
r = np.random.default_rng(0).normal(size=5)
print("R == S sources:", [tuple(map(float, np.abs(source_terms(r, r, 1.3, 0.7, lam)).max(axis=1)))
                          for lam in (0, 1, 2)])
