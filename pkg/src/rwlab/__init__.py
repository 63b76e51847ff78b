"""Numerical laboratory for the quasilinear wave family
``u_tt = c(u)^2 u_xx + lambda c(u) c'(u) u_x^2`` in Riemann variables."""

from .bounds import (BoundCertificate, BoundConstants, bound_constants, certify,
                     comparison_gap, envelope_y, envelope_y_eta)
from .characteristics import CharacteristicCurve, Direction, trace, weighted_monotonicity_report
from .diagnostics import BlowUpReport, detect_blowup, energy, sup_norms
from .initial_data import (InitialData, gaussian_bump, initial_riemann, nonpositive_riemann_data,
                           simple_wave_data)
from .oracles import LinearWaveOracle, dalembert, ode_reference
from .riemann import from_riemann, source_terms, source_terms_lambda0, to_riemann
from .solver import FieldState, Grid, Order, SolverConfig, Trajectory, cfl_dt, simulate, step
from .wavespeed import (Family, WaveSpeed, arctan_speed, constant_speed, construct,
                        damping_constant, evaluate, logistic_speed, tanh_speed, validate)

__version__ = "0.1.0"
