"""Boundary laws of the SOS model on Cayley trees and the planar map they induce."""

from .field import Field
from .mapcore import (ModelParams, State, Trajectory, boundedness_stats, iterate, make_params,
                      positivity_horizon, step_backward, step_forward)
from .spectral import (FixedPoint, SpectralReport, classify, fixed_points, jacobian,
                       regime_thresholds)
from .geometry import (InvariantSetSpec, conjugacy_residual, contains, invariant_set,
                       verify_invariance)
from .boundary import (BoundaryLaw, CayleySubtree, SeriesVerdict, cylinder_log_measure,
                       normalisability_check, rho_residual, scl_scr_check, tail_series_verdict,
                       transfer_q, verify_solution_ratio, z_value)

__version__ = "0.1.0"
