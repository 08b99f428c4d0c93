"""Sharp constants for periodic Sobolev embeddings H^r -> L_q and the periodic
solutions of -y'' + y = y^{q-1}."""
from .embedding import (EmbeddingParams, FourierFunction, SharpConstantResult, Status,
                        functional_J, hr_norm_sq, lq_norm, second_variation_form,
                        sharp_constant, smallest_eigenvalue, steklov_reduce)
from .phase_plane import Oval, alpha_star, f_eval, oval_roots, tau_eval
from .quadrature import (QuadResult, duality_residual, elliptic_oracle_q4, period_integral,
                         period_integral_deriv, period_limit)
from .solutions import (PeriodicProfile, band_index, count_periodic_solutions,
                        rayleigh_quotient, reconstruct_profile, solve_alpha_for_period)

__version__ = "0.1.0"
