"""Energy-constrained continuity bounds for quantum entropic quantities."""

from .bounds import (BoundParams, QuantityPreset, afw_finite, audenaert, cb, cb_opt, cb_osc,
                     g, h2, eta, params_for, t_max)
from .errors import DomainError, PrecisionError, ResourceError, ValidationError
from .spectrum import ExplicitSpectrum, Oscillator, bd_sums, count_levels, nth_level
from .thermo import (GibbsPoint, OscillatorEnvelope, StarEnvelope, d_zero, f_bar, f_hat_inverse,
                     f_hat_star, f_max, f_osc, f_osc_bar, solve_lambda)
from .ufa import CapacityKind, UfaResult, reproduce_tables, sufficient_dim

__version__ = "0.1.0"
