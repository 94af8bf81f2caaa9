"""Best-quadratic-fit diffusion analysis of quasi-periodic MSD signals."""

from .bqf import (Moments, QuadraticFit, compute_moments, fit_closed_form, fit_numeric_oracle,
                  fit_via_moments)
from .criteria import (CriterionReport, NotDiffusiveError, curious_gamma_closed_form,
                       diffusion_coefficient, diffusion_criterion, moment_bound_check,
                       theorem2_check, theorem3_check, theorem3_scan)
from .signals import (QuasiPeriodicSignal, SampledCurve, bml_divergence_diagnostic,
                      curious_signal, eval_signal, sample_curve)
from .specfun import eval_G, eval_H, find_H_max, find_mu_zero, mu_of_epsilon

__version__ = "0.1.0"
