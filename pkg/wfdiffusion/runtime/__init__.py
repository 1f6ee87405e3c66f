# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from .lyapunov import (generator_apply, generator_apply_fd, generator_apply_fd_scaled, generator_apply_scaled, generator_terms, generator_weight,
                       LyapunovSpec)
from .params import check_state, diffusion, drift, endpoint_feller_satisfied, feller_satisfied, ModelParams
from .plan import (bound_additive_functional, bound_discounted_time, bound_exp_moment, bound_hit_probability, BoundaryPlan, BoundVariant,
                   check_boundary_plan, check_recurrence_plan, plan_boundary, plan_recurrence, RecurrencePlan)
from .stationary import beta_shape, stationary_bin_masses, stationary_cdf, stationary_density, stationary_mean
