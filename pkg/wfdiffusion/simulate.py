# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import os

from .cli import EXIT_PASS, logger
from .runtime import plan_boundary, plan_recurrence
from .tool import run_batch, StoppingSpec, write_batch_csv


def stopping_rule(config):
    """
    The stopping rule and functionals selected by ``simulate.stop``:

    - ``tau_alpha``: entrance into ``[alpha, 1 - alpha]`` of the recurrence
      plan, accumulating ``int X_s**(-m-1) ds``;
    - ``hit``: coming within ``verify.hit_beta`` of ``verify.hit_endpoint``
      or leaving its ``kappa`` neighbourhood;
    - ``none``: run to the horizon.

    :rtype: tuple[StoppingSpec,list[float]]
    """
    p, settings = config.model, config.plan
    if config.simulate.stop == 'tau_alpha':
        plan = plan_recurrence(p, settings.c, settings.m_fraction, settings.alpha_fraction, multiplier=settings.multiplier)
        return StoppingSpec.tau_alpha(plan.alpha), [-plan.m - 1]
    if config.simulate.stop == 'hit':
        bplan = plan_boundary(p, config.verify.hit_endpoint, settings.kappa_fraction)
        return StoppingSpec.first_of(StoppingSpec.gamma_beta(config.verify.hit_beta, bplan.endpoint),
                                     StoppingSpec.t_kappa(bplan.kappa, bplan.endpoint)), []
    return None, []


def cmd_simulate(args):
    """
    Simulate a batch of paths from ``simulate.x0`` and dump one CSV row per
    path into ``paths.csv``.

    :return: Exit code.
    """
    config = args.config
    stop, functionals = stopping_rule(config)
    batch = run_batch(config.model, config.sim, config.simulate.x0, stop, functionals, jobs=args.jobs)

    os.makedirs(config.output.dir, exist_ok=True)
    fn = os.path.join(config.output.dir, 'paths.csv')
    with open(fn, 'w', encoding='utf-8', newline='') as f:
        write_batch_csv(batch, f)
    logger.info('%d path(s) saved to %s.', len(batch), fn)
    return EXIT_PASS
