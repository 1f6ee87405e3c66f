# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from .cli import EXIT_PASS, logger, report_document, save_document
from .runtime import plan_boundary, plan_recurrence


def plan_document(config):
    """
    The recurrence plan and the boundary plans of both endpoints for the
    configured model, with the admissible intervals of their free
    parameters.

    :param RunConfig config: The run configuration.
    :rtype: dict
    :raises FellerViolated: If Feller's condition fails.
    """
    p, settings = config.model, config.plan
    plan = plan_recurrence(p, settings.c, settings.m_fraction, settings.alpha_fraction, multiplier=settings.multiplier)
    bplans = [plan_boundary(p, endpoint, settings.kappa_fraction) for endpoint in (0, 1)]
    return {
        'model': p.as_dict(),
        'recurrence': {
            **plan.as_dict(),
            'm_interval': [0.0, plan.m_upper],
            'alpha_interval': [0.0, plan.alpha_upper],
        },
        'boundary': [{**bplan.as_dict(), 'kappa_interval': [0.0, bplan.kappa_upper]} for bplan in bplans],
    }


def cmd_plan(args):
    """
    Compute the plans of the configured model, log them and save them as
    ``plan.<ext>``.

    :return: Exit code.
    """
    document = plan_document(args.config)
    recurrence = document['recurrence']
    logger.info('Recurrence plan: c=%r m=%r alpha=%r C(m)=%r g(m)=%r',
                recurrence['c'], recurrence['m'], recurrence['alpha'], recurrence['C_m'], recurrence['g_m'])
    for bplan in document['boundary']:
        logger.info('Boundary plan (endpoint %d): kappa=%r b0=%r n=%r', bplan['endpoint'], bplan['kappa'], bplan['b0'], bplan['n'])
    for fn in save_document(args, report_document(args.config, 'plan', document), 'plan'):
        logger.info('Plan saved to %s.', fn)
    return EXIT_PASS
