# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import os

from .cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, logger, report_document, save_document
from .runtime import ModelParams, plan_boundary, plan_recurrence
from .tool import (check_plan_drift, fuzz_generator, JsonReportWriter, MonteCarloEstimate, recurrence_batch, VerificationReport, Verdict,
                   verify_additive_functional, verify_boundary_avoidance, verify_exp_moment, verify_hit_probability, verify_stationary, verify_tv_decay, write_scan_csv)
from .tool.drift import FD_TOLERANCE, MARGIN_TOLERANCE

# Largest acceptable relative discrepancy between the grouped and the raw
# form of the generator.
IDENTITY_TOLERANCE = 1e-12


def _recurrence_plan(config):
    settings = config.plan
    return plan_recurrence(config.model, settings.c, settings.m_fraction, settings.alpha_fraction, multiplier=settings.multiplier)


def check_recurrence(args):
    config = args.config
    plan = _recurrence_plan(config)
    batch = recurrence_batch(config.model, plan, config.verify.x0, config.sim, jobs=args.jobs)
    return [
        verify_exp_moment(config.model, plan, config.verify.x0, config.sim, censor_tolerance=config.verify.censor_tolerance,
                          kurtosis_threshold=config.verify.kurtosis_threshold, batch=batch),
        verify_additive_functional(config.model, plan, config.verify.x0, config.sim, censor_tolerance=config.verify.censor_tolerance,
                                   batch=batch),
    ]


def check_boundary(args):
    config, settings = args.config, args.config.verify
    contrast = ModelParams(settings.contrast_a, settings.contrast_b, config.model.epsilon)
    return [verify_boundary_avoidance(config.model, config.sim, settings.boundary_x0, settings.boundary_horizon,
                                      touch_tolerance=settings.boundary_touch_tolerance, contrast=contrast,
                                      refine_dt=settings.refine_dt, jobs=args.jobs)]


def check_hitprob(args):
    config, settings = args.config, args.config.verify
    bplan = plan_boundary(config.model, settings.hit_endpoint, config.plan.kappa_fraction)
    return [verify_hit_probability(config.model, bplan, settings.hit_x0, settings.hit_beta, config.sim, jobs=args.jobs)]


def check_stationary(args):
    config, settings = args.config, args.config.verify
    return [verify_stationary(config.model, config.sim, settings.stationary_x0, settings.stationary_time,
                              bins=settings.bins, tv_tolerance=settings.tv_tolerance, jobs=args.jobs)]


def check_decay(args):
    config, settings = args.config, args.config.verify
    return [verify_tv_decay(config.model, config.sim, settings.decay_x0, settings.decay_times, settings.bins, jobs=args.jobs)]


def check_drift(args):
    """
    Scan the drift inequalities of the plans at both endpoints, check that an
    inflated ``alpha`` is detected as a violation, and fuzz the closed form
    of the generator against its raw terms and finite differences. The scans
    are also saved as CSV files.
    """
    config = args.config
    p = config.model
    plan = _recurrence_plan(config)
    bplans = [plan_boundary(p, endpoint, config.plan.kappa_fraction) for endpoint in (0, 1)]
    scans, inflated = check_plan_drift(p, plan, bplans, config.verify.drift_grid_size, clamp_eps=config.sim.clamp_eps)
    fuzz = fuzz_generator(config.verify.fuzz_draws, config.master_seed)

    os.makedirs(config.output.dir, exist_ok=True)
    for scan in scans + [inflated]:
        fn = os.path.join(config.output.dir, f'{scan.name}.csv')
        with open(fn, 'w', encoding='utf-8', newline='') as f:
            write_scan_csv(scan, f)
        logger.debug('Scan saved to %s.', fn)

    notes = []
    for scan in scans:
        if not scan.holds:
            notes.append(f'{scan.name} is violated (margin {scan.inequality_margin:.6g})')
        if not scan.max_rel_err <= FD_TOLERANCE:
            notes.append(f'{scan.name} disagrees with finite differences by {scan.max_rel_err:.6g} relative')
    if inflated.holds:
        notes.append('the inflated alpha was not detected as a violation')
    if not fuzz.identity_err <= IDENTITY_TOLERANCE:
        notes.append(f'grouped and raw generator differ by {fuzz.identity_err:.6g} relative')
    if not fuzz.fd_err <= FD_TOLERANCE:
        notes.append(f'closed form and finite differences of the generator differ by {fuzz.fd_err:.6g} relative')
    verdict = Verdict.FAIL if notes else Verdict.PASS

    margin = min(scan.inequality_margin for scan in scans)
    estimate = MonteCarloEstimate(margin, 0.0, sum(len(scan.grid) for scan in scans))
    return [VerificationReport('drift_inequality_margin', MARGIN_TOLERANCE, estimate, verdict, notes, tag='drift-inequality',
                               details={
                                   'scans': [scan.as_dict() for scan in scans],
                                   'inflated_alpha': inflated.as_dict(),
                                   'generator_fuzz': fuzz.as_dict(),
                               })]


checks = {
    'recurrence': check_recurrence,
    'boundary': check_boundary,
    'hitprob': check_hitprob,
    'stationary': check_stationary,
    'decay': check_decay,
    'drift': check_drift,
}


def exit_code(verdicts):
    """
    Aggregate verdicts into an exit code: 0 if all pass, 1 if any fails, 3 if
    none fails but some are inconclusive.
    """
    verdict = Verdict.combine(verdicts)
    return {Verdict.PASS: EXIT_PASS, Verdict.FAIL: EXIT_FAIL, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


def cmd_verify(args):
    """
    Run the selected checks (``args.which``; ``all`` runs every check), save
    one report per verified quantity and a ``summary.json``.

    :return: Exit code.
    """
    selected = list(checks) if args.which == 'all' else [args.which]
    summary = []
    for name in selected:
        logger.info('Running check %s.', name)
        for report in checks[name](args):
            files = save_document(args, report_document(args.config, report.tag, report.as_dict()), report.quantity)
            summary.append({'check': name, 'quantity': report.quantity, 'bound_tag': report.tag, 'verdict': report.verdict,
                            'files': [os.path.basename(fn) for fn in files]})
            logger.info('%s: %s', report.quantity, report.verdict)

    code = exit_code(entry['verdict'] for entry in summary)
    document = report_document(args.config, 'summary', {'checks': summary, 'verdict': Verdict.combine(entry['verdict'] for entry in summary), 'exit_code': code})
    os.makedirs(args.config.output.dir, exist_ok=True)
    JsonReportWriter().save(document, args.config.output.dir, 'summary')
    return code
