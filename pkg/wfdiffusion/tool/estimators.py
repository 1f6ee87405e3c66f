# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import logging

from functools import lru_cache
from math import sqrt

import numpy as np

from scipy import stats

from ..errors import ConfigError, DegenerateFit, DomainError, FellerViolated, OrderingError
from ..runtime import (bound_additive_functional, bound_discounted_time, bound_exp_moment, bound_hit_probability, BoundVariant,
                       check_state, feller_satisfied, stationary_bin_masses)
from .engine import run_batch
from .stopping import StoppingSpec

logger = logging.getLogger(__name__)

# Two-sided 99% normal quantile.
Z99 = float(stats.norm.ppf(0.995))

# A one-sided check passes if the estimate exceeds the bound by less than
# this many standard errors.
SE_MULTIPLIER = 3.0

# Tolerance of the supermartingale comparison of the boundary test function.
SUPERMARTINGALE_SE = 3.0


class Verdict:
    """
    Outcomes of a verification.
    """

    PASS = 'pass'
    FAIL = 'fail'
    INCONCLUSIVE = 'inconclusive'

    values = (PASS, FAIL, INCONCLUSIVE)

    @staticmethod
    def combine(verdicts):
        """
        Combine verdicts: any failure fails, otherwise any inconclusive
        verdict makes the combination inconclusive.
        """
        verdicts = list(verdicts)
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INCONCLUSIVE in verdicts:
            return Verdict.INCONCLUSIVE
        return Verdict.PASS


class MonteCarloEstimate:
    """
    Sample mean of a per-path quantity with its standard error.

    :ivar float mean: Sample mean.
    :ivar float std_error: Standard error of the mean (sample standard
        deviation over ``sqrt(n)``).
    :ivar int n: Number of samples.
    :ivar float censored_fraction: Fraction of the paths that reached the
        horizon before their stopping rule fired.
    :ivar float ci99_halfwidth: Half-width of the normal 99% confidence
        interval.
    :ivar float kurtosis: Excess kurtosis of the samples (0 for constant
        samples).
    """

    def __init__(self, mean, std_error, n, censored_fraction=0.0, kurtosis=0.0):
        self.mean = float(mean)
        self.std_error = float(std_error)
        self.n = int(n)
        self.censored_fraction = float(censored_fraction)
        self.ci99_halfwidth = Z99 * self.std_error
        self.kurtosis = float(kurtosis)

    @classmethod
    def from_samples(cls, samples, censored=None):
        """
        :param samples: Per-path values.
        :param censored: Per-path censoring flags (default: none censored).
        :rtype: MonteCarloEstimate
        """
        samples = np.asarray(samples, dtype=float)
        n = len(samples)
        if n == 0:
            raise DomainError('cannot estimate a mean from zero samples')
        std = float(np.std(samples, ddof=1)) if n > 1 else 0.0
        kurtosis = float(stats.kurtosis(samples)) if std > 0 else 0.0
        censored_fraction = float(np.mean(censored)) if censored is not None else 0.0
        return cls(np.mean(samples), std / sqrt(n), n, censored_fraction, kurtosis)

    def upper(self, multiplier=SE_MULTIPLIER):
        return self.mean + multiplier * self.std_error

    def as_dict(self):
        return {
            'mean': self.mean,
            'std_error': self.std_error,
            'n': self.n,
            'censored_fraction': self.censored_fraction,
            'ci99_halfwidth': self.ci99_halfwidth,
        }

    def __repr__(self):
        return (f'{self.__class__.__name__}(mean={self.mean!r}, std_error={self.std_error!r}, n={self.n!r}, '
                f'censored_fraction={self.censored_fraction!r})')


class VerificationReport:
    """
    Outcome of comparing an estimate with a certified bound. A passing
    report can be re-checked from its own fields:
    ``mean + 3 std_error <= bound_value``.
    """

    def __init__(self, quantity, bound_value, estimate, verdict, notes=(), *, tag=None, details=None):
        """
        :param str quantity: Name of the estimated quantity.
        :param float bound_value: The bound the estimate is compared with.
        :param MonteCarloEstimate estimate: The estimate.
        :param str verdict: One of :attr:`Verdict.values`.
        :param list[str] notes: Human-readable remarks.
        :param str tag: Identifier of the checked bound.
        :param dict details: Further, check-specific values.
        """
        if verdict not in Verdict.values:
            raise DomainError(f'unknown verdict: {verdict!r}')
        self.quantity = quantity
        self.bound_value = float(bound_value)
        self.estimate = estimate
        self.verdict = verdict
        self.notes = list(notes)
        self.tag = tag
        self.details = details or {}

    def as_dict(self):
        """
        Flat, stably ordered representation used by the report writers.
        """
        return {
            'quantity': self.quantity,
            'bound_value': self.bound_value,
            **self.estimate.as_dict(),
            'verdict': self.verdict,
            'notes': '; '.join(self.notes),
            'bound_tag': self.tag,
            'details': self.details,
        }

    def __repr__(self):
        return (f'{self.__class__.__name__}(quantity={self.quantity!r}, bound_value={self.bound_value!r}, '
                f'estimate={self.estimate!r}, verdict={self.verdict!r})')


class DistributionEstimate:
    """
    Histogram estimate of a law on [0, 1] with equal-width bins.

    :ivar numpy.ndarray bin_edges: The ``K + 1`` bin edges.
    :ivar numpy.ndarray masses: The ``K`` bin masses, summing to 1.
    :ivar int sample_count: Number of samples the histogram is built from.
    """

    def __init__(self, bin_edges, masses, sample_count):
        self.bin_edges = np.asarray(bin_edges, dtype=float)
        self.masses = np.asarray(masses, dtype=float)
        self.sample_count = int(sample_count)

    @classmethod
    def from_counts(cls, counts):
        counts = np.asarray(counts)
        total = int(counts.sum())
        if total == 0:
            raise DomainError('cannot build a distribution from zero samples')
        return cls(np.linspace(0.0, 1.0, len(counts) + 1), counts / total, total)

    @property
    def bins(self):
        return len(self.masses)

    def __repr__(self):
        return f'{self.__class__.__name__}(bins={self.bins!r}, sample_count={self.sample_count!r})'


class DecayFit:
    """
    Log-linear fit of the total variation distance against time.

    :ivar float rate: Decay rate (the negated slope).
    :ivar float intercept: Intercept of the fitted line in log scale.
    :ivar numpy.ndarray times: All snapshot times.
    :ivar numpy.ndarray tvs: Distances at all snapshot times.
    :ivar numpy.ndarray used: Mask of the snapshots the fit is based on.
    :ivar numpy.ndarray residuals: Log-scale residuals of the used snapshots.
    :ivar float tv_floor: Distances not above this level are ignored.
    """

    def __init__(self, rate, intercept, times, tvs, used, residuals, tv_floor):
        self.rate = float(rate)
        self.intercept = float(intercept)
        self.times = np.asarray(times, dtype=float)
        self.tvs = np.asarray(tvs, dtype=float)
        self.used = np.asarray(used, dtype=bool)
        self.residuals = np.asarray(residuals, dtype=float)
        self.tv_floor = float(tv_floor)

    def as_dict(self):
        return {
            'rate': self.rate,
            'intercept': self.intercept,
            'times': self.times.tolist(),
            'tvs': self.tvs.tolist(),
            'used': self.used.tolist(),
            'residuals': self.residuals.tolist(),
            'tv_floor': self.tv_floor,
        }

    def __repr__(self):
        return f'{self.__class__.__name__}(rate={self.rate!r}, intercept={self.intercept!r}, used={int(self.used.sum())})'


def _one_sided_verdict(estimate, bound, *, censor_tolerance=1.0, kurtosis_threshold=None):
    notes = []
    if estimate.censored_fraction > censor_tolerance:
        notes.append(f'censored fraction {estimate.censored_fraction:.6g} exceeds tolerance {censor_tolerance:.6g}')
        logger.warning('Censored fraction %r exceeds tolerance %r, verdict is inconclusive.', estimate.censored_fraction, censor_tolerance)
        return Verdict.INCONCLUSIVE, notes
    if kurtosis_threshold is not None and estimate.kurtosis > kurtosis_threshold:
        notes.append(f'excess kurtosis {estimate.kurtosis:.6g} above {kurtosis_threshold:.6g} indicates a heavy tail')
        logger.warning('Excess kurtosis %r above %r, verdict is inconclusive.', estimate.kurtosis, kurtosis_threshold)
        return Verdict.INCONCLUSIVE, notes
    if estimate.upper() <= bound:
        return Verdict.PASS, notes
    notes.append(f'mean + {SE_MULTIPLIER:g} std_error = {estimate.upper():.6g} exceeds the bound {bound:.6g}')
    return Verdict.FAIL, notes


def _require_feller(p):
    if not feller_satisfied(p):
        raise FellerViolated(f'{p!r} violates Feller\'s condition min(a, b) > eps**2 / 2')


def _recurrence_batch(p, plan, x0, cfg, batch, jobs):
    if batch is None:
        batch = run_batch(p, cfg, x0, StoppingSpec.tau_alpha(plan.alpha), [-plan.m - 1], jobs=jobs)
    return batch


def recurrence_batch(p, plan, x0, cfg, *, jobs=1):
    """
    Simulate the paths shared by :func:`verify_exp_moment` and
    :func:`verify_additive_functional`: stopped at the entrance into
    ``[alpha, 1 - alpha]``, accumulating ``int X_s**(-m-1) ds``.

    :rtype: PathBatch
    """
    _require_feller(p)
    return _recurrence_batch(p, plan, check_state(x0, interior=True), cfg, None, jobs)


def verify_exp_moment(p, plan, x0, cfg, *, censor_tolerance=0.0, kurtosis_threshold=100.0, batch=None, jobs=1):
    """
    Estimate ``E[exp(c tau)]`` for the entrance time ``tau`` into
    ``[alpha, 1 - alpha]`` and compare it with :func:`bound_exp_moment`.

    Censored paths contribute ``exp(c t_max)``, a lower bound of their true
    value; the verdict is inconclusive if the censored fraction exceeds
    ``censor_tolerance`` or the samples are heavy-tailed. Entrance is
    detected at grid points only, which biases ``tau`` upward by up to one
    step.

    :param ModelParams p: The model.
    :param RecurrencePlan plan: The recurrence plan.
    :param float x0: Initial state.
    :param SimConfig cfg: The simulation settings.
    :param float censor_tolerance: Largest acceptable censored fraction.
    :param float kurtosis_threshold: Largest acceptable excess kurtosis.
    :param PathBatch batch: Precomputed paths (see :func:`recurrence_batch`).
    :param int jobs: Number of worker processes.
    :rtype: VerificationReport
    :raises FellerViolated: If Feller's condition fails.
    """
    _require_feller(p)
    x0 = check_state(x0, interior=True)
    batch = _recurrence_batch(p, plan, x0, cfg, batch, jobs)

    tau = batch.stop_times
    estimate = MonteCarloEstimate.from_samples(np.exp(plan.c * tau), batch.censored)
    bound = bound_exp_moment(plan, x0)
    verdict, notes = _one_sided_verdict(estimate, bound, censor_tolerance=censor_tolerance, kurtosis_threshold=kurtosis_threshold)

    discounted = MonteCarloEstimate.from_samples(np.expm1(plan.c * tau) / plan.c, batch.censored)
    notes.append('censoring and kurtosis thresholds are reporting policy')
    notes.append('entrance is detected on the time grid')
    logger.info('exp moment: mean=%r se=%r bound=%r -> %s', estimate.mean, estimate.std_error, bound, verdict)
    return VerificationReport('exp_moment', bound, estimate, verdict, notes, tag='exp-moment-bound',
                              details={
                                  'x0': x0,
                                  'plan': plan.as_dict(),
                                  'kurtosis': estimate.kurtosis,
                                  'mean_tau': float(np.mean(tau)),
                                  'discounted_time': {
                                      'mean': discounted.mean,
                                      'std_error': discounted.std_error,
                                      'bound': bound_discounted_time(plan, x0),
                                  },
                              })


def verify_additive_functional(p, plan, x0, cfg, *, censor_tolerance=0.0, batch=None, jobs=1):
    """
    Estimate ``E[int_0^tau X_s**(-m-1) ds]`` and compare it with both forms of
    :func:`bound_additive_functional`. The verdict follows the form
    established by the argument (:attr:`BoundVariant.AS_PROVED`); the outcome
    against the stated form is reported in the details.

    :rtype: VerificationReport
    :raises FellerViolated: If Feller's condition fails.
    """
    _require_feller(p)
    x0 = check_state(x0, interior=True)
    batch = _recurrence_batch(p, plan, x0, cfg, batch, jobs)

    estimate = MonteCarloEstimate.from_samples(batch.integral(-plan.m - 1), batch.censored)
    outcomes = {}
    for variant in BoundVariant.variants:
        bound = bound_additive_functional(plan, x0, variant)
        verdict, notes = _one_sided_verdict(estimate, bound, censor_tolerance=censor_tolerance)
        outcomes[variant] = {'bound': bound, 'verdict': verdict, 'notes': '; '.join(notes)}

    proved = outcomes[BoundVariant.AS_PROVED]
    notes = [proved['notes']] if proved['notes'] else []
    if outcomes[BoundVariant.AS_STATED]['verdict'] != proved['verdict']:
        notes.append(f'stated form of the bound gives {outcomes[BoundVariant.AS_STATED]["verdict"]!r}')
    logger.info('additive functional: mean=%r se=%r bound=%r -> %s', estimate.mean, estimate.std_error, proved['bound'], proved['verdict'])
    return VerificationReport('additive_functional', proved['bound'], estimate, proved['verdict'], notes, tag='additive-functional-bound',
                              details={'x0': x0, 'exponent': -plan.m - 1, 'plan': plan.as_dict(), **outcomes})


def _touch_estimate(batch):
    touched = batch.clamp_events > 0
    return MonteCarloEstimate.from_samples(touched.astype(float))


def verify_boundary_avoidance(p, cfg, x0, horizon, *, touch_tolerance=1e-3, contrast=None, refine_dt=True, jobs=1):
    """
    Estimate the fraction of paths whose scheme ever had to be clamped at the
    numerical floor or ceiling within ``horizon``. Under Feller's condition
    this should be (close to) zero, and must not grow when the time step is
    halved.

    :param float horizon: Simulated time span.
    :param float touch_tolerance: Largest acceptable touch fraction.
    :param ModelParams contrast: A model violating Feller's condition whose
        touch fraction is reported for comparison (default: none).
    :param bool refine_dt: Whether to repeat the run with half the time step.
    :rtype: VerificationReport
    """
    x0 = check_state(x0, interior=True)
    run_cfg = cfg.replace(t_max=horizon)
    estimate = _touch_estimate(run_batch(p, run_cfg, x0, jobs=jobs))
    notes = []
    if not feller_satisfied(p):
        notes.append(f'{p!r} violates Feller\'s condition, touching is expected')
    verdict = Verdict.PASS if estimate.mean <= touch_tolerance else Verdict.FAIL
    if verdict == Verdict.FAIL:
        notes.append(f'touch fraction {estimate.mean:.6g} exceeds tolerance {touch_tolerance:.6g}')
        logger.warning('Boundary touch fraction %r exceeds tolerance %r.', estimate.mean, touch_tolerance)

    details = {'x0': x0, 'horizon': horizon, 'dt': cfg.dt, 'touch_tolerance': touch_tolerance}
    if refine_dt:
        refined = _touch_estimate(run_batch(p, run_cfg.replace(dt=cfg.dt / 2), x0, jobs=jobs))
        slack = SE_MULTIPLIER * sqrt(estimate.std_error ** 2 + refined.std_error ** 2)
        details['refined'] = {'dt': cfg.dt / 2, 'touch_fraction': refined.mean, 'std_error': refined.std_error}
        if refined.mean > estimate.mean + slack:
            verdict = Verdict.FAIL
            notes.append(f'touch fraction grows to {refined.mean:.6g} with half the time step')
            logger.warning('Boundary touch fraction grows from %r to %r with half the time step.', estimate.mean, refined.mean)

    if contrast is not None:
        contrasted = _touch_estimate(run_batch(contrast, run_cfg, x0, jobs=jobs))
        details['contrast'] = {'model': contrast.as_dict(), 'feller': feller_satisfied(contrast),
                               'touch_fraction': contrasted.mean, 'std_error': contrasted.std_error}

    logger.info('boundary avoidance: touch fraction=%r -> %s', estimate.mean, verdict)
    return VerificationReport('boundary_touch_fraction', touch_tolerance, estimate, verdict, notes,
                              tag='boundary-inattainability', details=details)


def verify_hit_probability(p, bplan, x0, beta, cfg, *, jobs=1):
    """
    Estimate the probability that the process started at ``x0`` comes within
    ``beta`` of the certified endpoint before leaving its ``kappa``
    neighbourhood, and compare it with :func:`bound_hit_probability`.

    Paths censored at the horizon count as non-hitting. The details also
    compare the mean of the boundary test function at the stopping time with
    its initial value, which the supermartingale property bounds from above.

    :param BoundaryPlan bplan: The boundary plan.
    :param float beta: Distance threshold from the endpoint.
    :rtype: VerificationReport
    :raises OrderingError: Unless ``0 < beta < x0 < kappa`` in distance from
        the endpoint.
    """
    x0 = check_state(x0, interior=True)
    y0 = bplan.distance(x0)
    if not 0 < beta < y0 < bplan.kappa:
        raise OrderingError(f'hitting check requires 0 < beta < x0 < kappa (beta={beta!r}, x0={y0!r}, kappa={bplan.kappa!r})')
    bound = bound_hit_probability(bplan, x0, beta)

    stop = StoppingSpec.first_of(StoppingSpec.gamma_beta(beta, bplan.endpoint), StoppingSpec.t_kappa(bplan.kappa, bplan.endpoint))
    batch = run_batch(p, cfg, x0, stop, jobs=jobs)
    hits = np.array([reason == StoppingSpec.GAMMA_BETA for reason in batch.stop_reasons], dtype=float)
    estimate = MonteCarloEstimate.from_samples(hits, batch.censored)
    verdict, notes = _one_sided_verdict(estimate, bound)
    if estimate.censored_fraction > 0:
        notes.append(f'{estimate.censored_fraction:.6g} of the paths were censored and counted as non-hitting')

    distances = np.array([bplan.distance(x) for x in batch.final_states])
    test_values = MonteCarloEstimate.from_samples(distances ** -bplan.n)
    initial_value = y0 ** -bplan.n
    supermartingale = test_values.mean - SUPERMARTINGALE_SE * test_values.std_error <= initial_value
    if not supermartingale:
        notes.append('mean of the boundary test function at the stopping time exceeds its initial value')

    logger.info('hit probability: mean=%r se=%r bound=%r -> %s', estimate.mean, estimate.std_error, bound, verdict)
    return VerificationReport('hit_probability', bound, estimate, verdict, notes, tag='chebyshev-hit-bound',
                              details={
                                  'x0': x0,
                                  'beta': beta,
                                  'plan': bplan.as_dict(),
                                  'test_function': {
                                      'mean': test_values.mean,
                                      'std_error': test_values.std_error,
                                      'initial': initial_value,
                                      'supermartingale': bool(supermartingale),
                                  },
                              })


def _snapshot_distributions(p, cfg, x0, times, bins, jobs):
    if int(bins) != bins or bins < 1:
        raise ConfigError(f'number of bins must be a positive integer, got {bins!r}')
    batch = run_batch(p, cfg, x0, snapshot_times=times, jobs=jobs)
    states = batch.snapshots()
    result = []
    for column in states.T:
        counts, _ = np.histogram(column, bins=bins, range=(0.0, 1.0))
        result.append(DistributionEstimate.from_counts(counts))
    return result


def empirical_distribution(p, cfg, x0, t_snapshot, bins=200, *, jobs=1):
    """
    Histogram of ``X_t`` at ``t = t_snapshot`` over ``cfg.n_paths`` paths.

    :param float t_snapshot: Snapshot time, at most ``cfg.t_max``.
    :param int bins: Number of equal-width bins (default: 200).
    :rtype: DistributionEstimate
    :raises ConfigError: If the snapshot time is beyond the horizon.
    """
    x0 = check_state(x0, interior=True)
    return _snapshot_distributions(p, cfg, x0, [t_snapshot], bins, jobs)[0]


def occupation_distribution(p, cfg, x0, bins=200, *, burn_in=0.25, jobs=1):
    """
    Time-averaged histogram of the visited states over ``cfg.t_max``,
    excluding the first ``burn_in`` fraction of the horizon, pooled over all
    paths.

    :rtype: DistributionEstimate
    """
    x0 = check_state(x0, interior=True)
    if not 0 <= burn_in < 1:
        raise ConfigError(f'burn-in fraction must be in [0, 1), got {burn_in!r}')
    batch = run_batch(p, cfg, x0, occupation_bins=bins, burn_in=burn_in, jobs=jobs)
    return DistributionEstimate.from_counts(batch.occupation())


def histogram_tv(masses1, masses2):
    """
    Total variation distance of two discrete laws on the same bins:
    ``sum(|masses1 - masses2|) / 2``, clipped into [0, 1].
    """
    masses1, masses2 = np.asarray(masses1, dtype=float), np.asarray(masses2, dtype=float)
    if masses1.shape != masses2.shape:
        raise DomainError(f'histograms of different shapes: {masses1.shape} and {masses2.shape}')
    return float(min(1.0, 0.5 * np.sum(np.abs(masses1 - masses2))))


@lru_cache(maxsize=32)
def _cached_stationary_masses(p, edges):
    return stationary_bin_masses(p, np.array(edges))


def _stationary_masses(p, edges):
    return _cached_stationary_masses(p, tuple(np.asarray(edges, dtype=float).tolist()))


def tv_distance(estimate, p):
    """
    Total variation distance between a histogram estimate and the invariant
    law of the model on the same bins.

    :param DistributionEstimate estimate: The histogram.
    :param ModelParams p: The model.
    :rtype: float
    :raises FellerViolated: If the invariant law is not normalizable.
    """
    _require_feller(p)
    return histogram_tv(estimate.masses, _stationary_masses(p, estimate.bin_edges))


def sampling_tv(masses, n):
    """
    Expected total variation distance between a law on bins and the
    histogram of ``n`` independent samples of it, in the normal
    approximation: ``sum(sqrt(2 / pi) sqrt(m (1 - m) / n)) / 2``.
    """
    masses = np.asarray(masses, dtype=float)
    return float(0.5 * np.sum(np.sqrt(2.0 / np.pi) * np.sqrt(masses * (1.0 - masses) / n)))


def verify_stationary(p, cfg, x0, t_snapshot, *, bins=200, tv_tolerance=0.05, jobs=1):
    """
    Compare the empirical law at ``t_snapshot`` with the invariant law. The
    check passes if the distance is within ``tv_tolerance`` above the level
    expected from sampling noise alone.

    :rtype: VerificationReport
    :raises FellerViolated: If Feller's condition fails.
    """
    _require_feller(p)
    estimate = empirical_distribution(p, cfg, x0, t_snapshot, bins, jobs=jobs)
    tv = tv_distance(estimate, p)
    noise = sampling_tv(_stationary_masses(p, estimate.bin_edges), estimate.sample_count)
    threshold = tv_tolerance + noise
    verdict = Verdict.PASS if tv <= threshold else Verdict.FAIL
    notes = [f'distance includes the expected sampling noise of {noise:.6g} at {estimate.sample_count} samples']
    logger.info('stationary law: tv=%r threshold=%r -> %s', tv, threshold, verdict)
    return VerificationReport('stationary_tv', threshold, MonteCarloEstimate(tv, 0.0, estimate.sample_count), verdict, notes,
                              tag='stationary-tv',
                              details={'x0': x0, 't_snapshot': t_snapshot, 'bins': bins, 'tv': tv,
                                       'tv_tolerance': tv_tolerance, 'sampling_tv': noise})


def fit_log_linear_decay(times, tvs, tv_floor):
    """
    Least-squares fit of ``log(tv)`` against time, using the points with a
    distance above ``tv_floor``.

    :rtype: DecayFit
    :raises DegenerateFit: If fewer than three points are above the floor.
    """
    times, tvs = np.asarray(times, dtype=float), np.asarray(tvs, dtype=float)
    used = tvs > tv_floor
    if used.sum() < 3:
        raise DegenerateFit(f'only {int(used.sum())} distance(s) above the floor {tv_floor:.6g}, at least 3 are needed')
    slope, intercept = np.polyfit(times[used], np.log(tvs[used]), 1)
    residuals = np.log(tvs[used]) - (slope * times[used] + intercept)
    return DecayFit(-slope, intercept, times, tvs, used, residuals, tv_floor)


def fit_tv_decay(p, cfg, x0, snapshot_times, bins=200, *, jobs=1):
    """
    Estimate the exponential rate at which the law of ``X_t`` approaches the
    invariant law, from snapshots of a single batch. Distances below
    ``2 / sqrt(n_paths)`` are dominated by sampling noise and excluded.

    :param list[float] snapshot_times: At least four strictly increasing
        times.
    :rtype: DecayFit
    :raises ConfigError: If the snapshot times are not suitable.
    :raises DegenerateFit: If fewer than three distances are above the floor.
    """
    _require_feller(p)
    x0 = check_state(x0, interior=True)
    times = [float(t) for t in snapshot_times]
    if len(times) < 4 or any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
        raise ConfigError(f'decay fit requires at least 4 strictly increasing snapshot times, got {times!r}')
    estimates = _snapshot_distributions(p, cfg, x0, times, bins, jobs)
    tvs = [tv_distance(estimate, p) for estimate in estimates]
    logger.debug('Distances at %r: %r', times, tvs)
    return fit_log_linear_decay(times, tvs, 2.0 / sqrt(cfg.n_paths))


def verify_tv_decay(p, cfg, x0, snapshot_times, bins=200, *, jobs=1):
    """
    The decay check passes if the fitted rate is positive and the distance at
    the last snapshot is below the one at the first. A degenerate fit is
    inconclusive.

    :rtype: VerificationReport
    """
    try:
        fit = fit_tv_decay(p, cfg, x0, snapshot_times, bins, jobs=jobs)
    except DegenerateFit as e:
        logger.warning('TV decay fit is degenerate: %s', e)
        return VerificationReport('tv_decay_rate', 0.0, MonteCarloEstimate(0.0, 0.0, cfg.n_paths), Verdict.INCONCLUSIVE, [str(e)],
                                  tag='tv-decay', details={'x0': x0, 'snapshot_times': list(snapshot_times)})

    notes = []
    verdict = Verdict.PASS
    if not fit.rate > 0:
        verdict = Verdict.FAIL
        notes.append(f'fitted rate {fit.rate:.6g} is not positive')
    if not fit.tvs[-1] < fit.tvs[0]:
        verdict = Verdict.FAIL
        notes.append('distance does not decrease from the first to the last snapshot')
    logger.info('TV decay: rate=%r -> %s', fit.rate, verdict)
    return VerificationReport('tv_decay_rate', 0.0, MonteCarloEstimate(fit.rate, 0.0, cfg.n_paths), verdict, notes,
                              tag='tv-decay', details={'x0': x0, 'bins': bins, **fit.as_dict()})
