# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import csv
import logging

from collections import namedtuple

import numpy as np

from ..errors import DomainError
from ..runtime import (check_recurrence_plan, feller_satisfied, generator_apply, generator_apply_fd_scaled, generator_apply_scaled, generator_terms,
                       LyapunovSpec, ModelParams)
from .engine import path_generator

logger = logging.getLogger(__name__)

# A drift inequality holds if its margin is not below this level.
MARGIN_TOLERANCE = -1e-12

# Largest acceptable relative discrepancy between the closed form of the
# generator and its finite-difference evaluation.
FD_TOLERANCE = 1e-6

# Relative errors are taken with respect to the closed form, but never to less
# than this fraction of the magnitude of the raw generator terms.
RELATIVE_ERROR_FLOOR = 1e-6


IdentityCheck = namedtuple('IdentityCheck', ['lhs', 'rhs', 'abs_err', 'scale'])
IdentityCheck.__doc__ = """
Comparison of the grouped closed form of the generator (``lhs``) with the
sum of its raw terms (``rhs``). ``scale`` is the sum of the absolute values of
the raw terms.
"""


def relative_error(value, reference, scale):
    """
    Relative deviation of ``value`` from ``reference``. Where the reference is
    close to a sign change, the deviation is related to ``scale`` (the
    magnitude of the raw terms) times :data:`RELATIVE_ERROR_FLOOR` instead.
    Works elementwise on arrays.
    """
    denominator = np.maximum(np.abs(reference), RELATIVE_ERROR_FLOOR * np.asarray(scale))
    return np.where(denominator > 0, np.abs(value - reference) / np.where(denominator > 0, denominator, 1.0), 0.0)


class DriftScanReport:
    """
    Values of the generator over a grid near an endpoint, checked against a
    required right-hand side.

    All values are scaled: divided by the positive weight
    ``(k + 1) exp(c t) d**(-k-1)``, ``d`` being the distance of the grid point from
    the scanned endpoint and ``k`` the exponent of the test function. The
    scaling keeps the signs (and thus the verdict) unchanged while avoiding
    overflow near the endpoint.

    :ivar str name: Name of the scanned inequality.
    :ivar numpy.ndarray grid: The scanned states.
    :ivar numpy.ndarray closed_form: Closed-form generator values.
    :ivar numpy.ndarray fd_values: Finite-difference generator values.
    :ivar numpy.ndarray required_rhs: The right-hand side the generator must
        not exceed.
    :ivar numpy.ndarray margins: ``required_rhs - closed_form``.
    :ivar float max_rel_err: Largest relative deviation of the
        finite-difference values from the closed form (see
        :func:`relative_error`).
    :ivar float inequality_margin: Smallest margin.
    :ivar bool holds: Whether the smallest margin is at least
        :data:`MARGIN_TOLERANCE`.
    """

    def __init__(self, name, grid, closed_form, fd_values, required_rhs, scales=None):
        self.name = name
        self.grid = np.asarray(grid, dtype=float)
        self.closed_form = np.asarray(closed_form, dtype=float)
        self.fd_values = np.asarray(fd_values, dtype=float)
        self.required_rhs = np.asarray(required_rhs, dtype=float)
        self.margins = self.required_rhs - self.closed_form
        scales = np.abs(self.closed_form) if scales is None else np.asarray(scales, dtype=float)
        self.max_rel_err = float(np.max(relative_error(self.fd_values, self.closed_form, scales)))
        self.inequality_margin = float(np.min(self.margins))
        self.holds = self.inequality_margin >= MARGIN_TOLERANCE

    def as_dict(self):
        return {
            'name': self.name,
            'grid_size': len(self.grid),
            'grid_min': float(self.grid.min()),
            'grid_max': float(self.grid.max()),
            'max_rel_err': self.max_rel_err,
            'inequality_margin': self.inequality_margin,
            'holds': self.holds,
        }

    def __repr__(self):
        return (f'{self.__class__.__name__}(name={self.name!r}, inequality_margin={self.inequality_margin!r}, '
                f'max_rel_err={self.max_rel_err!r}, holds={self.holds!r})')


def _fd_step(x, fd_step):
    return min(fd_step, min(x, 1.0 - x) / 2)


def _distance_grid(upper, grid_size, clamp_eps):
    if int(grid_size) != grid_size or grid_size < 2:
        raise DomainError(f'grid size must be an integer of at least 2, got {grid_size!r}')
    lower = 10 * clamp_eps
    if not lower < upper:
        raise DomainError(f'scan interval [{lower!r}, {upper!r}] is empty')
    return np.geomspace(lower, upper, int(grid_size))


def _scan(name, q, spec, t, distances, required, fd_step, endpoint):
    # Scaled evaluation at distances from endpoint 0 of q.
    closed = [generator_apply_scaled(q, spec, t, d) for d in distances]
    fd = [generator_apply_fd_scaled(q, spec, t, d, _fd_step(d, fd_step)) for d in distances]
    scales = [sum(abs(term) for term in generator_terms(q, spec, t, d, scaled=True)) for d in distances]
    grid = distances if endpoint == 0 else 1.0 - distances
    report = DriftScanReport(name, grid, closed, fd, required, scales)
    logger.debug('%r', report)
    return report


def scan_recurrence_drift(p, plan, grid_size=1000, *, endpoint=0, t=0.0, clamp_eps=1e-12, fd_step=1e-5):
    """
    Scan the drift inequality of the recurrence test function near an
    endpoint: on a geometric grid of distances in ``[10 clamp_eps, alpha]``
    from the endpoint, the generator of ``exp(c t) x**(-m)`` (or of its
    mirrored counterpart ``exp(c t) (1 - x)**(-m)`` at endpoint 1) must not
    exceed ``-(g(m) / 2) exp(c t) d**(-m-1)``, ``d`` being the distance from
    the endpoint. In scaled units the right-hand side is the constant
    ``-g(m) / (2 (m + 1))``.

    At endpoint 1 the scan is performed on the mirrored model; the reported
    grid is in the original coordinate.

    :param ModelParams p: The model.
    :param RecurrencePlan plan: The recurrence plan (need not be valid; a
        plan with a too large ``alpha`` is expected to violate the
        inequality).
    :param int grid_size: Number of grid points (default: 1000).
    :param int endpoint: 0 or 1 (default: 0).
    :param float t: Time at which the generator is evaluated (default: 0).
    :param float fd_step: Largest finite-difference step.
    :rtype: DriftScanReport
    """
    if endpoint not in (0, 1):
        raise DomainError(f'endpoint must be 0 or 1, got {endpoint!r}')
    q = p if endpoint == 0 else p.swap()
    distances = _distance_grid(plan.alpha, grid_size, clamp_eps)
    required = np.full(len(distances), -0.5 * plan.g_m / (plan.m + 1))
    return _scan(f'recurrence_drift_endpoint{endpoint}', q, LyapunovSpec.lower(plan.m, plan.c), t, distances, required, fd_step, endpoint)


def scan_boundary_drift(p, bplan, grid_size=1000, *, clamp_eps=1e-12, fd_step=1e-5):
    """
    Scan the drift inequality of the boundary test function ``d**(-n)``,
    ``d`` being the distance from the certified endpoint: on a geometric grid
    of distances in ``[10 clamp_eps, kappa]``, its generator must not exceed
    ``-(n (n + 1) eps**2 / 2) d**(-n)``, which holds as long as
    ``b0 >= (n + 1) eps**2 / 2``. In scaled units the right-hand side is
    ``-(n eps**2 / 2) d``.

    At endpoint 1 the scan is performed on the mirrored model; the reported
    grid is in the original coordinate.

    :param BoundaryPlan bplan: The boundary plan.
    :rtype: DriftScanReport
    """
    q = p if bplan.endpoint == 0 else p.swap()
    distances = _distance_grid(bplan.kappa, grid_size, clamp_eps)
    required = -bplan.n * q.epsilon * q.epsilon / 2 * distances
    return _scan(f'boundary_drift_endpoint{bplan.endpoint}', q, LyapunovSpec.boundary(bplan.n), 0.0, distances, required, fd_step,
                 bplan.endpoint)


def inflated_plan(plan, factor=2.0):
    """
    A copy of the plan with ``alpha`` set to ``factor`` times its admissible
    upper limit (capped below 1/2), for which the recurrence drift inequality
    is expected to fail near the threshold.
    """
    return plan.replace(alpha=min(factor * plan.alpha_upper, 0.5 - 1e-9))


def ito_expansion_identity(p, m, c, t, x):
    """
    Compare the grouped closed form of the generator of
    ``exp(c t) x**(-m)`` with the sum of its raw time, drift and diffusion
    terms.

    :rtype: IdentityCheck
    """
    spec = LyapunovSpec.lower(m, c)
    lhs = generator_apply(p, spec, t, x)
    terms = generator_terms(p, spec, t, x)
    rhs = sum(terms)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs), sum(abs(term) for term in terms))


class FuzzReport:
    """
    Largest relative discrepancies found by :func:`fuzz_generator`.

    :ivar int n: Number of draws.
    :ivar float identity_err: Closed form against the sum of raw terms,
        relative to the magnitude of the raw terms.
    :ivar float fd_err: Closed form against finite differences (see
        :func:`relative_error`).
    :ivar dict kinds: Number of draws per test function kind.
    """

    def __init__(self, n, identity_err, fd_err, kinds=None):
        self.n = n
        self.identity_err = identity_err
        self.fd_err = fd_err
        self.kinds = kinds or {}

    def as_dict(self):
        return {'n': self.n, 'identity_err': self.identity_err, 'fd_err': self.fd_err, 'kinds': dict(self.kinds)}

    def __repr__(self):
        return f'{self.__class__.__name__}(n={self.n!r}, identity_err={self.identity_err!r}, fd_err={self.fd_err!r})'


def _draw_model(rng):
    while True:
        a, b = rng.uniform(0.1, 5.0, size=2)
        p = ModelParams(a, b, rng.uniform(0.1, 2.0))
        if feller_satisfied(p):
            return p


def fuzz_generator(n_draws, master_seed, *, fd_step=1e-5):
    """
    Evaluate the generator of every kind of test function at random models,
    exponents, rates, times and states, and compare the closed form both with
    the sum of the raw terms and with finite differences. The comparison is
    done in scaled units (see :func:`generator_weight`), so any admissible
    exponent can be drawn.

    Models are drawn with ``a, b`` in [0.1, 5] and ``eps`` in [0.1, 2] until
    Feller's condition holds; the kind is drawn uniformly, the exponent from
    ``(0, 2 min(a, b) / eps**2 - 1)`` (one in ten recurrence draws uses the
    exponent 0), ``c`` from [0.1, 2], ``t`` from [0, 1] and ``x`` from
    [0.05, 0.95].

    :rtype: FuzzReport
    """
    rng = path_generator(master_seed, 0)
    identity_err, fd_err = 0.0, 0.0
    kinds = dict.fromkeys(LyapunovSpec.kinds, 0)
    for _ in range(n_draws):
        p = _draw_model(rng)
        kind = LyapunovSpec.kinds[int(rng.integers(len(LyapunovSpec.kinds)))]
        exponent = rng.uniform(0.0, 2 * min(p.a, p.b) / p.epsilon ** 2 - 1)
        c, t, x = rng.uniform(0.1, 2.0), rng.uniform(0.0, 1.0), rng.uniform(0.05, 0.95)
        if kind == LyapunovSpec.BOUNDARY:
            spec = LyapunovSpec.boundary(exponent)
        else:
            spec = LyapunovSpec(kind, exponent if rng.random() >= 0.1 else 0.0, c)
        kinds[kind] += 1

        closed = generator_apply_scaled(p, spec, t, x)
        terms = generator_terms(p, spec, t, x, scaled=True)
        scale = sum(abs(term) for term in terms)
        fd = generator_apply_fd_scaled(p, spec, t, x, _fd_step(x, fd_step))
        if scale > 0:
            identity_err = max(identity_err, abs(closed - sum(terms)) / scale)
        fd_err = max(fd_err, float(relative_error(fd, closed, scale)))
    return FuzzReport(n_draws, identity_err, fd_err, kinds)


scan_columns = ('x', 'closed_form', 'fd', 'required_rhs', 'margin')


def write_scan_csv(report, f):
    """
    Write the per-grid-point values of a scan into an open text file.
    """
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(scan_columns)
    for row in zip(report.grid, report.closed_form, report.fd_values, report.required_rhs, report.margins):
        writer.writerow([repr(float(v)) for v in row])




def check_plan_drift(p, plan, bplans, grid_size=1000, *, clamp_eps=1e-12):
    """
    Run all drift scans of a set of plans: the recurrence inequality at both
    endpoints, the boundary inequality of each boundary plan, and the
    recurrence inequality with an inflated ``alpha`` at the endpoint of the
    slower rate, which is expected to be violated.

    :return: The scans that must hold, and the scan that must fail.
    :rtype: tuple[list[DriftScanReport],DriftScanReport]
    """
    check_recurrence_plan(p, plan)
    scans = [scan_recurrence_drift(p, plan, grid_size, endpoint=e, clamp_eps=clamp_eps) for e in (0, 1)]
    scans += [scan_boundary_drift(p, bplan, grid_size, clamp_eps=clamp_eps) for bplan in bplans]
    inflated = scan_recurrence_drift(p, inflated_plan(plan), grid_size, endpoint=0 if p.a <= p.b else 1, clamp_eps=clamp_eps)
    inflated.name = 'recurrence_drift_inflated_alpha'
    return scans, inflated
