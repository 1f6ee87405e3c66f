# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from math import exp, log, log1p

import numpy as np

from scipy.integrate import quad
from scipy.special import betaln

from ..errors import DomainError, FellerViolated
from .params import check_state, feller_satisfied

# Absolute tolerance of the adaptive quadratures below.
QUAD_EPSABS = 1e-10


def beta_shape(p):
    """
    Shape parameters ``(2a / eps**2, 2b / eps**2)`` of the invariant Beta law,
    derived from the speed measure of the diffusion.

    :rtype: tuple[float,float]
    """
    e2 = p.epsilon * p.epsilon
    return 2 * p.a / e2, 2 * p.b / e2


def _require_feller(p):
    if not feller_satisfied(p):
        raise FellerViolated(f'stationary law requested for {p!r} violating Feller\'s condition')


def _density(alpha, beta, norm, x):
    return exp((alpha - 1) * log(x) + (beta - 1) * log1p(-x) - norm)


def stationary_density(p, x):
    """
    Density of the invariant law at ``x``:
    ``x**(2a/eps**2 - 1) (1 - x)**(2b/eps**2 - 1) / B(2a/eps**2, 2b/eps**2)``.

    This closed form is not part of the recurrence argument but an oracle
    obtained from the stationary Fokker-Planck equation.

    :raises FellerViolated: If Feller's condition fails.
    :raises DomainError: If ``x`` is not in (0, 1).
    """
    _require_feller(p)
    x = check_state(x, interior=True)
    alpha, beta = beta_shape(p)
    return _density(alpha, beta, betaln(alpha, beta), x)


def _integrate(p, lo, hi, weight=None):
    alpha, beta = beta_shape(p)
    norm = betaln(alpha, beta)
    if weight is None:
        func = lambda x: _density(alpha, beta, norm, x)  # noqa: E731
    else:
        func = lambda x: weight(x) * _density(alpha, beta, norm, x)  # noqa: E731
    value, _ = quad(func, lo, hi, epsabs=QUAD_EPSABS, limit=200)
    return value


def stationary_cdf(p, x):
    """
    Cumulative distribution function of the invariant law, computed by
    adaptive quadrature of :func:`stationary_density`.
    """
    _require_feller(p)
    x = check_state(x)
    if x in (0.0, 1.0):
        return x
    return _integrate(p, 0.0, x)


def stationary_mean(p):
    """
    Mean of the invariant law by quadrature (the closed form is
    ``a / (a + b)``).
    """
    _require_feller(p)
    return _integrate(p, 0.0, 1.0, weight=lambda x: x)


def stationary_bin_masses(p, edges):
    """
    Probability masses the invariant law assigns to the bins of a partition
    of [0, 1].

    :param list[float] edges: Increasing bin edges, the first being 0 and the
        last being 1.
    :return: The masses of the ``len(edges) - 1`` bins.
    :rtype: numpy.ndarray
    """
    _require_feller(p)
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2 or edges[0] != 0.0 or edges[-1] != 1.0 or np.any(np.diff(edges) <= 0):
        raise DomainError('bin edges must increase strictly from 0 to 1')
    return np.array([_integrate(p, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])])
