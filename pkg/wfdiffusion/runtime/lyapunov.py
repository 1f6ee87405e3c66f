# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from math import exp, expm1, log1p

from ..errors import DomainError
from .params import check_state, drift


class LyapunovSpec:
    """
    Description of a Lyapunov test function of the model.

    Three families are supported:

    ============ ===================================== =================
    Kind         Function                              Certifies
    ============ ===================================== =================
    ``lower``    ``V(t, x) = exp(c t) x**(-m)``        recurrence from 0
    ``upper``    ``V(t, x) = exp(c t) (1 - x)**(-m)``  recurrence from 1
    ``boundary`` ``V(x) = x**(-n)``                    endpoint 0 is not hit
    ============ ===================================== =================
    """

    LOWER = 'lower'
    UPPER = 'upper'
    BOUNDARY = 'boundary'

    kinds = (LOWER, UPPER, BOUNDARY)

    def __init__(self, kind, exponent, rate=0.0):
        """
        :param str kind: One of :attr:`LOWER`, :attr:`UPPER` and
            :attr:`BOUNDARY`.
        :param float exponent: The exponent ``m`` (or ``n``); must be
            nonnegative.
        :param float rate: The exponential rate ``c`` (default: 0). Must be 0
            for the boundary kind.
        """
        if kind not in self.kinds:
            raise DomainError(f'unknown Lyapunov function kind: {kind!r}')
        if not exponent >= 0:
            raise DomainError(f'Lyapunov exponent must be nonnegative, got {exponent!r}')
        if not rate >= 0:
            raise DomainError(f'exponential rate must be nonnegative, got {rate!r}')
        if kind == self.BOUNDARY and rate != 0:
            raise DomainError('boundary Lyapunov functions are time independent (rate must be 0)')
        self.kind = kind
        self.exponent = float(exponent)
        self.rate = float(rate)

    @classmethod
    def lower(cls, m, c):
        return cls(cls.LOWER, m, c)

    @classmethod
    def upper(cls, m, c):
        return cls(cls.UPPER, m, c)

    @classmethod
    def boundary(cls, n):
        return cls(cls.BOUNDARY, n, 0.0)

    def value(self, t, x):
        """
        Evaluate the test function at time ``t`` and state ``x``.
        """
        if self.kind == self.LOWER:
            return exp(self.rate * t) * x ** -self.exponent
        if self.kind == self.UPPER:
            return exp(self.rate * t) * (1.0 - x) ** -self.exponent
        return x ** -self.exponent

    def __eq__(self, other):
        if not isinstance(other, LyapunovSpec):
            return NotImplemented
        return (self.kind, self.exponent, self.rate) == (other.kind, other.exponent, other.rate)

    def __repr__(self):
        return f'{self.__class__.__name__}(kind={self.kind!r}, exponent={self.exponent!r}, rate={self.rate!r})'


# Upper limit of the spatial finite-difference step, relative to the distance
# from the nearest endpoint divided by exponent + 2.
FD_RELATIVE_STEP = 1e-3


def _distance(spec, x):
    return 1.0 - x if spec.kind == LyapunovSpec.UPPER else x


def generator_weight(spec, t, x):
    """
    The positive factor ``(k + 1) exp(c t) d**(-k-1)`` (``d`` being the distance
    from the endpoint of the test function, ``k`` its exponent) that carries
    the singular part and the magnitude of the generator. Dividing by it gives the scaled forms
    returned by :func:`generator_apply_scaled` and
    :func:`generator_apply_fd_scaled`.
    """
    x = check_state(x, interior=True)
    return (spec.exponent + 1) * exp(spec.rate * t) * _distance(spec, x) ** (-spec.exponent - 1)


def _lower_bracket(a, b, eps, m, c, x):
    # -ma + eps^2 m(m+1)/2 + (c + m(a+b) - eps^2 m(m+1)/2) x
    q = eps * eps * m * (m + 1) / 2
    return -m * a + q + (c + m * (a + b) - q) * x


def _lower_grouped(a, b, eps, m, c, t, x):
    # The dt-coefficient of d(exp(ct) X^-m), grouped as exp(ct) x^(-m-1) times the bracket.
    return exp(c * t) * x ** (-m - 1) * _lower_bracket(a, b, eps, m, c, x)


def _boundary_bracket(p, n, x):
    # -n B(x) + n(n+1) eps^2 / 2 * (1 - x)
    return -n * drift(p, x) + n * (n + 1) * p.epsilon * p.epsilon / 2 * (1.0 - x)


def _boundary_grouped(p, n, x):
    # -n B(x) x^(-n-1) + n(n+1) eps^2 / 2 * sigma(x)^2 x^(-n-2)
    sigma2 = x * (1.0 - x)
    return -n * drift(p, x) * x ** (-n - 1) + n * (n + 1) * p.epsilon * p.epsilon / 2 * sigma2 * x ** (-n - 2)


def generator_apply(p, spec, t, x):
    """
    Apply the infinitesimal generator ``A V = dV/dt + B(x) V' + (eps**2 / 2) x (1 - x) V''``
    to a Lyapunov function using the closed forms obtained from Itô's
    formula.

    The upper-end function is evaluated as the lower-end one at ``1 - x``
    with ``a`` and ``b`` exchanged.

    :param ModelParams p: The model.
    :param LyapunovSpec spec: The test function.
    :param float t: Time.
    :param float x: State in the open interval (0, 1).
    :rtype: float
    :raises DomainError: If ``x`` is not an interior state.
    """
    x = check_state(x, interior=True)
    if spec.kind == LyapunovSpec.LOWER:
        return _lower_grouped(p.a, p.b, p.epsilon, spec.exponent, spec.rate, t, x)
    if spec.kind == LyapunovSpec.UPPER:
        return _lower_grouped(p.b, p.a, p.epsilon, spec.exponent, spec.rate, t, 1.0 - x)
    return _boundary_grouped(p, spec.exponent, x)


def generator_apply_scaled(p, spec, t, x):
    """
    Closed-form generator divided by :func:`generator_weight`. It has the
    sign of :func:`generator_apply` but stays finite for large exponents and
    states close to the endpoint.
    """
    x = check_state(x, interior=True)
    k = spec.exponent
    if spec.kind == LyapunovSpec.LOWER:
        return _lower_bracket(p.a, p.b, p.epsilon, k, spec.rate, x) / (k + 1)
    if spec.kind == LyapunovSpec.UPPER:
        return _lower_bracket(p.b, p.a, p.epsilon, k, spec.rate, 1.0 - x) / (k + 1)
    return _boundary_bracket(p, k, x) / (k + 1)


def generator_terms(p, spec, t, x, *, scaled=False):
    """
    Compute the three raw terms of the generator separately: the time
    derivative ``dV/dt``, the drift term ``B(x) V'`` and the diffusion term
    ``(eps**2 / 2) x (1 - x) V''``. Their sum is the generator; the sum of
    their absolute values is a natural magnitude scale when comparing
    different evaluations of the generator.

    :param bool scaled: Divide the terms by :func:`generator_weight`
        (default: False).
    :return: The time, drift and diffusion terms.
    :rtype: tuple[float,float,float]
    """
    x = check_state(x, interior=True)
    m, c = spec.exponent, spec.rate
    half_sigma2 = p.epsilon * p.epsilon / 2 * x * (1.0 - x)
    if scaled:
        d = _distance(spec, x)
        slope = m if spec.kind == LyapunovSpec.UPPER else -m
        return c * d / (m + 1), drift(p, x) * slope / (m + 1), half_sigma2 * m / d

    if spec.kind == LyapunovSpec.BOUNDARY:
        d1 = -m * x ** (-m - 1)
        d2 = m * (m + 1) * x ** (-m - 2)
        return 0.0, drift(p, x) * d1, half_sigma2 * d2

    growth = exp(c * t)
    if spec.kind == LyapunovSpec.LOWER:
        v = growth * x ** -m
        d1 = -m * growth * x ** (-m - 1)
        d2 = m * (m + 1) * growth * x ** (-m - 2)
    else:
        y = 1.0 - x
        v = growth * y ** -m
        d1 = m * growth * y ** (-m - 1)
        d2 = m * (m + 1) * growth * y ** (-m - 2)
    return c * v, drift(p, x) * d1, half_sigma2 * d2


def _central_differences(p, spec, x, h):
    # Central differences of W(y) = (d(y) / d(x))**-k, the spatial factor of
    # V normalized to W(x) = 1. Stencil values are kept as W - 1 so that the
    # differences do not cancel.
    k, c = spec.exponent, spec.rate
    d = _distance(spec, x)
    sign = -1.0 if spec.kind == LyapunovSpec.UPPER else 1.0
    xp, xm = x + h, x - h
    hp, hm = xp - x, x - xm

    wp = expm1(-k * log1p(sign * hp / d))
    wm = expm1(-k * log1p(-sign * hm / d))
    den = hp * hm * (hp + hm)
    d1 = (hm * hm * wp - hp * hp * wm) / den
    d2 = 2 * (hm * wp + hp * wm) / den
    dt = (expm1(c * h) - expm1(-c * h)) / (2 * h) if spec.kind != LyapunovSpec.BOUNDARY else 0.0

    return d * (dt + drift(p, x) * d1 + p.epsilon * p.epsilon / 2 * x * (1.0 - x) * d2)


def generator_apply_fd_scaled(p, spec, t, x, h=1e-5):
    """
    Finite-difference counterpart of :func:`generator_apply_scaled`.

    Central differences are taken both in time and in space, with the step
    reduced to at most ``FD_RELATIVE_STEP * min(x, 1 - x) / (k + 2)`` and
    refined by one Richardson extrapolation step. The actual spatial steps are
    recomputed from the rounded stencil points so that representation error of
    ``x +/- h`` does not pollute the result.

    :param float h: Largest step size (default: 1e-5).
    :raises DomainError: If ``h`` is not positive or the stencil of step
        ``h`` leaves (0, 1).
    """
    x = check_state(x, interior=True)
    if not h > 0:
        raise DomainError(f'finite difference step must be positive, got {h!r}')
    if not (x - h > 0.0 and x + h < 1.0):
        raise DomainError(f'finite difference stencil [{x - h!r}, {x + h!r}] leaves (0, 1)')
    h = min(h, FD_RELATIVE_STEP * min(x, 1.0 - x) / (spec.exponent + 2))
    coarse = _central_differences(p, spec, x, h)
    fine = _central_differences(p, spec, x, h / 2)
    return (4 * fine - coarse) / 3 / (spec.exponent + 1)


def generator_apply_fd(p, spec, t, x, h=1e-5):
    """
    Independent finite-difference evaluation of the generator: the scaled
    finite differences of :func:`generator_apply_fd_scaled` multiplied back
    by :func:`generator_weight`.

    :param float h: Largest step size (default: 1e-5).
    :raises DomainError: If ``h`` is not positive or the stencil leaves (0, 1).
    """
    return generator_weight(spec, t, x) * generator_apply_fd_scaled(p, spec, t, x, h)
