# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from ..errors import DomainError, FellerViolated, InvalidFraction, OrderingError
from .params import check_state, endpoint_feller_satisfied, feller_satisfied


class RecurrencePlan:
    """
    Certified parameters of the exponential recurrence bound: for the target
    rate ``c``, the Lyapunov exponent ``m``, the threshold ``alpha`` of the
    compact ``[alpha, 1 - alpha]``, the constant ``C(m)`` and the margin
    ``g(m) = min(a, b) m - eps**2 m (m + 1) / 2``.

    Plans also remember the admissible upper limits they were chosen from.
    """

    def __init__(self, *, c, m, alpha, C_m, g_m, m_upper, alpha_upper, multiplier=2.0):
        """
        :param float c: Target exponential rate.
        :param float m: Lyapunov exponent.
        :param float alpha: Threshold of the compact ``[alpha, 1 - alpha]``.
        :param float C_m: The constant ``C(m)``.
        :param float g_m: The margin ``g(m)``.
        :param float m_upper: Admissible (open) upper limit of ``m``.
        :param float alpha_upper: Admissible (open) upper limit of ``alpha``.
        :param float multiplier: The multiplier of the alpha choice (default: 2).
        """
        self.c = c
        self.m = m
        self.alpha = alpha
        self.C_m = C_m
        self.g_m = g_m
        self.m_upper = m_upper
        self.alpha_upper = alpha_upper
        self.multiplier = multiplier

    def replace(self, **changes):
        """
        Return a copy of the plan with some fields replaced. No validation is
        performed; see :func:`check_recurrence_plan`.
        """
        fields = self.as_dict()
        fields.update(changes)
        return RecurrencePlan(**fields)

    def as_dict(self):
        return {
            'c': self.c,
            'm': self.m,
            'alpha': self.alpha,
            'C_m': self.C_m,
            'g_m': self.g_m,
            'm_upper': self.m_upper,
            'alpha_upper': self.alpha_upper,
            'multiplier': self.multiplier,
        }

    def __eq__(self, other):
        if not isinstance(other, RecurrencePlan):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return f'{self.__class__.__name__}({", ".join(f"{k}={v!r}" for k, v in self.as_dict().items())})'


class BoundaryPlan:
    """
    Certified parameters of the endpoint inattainability argument: the
    interior threshold ``kappa``, the reduced drift
    ``b0 = a - (a + b) kappa`` and the exponent ``n`` of the test function
    ``x**(-n)``. For endpoint 1, the quantities refer to the mirrored
    coordinate ``1 - x`` (i.e., the model with ``a`` and ``b`` exchanged).
    """

    def __init__(self, *, kappa, b0, n, endpoint=0, kappa_upper=None):
        """
        :param float kappa: Interior threshold.
        :param float b0: Reduced drift.
        :param float n: Exponent of the boundary test function.
        :param int endpoint: The certified endpoint, 0 or 1 (default: 0).
        :param float kappa_upper: Admissible (open) upper limit of ``kappa``.
        """
        if endpoint not in (0, 1):
            raise DomainError(f'endpoint must be 0 or 1, got {endpoint!r}')
        self.kappa = kappa
        self.b0 = b0
        self.n = n
        self.endpoint = endpoint
        self.kappa_upper = kappa_upper

    def distance(self, x):
        """
        Distance of state ``x`` from the certified endpoint.
        """
        return x if self.endpoint == 0 else 1.0 - x

    def replace(self, **changes):
        fields = self.as_dict()
        fields.update(changes)
        return BoundaryPlan(**fields)

    def as_dict(self):
        return {
            'kappa': self.kappa,
            'b0': self.b0,
            'n': self.n,
            'endpoint': self.endpoint,
            'kappa_upper': self.kappa_upper,
        }

    def __eq__(self, other):
        if not isinstance(other, BoundaryPlan):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return f'{self.__class__.__name__}({", ".join(f"{k}={v!r}" for k, v in self.as_dict().items())})'


def _check_fraction(name, value):
    if not 0.0 < value < 1.0:
        raise InvalidFraction(f'{name} must be in the open interval (0, 1), got {value!r}')


def plan_recurrence(p, c, m_fraction=0.5, alpha_fraction=0.5, *, multiplier=2.0, half_gap=1e-3):
    """
    Choose the Lyapunov exponent ``m`` and the threshold ``alpha`` for the
    target rate ``c``:

    - ``m = m_fraction * (2 min(a, b) / eps**2 - 1)``,
    - ``g(m) = min(a, b) m - eps**2 m (m + 1) / 2``,
    - ``alpha = alpha_fraction * g(m) / (multiplier (c + (a + b) m))``,
    - ``C(m) = multiplier / ((multiplier - 1) g(m))``, i.e., ``2 / g(m)`` for
      the default multiplier.

    With the default multiplier of 2 the alpha limit is automatically below
    1/2. Any multiplier above 1 is accepted; below 2 the limit is capped at
    ``1/2 - half_gap`` to keep ``[alpha, 1 - alpha]`` nonempty.

    :param ModelParams p: The model.
    :param float c: Target exponential rate (positive).
    :param float m_fraction: Position of ``m`` within its admissible interval.
    :param float alpha_fraction: Position of ``alpha`` within its admissible
        interval.
    :param float multiplier: Multiplier of the alpha choice (default: 2).
    :param float half_gap: Gap kept below 1/2 for multipliers below 2.
    :rtype: RecurrencePlan
    :raises FellerViolated: If Feller's condition fails.
    :raises InvalidFraction: If a fraction is outside of (0, 1).
    """
    if not feller_satisfied(p):
        raise FellerViolated(f'{p!r} violates Feller\'s condition min(a, b) > eps**2 / 2')
    _check_fraction('m_fraction', m_fraction)
    _check_fraction('alpha_fraction', alpha_fraction)
    if not c > 0:
        raise DomainError(f'target rate c must be positive, got {c!r}')
    if not multiplier > 1:
        raise DomainError(f'multiplier must be greater than 1, got {multiplier!r}')

    e2 = p.epsilon * p.epsilon
    rate = min(p.a, p.b)
    m_upper = 2 * rate / e2 - 1
    m = m_fraction * m_upper
    g_m = rate * m - e2 * m * (m + 1) / 2
    alpha_upper = g_m / (multiplier * (c + (p.a + p.b) * m))
    if multiplier < 2:
        alpha_upper = min(alpha_upper, 0.5 - half_gap)
    alpha = alpha_fraction * alpha_upper
    C_m = multiplier / ((multiplier - 1) * g_m)
    return RecurrencePlan(c=c, m=m, alpha=alpha, C_m=C_m, g_m=g_m,
                          m_upper=m_upper, alpha_upper=alpha_upper, multiplier=multiplier)


def check_recurrence_plan(p, plan):
    """
    Re-check the invariants of a recurrence plan against a model.

    :return: ``True`` if all invariants hold.
    :raises DomainError: Listing the violated invariants.
    """
    e2 = p.epsilon * p.epsilon
    rate = min(p.a, p.b)
    violations = []
    if not 0 < plan.m < 2 * rate / e2 - 1:
        violations.append('0 < m < 2 min(a, b) / eps^2 - 1')
    g_m = rate * plan.m - e2 * plan.m * (plan.m + 1) / 2
    if not g_m > 0:
        violations.append('g(m) > 0')
    if not 0 < plan.alpha < g_m / (plan.multiplier * (plan.c + (p.a + p.b) * plan.m)):
        violations.append('0 < alpha < g(m) / (multiplier (c + (a + b) m))')
    if not plan.alpha < 0.5:
        violations.append('alpha < 1/2')
    if violations:
        raise DomainError(f'invalid recurrence plan: {"; ".join(violations)}')
    return True


def bound_exp_moment(plan, x):
    """
    Upper bound of the exponential moment of the entrance time into
    ``[alpha, 1 - alpha]``:
    ``C(m) c alpha**(m+1) (x**(-m) + (1 - x)**(-m)) + 1``.

    :raises DomainError: If ``x`` is not in (0, 1).
    """
    x = check_state(x, interior=True)
    return plan.C_m * plan.c * plan.alpha ** (plan.m + 1) * (x ** -plan.m + (1.0 - x) ** -plan.m) + 1.0


class BoundVariant:
    """
    The two forms of the bound of the additive functional: the one in the
    statement carries the factor ``c alpha**(m+1)``, the one established by
    the argument does not.
    """

    AS_STATED = 'as_stated'
    AS_PROVED = 'as_proved'

    variants = (AS_STATED, AS_PROVED)


def bound_additive_functional(plan, x, variant=BoundVariant.AS_PROVED):
    """
    Upper bound of the expected integral of ``X_s**(-m-1)`` up to the
    entrance time into ``[alpha, 1 - alpha]``.

    - :attr:`BoundVariant.AS_PROVED`: ``C(m) (x**(-m) + (1 - x)**(-m))``
    - :attr:`BoundVariant.AS_STATED`: ``C(m) c alpha**(m+1) (x**(-m) + (1 - x)**(-m))``

    :raises DomainError: If ``x`` is not in (0, 1) or the variant is unknown.
    """
    x = check_state(x, interior=True)
    base = plan.C_m * (x ** -plan.m + (1.0 - x) ** -plan.m)
    if variant == BoundVariant.AS_PROVED:
        return base
    if variant == BoundVariant.AS_STATED:
        return base * plan.c * plan.alpha ** (plan.m + 1)
    raise DomainError(f'unknown bound variant: {variant!r}')


def bound_discounted_time(plan, x):
    """
    Upper bound of the expected discounted time ``int_0^tau exp(c s) ds``
    spent before entering ``[alpha, 1 - alpha]``:
    ``C(m) alpha**(m+1) (x**(-m) + (1 - x)**(-m))``. Since the integral equals
    ``(exp(c tau) - 1) / c``, this bound is equivalent to the one of
    :func:`bound_exp_moment`.
    """
    x = check_state(x, interior=True)
    return plan.C_m * plan.alpha ** (plan.m + 1) * (x ** -plan.m + (1.0 - x) ** -plan.m)


def plan_boundary(p, endpoint=0, kappa_fraction=0.5):
    """
    Choose the interior threshold ``kappa``, the reduced drift ``b0`` and the
    exponent ``n`` certifying that ``endpoint`` is never reached:

    - ``kappa = kappa_fraction * (a - eps**2 / 2) / (a + b)``,
    - ``b0 = a - (a + b) kappa``,
    - ``n = 2 b0 / eps**2 - 1`` (the closed upper end of its interval).

    For endpoint 1, the recipe is applied to the mirrored model.

    :param ModelParams p: The model.
    :param int endpoint: 0 or 1 (default: 0).
    :param float kappa_fraction: Position of ``kappa`` within its admissible
        interval.
    :rtype: BoundaryPlan
    :raises FellerViolated: If the rate toward ``1 - endpoint`` does not exceed
        ``eps**2 / 2``.
    """
    if endpoint not in (0, 1):
        raise DomainError(f'endpoint must be 0 or 1, got {endpoint!r}')
    if not endpoint_feller_satisfied(p, endpoint):
        raise FellerViolated(f'{p!r} cannot keep the process away from endpoint {endpoint}')
    _check_fraction('kappa_fraction', kappa_fraction)

    q = p if endpoint == 0 else p.swap()
    e2 = q.epsilon * q.epsilon
    kappa_upper = (q.a - e2 / 2) / (q.a + q.b)
    kappa = kappa_fraction * kappa_upper
    b0 = q.a - (q.a + q.b) * kappa
    n = 2 * b0 / e2 - 1
    return BoundaryPlan(kappa=kappa, b0=b0, n=n, endpoint=endpoint, kappa_upper=kappa_upper)


def check_boundary_plan(p, plan):
    """
    Re-check the invariants of a boundary plan against a model.

    :return: ``True`` if all invariants hold.
    :raises DomainError: Listing the violated invariants.
    """
    q = p if plan.endpoint == 0 else p.swap()
    e2 = q.epsilon * q.epsilon
    violations = []
    if not 0 < plan.kappa < (q.a - e2 / 2) / (q.a + q.b):
        violations.append('0 < kappa < (a - eps^2 / 2) / (a + b)')
    if plan.b0 != q.a - (q.a + q.b) * plan.kappa:
        violations.append('b0 = a - (a + b) kappa')
    if not plan.b0 > e2 / 2:
        violations.append('b0 > eps^2 / 2')
    if not 0 < plan.n <= 2 * plan.b0 / e2 - 1:
        violations.append('0 < n <= 2 b0 / eps^2 - 1')
    if violations:
        raise DomainError(f'invalid boundary plan: {"; ".join(violations)}')
    return True


def bound_hit_probability(plan, x, beta):
    """
    Chebyshev-Markov bound of the probability that the process started at
    ``x`` comes within distance ``beta`` of the certified endpoint before
    leaving the ``kappa``-neighbourhood: ``min(1, beta**n / x**n)``, with
    ``x`` measured as a distance from the endpoint.

    :param BoundaryPlan plan: The boundary plan.
    :param float x: Initial state (in the original coordinate).
    :param float beta: Distance threshold from the endpoint.
    :raises OrderingError: Unless ``0 < beta < distance(x)`` and ``beta < kappa``.
    """
    y = plan.distance(check_state(x, interior=True))
    if not 0.0 < beta < y:
        raise OrderingError(f'hitting bound requires 0 < beta < x (beta={beta!r}, x={y!r})')
    if not beta < plan.kappa:
        raise OrderingError(f'hitting bound requires beta < kappa (beta={beta!r}, kappa={plan.kappa!r})')
    return min(1.0, beta ** plan.n * y ** -plan.n)
