# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from math import sqrt

from ..errors import DomainError


class ModelParams:
    """
    Parameters of the Wright-Fisher diffusion with mutations

    .. math::

        dX_t = [a - (a + b) X_t] dt + \\epsilon \\sqrt{X_t (1 - X_t)} dW_t

    where ``a`` is the mutation rate toward 1, ``b`` is the mutation rate
    toward 0, and ``epsilon`` is the noise amplitude. All three must be
    strictly positive.

    Model parameter objects are immutable, hashable and compare equal if all
    their rates are equal.
    """

    __slots__ = ('_a', '_b', '_epsilon')

    def __init__(self, a, b, epsilon):
        """
        :param float a: Mutation rate toward 1.
        :param float b: Mutation rate toward 0.
        :param float epsilon: Noise amplitude.
        """
        a, b, epsilon = float(a), float(b), float(epsilon)
        if not (a > 0 and b > 0 and epsilon > 0):
            raise DomainError(f'model rates must be positive (a={a!r}, b={b!r}, epsilon={epsilon!r})')
        self._a = a
        self._b = b
        self._epsilon = epsilon

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @property
    def epsilon(self):
        return self._epsilon

    @property
    def half_noise(self):
        """
        The Feller threshold ``epsilon**2 / 2``.
        """
        return self._epsilon * self._epsilon / 2

    def swap(self):
        """
        Return the mirrored model obtained by the change of variables
        ``y = 1 - x``, i.e., the model with ``a`` and ``b`` exchanged.

        :rtype: ModelParams
        """
        return ModelParams(self._b, self._a, self._epsilon)

    def as_dict(self):
        return {'a': self._a, 'b': self._b, 'epsilon': self._epsilon}

    def __eq__(self, other):
        if not isinstance(other, ModelParams):
            return NotImplemented
        return (self._a, self._b, self._epsilon) == (other._a, other._b, other._epsilon)

    def __hash__(self):
        return hash((self._a, self._b, self._epsilon))

    def __reduce__(self):
        return ModelParams, (self._a, self._b, self._epsilon)

    def __repr__(self):
        return f'{self.__class__.__name__}(a={self._a!r}, b={self._b!r}, epsilon={self._epsilon!r})'


def check_state(x, *, interior=False):
    """
    Validate a population fraction.

    :param float x: The state to check.
    :param bool interior: Require ``0 < x < 1`` instead of ``0 <= x <= 1``.
    :return: The state as float.
    :rtype: float
    :raises DomainError: If the state is outside of the required interval.
    """
    x = float(x)
    if interior:
        if not 0.0 < x < 1.0:
            raise DomainError(f'state must be in the open interval (0, 1), got {x!r}')
    elif not 0.0 <= x <= 1.0:
        raise DomainError(f'state must be in [0, 1], got {x!r}')
    return x


def feller_satisfied(p):
    """
    Check Feller's condition ``min(a, b) > epsilon**2 / 2`` (strict).

    :param ModelParams p: The model.
    :rtype: bool
    """
    return min(p.a, p.b) > p.half_noise


def endpoint_feller_satisfied(p, endpoint):
    """
    Check the one-sided Feller condition that keeps the process away from a
    single endpoint: ``a > epsilon**2 / 2`` for endpoint 0, ``b > epsilon**2 / 2``
    for endpoint 1.
    """
    return (p.a if endpoint == 0 else p.b) > p.half_noise


def drift(p, x):
    """
    Drift coefficient ``B(x) = a - (a + b) x``.
    """
    return p.a - (p.a + p.b) * x


def diffusion(p, x):
    """
    Diffusion coefficient ``epsilon * sqrt(x (1 - x))``. It is exactly zero at
    both endpoints.

    :raises DomainError: If ``x`` is outside of [0, 1].
    """
    x = check_state(x)
    return p.epsilon * sqrt(x * (1.0 - x))
