# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from ..errors import ConfigError, DomainError


class StoppingSpec:
    """
    Stopping rule of a simulated path. A rule is either a single condition or
    the first-of combination of several conditions:

    ============== ========================================================
    Kind           Fires at the first grid time when
    ============== ========================================================
    ``tau_alpha``  the state enters ``[alpha, 1 - alpha]``
    ``gamma_beta`` the distance from the endpoint drops to ``beta`` or below
    ``t_kappa``    the distance from the endpoint reaches ``kappa`` or above
    ``first_of``   any of the listed conditions holds (the first listed wins)
    ============== ========================================================

    The hitting time of the endpoint itself is represented by ``gamma_beta``
    with ``beta`` set to the numerical floor of the simulation.
    """

    TAU_ALPHA = 'tau_alpha'
    GAMMA_BETA = 'gamma_beta'
    T_KAPPA = 't_kappa'
    FIRST_OF = 'first_of'

    # Kernel codes of the simple conditions.
    codes = {TAU_ALPHA: 0, GAMMA_BETA: 1, T_KAPPA: 2}

    def __init__(self, kind, threshold=None, endpoint=0, children=None):
        if kind == self.FIRST_OF:
            if not children:
                raise ConfigError('empty stopping rule')
        elif kind in self.codes:
            if threshold is None or not 0.0 < threshold < 1.0:
                raise DomainError(f'{kind} threshold must be in (0, 1), got {threshold!r}')
            if kind == self.TAU_ALPHA and not threshold < 0.5:
                raise DomainError(f'tau_alpha threshold must be below 1/2, got {threshold!r}')
            if endpoint not in (0, 1):
                raise DomainError(f'endpoint must be 0 or 1, got {endpoint!r}')
        else:
            raise ConfigError(f'unknown stopping kind: {kind!r}')
        self.kind = kind
        self.threshold = threshold
        self.endpoint = endpoint
        self.children = list(children or [])

    @classmethod
    def tau_alpha(cls, alpha):
        return cls(cls.TAU_ALPHA, alpha)

    @classmethod
    def gamma_beta(cls, beta, endpoint=0):
        return cls(cls.GAMMA_BETA, beta, endpoint)

    @classmethod
    def t_kappa(cls, kappa, endpoint=0):
        return cls(cls.T_KAPPA, kappa, endpoint)

    @classmethod
    def first_of(cls, *specs):
        return cls(cls.FIRST_OF, children=specs)

    def conditions(self):
        """
        Flatten the rule into the ordered list of its simple conditions.

        :return: List of simple :class:`StoppingSpec` objects.
        :rtype: list[StoppingSpec]
        :raises ConfigError: If the rule contains no condition at all.
        """
        if self.kind != self.FIRST_OF:
            return [self]
        flat = []
        for child in self.children:
            flat.extend(child.conditions())
        if not flat:
            raise ConfigError('empty stopping rule')
        return flat

    def __repr__(self):
        if self.kind == self.FIRST_OF:
            return f'{self.__class__.__name__}.first_of({", ".join(repr(c) for c in self.children)})'
        return f'{self.__class__.__name__}({self.kind!r}, {self.threshold!r}, endpoint={self.endpoint!r})'


class StopReason:
    """
    Values of the ``stop_reason`` field of path records: the kind of the
    condition that fired, ``censored`` if the horizon was reached before any
    condition fired, or ``horizon`` if no stopping rule was given.
    """

    CENSORED = 'censored'
    HORIZON = 'horizon'

    values = (StoppingSpec.TAU_ALPHA, StoppingSpec.GAMMA_BETA, StoppingSpec.T_KAPPA, CENSORED, HORIZON)
