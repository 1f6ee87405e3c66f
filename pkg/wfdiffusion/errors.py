# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.


class WFDiffusionError(ValueError):
    """
    Base class of all errors raised by the package. Deriving from
    :exc:`ValueError` keeps invalid-input errors catchable the usual way.
    """


class DomainError(WFDiffusionError):
    """
    A state, a parameter or a numerical stencil lies outside the domain of
    the requested operation.
    """


class FellerViolated(WFDiffusionError):
    """
    The operation requires ``min(a, b) > epsilon**2 / 2`` but the model
    does not satisfy it.
    """


class InvalidFraction(WFDiffusionError):
    """
    A fraction of an admissible interval is not in the open interval (0, 1).
    """


class OrderingError(WFDiffusionError):
    """
    Thresholds or initial states are not in the required order (e.g.,
    ``beta < x0 < kappa``).
    """


class ConfigError(WFDiffusionError):
    """
    A simulation or run configuration is inconsistent.
    """


class UsageError(WFDiffusionError):
    """
    A configuration file or a command line could not be parsed.
    """


class DegenerateFit(WFDiffusionError):
    """
    Too few usable points to fit a decay rate.
    """


class PathError(WFDiffusionError):
    """
    Simulating a single path of a batch failed.
    """

    def __init__(self, index, cause):
        """
        :param int index: Index of the failing path in the batch.
        :param Exception cause: The original error.

        :ivar int index: Index of the failing path in the batch.
        """
        super().__init__(f'path {index}: {cause}')
        self.index = index
        self.cause = cause

    def __reduce__(self):
        return PathError, (self.index, str(self.cause))
