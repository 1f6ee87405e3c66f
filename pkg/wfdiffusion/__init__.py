# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

from .errors import (ConfigError, DegenerateFit, DomainError, FellerViolated, InvalidFraction, OrderingError, PathError, UsageError,
                     WFDiffusionError)
from .pkgdata import __version__
