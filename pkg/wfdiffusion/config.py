# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import re

from types import SimpleNamespace

from .errors import UsageError
from .runtime import ModelParams
from .tool import SimConfig


def _boolean(value):
    value = value.strip().lower()
    if value in ('true', 'yes', 'on', '1'):
        return True
    if value in ('false', 'no', 'off', '0'):
        return False
    raise ValueError(f'not a boolean: {value!r}')


def _float_list(value):
    items = [item for item in re.split(r'[,\s]+', value.strip()) if item]
    if not items:
        raise ValueError('empty list')
    return tuple(float(item) for item in items)


def _choice(*choices):
    def convert(value):
        value = value.strip()
        if value not in choices:
            raise ValueError(f'{value!r} is not one of {", ".join(choices)}')
        return value
    return convert


# Recognised keys with their converters and defaults, in report order.
options = {
    'model.a': (float, 1.0),
    'model.b': (float, 1.0),
    'model.epsilon': (float, 1.0),
    'sim.scheme': (_choice('euler_clamp', 'euler_reflect', 'lamperti'), 'euler_clamp'),
    'sim.dt': (float, 1e-4),
    'sim.t_max': (float, 50.0),
    'sim.clamp_eps': (float, 1e-12),
    'sim.master_seed': (int, 20240101),
    'sim.n_paths': (int, 10000),
    'plan.c': (float, 1.0),
    'plan.m_fraction': (float, 0.5),
    'plan.alpha_fraction': (float, 0.5),
    'plan.kappa_fraction': (float, 0.5),
    'plan.multiplier': (float, 2.0),
    'simulate.x0': (float, 0.005),
    'simulate.stop': (_choice('tau_alpha', 'hit', 'none'), 'tau_alpha'),
    'verify.x0': (float, 0.005),
    'verify.censor_tolerance': (float, 0.0),
    'verify.kurtosis_threshold': (float, 100.0),
    'verify.boundary_x0': (float, 0.5),
    'verify.boundary_horizon': (float, 10.0),
    'verify.boundary_touch_tolerance': (float, 1e-3),
    'verify.contrast_a': (float, 0.1),
    'verify.contrast_b': (float, 0.1),
    'verify.refine_dt': (_boolean, True),
    'verify.hit_x0': (float, 0.1),
    'verify.hit_beta': (float, 0.01),
    'verify.hit_endpoint': (int, 0),
    'verify.stationary_x0': (float, 0.5),
    'verify.stationary_time': (float, 50.0),
    'verify.bins': (int, 200),
    'verify.tv_tolerance': (float, 0.05),
    'verify.decay_x0': (float, 0.05),
    'verify.decay_times': (_float_list, (1.0, 2.0, 4.0, 8.0, 16.0)),
    'verify.drift_grid_size': (int, 1000),
    'verify.fuzz_draws': (int, 10000),
    'output.dir': (str, '.'),
    'output.format': (_choice('json', 'csv', 'both'), 'json'),
}


def parse_option(option):
    """
    Split a ``key=value`` assignment.

    :return: The stripped key and value.
    :rtype: tuple[str,str]
    :raises UsageError: If the text is not an assignment.
    """
    parts = re.fullmatch('([^=]+)=(.*)', option)
    if not parts:
        raise UsageError(f'option not in KEY=VALUE format: {option}')
    name, value = parts.group(1, 2)
    return name.strip(), value.strip()


def parse_config_text(text):
    """
    Parse the assignments of a configuration file. Blank lines and lines
    starting with ``#`` are ignored.

    :rtype: dict[str,str]
    :raises UsageError: On a malformed line.
    """
    assignments = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        try:
            name, value = parse_option(line)
        except UsageError as e:
            raise UsageError(f'line {lineno}: {e}') from e
        assignments[name] = value
    return assignments


class RunConfig:
    """
    Fully resolved configuration of a run: the defaults, overridden by the
    configuration file, overridden by command line assignments.

    :ivar dict values: The resolved value of every recognised key.
    :ivar ModelParams model: The model.
    :ivar SimConfig sim: The simulation settings.
    :ivar plan: Planner settings (``c``, ``m_fraction``, ...).
    :ivar verify: Verification settings (``x0``, ``bins``, ...).
    :ivar output: Output settings (``dir`` and ``format``).
    """

    def __init__(self, assignments=None):
        """
        :param dict[str,str] assignments: Textual values of (some of) the
            recognised keys.
        :raises UsageError: On an unknown key or an unparseable value.
        :raises DomainError: If the model parameters are invalid.
        :raises ConfigError: If the simulation settings are invalid.
        """
        self.values = {name: default for name, (_, default) in options.items()}
        for name, value in (assignments or {}).items():
            if name not in options:
                raise UsageError(f'unknown configuration key: {name}')
            convert, _ = options[name]
            try:
                self.values[name] = convert(value)
            except ValueError as e:
                raise UsageError(f'invalid value for {name}: {e}') from e

        self.model = ModelParams(self.values['model.a'], self.values['model.b'], self.values['model.epsilon'])
        self.sim = SimConfig(**self.section('sim'))
        self.plan = SimpleNamespace(**self.section('plan'))
        self.simulate = SimpleNamespace(**self.section('simulate'))
        self.verify = SimpleNamespace(**self.section('verify'))
        self.output = SimpleNamespace(**self.section('output'))

    def section(self, prefix):
        """
        The values of the keys starting with ``<prefix>.``, keyed by the rest
        of their names.
        """
        return {name[len(prefix) + 1:]: value for name, value in self.values.items() if name.startswith(f'{prefix}.')}

    @property
    def master_seed(self):
        return self.values['sim.master_seed']

    def as_dict(self, *, include_output=True):
        """
        :param bool include_output: Keep the ``output.*`` keys (default:
            True). They do not affect any result.
        """
        return {name: list(value) if isinstance(value, tuple) else value for name, value in self.values.items()
                if include_output or not name.startswith('output.')}

    def __repr__(self):
        return f'{self.__class__.__name__}({self.as_dict()!r})'


def load_config(fn=None, overrides=()):
    """
    Build the run configuration from an optional configuration file and
    ``key=value`` overrides.

    :param str fn: Path to the configuration file (default: none).
    :param list[str] overrides: Assignments applied after the file.
    :rtype: RunConfig
    """
    assignments = {}
    if fn is not None:
        with open(fn, 'r', encoding='utf-8') as f:
            assignments.update(parse_config_text(f.read()))
    for option in overrides:
        name, value = parse_option(option)
        assignments[name] = value
    return RunConfig(assignments)
