# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import pytest

from wfdiffusion import ConfigError, DomainError, UsageError
from wfdiffusion.config import load_config, parse_config_text, RunConfig
from wfdiffusion.runtime import ModelParams, plan_recurrence


def test_defaults():
    config = RunConfig()
    assert config.model == ModelParams(1, 1, 1)
    assert config.sim.scheme == 'euler_clamp'
    assert config.sim.dt == 1e-4
    assert config.sim.n_paths == 10000
    assert config.master_seed == 20240101
    assert config.plan.c == 1.0
    assert config.verify.decay_times == (1, 2, 4, 8, 16)
    assert config.verify.refine_dt is True
    assert config.output.format == 'json'


def test_default_recurrence_start_below_alpha():
    config = RunConfig()
    plan = plan_recurrence(config.model, config.plan.c, config.plan.m_fraction, config.plan.alpha_fraction, multiplier=config.plan.multiplier)
    assert 0 < config.verify.x0 < plan.alpha
    assert 0 < config.simulate.x0 < plan.alpha


def test_as_dict_without_output():
    config = load_config(overrides=['output.dir=elsewhere', 'model.a=2'])
    assert config.as_dict()['output.dir'] == 'elsewhere'
    reduced = config.as_dict(include_output=False)
    assert reduced['model.a'] == 2.0
    assert not any(name.startswith('output.') for name in reduced)


def test_parse_config_text():
    assignments = parse_config_text("""
        # model
        model.a = 2

        model.epsilon=0.7
        output.dir = results = latest
        """)
    assert assignments == {'model.a': '2', 'model.epsilon': '0.7', 'output.dir': 'results = latest'}


def test_parse_config_text_malformed():
    with pytest.raises(UsageError, match='line 2'):
        parse_config_text('model.a = 2\nmodel.b 3\n')


@pytest.mark.parametrize('assignments', [
    {'model.c': '1'},
    {'model.a': 'abc'},
    {'sim.n_paths': '1.5'},
    {'sim.scheme': 'milstein'},
    {'verify.refine_dt': 'maybe'},
    {'verify.decay_times': ' , '},
])
def test_invalid_assignments(assignments):
    with pytest.raises(UsageError):
        RunConfig(assignments)


def test_semantic_errors():
    with pytest.raises(DomainError):
        RunConfig({'model.a': '-1'})
    with pytest.raises(ConfigError):
        RunConfig({'sim.dt': '0'})


def test_converters():
    config = RunConfig({'verify.decay_times': '0.5, 1 2,4', 'verify.refine_dt': 'no', 'sim.scheme': 'lamperti'})
    assert config.verify.decay_times == (0.5, 1, 2, 4)
    assert config.verify.refine_dt is False
    assert config.sim.scheme == 'lamperti'
    assert config.as_dict()['verify.decay_times'] == [0.5, 1, 2, 4]


def test_load_config_overrides(tmpdir):
    fn = tmpdir.join('run.cfg')
    fn.write('model.a = 2\nmodel.b = 3\nsim.master_seed = 5\n')
    config = load_config(str(fn), ['model.b=4', 'sim.master_seed = 6'])
    assert config.model == ModelParams(2, 4, 1)
    assert config.master_seed == 6
    assert config.sim.master_seed == 6


def test_load_config_missing(tmpdir):
    with pytest.raises(OSError):
        load_config(str(tmpdir.join('missing.cfg')))
