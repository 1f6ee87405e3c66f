# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import io

from math import log, sqrt

import numpy as np
import pytest

from wfdiffusion import ConfigError, DomainError, PathError
from wfdiffusion.runtime import ModelParams
from wfdiffusion.tool import path_generator, run_batch, run_path, SimConfig, step, StoppingSpec, StopReason, write_batch_csv


@pytest.mark.parametrize('options', [
    {'scheme': 'milstein'},
    {'dt': 0},
    {'dt': 2, 't_max': 1},
    {'clamp_eps': 0},
    {'clamp_eps': 1e-3},
    {'n_paths': 0},
    {'master_seed': -1},
    {'master_seed': 2 ** 64},
])
def test_invalid_sim_config(options):
    with pytest.raises(ConfigError):
        SimConfig(**options)


def test_sim_config_steps():
    cfg = SimConfig(dt=1e-3, t_max=0.5)
    assert cfg.n_steps == 500
    assert cfg.replace(dt=1e-4).n_steps == 5000
    assert cfg.replace(dt=1e-4) != cfg


def test_empty_stopping_spec():
    with pytest.raises(ConfigError):
        StoppingSpec.first_of()


def test_path_generator_streams():
    first = path_generator(42, 7).standard_normal(5)
    assert np.array_equal(first, path_generator(42, 7).standard_normal(5))
    assert not np.array_equal(first, path_generator(42, 8).standard_normal(5))
    assert not np.array_equal(first, path_generator(43, 7).standard_normal(5))


@pytest.mark.parametrize('scheme', ['euler_clamp', 'euler_reflect', 'lamperti'])
def test_step_at_fixed_point(scheme):
    cfg = SimConfig(scheme=scheme, dt=1e-4, t_max=1)
    x, clamped = step(ModelParams(1, 1, 1), cfg, 0.5, 0.0)
    assert x == pytest.approx(0.5, abs=1e-15)
    assert clamped is False


def test_step_clamped():
    cfg = SimConfig(scheme='euler_clamp', dt=1e-2, t_max=1)
    x, clamped = step(ModelParams(1, 1, 1), cfg, 1e-3, -50.0)
    assert clamped is True
    assert x == 1e-12


def test_step_reflected():
    cfg = SimConfig(scheme='euler_reflect', dt=1e-2, t_max=1)
    x, clamped = step(ModelParams(1, 1, 1), cfg, 1e-3, -5.0)
    assert clamped is True
    assert 1e-12 < x < 1e-2


def test_step_outside():
    with pytest.raises(DomainError):
        step(ModelParams(1, 1, 1), SimConfig(), 0.0, 0.0)


@pytest.mark.parametrize('z', [-2.0, -0.5, 0.3, 1.7])
def test_scheme_consistency(z):
    p = ModelParams(1, 1, 1)
    dt = 1e-4
    euler, _ = step(p, SimConfig(scheme='euler_clamp', dt=dt, t_max=1), 0.5, z)
    lamperti, _ = step(p, SimConfig(scheme='lamperti', dt=dt, t_max=1), 0.5, z)
    assert abs(euler - lamperti) <= sqrt(dt)


def test_run_path_immediate_stop():
    record = run_path(ModelParams(1, 1, 1), SimConfig(t_max=1), 0.3, StoppingSpec.tau_alpha(0.1), [-1.5])
    assert record.stop_time == 0
    assert record.stop_reason == StoppingSpec.TAU_ALPHA
    assert record.censored is False
    assert record.integrals == {'int_x^-1.5': 0.0}
    assert record.final_x == 0.3


def test_run_path_deterministic_limit():
    cfg = SimConfig(dt=1e-4, t_max=1)
    record = run_path(ModelParams(1, 1, 1e-9), cfg, 0.01, StoppingSpec.tau_alpha(0.1))
    assert record.stop_reason == StoppingSpec.TAU_ALPHA
    assert record.stop_time == pytest.approx(0.5 * log(0.98 / 0.8), abs=5 * cfg.dt)
    assert record.final_x >= 0.1


def test_run_path_stop_time_on_grid():
    # a = b = 1, dt = 1/8: one Euler step is x -> 3/4 x + 1/8, the noise is negligible
    cfg = SimConfig(dt=0.125, t_max=2)
    xs = [0.01]
    while xs[-1] < 0.3:
        xs.append(0.75 * xs[-1] + 0.125)
    k = len(xs) - 1
    assert k == 4

    record = run_path(ModelParams(1, 1, 1e-9), cfg, 0.01, StoppingSpec.tau_alpha(0.3))
    assert record.stop_reason == StoppingSpec.TAU_ALPHA
    assert record.stop_index == 0
    assert record.stop_time == k * cfg.dt
    assert record.stop_time == 0.5
    assert record.final_x == pytest.approx(xs[-1], abs=1e-8)


def test_run_path_horizon_on_grid():
    cfg = SimConfig(dt=0.125, t_max=1)
    record = run_path(ModelParams(1, 1, 1), cfg, 0.4)
    assert record.stop_reason == StopReason.HORIZON
    assert record.censored is False
    assert record.stop_time == cfg.n_steps * cfg.dt
    assert record.stop_time == 1.0


def test_run_path_censored():
    cfg = SimConfig(dt=1e-4, t_max=1e-3)
    record = run_path(ModelParams(1, 1, 0.5), cfg, 0.01, StoppingSpec.tau_alpha(0.3), [-2])
    assert record.censored is True
    assert record.stop_reason == StopReason.CENSORED
    assert record.stop_time == pytest.approx(cfg.t_max)
    assert record.stop_index == -1
    assert record.integrals['int_x^-2'] > 0


def test_run_path_first_of():
    stop = StoppingSpec.first_of(StoppingSpec.gamma_beta(0.01), StoppingSpec.t_kappa(0.125))
    record = run_path(ModelParams(1, 1, 1), SimConfig(dt=1e-4, t_max=20), 0.1, stop)
    assert record.stop_reason in (StoppingSpec.GAMMA_BETA, StoppingSpec.T_KAPPA)
    assert record.stop_index == (0 if record.stop_reason == StoppingSpec.GAMMA_BETA else 1)
    assert record.final_x <= 0.01 or record.final_x >= 0.125


def test_run_path_mirrored_stop():
    stop = StoppingSpec.t_kappa(0.125, endpoint=1)
    record = run_path(ModelParams(1, 1, 1), SimConfig(dt=1e-4, t_max=20), 0.9, stop)
    assert record.stop_reason == StoppingSpec.T_KAPPA
    assert record.final_x <= 0.875


def test_run_path_snapshots():
    cfg = SimConfig(dt=1e-3, t_max=1)
    record = run_path(ModelParams(1, 1, 1), cfg, 0.4, snapshot_times=[0, 0.5, 1])
    assert record.snapshots[0] == 0.4
    assert not np.isnan(record.snapshots).any()
    assert record.stop_reason == StopReason.HORIZON
    assert record.final_x == record.snapshots[-1]


def test_run_path_occupation():
    cfg = SimConfig(dt=1e-3, t_max=1)
    record = run_path(ModelParams(1, 1, 1), cfg, 0.4, occupation_bins=10, burn_in=0.25)
    assert record.occupation.sum() == 750
    assert record.stop_time == pytest.approx(1)


def test_run_path_invalid_snapshots():
    with pytest.raises(ConfigError):
        run_path(ModelParams(1, 1, 1), SimConfig(dt=1e-3, t_max=1), 0.4, snapshot_times=[2])
    with pytest.raises(ConfigError):
        run_path(ModelParams(1, 1, 1), SimConfig(dt=1e-3, t_max=1), 0.4, snapshot_times=[0.5, 0.2])


def test_run_path_reproducible():
    p, cfg = ModelParams(1.2, 0.8, 1), SimConfig(dt=1e-3, t_max=2, master_seed=5)
    first = run_path(p, cfg, 0.2, index=3, snapshot_times=[1, 2])
    second = run_path(p, cfg, 0.2, index=3, snapshot_times=[1, 2])
    other = run_path(p, cfg, 0.2, index=4, snapshot_times=[1, 2])
    assert np.array_equal(first.snapshots, second.snapshots)
    assert not np.array_equal(first.snapshots, other.snapshots)


def test_run_batch_independent_of_jobs():
    p = ModelParams(1, 1, 0.8)
    cfg = SimConfig(dt=1e-3, t_max=2, master_seed=11, n_paths=24)
    stop = StoppingSpec.tau_alpha(0.05)
    sequential = run_batch(p, cfg, 0.01, stop, [-1.5], jobs=1)
    parallel = run_batch(p, cfg, 0.01, stop, [-1.5], jobs=3)
    assert [r.index for r in parallel] == list(range(24))
    assert np.array_equal(sequential.stop_times, parallel.stop_times)
    assert np.array_equal(sequential.integral(-1.5), parallel.integral(-1.5))
    assert np.array_equal(sequential.final_states, parallel.final_states)


def test_run_batch_path_error():
    with pytest.raises(PathError) as exc_info:
        run_batch(ModelParams(1, 1, 1), SimConfig(n_paths=2), 1.5)
    assert exc_info.value.index == 0
    assert isinstance(exc_info.value.cause, DomainError)


def test_write_batch_csv():
    cfg = SimConfig(dt=1e-3, t_max=1, n_paths=3)
    batch = run_batch(ModelParams(1, 1, 1), cfg, 0.3, StoppingSpec.tau_alpha(0.1), [-1.5])
    out = io.StringIO()
    write_batch_csv(batch, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == 'path_index,stop_time,stop_reason,int_x^-1.5,clamp_events,min_x,max_x'
    assert lines[1] == '0,0.0,tau_alpha,0.0,0,0.3,0.3'
    assert len(lines) == 4
