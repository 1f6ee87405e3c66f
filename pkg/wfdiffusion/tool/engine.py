# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import csv
import logging

from functools import partial
from math import asin, sin, sqrt
from multiprocessing import Pool

import numpy as np

from numba import njit

from ..errors import ConfigError, DomainError, PathError
from ..runtime import check_state
from .stopping import StoppingSpec, StopReason

logger = logging.getLogger(__name__)

EULER_CLAMP = 'euler_clamp'
EULER_REFLECT = 'euler_reflect'
LAMPERTI = 'lamperti'

schemes = {EULER_CLAMP: 0, EULER_REFLECT: 1, LAMPERTI: 2}

# Number of standard normal draws handed to the kernel at once. Fixed, so
# that a path consumes its stream identically in every run.
NOISE_CHUNK = 4096

# Kernel return codes besides the index of the fired condition.
_CONTINUE = -1
_HORIZON = -2

_NO_NOISE = np.empty(0)


class SimConfig:
    """
    Discretization and sampling settings of a path batch.
    """

    def __init__(self, *, scheme=EULER_CLAMP, dt=1e-4, t_max=50.0, clamp_eps=1e-12, master_seed=0, n_paths=1):
        """
        :param str scheme: Discretization scheme, one of ``euler_clamp``,
            ``euler_reflect`` and ``lamperti`` (default: ``euler_clamp``).
        :param float dt: Time step (default: 1e-4).
        :param float t_max: Horizon (default: 50).
        :param float clamp_eps: Numerical floor; the scheme keeps the state in
            ``[clamp_eps, 1 - clamp_eps]`` (default: 1e-12).
        :param int master_seed: Unsigned 64-bit seed all path streams are
            derived from (default: 0).
        :param int n_paths: Number of paths in a batch (default: 1).
        :raises ConfigError: If any of the settings is invalid.
        """
        if scheme not in schemes:
            raise ConfigError(f'unknown scheme {scheme!r} (choices: {", ".join(schemes)})')
        if not (dt > 0 and t_max > 0 and dt < t_max):
            raise ConfigError(f'time step and horizon must satisfy 0 < dt < t_max (dt={dt!r}, t_max={t_max!r})')
        if not 0 < clamp_eps < 1e-6:
            raise ConfigError(f'clamp_eps must be in (0, 1e-6), got {clamp_eps!r}')
        if int(n_paths) != n_paths or n_paths < 1:
            raise ConfigError(f'n_paths must be a positive integer, got {n_paths!r}')
        if int(master_seed) != master_seed or not 0 <= master_seed < 2 ** 64:
            raise ConfigError(f'master_seed must be an unsigned 64-bit integer, got {master_seed!r}')
        self.scheme = scheme
        self.dt = float(dt)
        self.t_max = float(t_max)
        self.clamp_eps = float(clamp_eps)
        self.master_seed = int(master_seed)
        self.n_paths = int(n_paths)

    @property
    def n_steps(self):
        """
        Number of grid steps up to the horizon.
        """
        return int(round(self.t_max / self.dt))

    def replace(self, **changes):
        fields = self.as_dict()
        fields.update(changes)
        return SimConfig(**fields)

    def as_dict(self):
        return {
            'scheme': self.scheme,
            'dt': self.dt,
            't_max': self.t_max,
            'clamp_eps': self.clamp_eps,
            'master_seed': self.master_seed,
            'n_paths': self.n_paths,
        }

    def __eq__(self, other):
        if not isinstance(other, SimConfig):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return f'{self.__class__.__name__}({", ".join(f"{k}={v!r}" for k, v in self.as_dict().items())})'


def functional_name(exponent):
    """
    Name of the additive functional ``int X_s**exponent ds`` in path records
    and CSV dumps.
    """
    return f'int_x^{exponent:.6g}'


class PathRecord:
    """
    Outcome of a single simulated path.

    :ivar int index: Index of the path in its batch.
    :ivar float initial_x: Initial state.
    :ivar float stop_time: Grid time at which the path stopped (at most the
        horizon).
    :ivar str stop_reason: One of :attr:`StopReason.values`.
    :ivar int stop_index: Position of the fired condition in the flattened
        stopping rule (-1 if none fired).
    :ivar bool censored: Whether the horizon was reached before the stopping
        rule fired.
    :ivar dict[str,float] integrals: Left-endpoint sums of the requested
        functionals up to the stopping step.
    :ivar int clamp_events: Number of steps where the scheme left
        ``[clamp_eps, 1 - clamp_eps]``.
    :ivar float min_x: Minimum of the visited grid states.
    :ivar float max_x: Maximum of the visited grid states.
    :ivar float final_x: State at the stopping (or last) grid time.
    :ivar numpy.ndarray snapshots: States at the requested snapshot times
        (NaN if the path stopped earlier), or ``None``.
    :ivar numpy.ndarray occupation: Occupation counts per bin, or ``None``.
    """

    def __init__(self, *, index, initial_x, stop_time, stop_reason, stop_index, censored, integrals,
                 clamp_events, min_x, max_x, final_x, snapshots=None, occupation=None):
        self.index = index
        self.initial_x = initial_x
        self.stop_time = stop_time
        self.stop_reason = stop_reason
        self.stop_index = stop_index
        self.censored = censored
        self.integrals = integrals
        self.clamp_events = clamp_events
        self.min_x = min_x
        self.max_x = max_x
        self.final_x = final_x
        self.snapshots = snapshots
        self.occupation = occupation

    def __repr__(self):
        return (f'{self.__class__.__name__}(index={self.index!r}, stop_time={self.stop_time!r}, '
                f'stop_reason={self.stop_reason!r}, clamp_events={self.clamp_events!r})')


class PathBatch:
    """
    Records of a batch of paths ordered by path index, with array views of
    the commonly aggregated fields. All aggregations iterate the records in
    index order, so they do not depend on how the batch was scheduled.
    """

    def __init__(self, records, functionals=()):
        """
        :param list[PathRecord] records: The path records (in any order).
        :param list[float] functionals: Exponents of the recorded functionals.
        """
        self.records = sorted(records, key=lambda r: r.index)
        self.functionals = list(functionals)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, idx):
        return self.records[idx]

    @property
    def stop_times(self):
        return np.array([r.stop_time for r in self.records])

    @property
    def censored(self):
        return np.array([r.censored for r in self.records], dtype=bool)

    @property
    def clamp_events(self):
        return np.array([r.clamp_events for r in self.records], dtype=np.int64)

    @property
    def final_states(self):
        return np.array([r.final_x for r in self.records])

    @property
    def stop_reasons(self):
        return [r.stop_reason for r in self.records]

    def integral(self, exponent):
        name = functional_name(exponent)
        return np.array([r.integrals[name] for r in self.records])

    def snapshots(self):
        """
        :return: Matrix of snapshot states, one row per path.
        :rtype: numpy.ndarray
        """
        return np.array([r.snapshots for r in self.records])

    def occupation(self):
        """
        :return: Occupation counts summed over the batch.
        :rtype: numpy.ndarray
        """
        return np.sum([r.occupation for r in self.records], axis=0)


@njit(cache=True)
def _step(scheme, a, b, eps, dt, lo, hi, x, z):
    sqdt = sqrt(dt)
    if scheme == 2:
        # Lamperti coordinate y = (2 / eps) asin(sqrt(x)) has unit diffusion.
        s = sqrt(x * (1.0 - x))
        sig = eps * s
        dsig = eps * (1.0 - 2.0 * x) / (2.0 * s)
        y = 2.0 / eps * asin(sqrt(x))
        y += ((a - (a + b) * x) / sig - dsig / 2.0) * dt + sqdt * z
        h = sin(eps * y / 2.0)
        xn = h * h
    else:
        xn = x + (a - (a + b) * x) * dt + eps * sqrt(x * (1.0 - x)) * sqdt * z

    if lo <= xn <= hi:
        return xn, False
    if scheme == 1:
        xn = 2.0 * lo - xn if xn < lo else 2.0 * hi - xn
    return min(max(xn, lo), hi), True


@njit(cache=True)
def _advance(scheme, a, b, eps, dt, lo, hi, n_steps, codes, thresholds, mirrors, exponents,
             snap_steps, burn_step, noise, fstate, istate, integrals, snapshots, occupation):
    # fstate = [x, min_x, max_x], istate = [k, clamp_events, snapshot pointer]
    x = fstate[0]
    min_x = fstate[1]
    max_x = fstate[2]
    k = istate[0]
    clamps = istate[1]
    ptr = istate[2]
    n_bins = occupation.shape[0]
    i = 0
    result = _CONTINUE
    while True:
        fired = -1
        for j in range(codes.shape[0]):
            y = 1.0 - x if mirrors[j] else x
            if codes[j] == 0:
                hit = thresholds[j] <= x <= 1.0 - thresholds[j]
            elif codes[j] == 1:
                hit = y <= thresholds[j]
            else:
                hit = y >= thresholds[j]
            if hit:
                fired = j
                break
        if fired >= 0:
            result = fired
            break

        while ptr < snap_steps.shape[0] and snap_steps[ptr] == k:
            snapshots[ptr] = x
            ptr += 1

        if k >= n_steps:
            result = _HORIZON
            break
        if i >= noise.shape[0]:
            result = _CONTINUE
            break

        for j in range(exponents.shape[0]):
            integrals[j] += x ** exponents[j] * dt
        if n_bins > 0 and k >= burn_step:
            bin_idx = min(int(x * n_bins), n_bins - 1)
            occupation[bin_idx] += 1

        x, clamped = _step(scheme, a, b, eps, dt, lo, hi, x, noise[i])
        i += 1
        if clamped:
            clamps += 1
        min_x = min(min_x, x)
        max_x = max(max_x, x)
        k += 1

    fstate[0] = x
    fstate[1] = min_x
    fstate[2] = max_x
    istate[0] = k
    istate[1] = clamps
    istate[2] = ptr
    return result


def path_generator(master_seed, index):
    """
    Random number generator of a path: a counter-based Philox generator keyed
    by the seed sequence ``(master_seed, spawn_key=(index,))``. Streams of
    different path indices are independent, and a path's stream does not
    depend on any other path.

    :rtype: numpy.random.Generator
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=(index,))))


def step(p, cfg, x, noise):
    """
    Advance the state by one time step of the configured scheme.

    - ``euler_clamp``: explicit Euler step, clipped into
      ``[clamp_eps, 1 - clamp_eps]``;
    - ``euler_reflect``: explicit Euler step, reflected at the floor or the
      ceiling;
    - ``lamperti``: explicit Euler step of ``y = (2 / eps) asin(sqrt(x))``
      mapped back with ``x = sin(eps y / 2)**2``, then clipped.

    :param ModelParams p: The model.
    :param SimConfig cfg: The simulation settings.
    :param float x: Current state in ``[clamp_eps, 1 - clamp_eps]``.
    :param float noise: A standard normal draw.
    :return: The new state and whether the step had to be clamped (or
        reflected).
    :rtype: tuple[float,bool]
    """
    lo, hi = cfg.clamp_eps, 1.0 - cfg.clamp_eps
    if not lo <= x <= hi:
        raise DomainError(f'state {x!r} is outside of [{lo!r}, {hi!r}]')
    xn, clamped = _step(schemes[cfg.scheme], p.a, p.b, p.epsilon, cfg.dt, lo, hi, x, noise)
    return float(xn), bool(clamped)


def _snapshot_steps(cfg, snapshot_times):
    steps = []
    for t in snapshot_times:
        if not 0 <= t <= cfg.t_max:
            raise ConfigError(f'snapshot time {t!r} is outside of [0, {cfg.t_max!r}]')
        steps.append(int(round(t / cfg.dt)))
    if any(s1 > s2 for s1, s2 in zip(steps, steps[1:])):
        raise ConfigError('snapshot times must be nondecreasing')
    return np.array(steps, dtype=np.int64)


def run_path(p, cfg, x0, stop=None, functionals=(), *, index=0, snapshot_times=(), occupation_bins=0, burn_in=0.25):
    """
    Simulate a single path until its stopping rule fires at a grid point or
    the horizon is reached.

    Functionals ``int X_s**e ds`` are accumulated with the left-endpoint rule
    up to the stopping step. Without a stopping rule, the path runs to the
    horizon, or only up to the last snapshot time if snapshots but no
    occupation histogram are requested.

    :param ModelParams p: The model.
    :param SimConfig cfg: The simulation settings.
    :param float x0: Initial state in ``[clamp_eps, 1 - clamp_eps]``.
    :param StoppingSpec stop: Stopping rule (default: none).
    :param list[float] functionals: Exponents of the functionals to
        accumulate.
    :param int index: Index of the path, selecting its random stream.
    :param list[float] snapshot_times: Nondecreasing times at which the state
        is recorded.
    :param int occupation_bins: Number of equal-width bins of the occupation
        histogram (default: 0, no histogram).
    :param float burn_in: Fraction of the horizon excluded from the
        occupation histogram (default: 0.25).
    :rtype: PathRecord
    :raises ConfigError: If the stopping rule is empty or the snapshot times
        are invalid.
    """
    x0 = check_state(x0, interior=True)
    lo, hi = cfg.clamp_eps, 1.0 - cfg.clamp_eps
    if not lo <= x0 <= hi:
        raise DomainError(f'initial state {x0!r} is outside of [{lo!r}, {hi!r}]')

    conditions = stop.conditions() if stop is not None else []
    codes = np.array([StoppingSpec.codes[c.kind] for c in conditions], dtype=np.int64)
    thresholds = np.array([c.threshold for c in conditions], dtype=np.float64)
    mirrors = np.array([c.endpoint == 1 for c in conditions], dtype=np.bool_)
    exponents = np.array(functionals, dtype=np.float64)
    snap_steps = _snapshot_steps(cfg, snapshot_times)

    n_steps = cfg.n_steps
    if stop is None and len(snap_steps) > 0 and occupation_bins == 0:
        n_steps = int(snap_steps[-1])

    fstate = np.array([x0, x0, x0])
    istate = np.zeros(3, dtype=np.int64)
    integrals = np.zeros(len(exponents))
    snapshots = np.full(len(snap_steps), np.nan)
    occupation = np.zeros(occupation_bins, dtype=np.int64)
    burn_step = int(round(burn_in * cfg.n_steps))
    scheme = schemes[cfg.scheme]

    rng = path_generator(cfg.master_seed, index)
    noise = _NO_NOISE
    while True:
        result = _advance(scheme, p.a, p.b, p.epsilon, cfg.dt, lo, hi, n_steps, codes, thresholds, mirrors, exponents,
                          snap_steps, burn_step, noise, fstate, istate, integrals, snapshots, occupation)
        if result != _CONTINUE:
            break
        noise = rng.standard_normal(NOISE_CHUNK)

    k = int(istate[0])
    if result >= 0:
        stop_reason, censored = conditions[result].kind, False
    else:
        stop_reason, censored = (StopReason.CENSORED, True) if conditions else (StopReason.HORIZON, False)

    return PathRecord(index=index, initial_x=x0, stop_time=k * cfg.dt, stop_reason=stop_reason, stop_index=int(result) if result >= 0 else -1,
                      censored=censored, integrals={functional_name(e): float(v) for e, v in zip(functionals, integrals)},
                      clamp_events=int(istate[1]), min_x=float(fstate[1]), max_x=float(fstate[2]), final_x=float(fstate[0]),
                      snapshots=snapshots if len(snap_steps) > 0 else None,
                      occupation=occupation if occupation_bins > 0 else None)


def _run_chunk(indices, p, cfg, x0, stop, functionals, options):
    records = []
    for index in indices:
        try:
            records.append(run_path(p, cfg, x0, stop, functionals, index=index, **options))
        except Exception as e:
            raise PathError(index, e) from e
    return records


def run_batch(p, cfg, x0, stop=None, functionals=(), *, jobs=1, **options):
    """
    Simulate ``cfg.n_paths`` paths; path ``i`` uses the random stream
    ``(cfg.master_seed, i)``. The result is independent of the number of jobs
    and of the order in which the paths finish.

    :param int jobs: Number of worker processes (default: 1).
    :param options: Further keyword arguments of :func:`run_path`.
    :rtype: PathBatch
    :raises PathError: If a path fails; the error carries the path index.
    """
    logger.info('Simulating %d path(s) from x0=%r (%s, dt=%r, t_max=%r, jobs=%d).',
                cfg.n_paths, x0, cfg.scheme, cfg.dt, cfg.t_max, jobs)
    run_chunk = partial(_run_chunk, p=p, cfg=cfg, x0=x0, stop=stop, functionals=list(functionals), options=options)
    if jobs > 1 and cfg.n_paths > 1:
        size = max(1, cfg.n_paths // (jobs * 8))
        chunks = [range(i, min(i + size, cfg.n_paths)) for i in range(0, cfg.n_paths, size)]
        records = []
        with Pool(jobs) as pool:
            for chunk_records in pool.imap_unordered(run_chunk, chunks):
                records.extend(chunk_records)
    else:
        records = run_chunk(range(cfg.n_paths))
    batch = PathBatch(records, functionals)
    logger.debug('Batch done: %d censored, %d with clamp events.', int(batch.censored.sum()), int((batch.clamp_events > 0).sum()))
    return batch


csv_columns = ('path_index', 'stop_time', 'stop_reason', 'clamp_events', 'min_x', 'max_x')


def batch_csv_header(functionals):
    """
    Column names of the per-path CSV dump: ``path_index``, ``stop_time``,
    ``stop_reason``, one column per functional, ``clamp_events``, ``min_x`` and
    ``max_x``.
    """
    return list(csv_columns[:3]) + [functional_name(e) for e in functionals] + list(csv_columns[3:])


def write_batch_csv(batch, f):
    """
    Write the per-path CSV dump of a batch into an open text file. Floats are
    written with their shortest round-tripping representation, so equal
    batches produce byte-identical files.
    """
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(batch_csv_header(batch.functionals))
    for r in batch:
        writer.writerow([r.index, repr(r.stop_time), r.stop_reason]
                        + [repr(r.integrals[functional_name(e)]) for e in batch.functionals]
                        + [r.clamp_events, repr(r.min_x), repr(r.max_x)])
