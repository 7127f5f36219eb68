#
# Quantum Zeno Toolkit
#
# Copyright (C) 2026 The qzeno developers.  All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""twolevel module

Resonantly driven two-level system observed at intervals ``tau``.

Between measurements the amplitudes evolve with

    A = [[cos(phi), i sin(phi)], [i sin(phi), cos(phi)]],  phi = Omega tau / 2

and a measurement randomizes both phases, so populations evolve with the
doubly stochastic matrix ``M = [[cos^2, sin^2], [sin^2, cos^2]]``. With
``T = n tau = pi / Omega`` fixed, ``p2(T) = (1 - cos^n(2 phi)) / 2`` tends to
zero as ``n`` grows: frequent measurement freezes the transition.
"""
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from qzeno import utils
from qzeno.analysis import EnsembleResult
from qzeno.state import (ProbabilityDistribution, StateVector, inverse_cdf, probabilities,
                         random_phases, randomize_all_phases, sample_projection)

_logger = logging.getLogger(__name__)

MODES = ('analytic', 'coherent', 'dephasing_mc', 'collapse_mc')
"Run modes; the last two are Monte Carlo."

BLOCK_SIZE = 64
"Realizations per block of the Monte Carlo modes."

STEP_CHUNK = 4096
"Measurements drawn at once per trajectory of a block."

@dataclass
class TwoLevelConfig:
    """Parameters of a two-level Zeno experiment.

    Args:
        rabi_frequency (float): Rabi frequency Omega > 0.
        measurement_interval (float): Interval tau > 0 between measurements.
        n_steps (int): Number of intervals n >= 1; the run ends at T = n tau.
        initial_state (int): Initial basis label, 0 or 1.
        mode (str): One of ``MODES``.
        n_realizations (int): Trajectories for the Monte Carlo modes.
        detuning (float): Reserved; only resonant driving (0) is supported.
    """

    rabi_frequency: float
    measurement_interval: float
    n_steps: int
    initial_state: int = 0
    mode: str = 'analytic'
    n_realizations: int = 1
    detuning: float = 0.0

    def __post_init__(self):
        for name in ('rabi_frequency', 'measurement_interval', 'detuning'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError("%s must be a number." % name)
            setattr(self, name, float(value))
        for name in ('n_steps', 'initial_state', 'n_realizations'):
            if isinstance(getattr(self, name), bool) or not isinstance(getattr(self, name), int):
                raise TypeError("%s must be int." % name)

        if self.rabi_frequency <= 0:
            raise ValueError("rabi_frequency must be > 0.")
        if self.measurement_interval <= 0:
            raise ValueError("measurement_interval must be > 0.")
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1.")
        if self.initial_state not in (0, 1):
            raise ValueError("initial_state must be 0 or 1.")
        if self.mode not in MODES:
            raise ValueError("Invalid mode %r, must be one of %s." % (self.mode, ', '.join(MODES)))
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1.")
        if self.detuning != 0.0:
            raise NotImplementedError("detuned driving is not supported.")

    @property
    def phi(self):
        """Rotation angle per interval, ``Omega tau / 2``.

        :type: float
        """
        return 0.5 * self.rabi_frequency * self.measurement_interval

    @property
    def total_time(self):
        """Duration ``T = n tau`` of the run.

        :type: float
        """
        return self.n_steps * self.measurement_interval

    @property
    def monte_carlo(self):
        """Whether the mode samples trajectories.

        :type: bool
        """
        return self.mode in ('dephasing_mc', 'collapse_mc')

    def to_dict(self):
        """Resolved parameters as a dict.

        Returns:
            dict
        """
        return asdict(self)

def coherent_step_matrix(phi):
    """Unitary evolution matrix of one interval.

    Returns:
        numpy.ndarray: 2x2 complex matrix.
    """
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)

def coherent_power(phi, n):
    """n-th power of the one-interval matrix, a rotation by ``n phi``.

    Returns:
        numpy.ndarray: 2x2 complex matrix.
    """
    _check_power(n)
    return coherent_step_matrix(n * phi)

def measured_step_matrix(phi):
    """Population evolution matrix of one interval followed by a measurement.

    Returns:
        numpy.ndarray: 2x2 doubly stochastic matrix.
    """
    c2, s2 = math.cos(phi) ** 2, math.sin(phi) ** 2
    return np.array([[c2, s2], [s2, c2]], dtype=np.float64)

def measured_power(phi, n):
    """n-th power of the population matrix in closed form.

    ``M**n = [[1 + c, 1 - c], [1 - c, 1 + c]] / 2`` with ``c = cos(2 phi)**n``.

    Returns:
        numpy.ndarray: 2x2 doubly stochastic matrix.
    """
    _check_power(n)
    c = math.cos(2.0 * phi) ** n
    return 0.5 * np.array([[1.0 + c, 1.0 - c], [1.0 - c, 1.0 + c]], dtype=np.float64)

def _check_power(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError("n must be int.")
    if n < 0:
        raise ValueError("n must be >= 0.")

def zeno_transition(n):
    """Transition probability ``p2(T)`` at ``T = pi / Omega`` with ``n`` intervals.

    Returns:
        float
    """
    return float(measured_power(math.pi / (2 * n), n)[1, 0])

def zeno_sweep(n_values):
    """Transition probability at ``T = pi / Omega`` for several ``n``.

    Returns:
        list: list of (n, p2) tuples.
    """
    return [(int(n), zeno_transition(int(n))) for n in n_values]

def run_two_level(config, rng, workers=None):
    """Run a two-level experiment.

    Populations ``p1`` (label 0) and ``p2`` (label 1) are reported at
    ``t = k tau`` for ``k = 0..n``.

    * ``analytic``: the closed form of ``M**k``.
    * ``coherent``: unmeasured evolution, ``A**k``.
    * ``dephasing_mc``: each trajectory alternates ``A`` with phase
      randomization of both labels; populations are ``|a|**2``.
    * ``collapse_mc``: each trajectory is projected onto a sampled label at
      every ``k tau``; populations are the 0/1 outcomes.

    ``final_profile`` holds the populations at ``T``.

    Monte Carlo realization ``r`` draws only from ``rng.substream(r)``.

    Args:
        config (TwoLevelConfig): Experiment parameters.
        rng (RngStream): Master stream.
        workers (int, None): Worker threads for the Monte Carlo modes.

    Returns:
        EnsembleResult
    """
    if not isinstance(config, TwoLevelConfig):
        raise TypeError("config must be a TwoLevelConfig.")

    k = np.arange(config.n_steps + 1)
    times = k * config.measurement_interval
    phi = config.phi

    if config.mode == 'analytic':
        p1 = 0.5 * (1.0 + np.cos(2.0 * phi) ** k)
        return _deterministic(times, p1, config.initial_state)

    if config.mode == 'coherent':
        p1 = np.cos(k * phi) ** 2
        return _deterministic(times, p1, config.initial_state)

    kernel = _dephasing_block if config.mode == 'dephasing_mc' else _collapse_block
    parts = utils.map_blocks(lambda start, stop: kernel(config, rng, start, stop),
                             config.n_realizations, BLOCK_SIZE, workers)
    mean, error, count = utils.reduce_moments(parts)
    _logger.debug("%s: %d realizations, p2(T)=%g +- %g", config.mode, count,
                  mean[-1, 1], error[-1, 1])

    return EnsembleResult(times=times,
                          means={'p1': mean[:, 0], 'p2': mean[:, 1]},
                          errors={'p1': error[:, 0], 'p2': error[:, 1]},
                          n_realizations=count,
                          final_profile=_final_profile(mean[-1, 0], mean[-1, 1]))

def _deterministic(times, p_same, initial_state):
    # p_same is the population of the initial label
    p_other = 1.0 - p_same
    p1, p2 = (p_same, p_other) if initial_state == 0 else (p_other, p_same)
    zeros = np.zeros_like(times)
    return EnsembleResult(times=times,
                          means={'p1': p1, 'p2': p2},
                          errors={'p1': zeros, 'p2': zeros.copy()},
                          n_realizations=1,
                          final_profile=_final_profile(p1[-1], p2[-1]))

def _final_profile(p1, p2):
    return ProbabilityDistribution([p1, p2], validate=False)

def dephasing_trajectory(config, rng):
    """Populations of one dephasing trajectory at ``t = k tau``.

    The state alternates the one-interval evolution with
    ``randomize_all_phases``; ``run_two_level`` draws the same numbers from
    ``rng`` for the same realization.

    Returns:
        numpy.ndarray: ``(n_steps + 1, 2)`` populations.
    """
    return _trajectory(config, lambda state: randomize_all_phases(state, rng))

def collapse_trajectory(config, rng):
    """Populations of one projective trajectory at ``t = k tau``.

    After every interval the state is replaced by the basis state of a
    label drawn with ``sample_projection``.

    Returns:
        numpy.ndarray: ``(n_steps + 1, 2)`` 0/1 populations.
    """
    return _trajectory(config, lambda state: StateVector.basis(
        sample_projection(probabilities(state), rng), 2))

def _trajectory(config, measure):
    matrix = coherent_step_matrix(config.phi)
    state = StateVector.basis(config.initial_state, 2)
    populations = np.empty((config.n_steps + 1, 2))
    populations[0] = probabilities(state).probabilities
    for step in range(config.n_steps):
        state = state.replace(matrix.dot(state.amplitudes))
        state = measure(state)
        populations[step + 1] = probabilities(state).probabilities
    return populations

# The block kernels below run BLOCK_SIZE trajectories side by side. Draws
# are taken STEP_CHUNK measurements at a time from each substream, in the
# order the single-trajectory functions take them, and moments are
# accumulated per step; memory is bounded by BLOCK_SIZE * STEP_CHUNK.

def _initial_amplitudes(config, count):
    amplitudes = np.zeros((count, 2), dtype=np.complex128)
    amplitudes[:, config.initial_state] = 1.0
    return amplitudes

def _evolve(amplitudes, c, s):
    a1, a2 = amplitudes[:, 0], amplitudes[:, 1]
    return np.stack((c * a1 + 1j * s * a2, 1j * s * a1 + c * a2), axis=1)

def _chunks(n):
    return [(first, min(first + STEP_CHUNK, n)) for first in range(0, n, STEP_CHUNK)]

def _dephasing_block(config, rng, start, stop):
    streams = [rng.substream(r) for r in range(start, stop)]
    c, s = math.cos(config.phi), math.sin(config.phi)

    amplitudes = _initial_amplitudes(config, len(streams))
    mean, m2 = _accumulators(config.n_steps)
    _record(mean, m2, 0, np.abs(amplitudes) ** 2)
    for first, last in _chunks(config.n_steps):
        phases = np.stack([random_phases(stream, (last - first, 2)) for stream in streams])
        for j in range(last - first):
            amplitudes = _evolve(amplitudes, c, s) * phases[:, j]
            _record(mean, m2, first + j + 1, np.abs(amplitudes) ** 2)
    return len(streams), mean, m2

def _collapse_block(config, rng, start, stop):
    streams = [rng.substream(r) for r in range(start, stop)]
    c, s = math.cos(config.phi), math.sin(config.phi)

    count = len(streams)
    amplitudes = _initial_amplitudes(config, count)
    mean, m2 = _accumulators(config.n_steps)
    _record(mean, m2, 0, np.abs(amplitudes) ** 2)
    rows = np.arange(count)
    for first, last in _chunks(config.n_steps):
        draws = np.stack([stream.uniform(last - first) for stream in streams])
        for j in range(last - first):
            amplitudes = _evolve(amplitudes, c, s)
            outcome = inverse_cdf(np.abs(amplitudes) ** 2, draws[:, j])
            amplitudes = np.zeros_like(amplitudes)
            amplitudes[rows, outcome] = 1.0
            _record(mean, m2, first + j + 1, amplitudes.real)
    return count, mean, m2

def _accumulators(n):
    return np.empty((n + 1, 2)), np.empty((n + 1, 2))

def _record(mean, m2, index, populations):
    _, mean[index], m2[index] = utils.moments(populations)
