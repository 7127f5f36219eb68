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
"""rotor module

Quantum kicked rotor with measurements.

One period of the map acts on the action amplitudes ``a_m`` as

    a_m -> exp(-i H0(m) tau) * sum_n a_n J_{m-n}(k)

where the ``i**-m`` phase convention is absorbed in the stored amplitudes.
Unmeasured, the energy ``<(m - m0)**2>`` stops growing after a break time
and the profile localizes exponentially; randomizing the phases before
kicks restores the classical diffusion ``<(m - m0)**2> = k**2 t / (2 tau)``.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial
from scipy import special

from qzeno import utils
from qzeno.analysis import EnsembleResult
from qzeno.state import (ProbabilityDistribution, StateVector, randomize_all_phases,
                         randomize_phases)

_logger = logging.getLogger(__name__)

KERNELS = ('bessel_direct', 'spectral')
"Kick implementations; both give the same amplitudes."

GUARD_BAND = 6.0
"Standard deviations of the diffusive cloud the basis must hold."

LEAKAGE_FRACTION = 0.05
"Fraction of the basis at each end monitored for leakage."

LEAKAGE_THRESHOLD = 1e-8
"Leakage above which a run records a warning."

RESONANCE_DENOMINATOR = 16
RESONANCE_TOLERANCE = 1e-6

BLOCK_SIZE = 8
"Realizations per block."

# i**-m for m mod 4
_PHASE_CYCLE = np.array([1.0, -1.0j, -1.0, 1.0j])


@dataclass(frozen=True)
class MeasurementSchedule:
    """When and what to measure.

    A measurement is made before kick ``j`` (counting from 0) when
    ``j >= 1`` and ``j`` is a multiple of ``every_n_kicks``. The initial
    state is never measured.

    Args:
        every_n_kicks (int, None): Measurement period in kicks, ``None``
            for an unmeasured run.
        measured_labels (str, iterable): ``'all'`` or a collection of basis
            labels.
    """

    every_n_kicks: int = None
    measured_labels: object = 'all'

    def __post_init__(self):
        if self.every_n_kicks is not None:
            if isinstance(self.every_n_kicks, bool) or not isinstance(self.every_n_kicks, int):
                raise TypeError("every_n_kicks must be int or None.")
            if self.every_n_kicks < 1:
                raise ValueError("every_n_kicks must be >= 1.")

        if isinstance(self.measured_labels, str):
            if self.measured_labels != 'all':
                raise ValueError("measured_labels must be 'all' or a list of labels.")
        else:
            labels = tuple(sorted(set(int(label) for label in self.measured_labels)))
            if not labels:
                raise ValueError("measured_labels must not be empty.")
            object.__setattr__(self, 'measured_labels', labels)

    @classmethod
    def from_config(cls, options):
        """Build a schedule from ``None``, a schedule or its config dict.

        Returns:
            MeasurementSchedule
        """
        if options is None:
            return cls()
        if isinstance(options, cls):
            return options
        if not isinstance(options, dict):
            raise TypeError("schedule must be an object.")
        unknown = set(options) - {'every_n_kicks', 'measured_labels'}
        if unknown:
            raise ValueError("unknown schedule keys: %s" % ', '.join(sorted(unknown)))
        return cls(**options)

    @property
    def active(self):
        """Whether any measurement happens.

        :type: bool
        """
        return self.every_n_kicks is not None

    def measures(self, kick_index):
        """Whether a measurement precedes kick ``kick_index``.

        Returns:
            bool
        """
        return self.active and kick_index >= 1 and kick_index % self.every_n_kicks == 0

    def to_dict(self):
        labels = self.measured_labels
        return {'every_n_kicks': self.every_n_kicks,
                'measured_labels': labels if isinstance(labels, str) else list(labels)}


@dataclass
class RotorConfig:
    """Parameters of a kicked-rotor experiment.

    Args:
        kick_strength (float): Kick strength ``k > 0``.
        n_kicks (int): Number of kicks.
        basis_size (int): Odd number of action labels, centered on
            ``initial_state``.
        period (float): Kick period ``tau``.
        h0 (list): Ascending polynomial coefficients of ``H0(m)``.
        initial_state (int): Initial label ``m0``.
        schedule (MeasurementSchedule, dict, None): Measurement schedule.
        n_realizations (int): Realizations for runs that draw random numbers.
        kernel (str): One of ``KERNELS``.
        allow_small_basis (bool): Accept a basis below the guard-band rule.
        initial_width (float): Width in labels of a Gaussian initial packet,
            0 for the basis state ``|m0>``.
        random_initial_phases (bool): Randomize the initial phases of every
            label, once per realization.
    """

    kick_strength: float
    n_kicks: int
    basis_size: int
    period: float = 1.0
    h0: list = field(default_factory=lambda: [0.0, 0.0, 0.5])
    initial_state: int = 0
    schedule: MeasurementSchedule = None
    n_realizations: int = 1
    kernel: str = 'bessel_direct'
    allow_small_basis: bool = False
    initial_width: float = 0.0
    random_initial_phases: bool = False

    def __post_init__(self):
        for name in ('kick_strength', 'period', 'initial_width'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError("%s must be a number." % name)
            setattr(self, name, float(value))
        for name in ('n_kicks', 'basis_size', 'initial_state', 'n_realizations'):
            if isinstance(getattr(self, name), bool) or not isinstance(getattr(self, name), int):
                raise TypeError("%s must be int." % name)

        if self.kick_strength < 0:
            raise ValueError("kick_strength must be >= 0.")
        if self.period <= 0:
            raise ValueError("period must be > 0.")
        if self.n_kicks < 1:
            raise ValueError("n_kicks must be >= 1.")
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1.")
        if self.initial_width < 0:
            raise ValueError("initial_width must be >= 0.")
        if self.kernel not in KERNELS:
            raise ValueError("Invalid kernel %r, must be one of %s." %
                             (self.kernel, ', '.join(KERNELS)))
        if self.basis_size < 3:
            raise ValueError("basis_size must be >= 3.")
        if self.basis_size % 2 == 0:
            raise ValueError("basis_size must be odd to center the basis on initial_state; "
                             "use %d." % (self.basis_size + 1))

        self.h0 = [float(c) for c in self.h0]
        if not self.h0:
            raise ValueError("h0 must hold at least one coefficient.")
        self.schedule = MeasurementSchedule.from_config(self.schedule)

        labels = self.schedule.measured_labels
        if not isinstance(labels, str):
            outside = [m for m in labels if not self.lowest_label <= m <= self.highest_label]
            if outside:
                raise ValueError("measured labels %s lie outside the basis [%d, %d]." %
                                 (outside, self.lowest_label, self.highest_label))

        required = self.guard_band_size
        if self.basis_size < required:
            if not self.allow_small_basis:
                raise ValueError("basis_size %d is below the guard band %d for k=%g and "
                                 "%d kicks; increase it or set allow_small_basis." %
                                 (self.basis_size, required, self.kick_strength, self.n_kicks))
            _logger.warning("basis_size %d below guard band %d, leakage is monitored",
                            self.basis_size, required)

    @property
    def half_width(self):
        return self.basis_size // 2

    @property
    def lowest_label(self):
        return self.initial_state - self.half_width

    @property
    def highest_label(self):
        return self.initial_state + self.half_width

    @property
    def guard_band_size(self):
        """Smallest basis holding ``GUARD_BAND`` widths of the diffusive cloud.

        :type: int
        """
        k = self.kick_strength
        reach = GUARD_BAND * k * math.sqrt(self.n_kicks) + k
        size = 2 * int(math.ceil(reach)) + 1
        return size

    @property
    def randomized(self):
        """Whether runs draw random numbers.

        :type: bool
        """
        return self.schedule.active or self.random_initial_phases

    @property
    def effective_realizations(self):
        """Realizations actually run: one when nothing is random.

        :type: int
        """
        return self.n_realizations if self.randomized else 1

    @property
    def classical_diffusion(self):
        """Classical diffusion coefficient ``B = k**2 / (4 tau)``.

        :type: float
        """
        return self.kick_strength ** 2 / (4.0 * self.period)

    @property
    def break_time_scale(self):
        """Break-time scale ``tau k**2 / 2``.

        :type: float
        """
        return self.period * self.kick_strength ** 2 / 2.0

    def to_dict(self):
        """Resolved parameters as a dict.

        Returns:
            dict
        """
        return {'kick_strength': self.kick_strength, 'n_kicks': self.n_kicks,
                'basis_size': self.basis_size, 'period': self.period,
                'h0': list(self.h0), 'initial_state': self.initial_state,
                'schedule': self.schedule.to_dict(),
                'n_realizations': self.n_realizations, 'kernel': self.kernel,
                'allow_small_basis': self.allow_small_basis,
                'initial_width': self.initial_width,
                'random_initial_phases': self.random_initial_phases}


def kernel_half_width(k):
    """Kernel half-width beyond which ``|J_m(k)| < 1e-14``.

    Returns:
        int
    """
    return int(math.ceil(k + 8.0 * k ** (1.0 / 3.0) + 10.0))

def bessel_kernel(k, half_width=None):
    """Bessel values ``J_{-w}(k) .. J_{w}(k)``.

    Negative orders are filled from ``J_{-m} = (-1)**m J_m``.

    Args:
        k (float): Kick strength.
        half_width (int, None): ``w``; ``None`` for ``kernel_half_width(k)``.

    Returns:
        numpy.ndarray: ``2 w + 1`` real values, order ``-w`` first.
    """
    if half_width is None:
        half_width = kernel_half_width(k)
    if half_width < 0:
        raise ValueError("half_width must be >= 0.")

    orders = np.arange(half_width + 1)
    positive = special.jv(orders, k)
    signs = np.where(orders % 2 == 0, 1.0, -1.0)
    negative = (signs * positive)[:0:-1]
    return np.concatenate((negative, positive))

def kick(state, k, kernel='bessel_direct'):
    """Apply one kick: ``out_m = sum_n in_n J_{m-n}(k)``.

    Amplitude carried beyond the stored basis is lost, so the norm drops by
    the leaked probability.

    Args:
        state (StateVector): State before the kick.
        k (float): Kick strength.
        kernel (str): ``'bessel_direct'`` convolves with the truncated
            kernel; ``'spectral'`` multiplies by ``exp(-i k cos(theta))`` in
            the angle representation.

    Raises:
        FloatingPointError: if the result is not finite.

    Returns:
        StateVector
    """
    if kernel not in KERNELS:
        raise ValueError("Invalid kernel %r, must be one of %s." % (kernel, ', '.join(KERNELS)))

    bessel = bessel_kernel(k)
    if kernel == 'bessel_direct':
        amplitudes = _kick_direct(state.amplitudes, bessel)
    else:
        amplitudes = _kick_spectral(state.amplitudes, state.labels, k, bessel.size // 2)

    if not np.all(np.isfinite(amplitudes)):
        raise FloatingPointError("kick produced non-finite amplitudes.")
    return state.replace(amplitudes)

def _kick_direct(amplitudes, bessel):
    w = bessel.size // 2
    return np.convolve(amplitudes, bessel)[w:w + amplitudes.size]

def _spectral_size(size, half_width):
    return 1 << int(math.ceil(math.log2(size + 2 * half_width)))

def _kick_spectral(amplitudes, labels, k, half_width):
    size = amplitudes.size
    n = _spectral_size(size, half_width)
    theta = 2.0 * np.pi * np.arange(n) / n
    phase = _PHASE_CYCLE[labels % 4]

    padded = np.zeros(n, dtype=np.complex128)
    padded[:size] = phase * amplitudes
    angular = np.fft.ifft(padded) * np.exp(-1j * k * np.cos(theta))
    return np.conj(phase) * np.fft.fft(angular)[:size]

def free_rotation(state, config):
    """Multiply each amplitude by ``exp(-i H0(m) tau)``.

    Returns:
        StateVector
    """
    phases = _rotation_phases(state.labels, config.h0, config.period)
    return state.replace(state.amplitudes * phases)

def _rotation_phases(labels, h0, period):
    return np.exp(-1j * polynomial.polyval(labels.astype(np.float64), h0) * period)

def step(state, config, kick_index, rng):
    """One period of the map: measurement if scheduled, kick, free rotation.

    Args:
        state (StateVector): State before kick ``kick_index``.
        config (RotorConfig): Experiment parameters.
        kick_index (int): Index of the kick, counting from 0.
        rng (RngStream): Stream for the measurement phases.

    Returns:
        StateVector
    """
    return _propagator(config).step(state, kick_index, rng)

# (resolved parameters, propagator) of the last config stepped
_last_propagator = None

def _propagator(config):
    global _last_propagator
    key = config.to_dict()
    cached = _last_propagator
    if cached is not None and cached[0] == key:
        return cached[1]
    propagator = _Propagator(config)
    _last_propagator = (key, propagator)
    return propagator


class _Propagator(object):
    """Precomputed kernel and phases for repeated steps of one config."""

    def __init__(self, config):
        self.config = config
        self.schedule = config.schedule
        self.labels = np.arange(config.lowest_label, config.highest_label + 1)
        self.bessel = bessel_kernel(config.kick_strength)
        self.rotation = _rotation_phases(self.labels, config.h0, config.period)

    def step(self, state, kick_index, rng):
        if self.schedule.measures(kick_index):
            if self.schedule.measured_labels == 'all':
                state = randomize_all_phases(state, rng)
            else:
                state = randomize_phases(state, self.schedule.measured_labels, rng)

        if self.config.kernel == 'bessel_direct' and np.array_equal(state.labels, self.labels):
            amplitudes = _kick_direct(state.amplitudes, self.bessel)
            if not np.all(np.isfinite(amplitudes)):
                raise FloatingPointError("kick produced non-finite amplitudes.")
            return state.replace(amplitudes * self.rotation)

        state = kick(state, self.config.kick_strength, self.config.kernel)
        return free_rotation(state, self.config)


def leakage(probabilities, fraction=LEAKAGE_FRACTION):
    """Probability held in the outer ``fraction`` of the basis at both ends.

    Returns:
        float
    """
    p = np.asarray(probabilities, dtype=np.float64)
    edge = max(1, int(math.ceil(fraction * p.size)))
    value = float(p[:edge].sum() + p[-edge:].sum())
    if math.isnan(value):
        raise FloatingPointError("leakage is NaN.")
    return value

def resonance(config, max_denominator=RESONANCE_DENOMINATOR, tolerance=RESONANCE_TOLERANCE):
    """Detect a quantum resonance of a quadratic ``H0``.

    With ``H0(m) = a m**2 + ...`` the rotation phases recur when
    ``a tau / (2 pi)`` is a rational ``p / q``; low ``q`` gives ballistic
    growth instead of localization.

    Returns:
        tuple, None: ``(p, q)`` when ``a tau / (2 pi)`` lies within
        ``tolerance`` of such a fraction with ``q <= max_denominator``.
    """
    coefficients = np.trim_zeros(np.asarray(config.h0, dtype=np.float64), 'b')
    if coefficients.size != 3:
        return None
    x = coefficients[2] * config.period / (2.0 * math.pi)
    fraction = Fraction(x).limit_denominator(max_denominator)
    if abs(x - float(fraction)) <= tolerance * max(1.0, abs(x)):
        return fraction.numerator, fraction.denominator
    return None

def initial_state(config, rng=None):
    """Initial state of a realization.

    A basis state at ``m0``, or a Gaussian packet of ``initial_width``;
    with ``random_initial_phases`` every phase is drawn from ``rng``.

    Returns:
        StateVector
    """
    labels = np.arange(config.lowest_label, config.highest_label + 1)
    if config.initial_width > 0:
        distance = (labels - config.initial_state) / config.initial_width
        amplitudes = np.exp(-0.25 * distance ** 2)
        amplitudes /= np.linalg.norm(amplitudes)
        state = StateVector(amplitudes, config.lowest_label)
    else:
        state = StateVector.centered(config.initial_state, config.basis_size)

    if config.random_initial_phases:
        if rng is None:
            raise ValueError("random_initial_phases needs a random stream.")
        state = randomize_all_phases(state, rng)
    return state

def run_rotor(config, rng, workers=None):
    """Run a kicked-rotor experiment.

    Observables ``energy`` (``<(m - m0)**2>``), ``participation`` and
    ``leakage`` are reported at ``t = j tau`` for ``j = 0..n_kicks``, with
    the final profile and the profile averaged over the last quarter of
    kicks. Realization ``r`` draws only from ``rng.substream(r)``; runs
    without randomness use a single realization.

    Args:
        config (RotorConfig): Experiment parameters.
        rng (RngStream): Master stream.
        workers (int, None): Worker threads.

    Returns:
        EnsembleResult
    """
    if not isinstance(config, RotorConfig):
        raise TypeError("config must be a RotorConfig.")

    warnings = []
    found = resonance(config)
    if found is not None:
        message = ("quantum resonance: a tau / (2 pi) is close to %d/%d; "
                   "expect ballistic growth" % found)
        _logger.warning(message)
        warnings.append(message)

    count = config.effective_realizations
    if count != config.n_realizations:
        _logger.debug("deterministic run, using 1 realization instead of %d",
                      config.n_realizations)

    propagator = _Propagator(config)
    parts = utils.map_blocks(lambda start, stop: _rotor_block(propagator, rng, start, stop),
                             count, BLOCK_SIZE, workers)

    mean, error, total = utils.reduce_moments(part[0] for part in parts)
    final = sum(part[1] for part in parts) / total
    averaged = sum(part[2] for part in parts) / total
    leakage_max = max(part[3] for part in parts)

    if leakage_max > LEAKAGE_THRESHOLD:
        message = "leakage %.3g exceeds %g: basis too small" % (leakage_max, LEAKAGE_THRESHOLD)
        _logger.warning(message)
        warnings.append(message)

    times = np.arange(config.n_kicks + 1) * config.period
    names = ('energy', 'participation', 'leakage')
    return EnsembleResult(times=times,
                          means={name: mean[:, i] for i, name in enumerate(names)},
                          errors={name: error[:, i] for i, name in enumerate(names)},
                          n_realizations=total,
                          final_profile=ProbabilityDistribution(final, config.lowest_label,
                                                                validate=False),
                          averaged_profile=ProbabilityDistribution(averaged, config.lowest_label,
                                                                   validate=False),
                          leakage_max=leakage_max,
                          warnings=warnings)

def averaging_start(n_kicks):
    """First kick of the profile average over the last quarter.

    Returns:
        int
    """
    return n_kicks - max(1, n_kicks // 4) + 1

def _rotor_block(propagator, rng, start, stop):
    config = propagator.config
    n = config.n_kicks
    first = averaging_start(n)
    center = propagator.labels - config.initial_state
    distance2 = (center * center).astype(np.float64)

    samples = np.empty((stop - start, n + 1, 3))
    final = np.zeros(config.basis_size)
    averaged = np.zeros(config.basis_size)
    leakage_max = 0.0

    for row, r in enumerate(range(start, stop)):
        stream = rng.substream(r)
        state = initial_state(config, stream)
        for j in range(n + 1):
            if j > 0:
                state = propagator.step(state, j - 1, stream)
            p = np.abs(state.amplitudes) ** 2
            lost = leakage(p)
            samples[row, j] = (np.dot(p, distance2), 1.0 / np.dot(p, p), lost)
            leakage_max = max(leakage_max, lost)
            if j >= first:
                averaged += p
        final += p

    averaged /= n - first + 1
    return utils.moments(samples), final, averaged, leakage_max
