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
"""state module

State vectors over a truncated ladder of basis labels, probability
distributions, reproducible random streams and the measurement primitives
shared by the two-level and kicked-rotor engines.

A measurement is modeled by default as phase randomization: every measured
amplitude is multiplied by ``exp(2*pi*i*g)`` with ``g`` uniform in [0, 1),
which leaves all populations untouched and removes interference between the
measured states. Wavefunction collapse through ``sample_projection`` is the
opt-in alternative.
"""
import numpy as np

NORM_TOLERANCE = 1e-10
"Allowed deviation of the L2 norm (and of probability sums) from one."

_MAX_U64 = 2 ** 64

class StateVector(object):
    """Complex amplitude vector over consecutive basis labels.

    Entry ``i`` of ``amplitudes`` holds the amplitude of basis label
    ``basis_offset + i``. Two-level states use labels 0 and 1; rotor states
    use a window of action labels centered on the initial state.

    Instances are value-like: every operation in this package returns a new
    state and never modifies its input.

    Args:
        amplitudes (array_like): Complex amplitudes, at least two.
        basis_offset (int): Label of the first stored amplitude.
    """

    def __init__(self, amplitudes, basis_offset=0):
        if not isinstance(basis_offset, (int, np.integer)) or isinstance(basis_offset, bool):
            raise TypeError("basis_offset must be int.")

        amplitudes = np.array(amplitudes, dtype=np.complex128)
        if amplitudes.ndim != 1:
            raise ValueError("amplitudes must be one dimensional.")
        if amplitudes.size < 2:
            raise ValueError("amplitudes must hold at least 2 entries.")

        self._amplitudes = amplitudes
        self._amplitudes.flags.writeable = False
        self._basis_offset = int(basis_offset)

    @classmethod
    def basis(cls, label, size, basis_offset=0):
        """Create the basis state ``|label>`` in a ladder of ``size`` labels.

        Returns:
            StateVector
        """
        amplitudes = np.zeros(size, dtype=np.complex128)
        amplitudes[label - basis_offset] = 1.0
        return cls(amplitudes, basis_offset)

    @classmethod
    def centered(cls, label, size):
        """Create ``|label>`` in an odd ladder of ``size`` labels centered on it.

        Returns:
            StateVector
        """
        if size % 2 != 1:
            raise ValueError("size must be odd to center the ladder.")
        return cls.basis(label, size, label - size // 2)

    @property
    def amplitudes(self):
        """Read-only array of complex amplitudes.

        :type: numpy.ndarray
        """
        return self._amplitudes

    @property
    def basis_offset(self):
        """Label of the first stored amplitude.

        :type: int
        """
        return self._basis_offset

    @property
    def size(self):
        """Number of stored amplitudes.

        :type: int
        """
        return self._amplitudes.size

    @property
    def labels(self):
        """Basis labels of the stored amplitudes.

        :type: numpy.ndarray
        """
        return np.arange(self._basis_offset, self._basis_offset + self.size)

    def index(self, labels):
        """Map basis labels to array indices.

        Raises:
            IndexError: if a label lies outside the stored basis.

        Returns:
            numpy.ndarray
        """
        idx = np.asarray(labels, dtype=np.int64) - self._basis_offset
        if idx.size and (idx.min() < 0 or idx.max() >= self.size):
            raise IndexError("label outside stored basis [%d, %d]" %
                             (self._basis_offset, self._basis_offset + self.size - 1))
        return idx

    def norm(self):
        """L2 norm of the amplitudes.

        Returns:
            float
        """
        return float(np.linalg.norm(self._amplitudes))

    def is_normalized(self, tolerance=NORM_TOLERANCE):
        """Whether the norm equals one within ``tolerance``.

        Returns:
            bool
        """
        return abs(self.norm() - 1.0) <= tolerance

    def replace(self, amplitudes):
        """Return a state with new amplitudes on the same basis.

        Returns:
            StateVector
        """
        return StateVector(amplitudes, self._basis_offset)

    def __len__(self):
        return self.size

    def __str__(self):
        return ("StateVector (size=%d, basis_offset=%d, norm=%.12f)") % (
            self.size,
            self.basis_offset,
            self.norm())


class ProbabilityDistribution(object):
    """Non-negative populations over consecutive basis labels.

    Args:
        probabilities (array_like): Population of each stored label.
        basis_offset (int): Label of the first entry.
        validate (bool): Check entries lie in [0, 1] and sum to one within
            ``NORM_TOLERANCE``. Disable for truncated ladders that leaked
            probability out of the basis.
    """

    def __init__(self, probabilities, basis_offset=0, validate=True):
        probabilities = np.array(probabilities, dtype=np.float64)
        if probabilities.ndim != 1 or probabilities.size < 1:
            raise ValueError("probabilities must be a non-empty 1-D array.")
        if not np.all(np.isfinite(probabilities)):
            raise FloatingPointError("probabilities contain non-finite values.")

        if validate:
            if probabilities.min() < 0.0 or probabilities.max() > 1.0 + NORM_TOLERANCE:
                raise ValueError("probabilities must lie in [0, 1].")
            total = probabilities.sum()
            if abs(total - 1.0) > NORM_TOLERANCE:
                raise ValueError("probabilities sum to %.17g, not 1." % total)

        self._probabilities = probabilities
        self._probabilities.flags.writeable = False
        self._basis_offset = int(basis_offset)

    @property
    def probabilities(self):
        """Read-only array of populations.

        :type: numpy.ndarray
        """
        return self._probabilities

    @property
    def basis_offset(self):
        """Label of the first entry.

        :type: int
        """
        return self._basis_offset

    @property
    def labels(self):
        """Basis labels of the entries.

        :type: numpy.ndarray
        """
        return np.arange(self._basis_offset, self._basis_offset + self._probabilities.size)

    def total(self):
        """Sum of all populations.

        Returns:
            float
        """
        return float(self._probabilities.sum())

    def moment(self, center, order=2):
        """Moment ``sum_m P_m (m - center)**order``.

        Returns:
            float
        """
        return float(np.dot(self._probabilities, (self.labels - center) ** order))

    def participation(self):
        """Participation number ``1 / sum_m P_m**2``.

        Returns:
            float
        """
        return float(1.0 / np.dot(self._probabilities, self._probabilities))

    def __getitem__(self, label):
        return float(self._probabilities[label - self._basis_offset])

    def __len__(self):
        return self._probabilities.size

    def __str__(self):
        return ("ProbabilityDistribution (size=%d, basis_offset=%d, total=%.12f)") % (
            len(self),
            self.basis_offset,
            self.total())


class RngStream(object):
    """Seeded, splittable random stream.

    The bit generator is numpy's ``PCG64`` seeded through a ``SeedSequence``
    built from ``seed`` and the spawn key ``key``. The same (seed, key) pair
    always produces the same sequence, whichever thread draws from it, and
    ``substream(i)`` derives independent child streams, one per realization.

    Args:
        seed (int): 64-bit master seed.
        stream_id (int, tuple): Stream identifier or full spawn key.
    """

    def __init__(self, seed, stream_id=()):
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise TypeError("seed must be int.")
        if seed < 0 or seed >= _MAX_U64:
            raise ValueError("seed must be a 64-bit unsigned integer.")

        if isinstance(stream_id, (int, np.integer)):
            key = (int(stream_id),)
        else:
            key = tuple(int(part) for part in stream_id)
        for part in key:
            if part < 0 or part >= _MAX_U64:
                raise ValueError("stream_id must be a 64-bit unsigned integer.")

        self._seed = int(seed)
        self._key = key
        sequence = np.random.SeedSequence(entropy=self._seed, spawn_key=self._key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    @property
    def seed(self):
        """Master seed.

        :type: int
        """
        return self._seed

    @property
    def stream_id(self):
        """Spawn key identifying this stream under the master seed.

        :type: tuple
        """
        return self._key

    @property
    def generator(self):
        """Underlying numpy generator.

        :type: numpy.random.Generator
        """
        return self._generator

    def substream(self, index):
        """Derive the independent child stream ``index``.

        Returns:
            RngStream
        """
        return RngStream(self._seed, self._key + (int(index),))

    def uniform(self, size=None):
        """Draw uniform numbers in [0, 1).

        Returns:
            float, numpy.ndarray
        """
        return self._generator.random(size)

    def __str__(self):
        return ("RngStream (seed=%d, stream_id=%s)") % (self.seed, self.stream_id)


def random_phases(rng, size=None):
    """Phase factors ``exp(2*pi*i*g)`` with ``g`` uniform in [0, 1).

    The measurement primitive behind ``randomize_phases``; a shape
    ``(steps, labels)`` draws the factors of several measurements in the
    order successive calls would.

    Returns:
        complex, numpy.ndarray
    """
    return np.exp(2j * np.pi * rng.uniform(size))

def randomize_phases(state, measured_labels, rng):
    """Phase-randomization measurement of the given basis labels.

    Each measured amplitude is multiplied by ``exp(2*pi*i*g)`` with an
    independent ``g`` drawn uniformly from [0, 1). Labels are processed in
    ascending order, one draw each. Unmeasured amplitudes are untouched.

    Args:
        state (StateVector): State to measure.
        measured_labels (iterable, None): Labels to measure; ``None`` or an
            empty collection measures nothing.
        rng (RngStream): Random stream.

    Raises:
        IndexError: if a label lies outside the stored basis.

    Returns:
        StateVector
    """
    if measured_labels is None:
        return state

    labels = np.unique(np.fromiter(measured_labels, dtype=np.int64))
    if labels.size == 0:
        return state

    idx = state.index(labels)

    amplitudes = state.amplitudes.copy()
    amplitudes[idx] *= random_phases(rng, idx.size)
    return state.replace(amplitudes)

def randomize_all_phases(state, rng):
    """Phase-randomization measurement of every stored label.

    Equivalent to ``randomize_phases(state, state.labels, rng)`` and draws
    the same numbers, without building the label set.

    Returns:
        StateVector
    """
    return state.replace(state.amplitudes * random_phases(rng, state.size))

def probabilities(state):
    """Populations ``|a_m|**2`` of a normalized state.

    Returns:
        ProbabilityDistribution
    """
    return ProbabilityDistribution(np.abs(state.amplitudes) ** 2, state.basis_offset)

def sample_projection(dist, rng):
    """Sample a basis label with probability ``dist[label]``.

    Inverse-CDF sampling of one uniform draw: the label returned is the
    first whose cumulative population exceeds the draw, so labels with zero
    population are never returned.

    Args:
        dist (ProbabilityDistribution): Populations to sample.
        rng (RngStream): Random stream.

    Returns:
        int
    """
    return dist.basis_offset + int(inverse_cdf(dist.probabilities, rng.uniform()))

def inverse_cdf(probabilities, uniforms):
    """Vectorized inverse-CDF rule behind ``sample_projection``.

    Row ``r`` of ``probabilities`` (or the single 1-D row) is sampled with
    ``uniforms[r]``; the result holds array indices, not labels.

    Returns:
        int, numpy.ndarray
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    single = probabilities.ndim == 1
    rows = np.atleast_2d(probabilities)
    draws = np.atleast_1d(np.asarray(uniforms, dtype=np.float64))

    cumulative = np.cumsum(rows, axis=1)
    idx = (cumulative <= draws[:, None]).sum(axis=1)
    # A draw above a cumulative sum that fell short of 1 by rounding.
    last = rows.shape[1] - 1 - np.argmax(rows[:, ::-1] > 0.0, axis=1)
    idx = np.minimum(idx, last)
    return int(idx[0]) if single else idx
