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
"""decay module

Survival probability under repeated measurement and the short-time decay
law of perturbation theory.

Units are hbar = 1: energies are angular frequencies and the decay
probability of a state of energy ``E0`` coupled to a band ``[E_l, E_u]`` is

    P_d(t) = int |V(E)|^2 rho(E) sin^2((E - E0) t / 2) / ((E - E0) / 2)^2 dE

which grows as ``g t**2`` with ``g = (E_u - E_l) |V(E0)|^2 rho(E0)`` while
``t (E_u - E_l)`` is small.
"""
import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

_logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-9
"Relative tolerance of the decay integral."

VALIDITY_THRESHOLD = 0.1
"Default bound on gamma*tau and t*(E_u - E_l) for the small-step laws."

_PANEL_OSCILLATIONS = 50
_MAX_PANELS = 2000

Survival = namedtuple('Survival', ['probability', 'limit'])
"""Survival after ``n`` steps and its continuous-time limit."""

class QuadratureError(ArithmeticError):
    """Raised when the decay integral misses its tolerance.

    Attributes:
        estimate (float): Best value reached.
        abserr (float): Absolute error estimate achieved.
    """

    def __init__(self, message, estimate, abserr):
        super(QuadratureError, self).__init__(
            "%s (estimate=%.17g, abserr=%.3g)" % (message, estimate, abserr))
        self.estimate = estimate
        self.abserr = abserr


class SpectralModel(object):
    """Band of decay products seen by a state of energy ``E0``.

    ``coupling`` is ``|V(E)|**2`` and ``density`` is ``rho(E)``; each is a
    non-negative scalar (constant over the band) or a callable of ``E``.

    Args:
        E_l (float): Lower band edge.
        E_u (float): Upper band edge, ``E_u > E_l``.
        E0 (float): Energy of the decaying state, ``E_l <= E0 <= E_u``.
        coupling (float, callable): Squared coupling ``|V(E)|**2``.
        density (float, callable): Density of states ``rho(E)``.
    """

    def __init__(self, E_l, E_u, E0, coupling, density=1.0, breakpoints=(), source=None):
        for name, value in (('E_l', E_l), ('E_u', E_u), ('E0', E0)):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError("%s must be a number." % name)
        if not E_u > E_l:
            raise ValueError("E_u must be greater than E_l.")
        if not E_l <= E0 <= E_u:
            raise ValueError("E0 must lie in [E_l, E_u].")

        self._E_l = float(E_l)
        self._E_u = float(E_u)
        self._E0 = float(E0)
        self._coupling = self._function(coupling, 'coupling')
        self._density = self._function(density, 'density')
        self._breakpoints = tuple(float(e) for e in breakpoints if E_l < e < E_u)
        self._source = source

    @staticmethod
    def _function(value, name):
        if callable(value):
            return value
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError("%s must be a number or callable." % name)
        if value < 0:
            raise ValueError("%s must be non-negative." % name)
        value = float(value)
        return lambda energy: value

    @classmethod
    def flat(cls, coupling=0.01, density=1.0, E_l=-5.0, E_u=5.0, E0=0.0):
        """Constant coupling and density over ``[E_l, E_u]``.

        Returns:
            SpectralModel
        """
        source = {'preset': 'flat', 'coupling': float(coupling), 'density': float(density),
                  'E_l': float(E_l), 'E_u': float(E_u), 'E0': float(E0)}
        return cls(E_l, E_u, E0, coupling, density, source=source)

    @classmethod
    def from_table(cls, energies, couplings, densities, E0):
        """Tabulated ``(E, |V|**2, rho)`` triples, linearly interpolated.

        The band is the span of the table.

        Returns:
            SpectralModel
        """
        energies = np.asarray(energies, dtype=np.float64)
        couplings = np.asarray(couplings, dtype=np.float64)
        densities = np.asarray(densities, dtype=np.float64)
        if energies.ndim != 1 or energies.size < 2:
            raise ValueError("table needs at least 2 energies.")
        if couplings.shape != energies.shape or densities.shape != energies.shape:
            raise ValueError("table columns must have equal length.")
        if np.any(np.diff(energies) <= 0):
            raise ValueError("table energies must be strictly increasing.")
        if couplings.min() < 0 or densities.min() < 0:
            raise ValueError("table couplings and densities must be non-negative.")

        source = {'table': [[float(e), float(v), float(r)]
                            for e, v, r in zip(energies, couplings, densities)],
                  'E0': float(E0)}
        return cls(float(energies[0]), float(energies[-1]), E0,
                   lambda energy: float(np.interp(energy, energies, couplings)),
                   lambda energy: float(np.interp(energy, energies, densities)),
                   breakpoints=energies[1:-1], source=source)

    @classmethod
    def from_config(cls, options):
        """Build a model from its config dict.

        Either ``{"preset": "flat", ...flat() arguments}`` or
        ``{"table": [[E, V2, rho], ...], "E0": value}``.

        Returns:
            SpectralModel
        """
        if not isinstance(options, dict):
            raise TypeError("model must be an object.")
        options = dict(options)
        if 'table' in options:
            table = np.asarray(options.pop('table'), dtype=np.float64)
            E0 = options.pop('E0', None)
            if options:
                raise ValueError("unknown model keys: %s" % ', '.join(sorted(options)))
            if E0 is None:
                raise ValueError("tabulated model needs E0.")
            if table.ndim != 2 or table.shape[1] != 3:
                raise ValueError("model table rows must be [E, V2, rho].")
            return cls.from_table(table[:, 0], table[:, 1], table[:, 2], E0)

        preset = options.pop('preset', 'flat')
        if preset != 'flat':
            raise ValueError("Unknown model preset %r." % preset)
        allowed = {'coupling', 'density', 'E_l', 'E_u', 'E0'}
        unknown = set(options) - allowed
        if unknown:
            raise ValueError("unknown model keys: %s" % ', '.join(sorted(unknown)))
        return cls.flat(**options)

    @property
    def E_l(self):
        """Lower band edge.

        :type: float
        """
        return self._E_l

    @property
    def E_u(self):
        """Upper band edge.

        :type: float
        """
        return self._E_u

    @property
    def E0(self):
        """Energy of the decaying state.

        :type: float
        """
        return self._E0

    @property
    def width(self):
        """Band width ``E_u - E_l``.

        :type: float
        """
        return self._E_u - self._E_l

    @property
    def breakpoints(self):
        """Interior energies where the integrand has kinks.

        :type: tuple
        """
        return self._breakpoints

    def coupling(self, energy):
        """``|V(E)|**2`` at an energy.

        Returns:
            float
        """
        return float(self._coupling(energy))

    def density(self, energy):
        """``rho(E)`` at an energy.

        Returns:
            float
        """
        return float(self._density(energy))

    def to_dict(self):
        """Config dict reproducing the model, ``None`` for callables.

        Returns:
            dict, None
        """
        return self._source

    def __str__(self):
        return ("SpectralModel (E_l=%g, E_u=%g, E0=%g)") % (self.E_l, self.E_u, self.E0)


@dataclass
class DecayConfig:
    """Parameters of a decay experiment.

    Args:
        gamma (float): Linear decay rate, ``P_d = gamma tau``.
        g (float): Quadratic coefficient, ``P_d = g tau**2``.
        tau (float): Interval between measurements.
        n (int): Number of intervals.
        model (dict): Spectral model config, see ``SpectralModel.from_config``.
        t_max (float): Last time of the decay-integral series.
        n_times (int): Number of intervals of the decay-integral series.
        n_values (list): Step counts of the repeated-measurement table at
            fixed ``t = n tau``.
        validity_threshold (float): Bound on ``gamma tau`` and on
            ``t (E_u - E_l)`` beyond which results are flagged.
        rtol (float): Relative tolerance of the decay integral.
    """

    tau: float
    n: int
    gamma: float = 0.0
    g: float = 0.0
    model: dict = field(default_factory=lambda: {'preset': 'flat'})
    t_max: float = 0.01
    n_times: int = 10
    n_values: list = field(default_factory=lambda: [10, 100, 1000, 10000, 100000, 1000000])
    validity_threshold: float = VALIDITY_THRESHOLD
    rtol: float = DEFAULT_RTOL

    def __post_init__(self):
        for name in ('tau', 'gamma', 'g', 't_max', 'validity_threshold', 'rtol'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError("%s must be a number." % name)
            setattr(self, name, float(value))
        for name in ('n', 'n_times'):
            if isinstance(getattr(self, name), bool) or not isinstance(getattr(self, name), int):
                raise TypeError("%s must be int." % name)

        if self.tau <= 0:
            raise ValueError("tau must be > 0.")
        if self.n < 1:
            raise ValueError("n must be >= 1.")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0.")
        if self.g < 0:
            raise ValueError("g must be >= 0.")
        if self.t_max < 0:
            raise ValueError("t_max must be >= 0.")
        if self.n_times < 1:
            raise ValueError("n_times must be >= 1.")
        if not 0 < self.rtol < 1:
            raise ValueError("rtol must lie in (0, 1).")
        if self.validity_threshold <= 0:
            raise ValueError("validity_threshold must be > 0.")
        if not self.n_values or any(isinstance(v, bool) or not isinstance(v, int) or v < 1
                                    for v in self.n_values):
            raise ValueError("n_values must be a non-empty list of ints >= 1.")

        self.spectral_model = SpectralModel.from_config(self.model)
        self.model = self.spectral_model.to_dict()

        if not self.linear_valid:
            _logger.warning("gamma*tau = %g exceeds %g: linear short-step law is not valid",
                            self.gamma * self.tau, self.validity_threshold)

    @property
    def linear_valid(self):
        """Whether ``gamma tau`` is within the validity threshold.

        :type: bool
        """
        return self.gamma * self.tau <= self.validity_threshold

    @property
    def total_time(self):
        """Duration ``t = n tau``.

        :type: float
        """
        return self.n * self.tau

    def to_dict(self):
        """Resolved parameters as a dict.

        Returns:
            dict
        """
        return {'tau': self.tau, 'n': self.n, 'gamma': self.gamma, 'g': self.g,
                'model': self.model, 't_max': self.t_max, 'n_times': self.n_times,
                'n_values': list(self.n_values),
                'validity_threshold': self.validity_threshold, 'rtol': self.rtol}


@dataclass
class DecayResult:
    """Decay-integral series and repeated-measurement table."""

    times: np.ndarray
    decay: np.ndarray
    abserr: np.ndarray
    reference: np.ndarray
    valid: np.ndarray
    g: float
    survival: list
    warnings: list = field(default_factory=list)

    @property
    def survival_probability(self):
        """``1 - P_d`` at every time.

        :type: numpy.ndarray
        """
        return 1.0 - self.decay


def survival_linear(gamma, tau, n):
    """Survival after ``n`` intervals of a linearly decaying state.

    Returns ``(1 - gamma tau)**n`` with its limit ``exp(-gamma n tau)``.

    Raises:
        ValueError: if ``gamma tau >= 1`` or an argument is out of range.

    Returns:
        Survival
    """
    _check_steps(tau, n)
    if gamma < 0:
        raise ValueError("gamma must be >= 0.")
    x = gamma * tau
    if x >= 1.0:
        raise ValueError("gamma*tau = %g must be < 1." % x)
    return Survival(math.exp(n * math.log1p(-x)), math.exp(-gamma * n * tau))

def survival_quadratic(g, tau, n):
    """Survival after ``n`` measured intervals with quadratic short-time decay.

    Returns ``(1 - g tau**2)**n`` with ``exp(-g t**2 / n)``, ``t = n tau``.

    Raises:
        ValueError: if ``g tau**2 >= 1`` or an argument is out of range.

    Returns:
        Survival
    """
    _check_steps(tau, n)
    if g < 0:
        raise ValueError("g must be >= 0.")
    x = g * tau * tau
    if x >= 1.0:
        raise ValueError("g*tau^2 = %g must be < 1." % x)
    t = n * tau
    return Survival(math.exp(n * math.log1p(-x)), math.exp(-g * t * t / n))

def _check_steps(tau, n):
    if tau <= 0:
        raise ValueError("tau must be > 0.")
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError("n must be int.")
    if n < 0:
        raise ValueError("n must be >= 0.")

def zeno_time_coefficient(model):
    """Coefficient ``g`` of the short-time law ``P_d = g t**2``.

    Returns:
        float
    """
    return model.width * model.coupling(model.E0) * model.density(model.E0)

def perturbative(model, t, threshold=VALIDITY_THRESHOLD):
    """Whether ``t (E_u - E_l)`` is below ``threshold``.

    Returns:
        bool
    """
    return t * model.width < threshold

def decay_probability_integral(model, t, rtol=DEFAULT_RTOL, full_output=False):
    """Perturbative decay probability after time ``t``.

    The integrand is written as ``|V|^2 rho t^2 sinc^2((E - E0) t / 2 pi)``,
    which is regular at ``E = E0``. Once the band spans more than 50
    oscillations of period ``2 pi / t`` it is cut into panels aligned on
    ``E0`` and each panel is integrated separately.

    Args:
        model (SpectralModel): Coupling and density of the band.
        t (float): Time, ``t >= 0``.
        rtol (float): Relative tolerance.
        full_output (bool): Also return the absolute error estimate.

    Raises:
        ValueError: if ``t < 0``.
        QuadratureError: if the tolerance is not reached.

    Returns:
        float, tuple: ``P_d`` or ``(P_d, abserr)``.
    """
    if t < 0:
        raise ValueError("t must be >= 0.")
    if t == 0:
        return (0.0, 0.0) if full_output else 0.0

    E0 = model.E0
    scale = t / (2.0 * math.pi)

    def integrand(energy):
        return model.coupling(energy) * model.density(energy) * \
            (t * np.sinc((energy - E0) * scale)) ** 2

    edges = _panel_edges(model, t)
    value = 0.0
    abserr = 0.0
    for lower, upper in zip(edges[:-1], edges[1:]):
        inner = [e for e in model.breakpoints if lower < e < upper]
        result = integrate.quad(integrand, lower, upper, points=inner or None,
                                epsabs=0.0, epsrel=rtol, limit=200, full_output=1)
        value += result[0]
        abserr += result[1]
        if len(result) > 3:
            raise QuadratureError("decay integral did not converge on [%g, %g]: %s" %
                                  (lower, upper, result[3]), value, abserr)

    _logger.debug("P_d(t=%g) = %.17g +- %.3g over %d panel(s)", t, value, abserr, len(edges) - 1)
    return (value, abserr) if full_output else value

def _panel_edges(model, t):
    period = 2.0 * math.pi / t
    edges = {model.E_l, model.E_u}
    if model.E_l < model.E0 < model.E_u:
        edges.add(model.E0)

    oscillations = model.width / period
    if oscillations > _PANEL_OSCILLATIONS:
        step = period * max(1, int(math.ceil(oscillations / _MAX_PANELS)))
        below = np.arange(model.E0 - step, model.E_l, -step)
        above = np.arange(model.E0 + step, model.E_u, step)
        edges.update(float(e) for e in below if e > model.E_l)
        edges.update(float(e) for e in above if e < model.E_u)
    return sorted(edges)

def survival_table(config):
    """Repeated-measurement survival at fixed ``t = n tau`` for each n.

    Rows are ``(n, tau_n, linear, exp(-gamma t), quadratic, exp(-g t^2/n))``
    with ``tau_n = t / n``; entries outside the domain of a law are NaN.

    Returns:
        list
    """
    t = config.total_time
    rows = []
    for n in config.n_values:
        tau_n = t / n
        try:
            linear = survival_linear(config.gamma, tau_n, n)
        except ValueError:
            linear = Survival(math.nan, math.exp(-config.gamma * t))
        try:
            quadratic = survival_quadratic(config.g, tau_n, n)
        except ValueError:
            quadratic = Survival(math.nan, math.exp(-config.g * t * t / n))
        rows.append((n, tau_n, linear.probability, linear.limit,
                     quadratic.probability, quadratic.limit))
    return rows

def run_decay(config):
    """Evaluate the decay integral on a time grid and the survival table.

    Returns:
        DecayResult
    """
    if not isinstance(config, DecayConfig):
        raise TypeError("config must be a DecayConfig.")

    model = config.spectral_model
    g = zeno_time_coefficient(model)
    times = np.linspace(0.0, config.t_max, config.n_times + 1)

    decay = np.empty_like(times)
    abserr = np.empty_like(times)
    for i, t in enumerate(times):
        decay[i], abserr[i] = decay_probability_integral(model, float(t), config.rtol,
                                                         full_output=True)

    valid = np.array([perturbative(model, t, config.validity_threshold) for t in times])
    warnings = []
    if not np.all(valid):
        first = float(times[np.argmin(valid)])
        message = ("t*(E_u-E_l) exceeds %g from t=%g: quadratic law outside its window" %
                   (config.validity_threshold, first))
        _logger.warning(message)
        warnings.append(message)
    if not config.linear_valid:
        warnings.append("gamma*tau = %g exceeds %g" % (config.gamma * config.tau,
                                                       config.validity_threshold))

    return DecayResult(times=times, decay=decay, abserr=abserr,
                       reference=g * times ** 2, valid=valid, g=g,
                       survival=survival_table(config), warnings=warnings)
