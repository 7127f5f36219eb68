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
"""analysis module

Ensemble results and the estimators that turn them into diffusion
coefficients, localization lengths and break times.

Convention:
    The diffusion coefficient is ``B = <(m - m0)**2> / (2 t)``, so a measured
    kicked rotor with ``H0 = I**2 / 2`` gives ``B = k**2 / (4 tau)``. The
    fitted slope of ``<(m - m0)**2>`` against time is ``2 B``.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from qzeno.state import ProbabilityDistribution

_logger = logging.getLogger(__name__)

CONVENTION = "B = <dm^2>/(2t)"
"Diffusion convention recorded in every summary."

class FitError(ValueError):
    """Raised when a fit cannot be attempted on the given data."""


@dataclass
class EnsembleResult:
    """Per-time-step observables averaged over realizations.

    ``means[name]`` and ``errors[name]`` hold one value per entry of
    ``times``. Standard errors are the sample standard deviation over
    ``sqrt(n_realizations)`` and are zero for a single realization.
    """

    times: np.ndarray
    means: dict
    errors: dict
    n_realizations: int = 1
    final_profile: ProbabilityDistribution = None
    averaged_profile: ProbabilityDistribution = None
    leakage_max: float = 0.0
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        if set(self.means) != set(self.errors):
            raise ValueError("means and errors must name the same observables.")
        for name in self.means:
            self.means[name] = np.asarray(self.means[name], dtype=np.float64)
            self.errors[name] = np.asarray(self.errors[name], dtype=np.float64)
            if self.means[name].shape != self.times.shape or \
               self.errors[name].shape != self.times.shape:
                raise ValueError("observable %s does not match the time grid." % name)
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1.")

    @property
    def observables(self):
        """Observable names in insertion order.

        :type: list
        """
        return list(self.means)

    def mean(self, name):
        """Mean time series of an observable.

        Returns:
            numpy.ndarray
        """
        return self.means[name]

    def error(self, name):
        """Standard-error time series of an observable.

        Returns:
            numpy.ndarray
        """
        return self.errors[name]

    def final(self, name):
        """Mean and standard error of an observable at the last time.

        Returns:
            tuple
        """
        return float(self.means[name][-1]), float(self.errors[name][-1])

    def __str__(self):
        return ("EnsembleResult (steps=%d, observables=%s, n_realizations=%d, "
                "leakage_max=%g)") % (self.times.size,
                                      ','.join(self.observables),
                                      self.n_realizations,
                                      self.leakage_max)


@dataclass
class FitResult:
    """Outcome of an estimator.

    A flagged result carries the reason in ``reason``; its estimate may be
    infinite or NaN when the fitted model does not apply.
    """

    estimate: float
    std_error: float
    window: tuple
    goodness: float
    flagged: bool = False
    reason: str = ''
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.window[1] <= self.window[0]:
            raise ValueError("fit window must be non-empty.")
        if not self.flagged and not math.isfinite(self.estimate):
            raise ValueError("unflagged fit must have a finite estimate.")

    def to_dict(self):
        """JSON-ready view, non-finite numbers written as ``None``.

        Returns:
            dict
        """
        return {
            'estimate': _finite_or_none(self.estimate),
            'std_error': _finite_or_none(self.std_error),
            'window': [int(self.window[0]), int(self.window[1])],
            'goodness': _finite_or_none(self.goodness),
            'flagged': bool(self.flagged),
            'reason': self.reason,
            'details': {k: _finite_or_none(v) for k, v in sorted(self.details.items())},
        }

def _finite_or_none(value):
    value = float(value)
    return value if math.isfinite(value) else None

def linear_fit(x, y, weights=None):
    """Weighted least-squares line ``y = slope * x + intercept``.

    Args:
        x (array_like): Abscissae.
        y (array_like): Ordinates.
        weights (array_like, None): Per-point weights ``1 / sigma``;
            ``None`` for uniform weights.

    Returns:
        tuple: (slope, intercept, slope_error, r_squared)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 3:
        raise FitError("need at least 3 points for a line fit.")

    w2 = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64) ** 2
    total = w2.sum()
    x_mean = np.dot(w2, x) / total
    y_mean = np.dot(w2, y) / total
    dx = x - x_mean
    dy = y - y_mean
    sxx = np.dot(w2, dx * dx)
    if sxx <= 0.0:
        raise FitError("abscissae are degenerate.")

    slope = np.dot(w2, dx * dy) / sxx
    intercept = y_mean - slope * x_mean
    residual = y - (slope * x + intercept)
    ss_res = np.dot(w2, residual * residual)
    ss_tot = np.dot(w2, dy * dy)

    slope_error = math.sqrt(ss_res / (x.size - 2) / sxx)
    if ss_tot > 0.0:
        r_squared = 1.0 - ss_res / ss_tot
    else:
        r_squared = 1.0 if ss_res == 0.0 else 0.0
    return float(slope), float(intercept), float(slope_error), float(r_squared)

def diffusion_fit(result, tau, observable='energy', skip=2, min_points=10):
    """Fit the diffusion coefficient ``B`` from the energy growth.

    A weighted line is fitted to ``<(m - m0)**2>`` against time, skipping
    the first ``skip`` kicks; ``B`` is half the slope. Points are weighted
    by ``1 / sigma`` when every standard error in the window is positive.

    Args:
        result (EnsembleResult): Rotor result with an ``energy`` series.
        tau (float): Kick period, recorded with the fit.
        observable (str): Observable to fit.
        skip (int): Leading kicks excluded from the window.
        min_points (int): Minimum number of points in the window.

    Raises:
        FitError: if the window holds fewer than ``min_points`` points.

    Returns:
        FitResult
    """
    if tau <= 0:
        raise ValueError("tau must be > 0.")

    stop = result.times.size
    if stop - skip < min_points:
        raise FitError("diffusion fit needs %d points after skipping %d, got %d" %
                       (min_points, skip, max(stop - skip, 0)))

    t = result.times[skip:]
    y = result.mean(observable)[skip:]
    sigma = result.error(observable)[skip:]
    weights = 1.0 / sigma if np.all(sigma > 0.0) else None

    slope, intercept, slope_error, r_squared = linear_fit(t, y, weights)
    _logger.debug("diffusion fit slope=%g +- %g (R^2=%g)", slope, slope_error, r_squared)

    return FitResult(estimate=slope / 2.0,
                     std_error=slope_error / 2.0,
                     window=(skip, stop),
                     goodness=r_squared,
                     details={'slope': slope, 'intercept': intercept, 'tau': tau})

def localization_fit(profile, m0, floor=1e-30, core_fraction=0.2,
                     min_tail_bins=20, r2_floor=0.8):
    """Fit ``P_m ~ exp(-2 |m - m0| / lambda)`` to a probability profile.

    Bins below ``10 * floor`` are unusable. The central ``core_fraction``
    of the usable half-width is excluded and ``ln P_m`` is fitted against
    ``|m - m0|`` over both tails together.

    Args:
        profile (ProbabilityDistribution): Probability profile.
        m0 (int): Initial label.
        floor (float): Numerical noise floor of the profile.
        core_fraction (float): Excluded central fraction.
        min_tail_bins (int): Minimum usable tail bins on each side.
        r2_floor (float): Results with a lower R^2 are flagged.

    Raises:
        FitError: if either tail has fewer than ``min_tail_bins`` bins.

    Returns:
        FitResult: estimate is ``lambda``.
    """
    labels = profile.labels
    p = profile.probabilities
    distance = np.abs(labels - m0)

    usable = p >= 10.0 * floor
    if not np.any(usable & (distance > 0)):
        raise FitError("profile has no usable bins away from m0.")
    reach = distance[usable].max()
    tail = usable & (distance > 0) & (distance >= core_fraction * reach)

    left = int(np.count_nonzero(tail & (labels < m0)))
    right = int(np.count_nonzero(tail & (labels > m0)))
    if min(left, right) < min_tail_bins:
        raise FitError("localization fit needs %d tail bins per side, got %d/%d" %
                       (min_tail_bins, left, right))

    window = (int(distance[tail].min()), int(distance[tail].max()) + 1)
    slope, intercept, slope_error, r_squared = linear_fit(distance[tail], np.log(p[tail]))
    details = {'slope': slope, 'intercept': intercept,
               'tail_bins_left': left, 'tail_bins_right': right}

    if slope >= 0.0:
        return FitResult(estimate=math.inf, std_error=math.inf, window=window,
                         goodness=0.0, flagged=True,
                         reason="profile does not decay away from m0",
                         details=details)

    length = -2.0 / slope
    error = 2.0 * slope_error / slope ** 2
    flagged = r_squared < r2_floor
    return FitResult(estimate=length, std_error=error, window=window,
                     goodness=r_squared, flagged=flagged,
                     reason="non-exponential profile (R^2 < %g)" % r2_floor if flagged else '',
                     details=details)

def break_time_estimate(result, B_classical, threshold=0.5, skip=2,
                        observable='energy'):
    """Estimate the time at which quantum diffusion falls behind classical.

    ``t*`` is the first time from which the energy stays below
    ``threshold`` times the classical prediction ``2 B t`` for the rest of
    the run, interpolated linearly between grid points. Early dips that
    recover above the threshold do not count. Growth must have saturated
    first: the slope over the last quarter of the run has to be below 20%
    of the slope over the first tenth (at least 5 points each).

    Args:
        result (EnsembleResult): Rotor result with an ``energy`` series.
        B_classical (float): Classical diffusion coefficient ``k**2 / (4 tau)``.
        threshold (float): Fraction of the classical prediction.
        skip (int): Leading kicks ignored.
        observable (str): Observable to inspect.

    Raises:
        FitError: if the run is too short to judge saturation.

    Returns:
        FitResult: estimate is ``t*``; flagged when growth has not
        saturated or does not stay below the threshold.
    """
    if B_classical <= 0:
        raise ValueError("B_classical must be > 0.")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1).")

    t = result.times
    energy = result.mean(observable)
    count = t.size
    head = max(5, (count - skip) // 10)
    tail = max(5, count // 4)
    if count - skip < head + tail:
        raise FitError("break time needs at least %d points, got %d" %
                       (head + tail + skip, count))

    head_slope = linear_fit(t[skip:skip + head], energy[skip:skip + head])[0]
    tail_slope = linear_fit(t[-tail:], energy[-tail:])[0]
    saturation = 1.0 - tail_slope / head_slope if head_slope > 0 else 0.0
    details = {'head_slope': head_slope, 'tail_slope': tail_slope,
               'threshold': threshold, 'B_classical': B_classical}

    start = max(skip, int(np.argmax(t > 0)))
    if not tail_slope < 0.2 * head_slope:
        return FitResult(estimate=math.nan, std_error=math.nan,
                         window=(start, count), goodness=saturation, flagged=True,
                         reason="energy growth has not saturated", details=details)

    ratio = energy[start:] / (2.0 * B_classical * t[start:])
    above = np.flatnonzero(ratio > threshold)
    if above.size and above[-1] == ratio.size - 1:
        return FitResult(estimate=math.nan, std_error=math.nan,
                         window=(start, count), goodness=saturation, flagged=True,
                         reason="energy does not stay below the classical threshold",
                         details=details)

    if above.size:
        i = int(above[-1]) + 1
        t0, t1 = t[start + i - 1], t[start + i]
        r0, r1 = ratio[i - 1], ratio[i]
        estimate = t0 + (r0 - threshold) / (r0 - r1) * (t1 - t0)
        error = (t1 - t0) / 2.0
    else:
        i = 0
        estimate = t[start]
        error = 0.0

    return FitResult(estimate=float(estimate), std_error=float(error),
                     window=(start, start + i + 1), goodness=saturation,
                     details=details)
