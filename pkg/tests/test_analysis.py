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
import math
import unittest

import numpy as np

from qzeno import (EnsembleResult, FitError, FitResult, ProbabilityDistribution,
                   bessel_kernel, break_time_estimate, diffusion_fit, localization_fit)
from qzeno.analysis import linear_fit

def energy_result(energy, errors=None, tau=1.0):
    energy = np.asarray(energy, dtype=np.float64)
    times = np.arange(energy.size) * tau
    errors = np.zeros_like(energy) if errors is None else np.asarray(errors, dtype=np.float64)
    return EnsembleResult(times=times, means={'energy': energy}, errors={'energy': errors})

def exponential_profile(length, half_width=200, m0=0):
    labels = np.arange(-half_width, half_width + 1) + m0
    p = np.exp(-2.0 * np.abs(labels - m0) / length)
    return ProbabilityDistribution(p / p.sum(), basis_offset=m0 - half_width)

class TestGeneral(unittest.TestCase):

    def test_exceptions(self):
        self.assertRaises(ValueError, EnsembleResult, [0, 1], {'a': [0, 1]}, {'b': [0, 0]})
        self.assertRaises(ValueError, EnsembleResult, [0, 1], {'a': [0, 1, 2]}, {'a': [0, 0, 0]})
        self.assertRaises(ValueError, FitResult, 1.0, 0.1, (3, 3), 1.0)
        self.assertRaises(ValueError, FitResult, math.nan, 0.1, (0, 3), 1.0)
        self.assertRaises(FitError, linear_fit, [1, 2], [1, 2])
        self.assertRaises(FitError, linear_fit, [1, 1, 1], [1, 2, 3])
        self.assertRaises(FitError, diffusion_fit, energy_result(np.arange(8.0)), 1.0)
        self.assertRaises(ValueError, diffusion_fit, energy_result(np.arange(20.0)), 0.0)
        self.assertRaises(ValueError, break_time_estimate, energy_result(np.arange(50.0)), 0.0)

    def test_result(self):
        result = energy_result([0.0, 1.0, 2.0], [0.0, 0.1, 0.2])
        self.assertEqual(result.observables, ['energy'])
        self.assertEqual(result.final('energy'), (2.0, 0.2))
        self.assertIn("steps=3", str(result))

        flagged = FitResult(math.inf, math.nan, (0, 5), 0.0, flagged=True, reason="no decay")
        self.assertIsNone(flagged.to_dict()['estimate'])
        self.assertEqual(flagged.to_dict()['window'], [0, 5])

    def test_linear_fit(self):
        slope, intercept, error, r2 = linear_fit([0, 1, 2, 3], [1, 3, 5, 7])
        self.assertAlmostEqual(slope, 2.0)
        self.assertAlmostEqual(intercept, 1.0)
        self.assertAlmostEqual(error, 0.0)
        self.assertAlmostEqual(r2, 1.0)

        # weights only matter for inexact data
        slope, _, _, _ = linear_fit([0, 1, 2, 3], [0, 1, 2, 10], weights=[1, 1, 1, 1e-6])
        self.assertAlmostEqual(slope, 1.0, places=6)

    def test_diffusion_fit(self):
        # <dm^2> = 25 j for k^2 = 50 gives B = k^2 / (4 tau) = 12.5
        fit = diffusion_fit(energy_result(25.0 * np.arange(50)), 1.0)
        self.assertAlmostEqual(fit.estimate, 12.5, places=10)
        self.assertAlmostEqual(fit.goodness, 1.0)
        self.assertEqual(fit.window, (2, 50))
        self.assertFalse(fit.flagged)

        fit = diffusion_fit(energy_result(np.full(30, 7.0)), 1.0)
        self.assertAlmostEqual(fit.estimate, 0.0, places=12)

        # time is in units of the period
        fit = diffusion_fit(energy_result(25.0 * np.arange(50), tau=2.0), 2.0)
        self.assertAlmostEqual(fit.estimate, 6.25, places=10)

    def test_diffusion_fit_random_walk(self):
        # populations of the phase-averaged rotor follow the J^2 random walk
        k = 5.0
        step = bessel_kernel(k, 40) ** 2
        p = np.zeros(2 * 40 * 30 + 1)
        p[p.size // 2] = 1.0
        m = np.arange(p.size) - p.size // 2
        energy = [0.0]
        for _ in range(30):
            p = np.convolve(p, step, mode='same')
            energy.append(float(np.dot(p, m * m)))
        fit = diffusion_fit(energy_result(energy), 1.0)
        expected = np.sum((np.arange(81) - 40) ** 2 * step) / 2.0
        self.assertLess(abs(fit.estimate / expected - 1.0), 0.01)

    def test_localization_fit(self):
        fit = localization_fit(exponential_profile(10.0), 0)
        self.assertAlmostEqual(fit.estimate, 10.0, delta=0.1)
        self.assertGreater(fit.goodness, 0.99)
        self.assertFalse(fit.flagged)

        uniform = ProbabilityDistribution(np.full(401, 1.0 / 401), basis_offset=-200)
        fit = localization_fit(uniform, 0)
        self.assertTrue(fit.flagged)

        short = exponential_profile(10.0, half_width=15)
        self.assertRaises(FitError, localization_fit, short, 0)

    def test_fits_are_relabeling_invariant(self):
        a = localization_fit(exponential_profile(12.0), 0)
        b = localization_fit(exponential_profile(12.0, m0=1000), 1000)
        self.assertAlmostEqual(a.estimate, b.estimate, places=9)
        self.assertEqual(a.window, b.window)

    def test_break_time(self):
        # 2 B t up to t = 10, flat after: crossing of 20 B with B t at t = 20
        B = 1.0
        t = np.arange(101, dtype=np.float64)
        fit = break_time_estimate(energy_result(np.minimum(2.0 * B * t, 20.0 * B)), B)
        self.assertFalse(fit.flagged)
        self.assertAlmostEqual(fit.estimate, 20.0, places=9)

        fit = break_time_estimate(energy_result(2.0 * B * t), B)
        self.assertTrue(fit.flagged)
        self.assertTrue(math.isnan(fit.estimate))

        fit = break_time_estimate(energy_result(np.minimum(2.0 * B * t, 20.0 * B)), B,
                                  threshold=0.25)
        self.assertAlmostEqual(fit.estimate, 40.0, places=9)

    def test_break_time_ignores_early_dip(self):
        # dip to 40% of 2 B t at t = 4, back on 2 B t until the plateau
        B = 1.0
        t = np.arange(101, dtype=np.float64)
        energy = np.minimum(2.0 * B * t, 20.0 * B)
        energy[4] = 0.4 * 2.0 * B * t[4]
        fit = break_time_estimate(energy_result(energy), B)
        self.assertFalse(fit.flagged)
        self.assertAlmostEqual(fit.estimate, 20.0, places=9)

    def test_break_time_late_excursion(self):
        # back above 25% of 2 B t on the last point: t* is not settled
        B = 1.0
        t = np.arange(101, dtype=np.float64)
        energy = np.minimum(2.0 * B * t, 20.0 * B)
        energy[-1] = 51.0 * B
        fit = break_time_estimate(energy_result(energy), B, threshold=0.25)
        self.assertEqual(fit.reason, "energy does not stay below the classical threshold")
        self.assertTrue(fit.flagged)
        self.assertTrue(math.isnan(fit.estimate))

    def test_determinism(self):
        result = energy_result(np.sqrt(np.arange(60.0)) * 10.0)
        a = diffusion_fit(result, 1.0).to_dict()
        b = diffusion_fit(result, 1.0).to_dict()
        self.assertEqual(a, b)


if __name__ == '__main__':
    unittest.main()
