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

from qzeno import (DecayConfig, QuadratureError, SpectralModel, decay_probability_integral,
                   run_decay, survival_linear, survival_quadratic, zeno_time_coefficient)
from qzeno.decay import perturbative, survival_table

class TestGeneral(unittest.TestCase):

    def test_exceptions(self):
        self.assertRaises(ValueError, survival_linear, 1.0, 1.0, 10)
        self.assertRaises(ValueError, survival_linear, -1.0, 0.1, 10)
        self.assertRaises(ValueError, survival_linear, 1.0, 0.0, 10)
        self.assertRaises(TypeError, survival_linear, 1.0, 0.1, 1.5)
        self.assertRaises(ValueError, survival_quadratic, 1.0, 1.0, 10)
        self.assertRaises(ValueError, SpectralModel, 1.0, -1.0, 0.0, 0.01)
        self.assertRaises(ValueError, SpectralModel, -1.0, 1.0, 2.0, 0.01)
        self.assertRaises(ValueError, SpectralModel.flat, coupling=-0.01)
        self.assertRaises(ValueError, SpectralModel.from_table, [0.0, 0.0], [1, 1], [1, 1], 0.0)
        self.assertRaises(ValueError, SpectralModel.from_config, {'preset': 'lorentzian'})
        self.assertRaises(ValueError, SpectralModel.from_config, {'preset': 'flat', 'width': 2})
        self.assertRaises(ValueError, decay_probability_integral, SpectralModel.flat(), -1.0)
        self.assertRaises(ValueError, DecayConfig, tau=0.0, n=10)
        self.assertRaises(ValueError, DecayConfig, tau=0.1, n=0)
        self.assertRaises(TypeError, DecayConfig, tau=0.1, n=1.0)
        self.assertRaises(ValueError, DecayConfig, tau=0.1, n=10, n_values=[])

    def test_survival_linear(self):
        survival = survival_linear(1.0, 0.01, 100)
        self.assertAlmostEqual(survival.probability, 0.99 ** 100, places=14)
        self.assertAlmostEqual(survival.limit, math.exp(-1.0), places=15)
        self.assertEqual(survival_linear(1.0, 0.5, 0).probability, 1.0)

        # continuous-time limit
        survival = survival_linear(1.0, 1e-6, 10 ** 6)
        self.assertLess(abs(survival.probability - math.exp(-1.0)), 1e-5)

    def test_survival_quadratic(self):
        survival = survival_quadratic(1.0, 0.01, 100)
        self.assertAlmostEqual(survival.probability, (1 - 1e-4) ** 100, places=14)
        self.assertAlmostEqual(survival.limit, math.exp(-0.01), places=15)

        previous = 0.0
        for n in (100, 1000, 10000, 100000):
            probability = survival_quadratic(1.0, 1.0 / n, n).probability
            self.assertGreaterEqual(probability, 1.0 - 1.01 / n)
            self.assertGreater(probability, previous)
            previous = probability

    def test_spectral_model(self):
        model = SpectralModel.flat(coupling=0.01, density=1.0, E_l=-5.0, E_u=5.0)
        self.assertEqual(model.width, 10.0)
        self.assertEqual(model.coupling(3.0), 0.01)
        self.assertEqual(model.density(-3.0), 1.0)
        self.assertAlmostEqual(zeno_time_coefficient(model), 0.1, places=15)
        self.assertEqual(model.to_dict()['preset'], 'flat')
        self.assertTrue(perturbative(model, 0.001))
        self.assertFalse(perturbative(model, 0.01))

        table = SpectralModel.from_table([-1.0, 0.0, 1.0], [0.0, 0.02, 0.0], [1.0, 1.0, 1.0], 0.0)
        self.assertEqual(table.width, 2.0)
        self.assertAlmostEqual(table.coupling(0.5), 0.01)
        self.assertEqual(table.breakpoints, (0.0,))
        self.assertAlmostEqual(zeno_time_coefficient(table), 0.04)

        rebuilt = SpectralModel.from_config(table.to_dict())
        self.assertAlmostEqual(rebuilt.coupling(-0.25), 0.015)

        custom = SpectralModel(-1.0, 1.0, 0.0, lambda e: 0.01 * (1 + e * e), 2.0)
        self.assertAlmostEqual(custom.coupling(1.0), 0.02)
        self.assertIsNone(custom.to_dict())

    def test_decay_integral_zero_time(self):
        self.assertEqual(decay_probability_integral(SpectralModel.flat(), 0.0), 0.0)
        self.assertEqual(decay_probability_integral(SpectralModel.flat(), 0.0, full_output=True),
                         (0.0, 0.0))

    def test_quadratic_window(self):
        model = SpectralModel.flat(coupling=0.01, density=1.0, E_l=-5.0, E_u=5.0)
        g = zeno_time_coefficient(model)
        ratios = []
        for t in np.linspace(0.001, 0.01, 10):
            value, abserr = decay_probability_integral(model, t, full_output=True)
            self.assertLess(abserr, 1e-9 * value + 1e-20)
            ratios.append(value / t ** 2)
        ratios = np.array(ratios)
        self.assertLess(ratios.max() / ratios.min() - 1.0, 0.02)
        self.assertTrue(np.all(np.abs(ratios / g - 1.0) < 0.01))

    def test_flat_closed_form(self):
        # flat band of half-width a: P_d = 4 V^2 rho t (Si(a t) - 2 sin^2(a t / 2) / (a t))
        from scipy.special import sici
        model = SpectralModel.flat(coupling=0.01, density=1.0, E_l=-5.0, E_u=5.0)
        for t in (0.5, 3.0, 40.0):
            x = 5.0 * t
            expected = 0.01 * 2.0 * 2.0 * t * (sici(x)[0] - math.sin(x / 2) ** 2 * 2.0 / x)
            value = decay_probability_integral(model, t)
            self.assertAlmostEqual(value / expected, 1.0, places=7)

    def test_long_time_rate(self):
        # many oscillations: panels aligned on E0, slope tends to 2 pi V^2 rho
        model = SpectralModel.flat(coupling=0.01, density=1.0, E_l=-5.0, E_u=5.0)
        early = decay_probability_integral(model, 200.0)
        late = decay_probability_integral(model, 400.0)
        self.assertAlmostEqual((late - early) / 200.0, 2 * math.pi * 0.01, delta=3e-4)

    def test_quadrature_error(self):
        error = QuadratureError("failed", 0.5, 1e-3)
        self.assertIsInstance(error, ArithmeticError)
        self.assertEqual(error.estimate, 0.5)
        self.assertEqual(error.abserr, 1e-3)

    def test_config(self):
        with self.assertLogs('qzeno.decay', level='WARNING'):
            config = DecayConfig(tau=0.5, n=2, gamma=1.0)
        self.assertFalse(config.linear_valid)
        self.assertEqual(config.total_time, 1.0)

        config = DecayConfig(tau=0.01, n=100, gamma=1.0)
        self.assertTrue(config.linear_valid)
        self.assertEqual(config.to_dict()['model']['preset'], 'flat')
        self.assertEqual(DecayConfig(**config.to_dict()).to_dict(), config.to_dict())

    def test_survival_table(self):
        config = DecayConfig(tau=0.01, n=100, gamma=1.0, g=1.0, n_values=[1, 10, 1000])
        rows = survival_table(config)
        self.assertEqual([row[0] for row in rows], [1, 10, 1000])
        # gamma tau = 1 for n = 1 lies outside the linear law
        self.assertTrue(math.isnan(rows[0][2]))
        self.assertAlmostEqual(rows[1][2], 0.9 ** 10, places=14)
        self.assertAlmostEqual(rows[2][3], math.exp(-1.0), places=15)
        self.assertGreater(rows[2][4], rows[1][4])

    def test_run_decay(self):
        config = DecayConfig(tau=0.01, n=100, gamma=1.0, g=0.1, t_max=0.01, n_times=10)
        result = run_decay(config)
        self.assertEqual(result.times.size, 11)
        self.assertEqual(result.decay[0], 0.0)
        self.assertAlmostEqual(result.g, 0.1)
        self.assertTrue(np.all(result.valid[:-1]))
        self.assertFalse(result.valid[-1])
        self.assertEqual(len(result.warnings), 1)
        self.assertTrue(np.allclose(result.decay[1:], result.reference[1:], rtol=0.01))
        self.assertTrue(np.allclose(result.survival_probability, 1.0 - result.decay))


if __name__ == '__main__':
    unittest.main()
