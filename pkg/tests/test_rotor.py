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
import os
import unittest

import numpy as np
from scipy import special

from qzeno import (MeasurementSchedule, RngStream, RotorConfig, StateVector, bessel_kernel,
                   break_time_estimate, diffusion_fit, free_rotation, kick, localization_fit,
                   run_rotor, step)
from qzeno import rotor
from qzeno.rotor import initial_state, kernel_half_width, leakage, resonance
from qzeno.verify import random_state

seed = int(os.environ.get('QZENO_TEST_SEED', "12345"))
basis = int(os.environ.get('QZENO_TEST_BASIS', "1025"))
quick = os.environ.get('QZENO_QUICK', False)

class TestGeneral(unittest.TestCase):

    def test_exceptions(self):
        self.assertRaises(ValueError, RotorConfig, 5.0, 10, 100)
        self.assertRaises(ValueError, RotorConfig, 5.0, 100, 21)
        self.assertRaises(ValueError, RotorConfig, 5.0, 10, 201, kernel="fft")
        self.assertRaises(ValueError, RotorConfig, 5.0, 10, 201, period=0.0)
        self.assertRaises(ValueError, RotorConfig, -1.0, 10, 201)
        self.assertRaises(TypeError, RotorConfig, 5.0, 10.0, 201)
        self.assertRaises(ValueError, RotorConfig, 5.0, 10, 201,
                          schedule={'every_n_kicks': 1, 'measured_labels': [500]})
        self.assertRaises(ValueError, RotorConfig, 5.0, 10, 201, schedule={'every': 1})
        self.assertRaises(ValueError, MeasurementSchedule, 0)
        self.assertRaises(ValueError, MeasurementSchedule, 1, 'some')
        self.assertRaises(ValueError, MeasurementSchedule, 1, [])
        self.assertRaises(ValueError, kick, StateVector.centered(0, 5), 1.0, "fft")
        self.assertRaises(FloatingPointError, leakage, [np.nan, 0.0, 0.0])

        try:
            RotorConfig(5.0, 10, 200)
        except ValueError as e:
            self.assertIn("use 201", str(e))

    def test_config(self):
        config = RotorConfig(kick_strength=5.0, n_kicks=100, basis_size=621, initial_state=7)
        self.assertEqual(config.guard_band_size, 2 * 305 + 1)
        self.assertEqual(config.lowest_label, 7 - 310)
        self.assertEqual(config.highest_label, 7 + 310)
        self.assertFalse(config.randomized)
        self.assertAlmostEqual(config.classical_diffusion, 6.25)
        self.assertAlmostEqual(config.break_time_scale, 12.5)
        self.assertEqual(RotorConfig(**config.to_dict()).to_dict(), config.to_dict())

        with self.assertLogs('qzeno.rotor', level='WARNING'):
            small = RotorConfig(5.0, 100, 101, allow_small_basis=True)
        self.assertEqual(small.basis_size, 101)

        measured = RotorConfig(5.0, 10, 201, schedule={'every_n_kicks': 2}, n_realizations=4)
        self.assertTrue(measured.randomized)
        self.assertEqual(measured.effective_realizations, 4)
        self.assertEqual(RotorConfig(5.0, 10, 201, n_realizations=4).effective_realizations, 1)

    def test_schedule(self):
        self.assertFalse(MeasurementSchedule().active)
        self.assertFalse(any(MeasurementSchedule().measures(j) for j in range(10)))

        every = MeasurementSchedule(every_n_kicks=3)
        self.assertEqual([j for j in range(10) if every.measures(j)], [3, 6, 9])

        partial = MeasurementSchedule(1, [2, 0, 2])
        self.assertEqual(partial.measured_labels, (0, 2))
        self.assertEqual(partial.to_dict(), {'every_n_kicks': 1, 'measured_labels': [0, 2]})

    def test_bessel_kernel(self):
        kernel = bessel_kernel(0.0, 5)
        self.assertEqual(kernel.size, 11)
        self.assertEqual(kernel[5], 1.0)
        self.assertEqual(np.count_nonzero(kernel), 1)

        for k in (1.0, 5.0, 10.0):
            kernel = bessel_kernel(k)
            w = kernel_half_width(k)
            orders = np.arange(-w, w + 1)
            self.assertEqual(kernel.size, 2 * w + 1)
            self.assertLess(abs(np.sum(kernel ** 2) - 1.0), 1e-12)
            self.assertTrue(np.all(np.abs(kernel - special.jv(orders, k)) < 1e-13))
            # J_{-m} = (-1)^m J_m holds exactly
            signs = np.where(orders[w + 1:] % 2 == 0, 1.0, -1.0)
            self.assertTrue(np.array_equal(kernel[:w][::-1], signs * kernel[w + 1:]))
            self.assertLess(abs(special.jv(w + 1, k)), 1e-14)

        kernel = bessel_kernel(5.0)
        orders = np.arange(kernel.size) - kernel.size // 2
        self.assertAlmostEqual(np.sum(orders ** 2 * kernel ** 2), 12.5, delta=1e-10)

    def test_free_rotation(self):
        rng = RngStream(seed)
        state = random_state(rng, 21, -10)

        flat = RotorConfig(1.0, 1, 21, h0=[0.0])
        self.assertTrue(np.array_equal(free_rotation(state, flat).amplitudes, state.amplitudes))

        resonant = RotorConfig(1.0, 1, 21, period=4 * math.pi)
        self.assertTrue(np.allclose(free_rotation(state, resonant).amplitudes, state.amplitudes,
                                    atol=1e-12, rtol=0.0))

        config = RotorConfig(1.0, 1, 21)
        rotated = free_rotation(StateVector.basis(3, 21, -10), config)
        self.assertAlmostEqual(rotated.amplitudes[13], np.exp(-4.5j), places=15)
        self.assertAlmostEqual(free_rotation(state, config).norm(), state.norm(), places=14)

    def test_kick(self):
        state = StateVector.centered(0, 101)
        self.assertTrue(np.allclose(kick(state, 0.0).amplitudes, state.amplitudes, atol=1e-15))

        for k in (1.0, 5.0, 10.0):
            for kernel in ('bessel_direct', 'spectral'):
                self.assertAlmostEqual(kick(state, k, kernel).norm(), 1.0, delta=1e-10)

        kicked = kick(StateVector.centered(4, 101), 5.0)
        self.assertAlmostEqual(special.jv(1, 5.0), -0.3275791, delta=1e-7)
        self.assertAlmostEqual(abs(kicked.amplitudes[51]) ** 2, special.jv(1, 5.0) ** 2,
                               delta=1e-14)

    def test_kernel_equivalence(self):
        rng = RngStream(seed, 1)
        for k in (2.0, 5.0, 10.0):
            for _ in range(20):
                state = random_state(rng, 257, -128)
                direct = kick(state, k, 'bessel_direct').amplitudes
                spectral = kick(state, k, 'spectral').amplitudes
                self.assertLess(np.abs(direct - spectral).max(), 1e-10)

        # odd offsets exercise the label-dependent phase
        state = random_state(rng, 101, 37)
        self.assertLess(np.abs(kick(state, 5.0, 'bessel_direct').amplitudes -
                               kick(state, 5.0, 'spectral').amplitudes).max(), 1e-10)

    def test_step(self):
        # no measurement and no kick leave only the free rotation
        config = RotorConfig(0.0, 10, 21)
        state = random_state(RngStream(seed), 21, -10)
        self.assertTrue(np.allclose(step(state, config, 3, RngStream(seed)).amplitudes,
                                    free_rotation(state, config).amplitudes, atol=1e-15))

        config = RotorConfig(5.0, 2, 101, schedule={'every_n_kicks': 1})
        first = step(initial_state(config), config, 0, RngStream(seed))
        expected = bessel_kernel(5.0, 50) ** 2
        self.assertTrue(np.all(np.abs(np.abs(first.amplitudes) ** 2 - expected) < 1e-12))

    def test_step_reuses_propagator(self):
        config = RotorConfig(5.0, 2, 101)
        self.assertIs(rotor._propagator(config), rotor._propagator(config))
        self.assertIs(rotor._propagator(config), rotor._propagator(RotorConfig(5.0, 2, 101)))

        other = RotorConfig(3.0, 2, 101)
        self.assertTrue(np.array_equal(rotor._propagator(other).bessel, bessel_kernel(3.0)))
        state = initial_state(other)
        self.assertTrue(np.allclose(step(state, other, 0, RngStream(seed)).amplitudes,
                                    free_rotation(kick(state, 3.0), other).amplitudes,
                                    atol=1e-14))

    def test_two_measured_steps(self):
        # phase-averaged two-step populations are the convolution of J^2 with itself
        config = RotorConfig(2.0, 2, 41, schedule={'every_n_kicks': 1}, n_realizations=10000)
        result = run_rotor(config, RngStream(seed))
        single = bessel_kernel(2.0, 20) ** 2
        expected = np.convolve(single, single)[20:61]
        self.assertEqual(result.n_realizations, 10000)
        self.assertTrue(np.all(np.abs(result.final_profile.probabilities - expected) < 0.02))
        self.assertAlmostEqual(result.final('energy')[0], 4.0, delta=4 * result.final('energy')[1])

    def test_unkicked(self):
        config = RotorConfig(0.0, 20, 21, n_realizations=3)
        result = run_rotor(config, RngStream(seed))
        self.assertEqual(result.n_realizations, 1)
        self.assertTrue(np.all(result.mean('energy') == 0.0))
        self.assertTrue(np.allclose(result.mean('participation'), 1.0))
        self.assertAlmostEqual(result.final_profile[0], 1.0, places=14)
        self.assertEqual(result.times[-1], 20.0)

    def test_initial_packet(self):
        config = RotorConfig(1.0, 1, 201, initial_width=3.0)
        state = initial_state(config)
        self.assertAlmostEqual(state.norm(), 1.0, places=14)
        p = np.abs(state.amplitudes) ** 2
        self.assertAlmostEqual(np.dot(p, (state.labels - 0) ** 2), 9.0, places=6)

        config = RotorConfig(1.0, 1, 201, initial_width=3.0, random_initial_phases=True)
        self.assertRaises(ValueError, initial_state, config)
        randomized = initial_state(config, RngStream(seed))
        self.assertTrue(np.allclose(np.abs(randomized.amplitudes), np.abs(state.amplitudes)))

    def test_leakage(self):
        p = np.zeros(101)
        p[50] = 1.0
        self.assertEqual(leakage(p), 0.0)
        p[0] = p[-1] = 0.25
        self.assertEqual(leakage(p), 0.5)

        with self.assertLogs('qzeno.rotor', level='WARNING'):
            config = RotorConfig(5.0, 50, 21, allow_small_basis=True)
            result = run_rotor(config, RngStream(seed))
        self.assertGreater(result.leakage_max, 1e-8)
        self.assertTrue(any("leakage" in w for w in result.warnings))
        self.assertLess(result.final_profile.total(), 1.0)

    def test_resonance(self):
        self.assertEqual(resonance(RotorConfig(1.0, 1, 21, period=4 * math.pi)), (1, 1))
        self.assertEqual(resonance(RotorConfig(1.0, 1, 21, period=2 * math.pi)), (1, 2))
        self.assertIsNone(resonance(RotorConfig(1.0, 1, 21, period=1.0)))
        self.assertIsNone(resonance(RotorConfig(1.0, 1, 21, h0=[0.0, 1.0])))

        with self.assertLogs('qzeno.rotor', level='WARNING'):
            result = run_rotor(RotorConfig(1.0, 4, 41, period=4 * math.pi), RngStream(seed))
        self.assertTrue(any("resonance" in w for w in result.warnings))

    def test_threads_do_not_change_results(self):
        config = RotorConfig(3.0, 10, 201, schedule={'every_n_kicks': 2}, n_realizations=20)
        one = run_rotor(config, RngStream(seed), workers=1)
        three = run_rotor(config, RngStream(seed), workers=3)
        self.assertTrue(np.array_equal(one.mean('energy'), three.mean('energy')))
        self.assertTrue(np.array_equal(one.error('energy'), three.error('energy')))
        self.assertTrue(np.array_equal(one.final_profile.probabilities,
                                       three.final_profile.probabilities))

    def test_kernels_agree_in_runs(self):
        direct = RotorConfig(5.0, 20, 301)
        spectral = RotorConfig(5.0, 20, 301, kernel='spectral')
        a = run_rotor(direct, RngStream(seed))
        b = run_rotor(spectral, RngStream(seed))
        self.assertTrue(np.allclose(a.mean('energy'), b.mean('energy'), rtol=1e-9, atol=1e-9))

    @unittest.skipIf(quick, "long runs disabled")
    def test_norm_drift(self):
        config = RotorConfig(5.0, 1000, 1025, allow_small_basis=True)
        state = initial_state(config)
        previous = 1.0
        for j in range(config.n_kicks):
            state = step(state, config, j, None)
            norm = state.norm()
            self.assertLess(abs(norm - previous), 1e-10)
            previous = norm
        self.assertLess(abs(previous - 1.0), 1e-7)

    @unittest.skipIf(quick, "long runs disabled")
    def test_measured_diffusion(self):
        config = RotorConfig(5.0, 200, 4097, schedule={'every_n_kicks': 1},
                             n_realizations=100)
        result = run_rotor(config, RngStream(seed))
        fit = diffusion_fit(result, config.period)
        self.assertAlmostEqual(fit.estimate, 6.25, delta=0.625)
        self.assertLess(result.leakage_max, 1e-8)

    @unittest.skipIf(quick, "long runs disabled")
    def test_anti_zeno_contrast(self):
        size = max(basis, 1501)
        measured = RotorConfig(5.0, 400, size, schedule={'every_n_kicks': 1}, n_realizations=100)
        free = RotorConfig(5.0, 400, size)
        measured_energy = run_rotor(measured, RngStream(seed)).final('energy')[0]
        free_energy = run_rotor(free, RngStream(seed)).final('energy')[0]
        self.assertGreater(measured_energy, 3.0 * free_energy)

    @unittest.skipIf(quick, "long runs disabled")
    def test_partial_measurement(self):
        energies = []
        for every in (1, 4, 16, None):
            config = RotorConfig(5.0, 64, 1025, schedule={'every_n_kicks': every},
                                 n_realizations=200)
            energies.append(run_rotor(config, RngStream(seed)).final('energy'))
        for (a, a_err), (b, b_err) in zip(energies, energies[1:]):
            self.assertGreaterEqual(a + 3.0 * (a_err + b_err), b)

    @unittest.skipIf(quick, "long runs disabled")
    def test_localization(self):
        config = RotorConfig(5.0, 1000, 2001)
        result = run_rotor(config, RngStream(seed))
        fit = localization_fit(result.averaged_profile, config.initial_state)
        self.assertFalse(fit.flagged)
        self.assertGreaterEqual(fit.goodness, 0.8)
        self.assertTrue(6.25 <= fit.estimate <= 25.0)

    @unittest.skipIf(quick, "long runs disabled")
    def test_break_time(self):
        config = RotorConfig(5.0, 100, 1025)
        result = run_rotor(config, RngStream(seed))
        fit = break_time_estimate(result, config.classical_diffusion)
        self.assertFalse(fit.flagged)
        self.assertTrue(12.5 / 3.0 <= fit.estimate <= 12.5 * 3.0)


if __name__ == '__main__':
    unittest.main()
