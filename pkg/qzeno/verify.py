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
"""verify module

Built-in invariant checks behind ``qzeno verify``. Each check returns
``(passed, detail)``; ``main`` prints a pass/fail table.
"""
import logging
import math

import numpy as np

from qzeno import decay, rotor, twolevel
from qzeno.state import RngStream, StateVector

_logger = logging.getLogger(__name__)

VERIFY_SEED = 20260101

def check_zeno_closed_form():
    worst = 0.0
    for n in range(1, 65):
        phi = math.pi / (2 * n)
        product = np.linalg.matrix_power(twolevel.measured_step_matrix(phi), n)
        worst = max(worst, float(np.abs(product - twolevel.measured_power(phi, n)).max()))
    p100 = twolevel.zeno_transition(100)
    p1000 = twolevel.zeno_transition(1000)
    passed = worst < 1e-10 and p100 < 0.025 and p1000 < 0.0026
    return passed, "max dev %.2g, p2(100)=%.6g, p2(1000)=%.6g" % (worst, p100, p1000)

def check_certain_transition():
    n = 10
    p2 = abs(twolevel.coherent_power(math.pi / (2 * n), n)[1, 0]) ** 2
    return abs(p2 - 1.0) < 1e-12, "p2=%.17g" % p2

def check_dephasing_agreement(realizations=2000, workers=None):
    config = twolevel.TwoLevelConfig(rabi_frequency=1.0, measurement_interval=math.pi / 4,
                                     n_steps=4, mode='dephasing_mc',
                                     n_realizations=realizations)
    result = twolevel.run_two_level(config, RngStream(VERIFY_SEED), workers)
    p2, error = result.final('p2')
    return abs(p2 - 0.375) <= 4 * error, "p2=%.5f +- %.5f" % (p2, error)

def check_survival_limits():
    linear = decay.survival_linear(1.0, 1e-6, 10 ** 6).probability
    deviation = abs(linear - math.exp(-1.0))
    quadratic = all(decay.survival_quadratic(1.0, 1.0 / n, n).probability >= 1.0 - 1.01 / n
                    for n in (100, 1000, 10000))
    return deviation < 1e-5 and quadratic, "|S_lin - 1/e|=%.2g" % deviation

def check_quadratic_window():
    model = decay.SpectralModel.flat(coupling=0.01, density=1.0, E_l=-5.0, E_u=5.0)
    g = decay.zeno_time_coefficient(model)
    ratios = np.array([decay.decay_probability_integral(model, t) / t ** 2
                       for t in np.linspace(0.001, 0.01, 10)])
    spread = float(ratios.max() / ratios.min() - 1.0)
    offset = float(np.abs(ratios / g - 1.0).max())
    return spread < 0.02 and offset < 0.01, "g=%g, spread %.2g, offset %.2g" % (g, spread, offset)

def check_bessel_identities():
    norms = [abs(np.sum(rotor.bessel_kernel(k) ** 2) - 1.0) for k in (1.0, 5.0, 10.0)]
    bessel = rotor.bessel_kernel(5.0)
    orders = np.arange(bessel.size) - bessel.size // 2
    second = float(np.sum(orders ** 2 * bessel ** 2))
    passed = max(norms) < 1e-12 and abs(second - 12.5) < 1e-10
    return passed, "max |sum J^2 - 1|=%.2g, sum m^2 J^2(5)=%.15g" % (max(norms), second)

def random_state(rng, size, basis_offset):
    """Normalized state with Gaussian random amplitudes.

    Returns:
        StateVector
    """
    amplitudes = rng.generator.normal(size=size) + 1j * rng.generator.normal(size=size)
    return StateVector(amplitudes / np.linalg.norm(amplitudes), basis_offset)

def check_kernel_equivalence():
    rng = RngStream(VERIFY_SEED, 1)
    worst = 0.0
    for k in (2.0, 5.0, 10.0):
        for _ in range(20):
            state = random_state(rng, 257, -128)
            direct = rotor.kick(state, k, 'bessel_direct').amplitudes
            spectral = rotor.kick(state, k, 'spectral').amplitudes
            worst = max(worst, float(np.abs(direct - spectral).max()))
    return worst < 1e-10, "max |direct - spectral|=%.2g" % worst

def check_first_step():
    config = rotor.RotorConfig(kick_strength=5.0, n_kicks=1, basis_size=101,
                               schedule={'every_n_kicks': 1})
    state = rotor.step(rotor.initial_state(config), config, 0, RngStream(VERIFY_SEED, 2))
    bessel = rotor.bessel_kernel(5.0, 50)
    deviation = float(np.abs(np.abs(state.amplitudes) ** 2 - bessel ** 2).max())
    return deviation < 1e-12, "max |P_m - J^2|=%.2g" % deviation

def check_norm_drift():
    config = rotor.RotorConfig(kick_strength=5.0, n_kicks=1000, basis_size=1025,
                               allow_small_basis=True)
    propagator = rotor._Propagator(config)
    rng = RngStream(VERIFY_SEED, 3)
    state = rotor.initial_state(config)
    previous = state.norm()
    per_step = 0.0
    for j in range(config.n_kicks):
        state = propagator.step(state, j, rng)
        norm = state.norm()
        per_step = max(per_step, abs(norm - previous))
        previous = norm
    total = abs(previous - 1.0)
    return per_step < 1e-10 and total < 1e-7, "per step %.2g, total %.2g" % (per_step, total)

CHECKS = [
    ('zeno closed form', check_zeno_closed_form),
    ('certain transition', check_certain_transition),
    ('dephasing mc agreement', check_dephasing_agreement),
    ('survival limits', check_survival_limits),
    ('quadratic short-time law', check_quadratic_window),
    ('bessel identities', check_bessel_identities),
    ('kernel equivalence', check_kernel_equivalence),
    ('first-step exactness', check_first_step),
    ('norm drift', check_norm_drift),
]
"Checks run by ``qzeno verify``, in order."

def run_checks(workers=None, realizations=None):
    """Run every check, turning exceptions into failures.

    Returns:
        list: list of (name, passed, detail) tuples.
    """
    results = []
    for name, check in CHECKS:
        kwargs = {}
        if check is check_dephasing_agreement:
            kwargs['workers'] = workers
            if realizations is not None:
                kwargs['realizations'] = realizations
        try:
            passed, detail = check(**kwargs)
        except Exception as e:
            _logger.debug("check %s raised", name, exc_info=True)
            passed, detail = False, "%s: %s" % (type(e).__name__, e)
        results.append((name, bool(passed), detail))
    return results

def main(workers=None, realizations=None):
    """Print the check table.

    Returns:
        int: 0 when every check passes, 1 otherwise.
    """
    results = run_checks(workers, realizations)
    width = max(len(name) for name, _, _ in results)
    for name, passed, detail in results:
        print("%-*s  %s  %s" % (width, name, 'PASS' if passed else 'FAIL', detail))
    failed = sum(1 for _, passed, _ in results if not passed)
    print("%d/%d checks passed" % (len(results) - failed, len(results)))
    return 1 if failed else 0
