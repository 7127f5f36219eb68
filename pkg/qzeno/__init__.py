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
"""qzeno module"""

# Pull everything public into the module
from .state import (StateVector, ProbabilityDistribution, RngStream, random_phases,
                    randomize_phases, randomize_all_phases, probabilities, sample_projection)
from .analysis import (EnsembleResult, FitResult, FitError, diffusion_fit, localization_fit,
                       break_time_estimate)
from .twolevel import (TwoLevelConfig, coherent_step_matrix, coherent_power,
                       measured_step_matrix, measured_power, run_two_level, zeno_transition,
                       zeno_sweep, dephasing_trajectory, collapse_trajectory)
from .decay import (DecayConfig, SpectralModel, QuadratureError, survival_linear,
                    survival_quadratic, decay_probability_integral, zeno_time_coefficient,
                    run_decay)
from .rotor import (RotorConfig, MeasurementSchedule, free_rotation, kick, bessel_kernel,
                    step, run_rotor)
from .cli import ExperimentSpec, ConfigError, parse_spec, run, main

__version__ = '1.0'
"qzeno module version string."
