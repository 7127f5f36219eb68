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
"""cli module

Command line front end. An experiment is a JSON file::

    {
        "engine": "rotor",
        "master_seed": 1,
        "rotor": {"kick_strength": 5, "n_kicks": 200, "basis_size": 1025,
                  "schedule": {"every_n_kicks": 1}, "n_realizations": 100}
    }

run with ``qzeno rotor --spec rotor.json --out results``. Every artifact
starts with the resolved spec, and the same spec always gives the same
bytes whatever ``--threads`` is.
"""
import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field, fields

import numpy as np

import qzeno
from qzeno import utils
from qzeno.analysis import (CONVENTION, FitError, break_time_estimate, diffusion_fit,
                            localization_fit)
from qzeno.decay import DecayConfig, run_decay
from qzeno.rotor import RotorConfig, resonance, run_rotor
from qzeno.state import RngStream
from qzeno.twolevel import TwoLevelConfig, measured_power, run_two_level, zeno_sweep

_logger = logging.getLogger(__name__)

ENGINES = {'two_level': TwoLevelConfig, 'rotor': RotorConfig, 'decay': DecayConfig}
"Engine names and their config records."

COMMANDS = {'zeno': 'two_level', 'rotor': 'rotor', 'decay': 'decay'}
"Subcommands running an engine."

SWEEP_N = [2 ** i for i in range(11)]
"Step counts of the Zeno sweep in the two-level summary."

ANALYSIS_DEFAULTS = {'skip': 2, 'min_points': 10, 'threshold': 0.5, 'floor': 1e-30,
                     'core_fraction': 0.2, 'min_tail_bins': 20, 'r2_floor': 0.8}
"Estimator settings of the rotor summary."

# (type, accepted, bound) of each analysis setting
_ANALYSIS_BOUNDS = {
    'skip': (int, lambda v: v >= 0, ">= 0"),
    'min_points': (int, lambda v: v >= 3, ">= 3"),
    'threshold': (float, lambda v: 0.0 < v < 1.0, "in (0, 1)"),
    'floor': (float, lambda v: v > 0.0, "> 0"),
    'core_fraction': (float, lambda v: 0.0 <= v < 1.0, "in [0, 1)"),
    'min_tail_bins': (int, lambda v: v >= 2, ">= 2"),
    'r2_floor': (float, lambda v: 0.0 <= v <= 1.0, "in [0, 1]"),
}

_TOP_KEYS = {'engine', 'master_seed', 'emit_reference_curves', 'output', 'analysis'} | set(ENGINES)

class ConfigError(ValueError):
    """Raised for an invalid experiment spec."""


@dataclass
class ExperimentSpec:
    """Validated experiment.

    ``output_dir`` is an execution setting and is not part of ``to_dict``.
    """

    engine: str
    master_seed: int
    config: object
    emit_reference_curves: bool = False
    analysis: dict = field(default_factory=lambda: dict(ANALYSIS_DEFAULTS))
    output_dir: str = '.'

    def to_dict(self):
        """Resolved spec, accepted back by ``parse_spec``.

        Returns:
            dict
        """
        resolved = {'engine': self.engine,
                    'master_seed': self.master_seed,
                    'emit_reference_curves': self.emit_reference_curves,
                    self.engine: self.config.to_dict()}
        if self.engine == 'rotor':
            resolved['analysis'] = dict(self.analysis)
        return resolved

def parse_spec(text, seed=None, realizations=None, output_dir=None):
    """Parse and validate an experiment spec.

    Flags given as arguments override the values of the file.

    Args:
        text (str): JSON text of the spec.
        seed (int, None): Master seed override.
        realizations (int, None): ``n_realizations`` override.
        output_dir (str, None): Output directory override.

    Raises:
        ConfigError: naming the offending keys or field.

    Returns:
        ExperimentSpec
    """
    try:
        tree = json.loads(text)
    except ValueError as e:
        raise ConfigError("spec is not valid JSON: %s" % e)
    if not isinstance(tree, dict):
        raise ConfigError("spec must be a JSON object.")

    unknown = set(tree) - _TOP_KEYS
    if unknown:
        raise ConfigError("unknown keys: %s" % ', '.join(sorted(unknown)))

    sections = [name for name in ENGINES if name in tree]
    engine = tree.get('engine')
    if engine is not None and not isinstance(engine, str):
        raise ConfigError("engine must be a string, got %s." % type(engine).__name__)
    if engine is None and len(sections) == 1:
        engine = sections[0]
    if engine not in ENGINES:
        raise ConfigError("engine must be one of %s." % ', '.join(ENGINES))
    if sections != [engine]:
        raise ConfigError("spec must hold exactly one engine section, named %r." % engine)

    if seed is not None:
        tree['master_seed'] = seed
    master_seed = tree.get('master_seed')
    if master_seed is None:
        raise ConfigError("master_seed is required.")
    if isinstance(master_seed, bool) or not isinstance(master_seed, int) or \
       not 0 <= master_seed < 2 ** 64:
        raise ConfigError("master_seed must be an integer in [0, 2^64).")

    emit = tree.get('emit_reference_curves', False)
    if not isinstance(emit, bool):
        raise ConfigError("emit_reference_curves must be true or false.")

    output = tree.get('output', {})
    if not isinstance(output, dict) or set(output) - {'dir'}:
        raise ConfigError("output must be an object with the single key 'dir'.")

    section = tree[engine]
    if not isinstance(section, dict):
        raise ConfigError("%s must be an object." % engine)
    section = dict(section)
    if realizations is not None:
        if engine == 'decay':
            _logger.info("decay engine has no realizations, ignoring override")
        else:
            section['n_realizations'] = realizations

    config = _build(engine, section)

    analysis = dict(ANALYSIS_DEFAULTS)
    if 'analysis' in tree:
        if engine != 'rotor':
            raise ConfigError("analysis settings apply to the rotor engine only.")
        overrides = tree['analysis']
        if not isinstance(overrides, dict):
            raise ConfigError("analysis must be an object.")
        unknown = set(overrides) - set(ANALYSIS_DEFAULTS)
        if unknown:
            raise ConfigError("unknown analysis keys: %s" % ', '.join(sorted(unknown)))
        for name, value in overrides.items():
            analysis[name] = _analysis_value(name, value)

    return ExperimentSpec(engine=engine, master_seed=master_seed, config=config,
                          emit_reference_curves=emit, analysis=analysis,
                          output_dir=output_dir or output.get('dir', '.'))

def _build(engine, section):
    record = ENGINES[engine]
    names = {f.name for f in fields(record)}
    unknown = set(section) - names
    if unknown:
        raise ConfigError("unknown %s keys: %s" % (engine, ', '.join(sorted(unknown))))
    try:
        return record(**section)
    except (TypeError, ValueError) as e:
        raise ConfigError("%s: %s" % (engine, e))

def _analysis_value(name, value):
    kind, accepted, bound = _ANALYSIS_BOUNDS[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or \
       (kind is int and not isinstance(value, int)):
        raise ConfigError("analysis.%s must be %s." %
                          (name, 'an integer' if kind is int else 'a number'))
    value = kind(value)
    if not accepted(value):
        raise ConfigError("analysis.%s = %r must be %s." % (name, value, bound))
    return value

def load_spec(path, **overrides):
    """Read and parse a spec file.

    Returns:
        ExperimentSpec
    """
    try:
        text = utils.readstr_all(path)
    except OSError as e:
        raise ConfigError("cannot read spec %s: %s" % (path, e.strerror))
    return parse_spec(text, **overrides)

def _header(spec, units):
    lines = ["qzeno %s %s" % (qzeno.__version__, spec.engine), "spec:"]
    lines.extend(json.dumps(spec.to_dict(), sort_keys=True, indent=2).splitlines())
    lines.append("units: %s" % units)
    return lines

def run(spec, workers=None):
    """Run an experiment and write its artifacts to ``spec.output_dir``.

    Args:
        spec (ExperimentSpec): Validated experiment.
        workers (int, None): Worker threads, ``None`` for the environment
            default. Never changes the artifacts.

    Returns:
        dict: JSON summary, also written to ``summary.json``.
    """
    os.makedirs(spec.output_dir, exist_ok=True)
    rng = RngStream(spec.master_seed)
    runner = {'two_level': _run_two_level, 'rotor': _run_rotor, 'decay': _run_decay}
    summary = runner[spec.engine](spec, rng, workers)
    summary['spec'] = spec.to_dict()
    summary['version'] = qzeno.__version__
    utils.write_json(os.path.join(spec.output_dir, 'summary.json'), summary)
    _logger.info("wrote %s artifacts to %s", spec.engine, spec.output_dir)
    return summary

def _run_two_level(spec, rng, workers):
    config = spec.config
    result = run_two_level(config, rng, workers)

    columns = ['k', 't', 'p1_mean', 'p1_err', 'p2_mean', 'p2_err']
    extra = []
    if spec.emit_reference_curves:
        columns += ['p1_analytic', 'p2_analytic', 'p1_coherent', 'p2_coherent']
        k = np.arange(config.n_steps + 1)
        same_measured = 0.5 * (1.0 + np.cos(2.0 * config.phi) ** k)
        same_coherent = np.cos(k * config.phi) ** 2
        for same in (same_measured, same_coherent):
            other = 1.0 - same
            extra.append((same, other) if config.initial_state == 0 else (other, same))

    rows = []
    for i, t in enumerate(result.times):
        row = [i, t, result.mean('p1')[i], result.error('p1')[i],
               result.mean('p2')[i], result.error('p2')[i]]
        for first, second in extra:
            row += [first[i], second[i]]
        rows.append(row)
    utils.write_csv(os.path.join(spec.output_dir, 'zeno.csv'), columns, rows,
                    _header(spec, "hbar = 1; t in units of 1/Omega"))

    closed = measured_power(config.phi, config.n_steps)[:, config.initial_state]
    p1, p1_err = result.final('p1')
    p2, p2_err = result.final('p2')
    return {'engine': 'two_level', 'mode': config.mode,
            'n_realizations': result.n_realizations,
            'total_time': config.total_time,
            'final': {'p1': p1, 'p1_err': p1_err, 'p2': p2, 'p2_err': p2_err},
            'closed_form': {'p1': float(closed[0]), 'p2': float(closed[1])},
            'sweep': [{'n': n, 'p2': p} for n, p in zeno_sweep(SWEEP_N)]}

def _run_rotor(spec, rng, workers):
    config = spec.config
    options = spec.analysis
    result = run_rotor(config, rng, workers)
    B = config.classical_diffusion

    columns = ['kick', 't', 'energy_mean', 'energy_err', 'participation',
               'participation_err', 'leakage']
    if spec.emit_reference_curves:
        columns.append('classical_energy')
    rows = []
    for i, t in enumerate(result.times):
        row = [i, t, result.mean('energy')[i], result.error('energy')[i],
               result.mean('participation')[i], result.error('participation')[i],
               result.mean('leakage')[i]]
        if spec.emit_reference_curves:
            row.append(2.0 * B * t)
        rows.append(row)
    header = _header(spec, "hbar = 1; t = kick index x period; energy = <(m-m0)^2>")
    header.append("convention: %s" % CONVENTION)
    utils.write_csv(os.path.join(spec.output_dir, 'rotor.csv'), columns, rows, header)

    labels = result.final_profile.labels
    utils.write_csv(os.path.join(spec.output_dir, 'profile.csv'),
                    ['m', 'P_m', 'P_m_averaged'],
                    zip(labels, result.final_profile.probabilities,
                        result.averaged_profile.probabilities),
                    _header(spec, "P_m_averaged averages the last quarter of kicks"))

    fits = {}
    fits['diffusion'] = _fit(diffusion_fit, result, config.period,
                             skip=options['skip'], min_points=options['min_points'])
    fits['localization'] = _fit(localization_fit, result.averaged_profile,
                                config.initial_state, floor=options['floor'],
                                core_fraction=options['core_fraction'],
                                min_tail_bins=options['min_tail_bins'],
                                r2_floor=options['r2_floor'])
    fits['break_time'] = _fit(break_time_estimate, result, B,
                              threshold=options['threshold'], skip=options['skip'])

    found = resonance(config)
    energy, energy_err = result.final('energy')
    return {'engine': 'rotor', 'convention': CONVENTION,
            'n_realizations': result.n_realizations,
            'B_classical': B,
            'break_time_scale': config.break_time_scale,
            'localization_scale': config.kick_strength ** 2 / 2.0,
            'final_energy': energy, 'final_energy_err': energy_err,
            'leakage_max': result.leakage_max,
            'resonance': None if found is None else {'p': found[0], 'q': found[1]},
            'fits': fits,
            'warnings': list(result.warnings)}

def _fit(estimator, *args, **kwargs):
    try:
        return estimator(*args, **kwargs).to_dict()
    except FitError as e:
        _logger.warning("%s: %s", estimator.__name__, e)
        return {'error': str(e)}

def _run_decay(spec, rng, workers):
    config = spec.config
    result = run_decay(config)

    columns = ['t', 'P_d', 'P_d_abserr', 'P_survival', 'g_t2', 'valid']
    if spec.emit_reference_curves:
        columns.append('survival_quadratic')
    rows = []
    for i, t in enumerate(result.times):
        row = [t, result.decay[i], result.abserr[i], result.survival_probability[i],
               result.reference[i], int(result.valid[i])]
        if spec.emit_reference_curves:
            row.append(1.0 - result.reference[i])
        rows.append(row)
    utils.write_csv(os.path.join(spec.output_dir, 'decay.csv'), columns, rows,
                    _header(spec, "hbar = 1; energies are angular frequencies"))
    utils.write_csv(os.path.join(spec.output_dir, 'survival.csv'),
                    ['n', 'tau', 'linear', 'linear_limit', 'quadratic', 'quadratic_limit'],
                    result.survival,
                    _header(spec, "t = n tau fixed at %.17g" % config.total_time))

    ratio = [float(d / (t * t)) for d, t in zip(result.decay, result.times) if t > 0]
    return {'engine': 'decay', 'g': result.g,
            'linear_valid': config.linear_valid,
            'P_d_over_t2': [r if math.isfinite(r) else None for r in ratio],
            'warnings': list(result.warnings)}

def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help="master seed (u64)")
    common.add_argument('--out', default=None, help="output directory")
    common.add_argument('--realizations', type=int, default=None,
                        help="number of realizations")
    common.add_argument('--threads', type=int, default=None,
                        help="worker threads (results do not depend on it)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help="debug logging")
    verbosity.add_argument('-q', '--quiet', action='store_true', help="errors only")

    parser = argparse.ArgumentParser(prog='qzeno', description="Quantum Zeno and "
                                     "anti-Zeno simulations.")
    parser.add_argument('--version', action='version', version=qzeno.__version__)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    for name, help_text in (('zeno', "two-level Zeno experiment"),
                            ('rotor', "kicked rotor experiment"),
                            ('decay', "short-time decay and survival")):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument('--spec', required=True, help="JSON experiment file")
    commands.add_parser('verify', parents=[common], help="run the built-in checks")
    return parser

def _configure_logging(args):
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    else:
        level = utils.log_level() or logging.WARNING
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

def _report(error, context):
    sys.stderr.write(json.dumps({'error': type(error).__name__, 'message': str(error),
                                 'context': context}, sort_keys=True) + '\n')

def main(argv=None):
    """Entry point of the ``qzeno`` command.

    Returns:
        int: Exit status, 0 on success, 2 for configuration errors and 1
        for any other failure.
    """
    args = _parser().parse_args(argv)
    context = args.command
    try:
        _configure_logging(args)
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1.")

        if args.command == 'verify':
            from qzeno import verify
            return verify.main(workers=args.threads, realizations=args.realizations)

        spec = load_spec(args.spec, seed=args.seed, realizations=args.realizations,
                         output_dir=args.out)
        if spec.engine != COMMANDS[args.command]:
            raise ConfigError("spec engine %r does not match command %r." %
                              (spec.engine, args.command))
        run(spec, args.threads)
        return 0
    except ConfigError as e:
        _report(e, context)
        return 2
    except Exception as e:
        _logger.debug("%s failed", context, exc_info=True)
        _report(e, context)
        return 1
