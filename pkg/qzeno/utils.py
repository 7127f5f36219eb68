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
"""utils module

This module provides miscellaneous functionality both used internally
and available for use externally: artifact writers with reproducible
number formatting, environment overrides and the realization map used by
the Monte Carlo engines.
"""
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
"Fixed 17 significant digit format used for every number written to CSV."

def format_float(value):
    """Format a number with 17 significant digits.

    Integers (including numpy integers) are written without a decimal part.

    Returns:
        str
    """
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FORMAT % float(value)

def writestr(f, value):
    """Write a value as a str to a file handle.
    """
    f.write(str(value))
    f.flush()

def writestr_all(path, value):
    """Write a value as a str to a file path.

    The file is written with ``\\n`` line endings and UTF-8 encoding on every
    platform so artifacts compare byte for byte.
    """
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        writestr(f, value)

def readstr_all(path):
    """Read a str from a file path.
    """
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()

def dumps(obj):
    """Serialize an object to the canonical JSON text used for artifacts.

    Keys are sorted and numpy scalars/arrays are converted, so the same
    object always gives the same bytes.

    Returns:
        str
    """
    return json.dumps(obj, sort_keys=True, indent=2, default=_to_builtin,
                      allow_nan=True) + '\n'

def _to_builtin(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError("Object of type %s is not JSON serializable" % type(value).__name__)

def write_csv(path, columns, rows, header=None):
    """Write a CSV file with optional ``#`` prefixed header comments.

    Args:
        path (str): Destination file.
        columns (list): Column names.
        rows (iterable): Row sequences, one value per column.
        header (list, None): Comment lines written before the column names.
    """
    lines = []
    for comment in header or []:
        for line in str(comment).splitlines():
            lines.append('# ' + line if line else '#')
    lines.append(','.join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError("row has %d values for %d columns" % (len(row), len(columns)))
        lines.append(','.join(format_float(value) for value in row))
    writestr_all(path, '\n'.join(lines) + '\n')

def write_json(path, obj):
    """Write an object as canonical JSON to a file path.
    """
    writestr_all(path, dumps(obj))

def threads():
    """Returns the default number of worker threads.

    The ``QZENO_THREADS`` environment variable overrides the default of 1.

    Returns:
        int
    """
    fixed = os.environ.get('QZENO_THREADS')
    if fixed:
        try:
            value = int(fixed)
        except ValueError:
            raise ValueError("QZENO_THREADS must be an integer, got %r" % fixed)
        if value < 1:
            raise ValueError("QZENO_THREADS must be >= 1")
        return value
    return 1

def log_level():
    """Returns the logging level requested through ``QZENO_LOG_LEVEL``.

    Returns:
        int, None: Returns the level if set, ``None`` otherwise.
    """
    fixed = os.environ.get('QZENO_LOG_LEVEL')
    if not fixed:
        return None
    if fixed.isdigit():
        return int(fixed)
    level = logging.getLevelName(fixed.upper())
    if not isinstance(level, int):
        raise ValueError("Unknown QZENO_LOG_LEVEL %r" % fixed)
    return level

def blocks(count, block_size):
    """Split ``range(count)`` into consecutive blocks of ``block_size``.

    The split depends only on its arguments, never on the worker count.

    Returns:
        list: list of (start, stop) tuples.
    """
    if block_size < 1:
        raise ValueError("block_size must be >= 1.")
    return [(start, min(start + block_size, count))
            for start in range(0, count, block_size)]

def map_blocks(func, count, block_size, workers=None):
    """Evaluate ``func(start, stop)`` over fixed realization blocks.

    Results come back in block order whatever the number of workers, so a
    reduction over them in that order is bit-for-bit reproducible.

    Args:
        func: Callable taking (start, stop).
        count (int): Number of realizations.
        block_size (int): Realizations per block.
        workers (int, None): Worker threads, ``None`` for ``threads()``.

    Returns:
        list
    """
    if not isinstance(count, (int, np.integer)) or isinstance(count, bool) or count < 1:
        raise ValueError("count must be a positive int.")

    workers = threads() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be >= 1.")

    ranges = blocks(int(count), block_size)
    _logger.debug("running %d realizations in %d block(s) on %d worker(s)",
                  count, len(ranges), workers)

    if workers == 1 or len(ranges) == 1:
        return [func(start, stop) for start, stop in ranges]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: func(*r), ranges))

def moments(samples):
    """Count, mean and summed squared deviations along the first axis.

    Returns:
        tuple: (count, mean, m2)
    """
    samples = np.asarray(samples, dtype=np.float64)
    mean = samples.mean(axis=0)
    return samples.shape[0], mean, ((samples - mean) ** 2).sum(axis=0)

def merge_moments(left, right):
    """Combine two (count, mean, m2) triples into one.

    Returns:
        tuple: (count, mean, m2)
    """
    n_a, mean_a, m2_a = left
    n_b, mean_b, m2_b = right
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * (n_b / n)
    m2 = m2_a + m2_b + delta ** 2 * (n_a * n_b / n)
    return n, mean, m2

def reduce_moments(parts):
    """Merge a sequence of (count, mean, m2) triples left to right.

    Returns:
        tuple: (mean, standard_error, count) where the standard error is the
        sample standard deviation over ``sqrt(count)``, zero for one sample.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to reduce.")
    total = parts[0]
    for part in parts[1:]:
        total = merge_moments(total, part)
    n, mean, m2 = total
    if n > 1:
        error = np.sqrt(m2 / (n - 1)) / np.sqrt(n)
    else:
        error = np.zeros_like(mean)
    return mean, error, n
