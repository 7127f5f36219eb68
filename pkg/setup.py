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
import codecs
import re
from setuptools import setup

with codecs.open('qzeno/__init__.py', encoding='utf-8') as f:
    __version__ = re.search(r"^__version__ = '([^']+)'", f.read(), re.M).group(1)

try:
    import pypandoc
    README = pypandoc.convert_file('README.md', 'rst')
except ImportError:
    with codecs.open('README.md', encoding='utf-8') as f:
        README = f.read()

setup(
    name='qzeno',
    author='The qzeno developers',
    version=__version__,
    packages=['qzeno'],
    include_package_data=True,
    python_requires='>=3.6',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.3',
    ],
    extras_require={
        'docs': ['sphinx', 'sphinx_rtd_theme'],
    },
    entry_points={
        'console_scripts': ['qzeno = qzeno.cli:main'],
    },
    description="Quantum Zeno and anti-Zeno simulations",
    long_description=README,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Education',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
        'Topic :: Software Development :: Libraries :: Python Modules',
    ],
)
