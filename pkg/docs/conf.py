# -*- coding: utf-8 -*-
#
# qzeno documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here. If the directory is relative to the
# documentation root, use os.path.abspath to make it absolute, like shown here.
#
import os
import re
import sys
sys.path.insert(0, os.path.abspath('../'))


# -- General configuration ------------------------------------------------

# Add any Sphinx extension module names here, as strings. They can be
# extensions coming with Sphinx (named 'sphinx.ext.*') or your custom
# ones.
extensions = ['sphinx.ext.autodoc', 'sphinx.ext.napoleon', 'sphinx.ext.mathjax']

autoclass_content = 'both'
autodoc_member_order = 'bysource'

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

# The suffix(es) of source filenames.
source_suffix = '.rst'

# The master toctree document.
master_doc = 'index'

# General information about the project.
project = u'qzeno'
copyright = u'2026 The qzeno developers.  All rights reserved.'
author = u'The qzeno developers'

# The version info for the project you're documenting, read from the package
# without importing it.
with open(os.path.join(os.path.dirname(__file__), '..', 'qzeno', '__init__.py')) as f:
    version = re.search(r"^__version__ = '([^']+)'", f.read(), re.M).group(1)
release = version

language = 'en'

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'sphinx'

todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

import sphinx_rtd_theme
html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

htmlhelp_basename = 'qzenodoc'


# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'qzeno.tex', u'Quantum Zeno Toolkit Documentation',
     author, 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'qzeno', u'Quantum Zeno Toolkit',
     [author], 1)
]
