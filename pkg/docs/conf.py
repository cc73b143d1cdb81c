# -*- coding: utf-8 -*-
#
# Maglab documentation build configuration file.

import sys, os

sys.path.insert(0, os.path.abspath('..'))

from maglab import __version__

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc']
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Maglab'
copyright = u'2026, the maglab developers'

version = '.'.join(__version__.split('.')[:2])
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'
autodoc_member_order = 'bysource'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'default'
html_static_path = ['_static']
htmlhelp_basename = 'Maglabdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
  ('index', 'Maglab.tex', u'Maglab Documentation',
   u'the maglab developers', 'manual'),
]

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index', 'maglab', u'Maglab Documentation',
     [u'the maglab developers'], 1)
]
