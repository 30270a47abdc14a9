# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

# The folder above 'fraudens' must be on the path so that Sphinx sees
# fraudens as a package (due to the __init__.py in it).
#
import os
import sys
sys.path.insert(0, os.path.abspath('..//..'))


# -- Project information -----------------------------------------------------

project = 'fraudens: Hybrid Ensemble Fraud Detection'
copyright = '2026, fraudens contributors, MIT License'
author = 'fraudens contributors'

# The full version, including alpha/beta/rc tags
version = '1.0.0'
release = '1.0.0'


# -- General configuration ---------------------------------------------------

# autodoc and Napoleon for the Google style docstrings, enum-tools[sphinx]
# for the .. autoenum:: directive on the DocEnum classes.
#
extensions = [
    # https://www.sphinx-doc.org/en/master/usage/extensions/autodoc.html
    'sphinx.ext.autodoc',
    # https://www.sphinx-doc.org/en/master/usage/extensions/autosummary.html
    'sphinx.ext.autosummary',
    # https://www.sphinx-doc.org/en/master/usage/extensions/napoleon.html
    'sphinx.ext.napoleon',
    # https://enum-tools.readthedocs.io/en/latest/api/autoenum.html
    'enum_tools.autoenum',
]

# Autodoc settings (override defaults)
# https://www.sphinx-doc.org/en/master/usage/extensions/autodoc.html#configuration
autoclass_content = 'both'          # Concatenate class and __init__
autodoc_class_signature = 'mixed'
autodoc_member_order = 'bysource'
autodoc_typehints = 'signature'
autodoc_typehints_format = 'short'
autodoc_default_options = {
    'show-inheritance': True
}

# Napoleon specific settings
napoleon_use_admonition_for_examples = True
napoleon_use_admonition_for_notes = True
napoleon_use_admonition_for_references = True
napoleon_preprocess_types = True

templates_path = ['_templates']
html_static_path = ['_static']
exclude_patterns = []

# -- Options for HTML output --

html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'collapse_navigation': False,
    'sticky_navigation': True,
    'navigation_depth': -1,
    'prev_next_buttons_location': 'both',
}
