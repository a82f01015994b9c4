"""Combinatorics and exact-rank certificates for the postulation of general curve unions.

Subpackages: ``numset`` (numerical sets and their orderings), ``ffla`` (linear
algebra over prime fields), ``geom`` (explicit degenerate curve models),
``oracle`` (expected values, catalog, verdicts) and ``cli``.
"""

__version__ = "0.1.0"
