"""Exact computations with linked Pfister forms.

Submodules: ``fields`` (coefficient towers), ``forms`` (quadratic and bilinear
forms, Pfister presentations), ``oracles`` (isotropy, Witt index, isometry),
``linkage`` (witness forms and presentation moves), ``invariant`` (the
k-invariant and its verification harnesses) and ``cli``.
"""

__version__ = "0.1.0"
