"""Evasion attacks on collapsed-Gibbs LDA topic models."""

try:
    from ._evalda import *  # noqa: F401,F403  (wheel layout)
    from ._evalda import __doc__ as _mod_doc
except ImportError:
    from _evalda import *  # noqa: F401,F403  (in-tree build: module on PYTHONPATH)
    from _evalda import __doc__ as _mod_doc

__doc__ = _mod_doc or __doc__
