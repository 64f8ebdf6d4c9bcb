"""Hot inner loops, compiled when possible.

The Cython build (``_cy``) is imported when present; otherwise, or when the
environment variable ``HARMKIT_PURE_PYTHON`` is set, the numpy/pure-Python
module ``_py`` is used. Both expose the same four functions.
"""
import os

from . import _py

if os.environ.get("HARMKIT_PURE_PYTHON"):
    _impl = _py
    BACKEND = "python"
else:
    try:
        from . import _cy as _impl
    except ImportError:
        _impl = _py
        BACKEND = "python"
    else:
        BACKEND = "cython"

march_edges = _impl.march_edges
cauchy_truncated = _impl.cauchy_truncated
min_plus = _impl.min_plus
lipschitz_worst = _impl.lipschitz_worst

__all__ = ["BACKEND", "march_edges", "cauchy_truncated", "min_plus", "lipschitz_worst"]
