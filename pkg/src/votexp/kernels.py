"""Kernel backend selection.

The compiled extension is used when it has been built; otherwise the
pure-Python implementation with identical semantics is loaded.
"""

from importlib import import_module

try:
    from . import _kernels as _impl
except ImportError:  # extension not built
    from . import _kernels_py as _impl

ScoreCache = _impl.ScoreCache
search = _impl.search
BACKEND = _impl.BACKEND


def available_backends():
    names = ["python"]
    try:
        import_module("votexp._kernels")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def get_backend(name):
    """Return the kernel module for ``'cython'`` or ``'python'``."""
    if name == "cython":
        return import_module("votexp._kernels")
    if name == "python":
        return import_module("votexp._kernels_py")
    raise ValueError(f"unknown backend {name!r}")
