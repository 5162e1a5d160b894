"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels take over. :func:`use` switches explicitly (tests and the benchmark
compare both).
"""

from __future__ import annotations

import contextlib
import logging

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
    log.debug("compiled kernels unavailable, using pure-Python fallback")

_current = _compiled if _compiled is not None else _pykernels


def available() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def name() -> str:
    return "compiled" if _current is _compiled and _compiled is not None else "python"


def kernels():
    return _current


def set_backend(which: str) -> None:
    global _current
    if which == "python":
        _current = _pykernels
    elif which == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        _current = _compiled
    else:
        raise ValueError(f"unknown backend {which!r}")


@contextlib.contextmanager
def use(which: str):
    prev = _current
    set_backend(which)
    try:
        yield
    finally:
        _set(prev)


def _set(mod) -> None:
    global _current
    _current = mod
