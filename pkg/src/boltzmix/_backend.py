"""Backend selection: compiled core when available, pure-Python otherwise.

The two cores implement the same functions with bit-identical results (see
_core.pyx and _core_py.py); selection only affects speed. The default is
the compiled core with silent fallback; set the environment variable
BOLTZMIX_BACKEND to "compiled" (fail hard if missing), "python", or "auto"
to override, or call set_backend() / use the force() context manager from
code and tests.
"""

import contextlib
import os

from . import _core_py
from .errors import ConfigError

try:
    from . import _core as _core_compiled
except ImportError:
    _core_compiled = None

ENV_VAR = "BOLTZMIX_BACKEND"


def _pick(name):
    name = (name or "auto").strip().lower()
    if name in ("auto", ""):
        return _core_compiled if _core_compiled is not None else _core_py
    if name in ("compiled", "c", "cython"):
        if _core_compiled is None:
            raise ConfigError(
                "%s=%r requested the compiled core but the extension is not "
                "built; reinstall with a C toolchain or use 'python'"
                % (ENV_VAR, name))
        return _core_compiled
    if name in ("python", "pure", "py"):
        return _core_py
    raise ConfigError("unknown backend %r (want 'auto', 'compiled' or "
                      "'python')" % (name,))


_active = _pick(os.environ.get(ENV_VAR))


def active():
    """The module (compiled or pure) currently providing the kernels."""
    return _active


def backend_name():
    return "compiled" if _active is _core_compiled else "python"


def has_compiled():
    return _core_compiled is not None


def set_backend(name):
    """Switch backends process-wide; returns the newly active module."""
    global _active
    _active = _pick(name)
    return _active


@contextlib.contextmanager
def force(name):
    """Temporarily switch backends (used by the equivalence tests)."""
    global _active
    previous = _active
    _active = _pick(name)
    try:
        yield _active
    finally:
        _active = previous
