"""Kernel selection: the compiled extension when it imports, else numpy."""
from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active = _compiled if _compiled is not None else _fallback


def has_compiled():
    return _compiled is not None


def active_name():
    return "compiled" if _active is _compiled else "python"


def use_backend(name):
    """Switch kernels process-wide; ``name`` is ``"compiled"`` or ``"python"``."""
    global _active
    if name == "python":
        _active = _fallback
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available; build the extension first")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def get(name=None):
    if name is None:
        return _active
    return {"python": _fallback, "compiled": _compiled}[name]


def landen_sncndn(t, chain):
    return _active.landen_sncndn(t, chain)


def ising_enumerate(coupling, boundary, gauge_fix=True):
    return _active.ising_enumerate(coupling, boundary, gauge_fix)
