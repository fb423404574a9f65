import numpy as np
import pytest

from zising import _backend
from zising.elliptic import EllipticParameter, resc_sncndn

needs_compiled = pytest.mark.skipif(not _backend.has_compiled(), reason="compiled kernels not built")


def test_active_backend_name():
    assert _backend.active_name() in ("compiled", "python")
    if _backend.has_compiled():
        assert _backend.active_name() == "compiled"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.use_backend("fortran")


@needs_compiled
@pytest.mark.parametrize("m", [0.0, 0.3, 0.9, 0.999])
def test_landen_kernels_agree(m):
    chain = np.asarray(EllipticParameter(m).chain, dtype=float)
    t = np.linspace(-np.pi, np.pi, 257)
    a = _backend.get("python").landen_sncndn(t, chain)
    b = _backend.get("compiled").landen_sncndn(t, chain)
    for x, y in zip(a, b):
        assert np.allclose(x, y, atol=1e-15, rtol=0)


def test_switching_backends_gives_same_values():
    t = np.linspace(-3, 3, 31)
    before = _backend.active_name()
    try:
        _backend.use_backend("python")
        ref = resc_sncndn(t, -2.0)
        if _backend.has_compiled():
            _backend.use_backend("compiled")
            got = resc_sncndn(t, -2.0)
            for x, y in zip(ref, got):
                assert np.allclose(x, y, atol=1e-14)
    finally:
        _backend.use_backend(before)
