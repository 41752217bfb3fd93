import pytest
from hypothesis import HealthCheck, settings

from risfso import _backend, _pykernels

settings.register_profile("risfso", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("risfso")

try:
    from risfso import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

BACKENDS = {"numpy": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    impl = BACKENDS[request.param]
    for name in ("clgamma", "mellin_barnes", "gammaincc_array"):
        monkeypatch.setattr(_backend, name, getattr(impl, name))
    return request.param
