"""The compiled core and its numpy fallback must agree."""

import numpy as np
import pytest

from panelhet import _backend
from panelhet._backend import available_backends

BACKENDS = available_backends()


def test_python_backend_always_present():
    assert "python" in BACKENDS
    assert _backend.BACKEND in BACKENDS


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled core not built")
@pytest.mark.parametrize("kernel, mode", [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)])
def test_kernel_sum_parity(kernel, mode):
    rng = np.random.default_rng(kernel * 10 + mode)
    data = rng.normal(size=777)
    pts = np.linspace(-4, 4, 301)
    a = BACKENDS["cython"].kernel_sum(data, pts, 0.37, kernel, mode)
    b = BACKENDS["python"].kernel_sum(data, pts, 0.37, kernel, mode)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled core not built")
@pytest.mark.parametrize("kernel", [0, 1])
def test_combined_moments_parity(kernel):
    rng = np.random.default_rng(kernel)
    comp = np.ascontiguousarray(rng.normal(size=(6, 300)))
    w = np.array([3.5, -2.0, -2.0, 0.5, 0.5, 0.5])
    pts = np.linspace(-3, 3, 101)
    a = BACKENDS["cython"].combined_moments(comp, w, comp[0].copy(), pts, 0.5, 0.5, 0.1, kernel)
    b = BACKENDS["python"].combined_moments(comp, w, comp[0].copy(), pts, 0.5, 0.5, 0.1, kernel)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-10)


def test_python_chunking_consistent(monkeypatch):
    core = BACKENDS["python"]
    rng = np.random.default_rng(1)
    data = rng.normal(size=500)
    pts = np.linspace(-3, 3, 97)
    full = core.kernel_sum(data, pts, 0.3, 1, 0)
    monkeypatch.setattr(core, "_CHUNK", 1000)
    np.testing.assert_allclose(core.kernel_sum(data, pts, 0.3, 1, 0), full, rtol=1e-14)
