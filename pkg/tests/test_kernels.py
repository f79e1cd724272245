"""Backend agreement: the compiled kernels must match the numpy fallback."""

import numpy as np
import pytest
from scipy.special import gamma

from roughdyn.kernels import _pykernels

fast = pytest.importorskip("roughdyn.kernels._fastkernels")


@pytest.fixture(scope="module")
def data():
    rng = np.random.default_rng(1)
    n, m = 96, 3
    dt = 1.0 / n
    g = np.cumsum(rng.standard_normal((n + 1, m)), axis=0) * dt**0.75
    return g, dt


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_frac_sweeps_agree(data, alpha):
    g, dt = data
    for name, grec in (
        ("frac_deriv_left_mid", 1.0 / gamma(1.0 - alpha)),
        ("frac_deriv_right_mid", 1.0 / gamma(alpha)),
    ):
        ref = getattr(_pykernels, name)(g, dt, alpha, grec)
        got = getattr(fast, name)(g, dt, alpha, grec)
        assert np.allclose(got, ref, rtol=1e-12, atol=1e-12)


def test_holder_sups_agree(data):
    g, dt = data
    for gap in (np.inf, 0.3):
        assert fast.holder_pair_sup(g, dt, 0.55, gap) == pytest.approx(
            _pykernels.holder_pair_sup(g, dt, 0.55, gap), rel=1e-13
        )
    for rho in (0.0, 7.0):
        assert fast.weighted_holder_sup(g, dt, 0.55, rho) == pytest.approx(
            _pykernels.weighted_holder_sup(g, dt, 0.55, rho), rel=1e-13
        )


def test_backend_selection_env(monkeypatch):
    import importlib

    import roughdyn.kernels as K

    monkeypatch.setenv("ROUGHDYN_FORCE_NUMPY", "1")
    mod = importlib.reload(K)
    assert mod.BACKEND == "numpy"
    monkeypatch.delenv("ROUGHDYN_FORCE_NUMPY")
    mod = importlib.reload(K)
    assert mod.BACKEND in ("cython", "numpy")
