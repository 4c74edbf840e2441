import os
import subprocess
import sys

import numpy as np
import pytest

from milburnosc import backend
from milburnosc.evolution import _prepare
from milburnosc.normal_modes import SystemParams, derive_modes


def _probe(env_value):
    code = "from milburnosc import backend; print(backend.BACKEND_NAME)"
    env = {**os.environ, "MILBURNOSC_BACKEND": env_value}
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)


def test_env_forces_numpy():
    proc = _probe("numpy")
    assert proc.returncode == 0 and proc.stdout.strip() == "numpy"


def test_env_rejects_unknown():
    assert _probe("fortran").returncode != 0


@pytest.mark.skipif(not backend.HAVE_COMPILED, reason="compiled extension not built")
def test_compiled_is_default():
    assert backend.BACKEND_NAME == "cython"
    assert _probe("cython").stdout.strip() == "cython"


def test_get_kernels():
    assert backend.get_kernels("numpy").BACKEND_NAME == "numpy"
    assert backend.get_kernels() is backend.kernels
    with pytest.raises(ValueError):
        backend.get_kernels("fortran")


@pytest.mark.parametrize("name", backend.available_backends())
def test_kernel_contract(name):
    k = backend.get_kernels(name)
    modes = derive_modes(SystemParams(1.4, 0.6, 0.5, 30.0))
    U, M, rates, t = _prepare(modes, np.linspace(0, 10, 17), "milburn", None, None)
    S = k.evolve_batch(U, M, rates, t)
    assert S.shape == (17, 4, 4)
    np.testing.assert_array_equal(S, np.conj(np.swapaxes(S, 1, 2)))
    inv = k.invariants_batch(S)
    np.testing.assert_allclose(inv[:, 6], np.linalg.det(S).real, rtol=1e-12)
    np.testing.assert_allclose(inv[:, 2], np.linalg.det(S[:, :2, :2]).real, rtol=1e-12)
    np.testing.assert_allclose(inv[:, 4], np.linalg.det(S[:, :2, 2:]).real, atol=1e-14)
    np.testing.assert_array_equal(k.trajectory_invariants(U, M, rates, t), inv)
