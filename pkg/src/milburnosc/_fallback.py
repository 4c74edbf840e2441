"""Pure numpy implementation of the trajectory kernels.

Contract shared with the compiled ``_kernels`` module:

``evolve_batch(U, M, rates, times)``
    Returns the ``(n, 4, 4)`` stack ``herm(U (M * exp(rates * t)) U^dag)``,
    where ``*`` is the entrywise product and the diagonal of ``exp(rates t)``
    is exactly one.

``invariants_batch(sigmas)``
    Returns ``(n, 8)`` float columns ``[Sigma_11, Sigma_33, det Sa, det Sb,
    Re det Sab, Im det Sab, Re det Sigma, Im det Sigma]`` (1-based indices).

``trajectory_invariants(U, M, rates, times)``
    ``invariants_batch(evolve_batch(U, M, rates, times))``.
"""
import numpy as np

BACKEND_NAME = "numpy"

_OFFDIAG = ~np.eye(4, dtype=bool)


def evolve_batch(U, M, rates, times):
    U = np.asarray(U, dtype=complex)
    t = np.asarray(times, dtype=float)
    E = np.ones((t.size, 4, 4), dtype=complex)
    E[:, _OFFDIAG] = np.exp(np.multiply.outer(t, np.asarray(rates)[_OFFDIAG]))
    X = np.asarray(M, dtype=complex) * E
    S = U @ X @ U.conj().T
    S = 0.5 * (S + np.conj(np.swapaxes(S, -1, -2)))
    idx = np.arange(4)
    S[:, idx, idx] = S[:, idx, idx].real
    return S


def invariants_batch(sigmas):
    S = np.asarray(sigmas, dtype=complex)
    out = np.empty((S.shape[0], 8))
    out[:, 0] = S[:, 0, 0].real
    out[:, 1] = S[:, 2, 2].real
    out[:, 2] = (S[:, 0, 0] * S[:, 1, 1] - S[:, 0, 1] * S[:, 1, 0]).real
    out[:, 3] = (S[:, 2, 2] * S[:, 3, 3] - S[:, 2, 3] * S[:, 3, 2]).real
    dab = S[:, 0, 2] * S[:, 1, 3] - S[:, 0, 3] * S[:, 1, 2]
    out[:, 4] = dab.real
    out[:, 5] = dab.imag
    d = np.linalg.det(S) if S.shape[0] else np.empty(0, dtype=complex)
    out[:, 6] = d.real
    out[:, 7] = d.imag
    return out


def trajectory_invariants(U, M, rates, times):
    return invariants_batch(evolve_batch(U, M, rates, times))
