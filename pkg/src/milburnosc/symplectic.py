"""Fixed-size 4x4 complex symplectic algebra.

All matrices act on the ordered operator vector ``(a, a^dag, b, b^dag)``; a
matrix ``S`` represents the linear map ``A -> S A`` of the mode operators and
a covariance transforms as ``Sigma -> S Sigma S^dag``.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "SYMPLECTIC_FORM",
    "BOSONIC_METRIC",
    "IDENTITY",
    "rotation_symplectic",
    "squeeze_symplectic",
    "phase_symplectic",
    "is_symplectic",
    "is_bogoliubov",
    "sandwich",
    "hermitize",
]

_I_TILDE = np.array([[0.0, 1.0], [-1.0, 0.0]])

#: ``J`` with ``i J = blockdiag(I~, I~)``, the commutator form ``[A_n, A_m] = i J_nm``.
SYMPLECTIC_FORM = -1j * np.kron(np.eye(2), _I_TILDE)

#: ``K = diag(1, -1, 1, -1)``, the commutator form ``[A_n, A_m^dag] = K_nm``.
BOSONIC_METRIC = np.diag([1.0, -1.0, 1.0, -1.0]).astype(complex)

IDENTITY = np.eye(4, dtype=complex)


def rotation_symplectic(theta: float, R: float) -> np.ndarray:
    """Image of the coordinate rotation ``x1 -> c x1 + s x2, x2 -> c x2 - s x1``.

    Because the two modes carry different bare frequencies, the rotation
    mixes beam-splitter terms ``(R + 1/R)/2 sin(theta)`` with two-mode
    squeezing terms ``(R - 1/R)/2 sin(theta)``; at ``R = 1`` the latter vanish.
    """
    c, s = np.cos(theta), np.sin(theta)
    p = 0.5 * (R + 1.0 / R) * s
    m = 0.5 * (R - 1.0 / R) * s
    return np.array(
        [
            [c, 0.0, p, m],
            [0.0, c, m, p],
            [-p, m, c, 0.0],
            [m, -p, 0.0, c],
        ],
        dtype=complex,
    )


def squeeze_symplectic(s1: float, s2: float) -> np.ndarray:
    """Block-diagonal single-mode squeezers, ``a -> cosh(s) a + sinh(s) a^dag``."""
    S = np.zeros((4, 4), dtype=complex)
    for k, s in ((0, s1), (2, s2)):
        ch, sh = np.cosh(s), np.sinh(s)
        S[k, k] = S[k + 1, k + 1] = ch
        S[k, k + 1] = S[k + 1, k] = sh
    return S


def phase_symplectic(Omega1: float, Omega2: float, tau: float) -> np.ndarray:
    """Free evolution of the normal modes for a time ``tau``."""
    return np.diag(np.exp(1j * tau * np.array([-Omega1, Omega1, -Omega2, Omega2])))


def is_symplectic(S: np.ndarray, tol: float = 1e-10) -> bool:
    """Check ``S^T J S = J`` and ``det S = 1``.

    In the complex ``(a, a^dag)`` basis the invariant bilinear form is
    preserved under the plain transpose.  For real matrices (rotation,
    squeeze) this is the same as ``S^dag J S = J``; for the diagonal phase
    matrix only the transpose form holds.
    """
    S = np.asarray(S, dtype=complex)
    if S.shape != (4, 4) or not np.all(np.isfinite(S)):
        return False
    metric = np.max(np.abs(S.T @ SYMPLECTIC_FORM @ S - SYMPLECTIC_FORM))
    return bool(metric <= tol and abs(np.linalg.det(S) - 1.0) <= tol * 1e2)


def is_bogoliubov(S: np.ndarray, tol: float = 1e-10) -> bool:
    """Check ``S K S^dag = K``, i.e. the map preserves ``[A_n, A_m^dag]``."""
    S = np.asarray(S, dtype=complex)
    return bool(np.max(np.abs(S @ BOSONIC_METRIC @ S.conj().T - BOSONIC_METRIC)) <= tol)


def hermitize(Sigma: np.ndarray) -> np.ndarray:
    """``(Sigma + Sigma^dag) / 2``; works on stacks of matrices too."""
    return 0.5 * (Sigma + np.conj(np.swapaxes(Sigma, -1, -2)))


def sandwich(S: np.ndarray, Sigma: np.ndarray) -> np.ndarray:
    """``S Sigma S^dag``, symmetrised against round-off."""
    return hermitize(S @ Sigma @ S.conj().T)
