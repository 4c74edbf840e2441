"""Exact covariance dynamics under Milburn intrinsic decoherence.

Milburn's map is a Poisson mixture of unitary steps ``exp(-i k H / Gamma)``.
For a quadratic Hamiltonian each step is the symplectic matrix
``H_k = U D(k/Gamma) V`` where ``D`` is the diagonal normal-mode phase and
``U = V^-1`` changes to and from the normal-mode frame.  Hence

    Sigma(t) = sum_k w_k(Gamma t) U D_k M D_k^dag U^dag,   M = V Sigma(0) V^dag

and since ``D_k M D_k^dag`` only multiplies entry ``(i, j)`` by
``exp(i (nu_i - nu_j) k / Gamma)``, the Poisson sum collapses entrywise to the
characteristic function ``exp[Gamma t (exp(i (nu_i - nu_j)/Gamma) - 1)]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .backend import get_kernels
from .errors import ParameterError
from .normal_modes import NormalModes
from .symplectic import IDENTITY, hermitize, rotation_symplectic, squeeze_symplectic

__all__ = [
    "ConjugationFrames",
    "KERNELS",
    "conjugation_frames",
    "phase_rates",
    "decoherence_rates",
    "decoherence_factor_matrix",
    "milburn_covariance",
    "von_neumann_covariance",
    "covariance_trajectory",
    "trajectory_invariants",
    "steady_state_covariance",
    "resonant_pairs",
    "poisson_log_weights",
    "series_truncation",
    "series_oracle_covariance",
    "normalize_kernel",
]

KERNELS = ("milburn", "von_neumann")


@dataclass(frozen=True)
class ConjugationFrames:
    """``U`` maps normal-mode back to bare operators, ``V = U^-1``."""

    U: np.ndarray
    V: np.ndarray
    nu: np.ndarray


def normalize_kernel(kernel: str) -> str:
    k = kernel.strip().lower().replace("-", "_")
    if k in ("vonneumann", "von_neumann", "unitary"):
        k = "von_neumann"
    if k not in KERNELS:
        raise ParameterError(f"kernel must be one of milburn, von-neumann; got {kernel!r}")
    return k


def conjugation_frames(modes: NormalModes) -> ConjugationFrames:
    """Frames for the step ``H_k = U D(k/Gamma) V``.

    The rotated, bare-frequency operators are squeezed into the
    normal-mode operators by ``squeeze(s1, s2)``, so the step reads
    ``rot(theta) squeeze(-s) D squeeze(s) rot(-theta)``.
    """
    U = rotation_symplectic(modes.theta, modes.R) @ squeeze_symplectic(-modes.s1, -modes.s2)
    V = squeeze_symplectic(modes.s1, modes.s2) @ rotation_symplectic(-modes.theta, modes.R)
    err = np.max(np.abs(U @ V - IDENTITY))
    if err > 1e-12 * max(1.0, np.max(np.abs(U)) * np.max(np.abs(V))):
        raise ArithmeticError(f"conjugation frames are not inverse (max deviation {err:.3g})")
    nu = np.array([-modes.Omega1, modes.Omega1, -modes.Omega2, modes.Omega2])
    return ConjugationFrames(U=U, V=V, nu=nu)


def phase_rates(frames: ConjugationFrames) -> np.ndarray:
    """Phase differences ``nu_i - nu_j``."""
    return np.subtract.outer(frames.nu, frames.nu)


def decoherence_rates(frames: ConjugationFrames, Gamma: float | None) -> np.ndarray:
    """Complex exponents ``c_ij`` with ``E_ij(t) = exp(c_ij t)``.

    ``Gamma=None`` gives the unitary limit ``c_ij = i (nu_i - nu_j)``.
    """
    delta = phase_rates(frames)
    if Gamma is None:
        return 1j * delta
    if not Gamma > 0:
        raise ParameterError(f"Gamma must be positive, got {Gamma}")
    x = delta / Gamma
    # Gamma (e^{ix} - 1) without the cancellation in cos(x) - 1 at large Gamma
    return Gamma * (-2.0 * np.sin(0.5 * x) ** 2 + 1j * np.sin(x))


def decoherence_factor_matrix(modes: NormalModes, Gamma: float, t: float) -> np.ndarray:
    """``E_ij(t) = exp[Gamma t (exp(i (nu_i - nu_j)/Gamma) - 1)]``."""
    _check_time(t)
    c = decoherence_rates(conjugation_frames(modes), Gamma)
    E = np.exp(c * t)
    np.fill_diagonal(E, 1.0)
    return E


def _check_time(t):
    if not (math.isfinite(t) and t >= 0):
        raise ParameterError(f"time must be finite and non-negative, got {t}")


def _initial(sigma0):
    if sigma0 is None:
        return IDENTITY
    s = np.asarray(sigma0, dtype=complex)
    if s.shape != (4, 4):
        raise ParameterError(f"initial covariance must be 4x4, got shape {s.shape}")
    return s


def covariance_trajectory(
    modes: NormalModes,
    times,
    kernel: str = "milburn",
    Gamma: float | None = None,
    sigma0=None,
    backend: str | None = None,
) -> np.ndarray:
    """Covariance stack ``(n, 4, 4)`` at ``times``.

    ``Gamma`` defaults to ``modes.params.Gamma`` and is ignored by the
    von Neumann kernel.
    """
    U, M, rates, t = _prepare(modes, times, kernel, Gamma, sigma0)
    out = get_kernels(backend).evolve_batch(U, M, rates, t)
    zero = t == 0.0
    if zero.any():
        # the frames cancel only up to round-off; t = 0 is the initial state exactly
        out[zero] = hermitize(_initial(sigma0))
    return out


def trajectory_invariants(
    modes: NormalModes,
    times,
    kernel: str = "milburn",
    Gamma: float | None = None,
    sigma0=None,
    backend: str | None = None,
) -> np.ndarray:
    """Fused evolution + invariant extraction; see ``milburnosc._fallback``."""
    U, M, rates, t = _prepare(modes, times, kernel, Gamma, sigma0)
    k = get_kernels(backend)
    out = k.trajectory_invariants(U, M, rates, t)
    zero = t == 0.0
    if zero.any():
        out[zero] = k.invariants_batch(hermitize(_initial(sigma0))[None])
    return out


def _prepare(modes, times, kernel, Gamma, sigma0):
    kernel = normalize_kernel(kernel)
    t = np.ascontiguousarray(np.atleast_1d(np.asarray(times, dtype=float)))
    if t.ndim != 1 or not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ParameterError("times must be a 1-d array of finite non-negative values")
    frames = conjugation_frames(modes)
    M = hermitize(frames.V @ _initial(sigma0) @ frames.V.conj().T)
    if kernel == "von_neumann":
        rates = decoherence_rates(frames, None)
    else:
        rates = decoherence_rates(frames, modes.params.Gamma if Gamma is None else Gamma)
    return frames.U, M, rates, t


def milburn_covariance(modes: NormalModes, Gamma: float, t: float, sigma0=None) -> np.ndarray:
    """Exact ``Sigma(t)`` under Milburn dynamics, vacuum start by default."""
    _check_time(t)
    return covariance_trajectory(modes, [t], "milburn", Gamma, sigma0)[0]


def von_neumann_covariance(modes: NormalModes, t: float, sigma0=None) -> np.ndarray:
    """Closed unitary evolution, the ``Gamma -> infinity`` limit."""
    _check_time(t)
    return covariance_trajectory(modes, [t], "von_neumann", None, sigma0)[0]


def resonant_pairs(modes: NormalModes, Gamma: float, tol: float = 1e-12) -> list[tuple[int, int]]:
    """Off-diagonal ``(i, j)`` (0-based, ``i < j``) whose factor never decays.

    This happens when ``(nu_i - nu_j)/Gamma`` is a multiple of 2 pi, including
    zero (degenerate normal frequencies).
    """
    delta = phase_rates(conjugation_frames(modes)) / Gamma
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            r = delta[i, j] / (2 * math.pi)
            if abs(r - round(r)) <= tol * max(1.0, abs(r)):
                out.append((i, j))
    return out


def steady_state_covariance(modes: NormalModes, Gamma: float, sigma0=None) -> np.ndarray:
    """``lim_{t->inf} Sigma(t)``: only resonant and diagonal entries survive."""
    frames = conjugation_frames(modes)
    M = frames.V @ _initial(sigma0) @ frames.V.conj().T
    keep = np.eye(4)
    for i, j in resonant_pairs(modes, Gamma):
        keep[i, j] = keep[j, i] = 1.0
    return hermitize(frames.U @ (M * keep) @ frames.U.conj().T)


# --- truncated Poisson series (independent check of the resummation) -------


def series_truncation(lam: float, eps: float) -> int:
    """Smallest index ``K`` (at least the concentration bound) with tail below ``eps``."""
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    if lam == 0:
        return 0
    K = math.ceil(lam + 12.0 * math.sqrt(lam + 1.0) + 25.0)
    while poisson.sf(K, lam) >= eps:
        K += max(1, int(math.sqrt(lam)))
    return K


def poisson_log_weights(lam: float, K: int) -> np.ndarray:
    """``log(exp(-lam) lam^k / k!)`` for ``k = 0..K``."""
    if lam == 0:
        out = np.full(K + 1, -np.inf)
        out[0] = 0.0
        return out
    return poisson.logpmf(np.arange(K + 1), lam)


def series_oracle_covariance(
    modes: NormalModes, Gamma: float, t: float, eps: float = 1e-12, sigma0=None, chunk: int = 4096
) -> np.ndarray:
    """Direct Poisson sum ``sum_k w_k H_k Sigma(0) H_k^dag`` truncated at tail mass ``eps``."""
    _check_time(t)
    if not Gamma > 0:
        raise ParameterError(f"Gamma must be positive, got {Gamma}")
    frames = conjugation_frames(modes)
    s0 = _initial(sigma0)
    lam = Gamma * t
    K = series_truncation(lam, eps)
    logw = poisson_log_weights(lam, K)
    w = np.exp(logw)
    # rounding in the log weights grows like lam * 1e-16
    if w.sum() < 1.0 - eps - 1e-14 * max(1.0, lam):
        raise ArithmeticError(f"Poisson weights sum to {w.sum():.16g} < 1 - eps")
    total = np.zeros((4, 4), dtype=complex)
    Om1, Om2 = modes.Omega1, modes.Omega2
    for start in range(0, K + 1, chunk):
        ks = np.arange(start, min(K + 1, start + chunk))
        wk = w[ks]
        live = wk > 0
        if not np.any(live):
            continue
        ks, wk = ks[live], wk[live]
        # rows of diagonal phase_symplectic(Om1, Om2, k / Gamma) for every k
        phases = np.exp(1j * np.multiply.outer(ks / Gamma, [-Om1, Om1, -Om2, Om2]))
        H = (frames.U[None, :, :] * phases[:, None, :]) @ frames.V
        terms = H @ s0 @ np.conj(np.swapaxes(H, -1, -2))
        total += np.einsum("k,kij->ij", wk, terms)
    return hermitize(total)
