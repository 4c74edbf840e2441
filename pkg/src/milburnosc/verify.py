"""Built-in oracle suites behind ``milburnosc verify``.

Each check compares a shipped code path against a route that does not share
its arithmetic: eigenvalues of the potential matrix, explicit metric
products, direct Poisson summation, the isotropic closed form, and an
exact quadrature-space propagator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .evolution import conjugation_frames, covariance_trajectory, series_oracle_covariance
from .normal_modes import SystemParams, derive_modes
from .quantifiers import isotropic_closed_form_matrix
from .symplectic import (
    BOSONIC_METRIC,
    IDENTITY,
    SYMPLECTIC_FORM,
    is_bogoliubov,
    is_symplectic,
    phase_symplectic,
    rotation_symplectic,
    squeeze_symplectic,
)


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def random_stable_params(rng, n, gamma_range=(1.0, 1e3), max_coupling=0.95):
    """``n`` random valid parameter sets with ``J <= max_coupling * omega1 * omega2``."""
    out = []
    for _ in range(n):
        w1 = float(rng.uniform(0.2, 3.0))
        w2 = float(w1 * rng.uniform(0.1, 1.0))
        J = float(rng.uniform(0.0, max_coupling) * w1 * w2)
        G = float(np.exp(rng.uniform(np.log(gamma_range[0]), np.log(gamma_range[1]))))
        out.append(SystemParams(w1, w2, J, G))
    return out


def quadrature_propagator(params: SystemParams, tau: float) -> np.ndarray:
    """Exact Heisenberg map of ``(a, a^dag, b, b^dag)`` over time ``tau``.

    Built from ``expm`` of the quadrature-space generator of the coupled
    Hamiltonian and converted to the complex basis; it never touches the
    rotation/squeeze decomposition.
    """
    w1, w2, J = params.omega1, params.omega2, params.J
    hess = np.array([[w1**2, 0, -J, 0], [0, 1, 0, 0], [-J, 0, w2**2, 0], [0, 0, 0, 1]], dtype=float)
    omega = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    flow = expm(omega @ hess * tau)
    L = np.zeros((4, 4), dtype=complex)
    for k, w in ((0, w1), (1, w2)):
        L[2 * k, 2 * k], L[2 * k, 2 * k + 1] = np.sqrt(w / 2), 1j / np.sqrt(2 * w)
        L[2 * k + 1, 2 * k], L[2 * k + 1, 2 * k + 1] = np.sqrt(w / 2), -1j / np.sqrt(2 * w)
    return L @ flow @ np.linalg.inv(L)


def _suite_symplectic(rng, n):
    worst_metric = worst_bog = worst_inv = 0.0
    for _ in range(n):
        theta, R = rng.uniform(-np.pi, np.pi), rng.uniform(1.0, 4.0)
        s1, s2 = rng.uniform(-1.5, 1.5, size=2)
        O1, O2, tau = rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0), rng.uniform(-20.0, 20.0)
        mats = [rotation_symplectic(theta, R), squeeze_symplectic(s1, s2), phase_symplectic(O1, O2, tau)]
        for S in mats:
            worst_metric = max(worst_metric, np.max(np.abs(S.T @ SYMPLECTIC_FORM @ S - SYMPLECTIC_FORM)))
            worst_bog = max(worst_bog, np.max(np.abs(S @ BOSONIC_METRIC @ S.conj().T - BOSONIC_METRIC)))
            if not (is_symplectic(S) and is_bogoliubov(S)):
                worst_metric = max(worst_metric, np.inf)
        pairs = [
            (rotation_symplectic(theta, R), rotation_symplectic(-theta, R)),
            (squeeze_symplectic(s1, s2), squeeze_symplectic(-s1, -s2)),
            (phase_symplectic(O1, O2, tau), phase_symplectic(O1, O2, -tau)),
        ]
        for A, B in pairs:
            worst_inv = max(worst_inv, np.max(np.abs(A @ B - IDENTITY)))
    return [
        Check("symplectic", "metric S^T J S = J", worst_metric <= 1e-10, f"max dev {worst_metric:.2e}"),
        Check("symplectic", "bosonic S K S^dag = K", worst_bog <= 1e-10, f"max dev {worst_bog:.2e}"),
        Check("symplectic", "inverse pairs", worst_inv <= 1e-12, f"max dev {worst_inv:.2e}"),
    ]


def _suite_frequencies(rng, n):
    worst = 0.0
    for p in random_stable_params(rng, n, max_coupling=0.99):
        m = derive_modes(p)
        ev = np.linalg.eigvalsh(np.array([[p.omega1**2, -p.J], [-p.J, p.omega2**2]]))
        worst = max(worst, abs(m.Omega1**2 - ev[1]) / ev[1], abs(m.Omega2**2 - ev[0]) / ev[0])
    return [Check("frequencies", "eigenvalues of potential matrix", worst <= 1e-9, f"max rel dev {worst:.2e}")]


def _suite_isotropic(rng, n):
    worst = 0.0
    for J in (0.1, 0.2, 0.5):
        for G in (10.0, 100.0):
            m = derive_modes(SystemParams(1.0, 1.0, J, G))
            ts = np.sort(rng.uniform(0.0, 50.0, size=n))
            fast = covariance_trajectory(m, ts, "milburn")
            for t, S in zip(ts, fast):
                worst = max(worst, np.max(np.abs(S - isotropic_closed_form_matrix(m, G, t))))
    return [Check("isotropic", "closed form vs resummation", worst <= 1e-10, f"max dev {worst:.2e}")]


def _suite_series(rng, n):
    worst = 0.0
    for p in random_stable_params(rng, n, gamma_range=(1.0, 300.0)):
        m = derive_modes(p)
        t = float(rng.uniform(0.0, 10.0))
        fast = covariance_trajectory(m, [t], "milburn")[0]
        worst = max(worst, np.max(np.abs(fast - series_oracle_covariance(m, p.Gamma, t, eps=1e-12))))
    return [Check("series", "Poisson sum vs resummation", worst <= 1e-8, f"max dev {worst:.2e}")]


def _suite_dynamics(rng, n):
    worst = 0.0
    for p in random_stable_params(rng, n):
        m = derive_modes(p)
        f = conjugation_frames(m)
        tau = float(rng.uniform(0.0, 5.0))
        step = f.U @ phase_symplectic(m.Omega1, m.Omega2, tau) @ f.V
        worst = max(worst, np.max(np.abs(step - quadrature_propagator(p, tau))))
    return [Check("dynamics", "unitary step vs quadrature propagator", worst <= 1e-9, f"max dev {worst:.2e}")]


SUITES = {
    "symplectic": _suite_symplectic,
    "frequencies": _suite_frequencies,
    "isotropic": _suite_isotropic,
    "series": _suite_series,
    "dynamics": _suite_dynamics,
}


def run_verification(seed: int = 0, samples: int = 25) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for suite in SUITES.values():
        checks.extend(suite(rng, samples))
    return checks
