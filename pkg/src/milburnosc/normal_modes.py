"""Normal-mode decomposition of two position-coupled oscillators.

Units are hbar = m = 1.  The Hamiltonian is

    H = p1^2/2 + p2^2/2 + omega1^2 x1^2/2 + omega2^2 x2^2/2 - J x1 x2

and is diagonalised by a rotation of the coordinates followed by one
single-mode squeeze per oscillator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InstabilityError, ParameterError

__all__ = [
    "SystemParams",
    "NormalModes",
    "rotation_angle",
    "normal_frequencies",
    "derive_modes",
]


@dataclass(frozen=True)
class SystemParams:
    """Raw physical inputs.

    Parameters
    ----------
    omega1, omega2 : float
        Bare angular frequencies, with ``omega1 >= omega2 > 0``.
    J : float
        Position-position coupling strength (frequency squared), ``J >= 0``.
    Gamma : float
        Milburn intrinsic decoherence rate, ``Gamma > 0``.

    Construction checks everything except the stability bound
    ``J < omega1 * omega2``; that one is reported by :func:`normal_frequencies`
    as an :class:`InstabilityError` so sweeps can record it per cell.
    """

    omega1: float
    omega2: float
    J: float
    Gamma: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "J", "Gamma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ParameterError(
                f"frequencies must be positive, got omega1={self.omega1}, omega2={self.omega2}"
            )
        if self.omega1 < self.omega2:
            raise ParameterError(
                f"require omega1 >= omega2 (oscillator 1 is the fast one), "
                f"got omega1={self.omega1} < omega2={self.omega2}"
            )
        if self.J < 0:
            raise ParameterError(f"coupling must satisfy J >= 0, got J={self.J}")
        if self.Gamma <= 0:
            raise ParameterError(f"decoherence rate must satisfy Gamma > 0, got Gamma={self.Gamma}")

    @property
    def R(self) -> float:
        """Anisotropy ratio sqrt(omega1/omega2)."""
        return math.sqrt(self.omega1 / self.omega2)

    @property
    def g(self) -> float:
        """Scaled coupling J/omega2^2."""
        return self.J / self.omega2**2

    @property
    def coupling_bound(self) -> float:
        return self.omega1 * self.omega2

    def replace(self, **changes) -> "SystemParams":
        fields = {"omega1": self.omega1, "omega2": self.omega2, "J": self.J, "Gamma": self.Gamma}
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class NormalModes:
    """Derived quantities driving the evolution.

    ``s1 >= 0`` squeezes the fast mode, ``s2 <= 0`` the slow one.
    """

    params: SystemParams
    R: float
    g: float
    theta: float
    Omega1: float
    Omega2: float
    s1: float
    s2: float

    @property
    def is_isotropic(self) -> bool:
        return self.params.omega1 == self.params.omega2


def rotation_angle(R: float, g: float) -> float:
    """Angle of the coordinate rotation that removes the x1*x2 term.

    ``0.5 * arctan(2g / (R^4 - 1))`` on the principal branch; at ``R == 1`` the
    argument is taken as +infinity, giving pi/4 for any ``g > 0``.
    """
    if not (R >= 1.0) or not (g >= 0.0):
        raise ParameterError(f"rotation_angle needs R >= 1 and g >= 0, got R={R}, g={g}")
    if g == 0.0:
        return 0.0
    # atan2 with a non-negative denominator is the principal branch, and
    # returns pi/2 when the denominator vanishes.
    return 0.5 * math.atan2(2.0 * g, R**4 - 1.0)


def normal_frequencies(params: SystemParams) -> tuple[float, float]:
    """Normal frequencies ``(Omega1, Omega2)`` with ``Omega1 >= Omega2``.

    Raises
    ------
    InstabilityError
        If ``Omega2^2 <= 0``, i.e. ``J >= omega1 * omega2``.
    """
    w1, w2 = params.omega1, params.omega2
    R4 = (w1 / w2) ** 2
    g = params.g
    if params.J >= params.coupling_bound:
        raise InstabilityError(
            f"coupling J={params.J:g} violates the stability bound "
            f"J < omega1*omega2 = {params.coupling_bound:g}"
        )
    if params.J == 0.0:
        return w1, w2
    root = 0.5 * math.sqrt((1.0 - R4) ** 2 + 4.0 * g * g)
    # Omega1^2/omega2^2 = R^4 * [(1 + R^-4)/2 + 1/2 sqrt((1 - R^-4)^2 + 4 g^2 R^-8)]
    upper = 0.5 * (1.0 + R4) + root
    # Omega2^2/omega2^2 = (1 + R^4)/2 - root, rationalised to avoid cancellation
    # near the stability bound: the product of the two roots is R^4 - g^2.
    lower = (R4 - g * g) / upper
    if not lower > 0.0:
        raise InstabilityError(
            f"coupling J={params.J:g} violates the stability bound "
            f"J < omega1*omega2 = {params.coupling_bound:g}"
        )
    return w2 * math.sqrt(upper), w2 * math.sqrt(lower)


def derive_modes(params: SystemParams) -> NormalModes:
    """Populate :class:`NormalModes` from raw parameters."""
    Omega1, Omega2 = normal_frequencies(params)
    R, g = params.R, params.g
    theta = rotation_angle(R, g)
    # Omega1 >= omega1 and Omega2 <= omega2 exactly; clamp round-off at tiny J
    s1 = max(0.0, 0.5 * math.log(Omega1 / params.omega1))
    s2 = min(0.0, 0.5 * math.log(Omega2 / params.omega2))

    # trace and determinant of the potential matrix must be preserved
    w1s, w2s = params.omega1**2, params.omega2**2
    trace_err = abs(Omega1**2 + Omega2**2 - (w1s + w2s))
    det_err = abs(Omega1**2 * Omega2**2 - (w1s * w2s - params.J**2))
    scale = w1s + w2s
    if trace_err > 1e-10 * scale or det_err > 1e-10 * scale * scale:
        raise ArithmeticError(
            f"normal frequencies inconsistent with the potential matrix "
            f"(trace err {trace_err:.3g}, det err {det_err:.3g})"
        )
    return NormalModes(params=params, R=R, g=g, theta=theta, Omega1=Omega1, Omega2=Omega2, s1=s1, s2=s2)
