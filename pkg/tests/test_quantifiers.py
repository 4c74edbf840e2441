import math

import numpy as np
import pytest

from milburnosc.backend import get_kernels
from milburnosc.errors import DomainError, NegativeOccupationError
from milburnosc.evolution import covariance_trajectory, milburn_covariance
from milburnosc.normal_modes import SystemParams, derive_modes
from milburnosc.quantifiers import (
    RECORD_FIELDS,
    block_decomposition,
    correlation_record,
    isotropic_closed_form,
    isotropic_closed_form_matrix,
    log_negativity,
    ppt_spectrum,
    ppt_symplectic_eigenvalues,
    purity,
    quantities_from_invariants,
    steering,
    validate_covariance,
    virtual_excitations,
)
from milburnosc.symplectic import IDENTITY, phase_symplectic, sandwich


def two_mode_squeezed(r):
    """``a -> cosh(r) a + sinh(r) b^dag`` applied to the vacuum."""
    c, s = math.cosh(r), math.sinh(r)
    S = np.array([[c, 0, 0, s], [0, c, s, 0], [0, s, c, 0], [s, 0, 0, c]], dtype=complex)
    return sandwich(S, IDENTITY)


def test_vacuum():
    assert virtual_excitations(IDENTITY) == (0.0, 0.0)
    assert log_negativity(IDENTITY) == 0.0
    assert steering(IDENTITY) == (0.0, 0.0, 0.0)
    assert purity(IDENTITY) == 1.0
    assert ppt_symplectic_eigenvalues(IDENTITY) == (1.0, 1.0)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.2])
def test_two_mode_squeezed_state(r):
    S = two_mode_squeezed(r)
    n1, n2 = virtual_excitations(S)
    assert n1 == pytest.approx(math.sinh(r) ** 2, rel=1e-12)
    assert n2 == pytest.approx(n1, rel=1e-12)
    assert log_negativity(S) == pytest.approx(2 * r, rel=1e-10)
    unit = math.log2(math.cosh(2 * r))
    s_ab, s_ba, ds = steering(S, det_scale=1.0)
    assert s_ab == pytest.approx(unit, rel=1e-10) and s_ba == pytest.approx(unit, rel=1e-10)
    assert ds == pytest.approx(0.0, abs=1e-12)
    # det factor 4 shifts the raw value by exactly one bit
    assert steering(S)[0] == pytest.approx(max(0.0, unit - 1.0), abs=1e-10)
    assert purity(S) == pytest.approx(1.0, abs=1e-12)


def test_thermal_state():
    n = 0.7
    S = (2 * n + 1) * IDENTITY
    assert virtual_excitations(S) == pytest.approx((n, n))
    assert purity(S) == pytest.approx(1 / (2 * n + 1) ** 2)
    assert log_negativity(S) == 0.0


def test_block_decomposition_roundtrip():
    S = two_mode_squeezed(0.4)
    b = block_decomposition(S)
    np.testing.assert_array_equal(b.assemble(), S)
    assert b.Sa.shape == (2, 2)


def test_ppt_eigen_consistency(aniso_modes):
    S = milburn_covariance(aniso_modes, 100.0, 13.0)
    q = quantities_from_invariants(np.array([[S[0, 0].real, S[2, 2].real,
                                             np.linalg.det(S[:2, :2]).real, np.linalg.det(S[2:, 2:]).real,
                                             np.linalg.det(S[:2, 2:]).real, 0.0,
                                             np.linalg.det(S).real, 0.0]]))
    nm, nM = q["nu_min_raw"][0], q["nu_max"][0]
    assert nm**2 * nM**2 == pytest.approx(q["det"][0], rel=1e-10)
    assert nm**2 + nM**2 == pytest.approx(q["delta"][0], rel=1e-10)


def test_phase_rotation_invariance(aniso_modes):
    S = milburn_covariance(aniso_modes, 100.0, 7.0)
    R = sandwich(phase_symplectic(0.9, 0.9, 2.3), S)
    a, b = correlation_record(7.0, S, det_scale=1.0), correlation_record(7.0, R, det_scale=1.0)
    for k in RECORD_FIELDS:
        assert getattr(a, k) == pytest.approx(getattr(b, k), abs=1e-12)


def test_record_fields(aniso_modes):
    rec = correlation_record(1.0, milburn_covariance(aniso_modes, 100.0, 1.0))
    assert rec.t == 1.0
    assert rec.E_N >= 0 and rec.S_ab >= 0 and rec.S_ba >= 0 and 0 < rec.purity <= 1
    assert rec.dS == abs(rec.S_ab - rec.S_ba)


def test_no_negative_zero():
    q = quantities_from_invariants(np.array([[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0]]))
    for k in ("E_N", "S_ab", "S_ba", "dS", "N1"):
        assert math.copysign(1.0, q[k][0]) == 1.0


def test_validate_covariance():
    validate_covariance(two_mode_squeezed(0.3))
    bad = IDENTITY.copy()
    bad[0, 1] = 0.5
    with pytest.raises(DomainError, match="Hermitian"):
        validate_covariance(bad)
    with pytest.raises(DomainError, match="vacuum floor"):
        validate_covariance(0.5 * IDENTITY)
    with pytest.raises(DomainError):
        validate_covariance(np.eye(3))


def test_negative_occupation_rejected():
    with pytest.raises(NegativeOccupationError):
        quantities_from_invariants(np.array([[0.9, 1.0, 0.81, 1.0, 0.0, 0.0, 0.81, 0.0]]))


def test_unphysical_invariants_rejected():
    # delta^2 < 4 det: no real symplectic spectrum
    with pytest.raises(DomainError, match="discriminant"):
        quantities_from_invariants(np.array([[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 4.0, 0.0]]))
    with pytest.raises(DomainError, match="imaginary"):
        quantities_from_invariants(np.array([[1.0, 1.0, 1.0, 1.0, 0.0, 1e-3, 1.0, 0.0]]))
    with pytest.raises(DomainError):
        quantities_from_invariants(np.array([[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, -1.0, 0.0]]))


@pytest.mark.parametrize("J", [0.1, 0.2, 0.5])
@pytest.mark.parametrize("Gamma", [10.0, 100.0])
def test_isotropic_closed_form(J, Gamma):
    m = derive_modes(SystemParams(1.0, 1.0, J, Gamma))
    t = np.linspace(0, 50, 101)
    traj = covariance_trajectory(m, t, "milburn")
    for ti, S in zip(t, traj):
        assert np.max(np.abs(isotropic_closed_form_matrix(m, Gamma, ti) - S)) <= 1e-10


def test_half_excess_prefactor(iso_modes):
    full = isotropic_closed_form(iso_modes, 100.0, 3.0)[0].real
    halved = isotropic_closed_form(iso_modes, 100.0, 3.0, half_excess=True)[0].real
    assert halved - 1 == pytest.approx(0.5 * (full - 1), rel=1e-12)
    assert full == pytest.approx(milburn_covariance(iso_modes, 100.0, 3.0)[0, 0].real, rel=1e-13)


def test_closed_form_needs_isotropy(aniso_modes):
    with pytest.raises(DomainError):
        isotropic_closed_form(aniso_modes, 100.0, 1.0)


def test_ppt_spectrum_accurate_near_vacuum():
    m = derive_modes(SystemParams(1.0, 1.0, 0.75, 1.0))
    S = covariance_trajectory(m, [1e-12], backend="numpy")
    inv = get_kernels("numpy").invariants_batch(S)
    stable = quantities_from_invariants(inv, sigmas=S)
    # the discriminant route turns O(eps) input error into O(sqrt(eps))
    seralian = quantities_from_invariants(inv)
    assert abs(stable["E_N_raw"][0]) < 1e-11
    assert abs(seralian["E_N_raw"][0] - stable["E_N_raw"][0]) < 1e-7


def test_ppt_spectrum_matches_seralian(aniso_modes):
    S = covariance_trajectory(aniso_modes, np.linspace(1, 100, 50))
    inv = get_kernels("numpy").invariants_batch(S)
    a = quantities_from_invariants(inv, sigmas=S)
    b = quantities_from_invariants(inv)
    np.testing.assert_allclose(a["nu_min_raw"], b["nu_min_raw"], rtol=1e-10)
    np.testing.assert_allclose(a["nu_max"], b["nu_max"], rtol=1e-10)
    np.testing.assert_allclose(ppt_spectrum(two_mode_squeezed(0.4))[0], np.exp(-0.8), rtol=1e-12)
