"""Plane-wave transfer-matrix solver, used to check the impedance engines.

This module deliberately shares nothing with the impedance engines beyond the
profile and unit types.  In every layer the wave function is written as
``A exp(ik(x - a)) + B exp(-ik(x - a))`` with ``a`` the layer's left edge
(leads are referenced at their interface) and ``k = sqrt(2m(E - V))/hbar``
with ``Im k >= 0``.  The transfer matrix maps right-lead amplitudes to
left-lead amplitudes.
"""

from __future__ import annotations

import numpy as np

from .core import (
    BAND_EPSILON,
    NATURAL,
    DegenerateState,
    EvanescentLead,
    PotentialProfile,
    UnitSystem,
)


def _shifted_energy(profile: PotentialProfile, energy: float) -> float:
    levels = [profile.left_lead_potential, profile.right_lead_potential, *profile.potentials]
    while any(abs(energy - v) < BAND_EPSILON for v in levels):
        energy += BAND_EPSILON
    return energy


def wavenumber(energy: float, potential: float, units: UnitSystem) -> complex:
    k = np.sqrt(complex(2.0 * units.mass * (energy - potential))) / units.hbar
    return complex(k)


def _to_psi(k: complex) -> np.ndarray:
    # (A, B) -> (psi, psi') at the reference point
    return np.array([[1.0, 1.0], [1j * k, -1j * k]], dtype=complex)


def _from_psi(k: complex) -> np.ndarray:
    return np.array([[0.5, -0.5j / k], [0.5, 0.5j / k]], dtype=complex)


def _layer_psi_map(k: complex, width: float) -> np.ndarray:
    # (psi, psi') at the right edge -> (psi, psi') at the left edge
    back = np.diag([np.exp(-1j * k * width), np.exp(1j * k * width)])
    return _to_psi(k) @ back @ _from_psi(k)


def psi_transfer(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> np.ndarray:
    """Map (psi, psi') at the right end of the cascade to the left end."""
    energy = _shifted_energy(profile, energy)
    m = np.eye(2, dtype=complex)
    for region in profile.left_to_right:
        m = m @ _layer_psi_map(wavenumber(energy, region.potential, units), region.width)
    return m


def transfer_matrix(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> np.ndarray:
    """Matrix taking (A, B) of the right lead to (A, B) of the left lead."""
    energy = _shifted_energy(profile, energy)
    k_left = wavenumber(energy, profile.left_lead_potential, units)
    k_right = wavenumber(energy, profile.right_lead_potential, units)
    return _from_psi(k_left) @ psi_transfer(profile, energy, units) @ _to_psi(k_right)


def _scattering(profile: PotentialProfile, energy: float, units: UnitSystem) -> tuple[float, float]:
    if not (energy > profile.left_lead_potential and energy > profile.right_lead_potential):
        raise EvanescentLead(f"energy {energy!r} is below a lead potential")
    energy = _shifted_energy(profile, energy)
    m = transfer_matrix(profile, energy, units)
    incident, reflected = m[0, 0], m[1, 0]
    k_left = wavenumber(energy, profile.left_lead_potential, units).real
    k_right = wavenumber(energy, profile.right_lead_potential, units).real
    t = (k_right / k_left) / abs(incident) ** 2
    r = abs(reflected / incident) ** 2
    return float(t), float(r)


def oracle_transmission(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> float:
    """Flux transmission for a unit outgoing wave in the right lead."""
    return _scattering(profile, energy, units)[0]


def oracle_reflection(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> float:
    return _scattering(profile, energy, units)[1]


def oracle_impedance(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> complex:
    """``(hbar / i m) psi'/psi`` at the left end of the cascade.

    The right lead carries a pure outgoing (or decaying) wave.
    """
    energy = _shifted_energy(profile, energy)
    k_right = wavenumber(energy, profile.right_lead_potential, units)
    psi, dpsi = psi_transfer(profile, energy, units) @ np.array([1.0, 1j * k_right])
    if psi == 0:
        raise DegenerateState(f"wave function node at the evaluation plane, E={energy!r}")
    return complex(units.hbar / (1j * units.mass) * dpsi / psi)
