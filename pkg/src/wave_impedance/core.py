"""Domain types, unit conventions and per-region characteristic parameters.

Orientation: regions are indexed ``j = 1..N`` starting next to the *load*
(right) lead and ending next to the *outer* (left) lead.  The impedance
``Z_N`` is evaluated at the left edge of region ``N``, i.e. at the interface
with the outer lead.  Physically, the layout along increasing ``x`` is::

    outer lead | region N | ... | region 1 | load lead
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import scipy.constants as const

BAND_EPSILON = 1e-12
UNITARITY_SLACK = 1e-12


class ImpedanceError(Exception):
    """Base class for solver errors."""


class DegenerateState(ImpedanceError, ArithmeticError):
    """The impedance has a pole (wave function node at the evaluation plane)."""


class ProfileTooLarge(ImpedanceError, ValueError):
    """Too many regions for the explicit sign-sum; use the iterative engine."""


class EvanescentLead(ImpedanceError, ValueError):
    """A lead does not propagate at this energy, so transmission is undefined."""


class PropagatingLead(ImpedanceError, ValueError):
    """A lead propagates at this energy, so no bound state can exist there."""


class UnitMode(enum.Enum):
    NATURAL = "natural"
    NANO_EV = "nm-ev"


# hbar in eV*fs, electron mass in eV*fs^2/nm^2
_HBAR_EV_FS = const.hbar / const.e * 1e15
_C_NM_PER_FS = const.c * 1e-6
_ME_EV_FS2_NM2 = const.m_e * const.c**2 / const.e / _C_NM_PER_FS**2


@dataclass(frozen=True)
class UnitSystem:
    """Unit conventions.

    ``NATURAL``: hbar = 1 and 2m = 1, so ``gamma = sqrt(V - E)``.
    ``NANO_EV``: lengths in nm, energies in eV, impedances in nm/fs and the
    particle mass is ``effective_mass_ratio`` electron masses.
    """

    mode: UnitMode = UnitMode.NATURAL
    effective_mass_ratio: float = 1.0

    def __post_init__(self):
        if not isinstance(self.mode, UnitMode):
            object.__setattr__(self, "mode", UnitMode(self.mode))
        if not self.effective_mass_ratio > 0:
            raise ValueError(f"effective_mass_ratio must be positive, got {self.effective_mass_ratio}")

    @property
    def hbar(self) -> float:
        return 1.0 if self.mode is UnitMode.NATURAL else _HBAR_EV_FS

    @property
    def mass(self) -> float:
        if self.mode is UnitMode.NATURAL:
            return 0.5
        return self.effective_mass_ratio * _ME_EV_FS2_NM2

    @classmethod
    def natural(cls) -> "UnitSystem":
        return cls(UnitMode.NATURAL)

    @classmethod
    def nano_ev(cls, effective_mass_ratio: float = 1.0) -> "UnitSystem":
        return cls(UnitMode.NANO_EV, effective_mass_ratio)


NATURAL = UnitSystem()


@dataclass(frozen=True)
class Region:
    potential: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"region width must be positive, got {self.width}")


@dataclass(frozen=True)
class PotentialProfile:
    """Cascade of constant-potential regions between two semi-infinite leads.

    ``regions[0]`` is region 1 (adjacent to the load lead on the right) and
    ``regions[-1]`` is region N (adjacent to the outer lead on the left).
    Use :meth:`from_left_to_right` to build a profile in reading order.
    """

    left_lead_potential: float
    regions: tuple[Region, ...]
    right_lead_potential: float

    def __post_init__(self):
        regions = tuple(r if isinstance(r, Region) else Region(*r) for r in self.regions)
        object.__setattr__(self, "regions", regions)

    @classmethod
    def from_left_to_right(
        cls, left: float, regions: Iterable[Region | tuple[float, float]], right: float
    ) -> "PotentialProfile":
        return cls(left, tuple(reversed(list(regions))), right)

    @classmethod
    def uniform(cls, potential: float, widths: Sequence[float] = ()) -> "PotentialProfile":
        return cls(potential, tuple(Region(potential, w) for w in widths), potential)

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    @property
    def left_to_right(self) -> tuple[Region, ...]:
        return tuple(reversed(self.regions))

    @property
    def potentials(self) -> tuple[float, ...]:
        return tuple(r.potential for r in self.regions)

    @property
    def widths(self) -> tuple[float, ...]:
        return tuple(r.width for r in self.regions)

    def mirrored(self) -> "PotentialProfile":
        """Left-right mirror image."""
        return PotentialProfile(self.right_lead_potential, self.left_to_right, self.left_lead_potential)

    def leads_propagate(self, energy: float) -> bool:
        return energy > self.left_lead_potential and energy > self.right_lead_potential


@dataclass(frozen=True)
class RegionParams:
    gamma: complex
    z: complex


def _nudge(energy: float, potential: float, direction: int) -> float:
    if abs(energy - potential) < BAND_EPSILON:
        return potential + (BAND_EPSILON if direction >= 0 else -BAND_EPSILON)
    return energy


def region_params(energy: float, potential: float, units: UnitSystem = NATURAL, direction: int = 1) -> RegionParams:
    """Propagation constant and characteristic impedance of a uniform region.

    ``gamma = sqrt(2m(V - E))/hbar`` on the principal branch and
    ``z = -i hbar gamma / m``: for ``E > V`` gamma is ``i k`` and ``z = hbar k/m``;
    for ``E < V`` gamma is real positive and z is negative imaginary.
    Energies within ``BAND_EPSILON`` of the band edge are moved by
    ``BAND_EPSILON`` in the sign of ``direction``.
    """
    energy = _nudge(energy, potential, direction)
    hbar, mass = units.hbar, units.mass
    delta = potential - energy
    if delta > 0:
        gamma = complex(cmath.sqrt(2.0 * mass * delta).real / hbar, 0.0)
    else:
        gamma = complex(0.0, cmath.sqrt(-2.0 * mass * delta).real / hbar)
    return RegionParams(gamma, -1j * hbar * gamma / mass)


def lead_impedance(energy: float, potential: float, units: UnitSystem = NATURAL, direction: int = 1) -> complex:
    """Impedance of the wave leaving the structure through a lead.

    This is ``hbar k / m`` with ``k = sqrt(2m(E - V))/hbar`` taken with
    non-negative imaginary part: a real positive value for a propagating lead
    and ``+i hbar kappa / m`` for an evanescent lead, i.e. a wave that travels
    or decays away from the structure.  For propagating leads it coincides
    with ``region_params(...).z``; for evanescent leads it is its negative.
    """
    params = region_params(energy, potential, units, direction)
    if params.gamma.real > 0:
        return -params.z
    return params.z


def cascade_params(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL
) -> tuple[complex, list[RegionParams]]:
    """Load impedance ``z_0`` and the parameters of regions ``1..N``."""
    load = lead_impedance(energy, profile.right_lead_potential, units)
    return load, [region_params(energy, r.potential, units) for r in profile.regions]


def clamp_unit(t: float) -> float:
    """Snap rounding-level excursions (within UNITARITY_SLACK) back into [0, 1]."""
    if -UNITARITY_SLACK <= t < 0.0:
        return 0.0
    if 1.0 < t <= 1.0 + UNITARITY_SLACK:
        return 1.0
    return t


def reflection_amplitude(impedance: complex, outer_impedance: complex) -> complex:
    """Reflection amplitude seen from the outer lead for input impedance ``impedance``."""
    return (outer_impedance - impedance) / (outer_impedance + impedance)


def check_propagating_leads(profile: PotentialProfile, energy: float) -> None:
    if not profile.leads_propagate(energy):
        raise EvanescentLead(
            f"energy {energy!r} is not above both lead potentials "
            f"({profile.left_lead_potential!r}, {profile.right_lead_potential!r})"
        )


def check_evanescent_leads(profile: PotentialProfile, energy: float) -> None:
    if not (energy < profile.left_lead_potential and energy < profile.right_lead_potential):
        raise PropagatingLead(
            f"energy {energy!r} is not below both lead potentials "
            f"({profile.left_lead_potential!r}, {profile.right_lead_potential!r})"
        )
