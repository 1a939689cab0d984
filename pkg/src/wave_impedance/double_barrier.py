"""Closed forms for three-region (double barrier / double well) cascades.

Layout, left to right::

    outer lead | region 3 | region 2 | region 1 | load lead

In the symmetric case regions 1 and 3 are identical barriers (or wells) of
width ``barrier_width`` and region 2 is a spacer at the lead potential.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass

from .core import (
    NATURAL,
    DegenerateState,
    PotentialProfile,
    Region,
    UnitSystem,
    check_propagating_leads,
    lead_impedance,
    region_params,
)


@dataclass(frozen=True)
class AsymmetricDoubleBarrier:
    """Three arbitrary regions; ``potentials`` and ``widths`` run load side first."""

    load_potential: float
    potentials: tuple[float, float, float]
    widths: tuple[float, float, float]
    outer_potential: float | None = None

    def __post_init__(self):
        if len(self.potentials) != 3 or len(self.widths) != 3:
            raise ValueError("a double barrier has exactly three regions")
        if not all(w > 0 for w in self.widths):
            raise ValueError(f"widths must be positive, got {self.widths}")

    def profile(self) -> PotentialProfile:
        outer = self.load_potential if self.outer_potential is None else self.outer_potential
        return PotentialProfile(outer, tuple(Region(v, w) for v, w in zip(self.potentials, self.widths)), self.load_potential)


@dataclass(frozen=True)
class SymmetricDoubleBarrier:
    outer_potential: float
    barrier_potential: float
    barrier_width: float
    spacer_width: float

    def __post_init__(self):
        if not (self.barrier_width > 0 and self.spacer_width > 0):
            raise ValueError("barrier and spacer widths must be positive")

    def asymmetric(self) -> AsymmetricDoubleBarrier:
        v, vt = self.outer_potential, self.barrier_potential
        return AsymmetricDoubleBarrier(
            v, (vt, v, vt), (self.barrier_width, self.spacer_width, self.barrier_width), v
        )

    def profile(self) -> PotentialProfile:
        return self.asymmetric().profile()


def three_region_impedance(z: tuple[complex, ...], gamma: tuple[complex, ...], widths: tuple[float, ...]) -> complex:
    """Eight-term sum for ``z = (z0, z1, z2, z3)`` with coupled signs.

    Each term is ``(z0 +-1 z1)(z1 +-12 z2)(z2 +-23 z3) exp(-+1 g1 l1 -+2 g2 l2 -+3 g3 l3)``
    with ``+-12 = +-1 * +-2`` and ``+-23 = +-2 * +-3``; the denominator weights
    each term by its third sign.
    """
    z0, z1, z2, z3 = z
    shift = sum(abs((g * l).real) for g, l in zip(gamma, widths))
    num = den = 0j
    for s1, s2, s3 in itertools.product((1, -1), repeat=3):
        term = (z0 + s1 * z1) * (z1 + s1 * s2 * z2) * (z2 + s2 * s3 * z3)
        term *= cmath.exp(-(s1 * gamma[0] * widths[0] + s2 * gamma[1] * widths[1] + s3 * gamma[2] * widths[2]) - shift)
        num += term
        den += s3 * term
    if den == 0:
        raise DegenerateState("impedance pole")
    return z3 * num / den


def impedance_asymmetric(spec: AsymmetricDoubleBarrier, energy: float, units: UnitSystem = NATURAL) -> complex:
    params = [region_params(energy, v, units) for v in spec.potentials]
    z0 = lead_impedance(energy, spec.load_potential, units)
    return three_region_impedance(
        (z0, *(p.z for p in params)), tuple(p.gamma for p in params), spec.widths
    )


def symmetric_impedance_explicit(z: complex, zt: complex, gamma: complex, gamma_t: complex, l1: float, l2: float) -> complex:
    """Expanded symmetric form.

    ``z``/``gamma`` belong to the leads and spacer (width ``l2``), ``zt``/``gamma_t``
    to the two barriers (width ``l1`` each).
    """
    shift = abs((gamma * l2).real) + 2.0 * abs((gamma_t * l1).real)

    def e(x):
        return cmath.exp(x - shift)

    sh = 0.5 * (e(gamma * l2) - e(-gamma * l2))
    p, m = zt + z, zt - z
    a = e(-gamma * l2 - 2 * gamma_t * l1)
    b = e(-gamma * l2 + 2 * gamma_t * l1)
    c = e(gamma * l2 - 2 * gamma_t * l1)
    d = e(gamma * l2 + 2 * gamma_t * l1)
    num = 4 * zt * (zt**2 - z**2) * sh + p**3 * a + m**3 * b - m**2 * p * c - p**2 * m * d
    den = -4 * z * (zt**2 - z**2) * sh + p**3 * a - m**3 * b - m**2 * p * c + p**2 * m * d
    if den == 0:
        raise DegenerateState("impedance pole")
    return zt * num / den


def impedance_symmetric(spec: SymmetricDoubleBarrier, energy: float, units: UnitSystem = NATURAL) -> complex:
    """Symmetric double barrier from the expanded closed form.

    The form identifies the load impedance with the spacer impedance, which
    holds only when the outer potential propagates, so energies at or below
    it raise EvanescentLead.
    """
    check_propagating_leads(spec.profile(), energy)
    outer = region_params(energy, spec.outer_potential, units)
    barrier = region_params(energy, spec.barrier_potential, units)
    return symmetric_impedance_explicit(outer.z, barrier.z, outer.gamma, barrier.gamma, spec.barrier_width, spec.spacer_width)


def symmetric_transmission(spec: SymmetricDoubleBarrier, energy: float, units: UnitSystem = NATURAL) -> float:
    z = impedance_symmetric(spec, energy, units)
    outer = lead_impedance(energy, spec.outer_potential, units)
    return 1.0 - abs((z - outer) / (z + outer)) ** 2
