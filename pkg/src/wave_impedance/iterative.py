"""O(N) impedance recursion.

Each region transforms the impedance at its right edge into the impedance at
its left edge.  In state-vector form ``Z = z * top / bottom`` and one step is
the 2x2 matrix::

    [[ z_prev ch(g l), -z sh(g l)],
     [-z_prev sh(g l),  z ch(g l)]]

applied to the previous state, starting from ``(1, 1)``.
"""

from __future__ import annotations

import cmath

import numpy as np

from .core import (
    NATURAL,
    DegenerateState,
    PotentialProfile,
    RegionParams,
    UnitSystem,
    cascade_params,
    check_propagating_leads,
    clamp_unit,
    lead_impedance,
    reflection_amplitude,
)

POLE_THRESHOLD = 1e-300


def _scaled_ch_sh(u: complex) -> tuple[complex, complex]:
    # ch and sh times exp(-|Re u|); the common factor drops out of the ratio
    a = abs(u.real)
    ep = cmath.exp(u - a)
    em = cmath.exp(-u - a)
    return 0.5 * (ep + em), 0.5 * (ep - em)


def step_matrix(inner_z: complex, params: RegionParams, width: float, scaled: bool = False) -> np.ndarray:
    """Matrix carrying the state across one region of the given width.

    ``inner_z`` is the characteristic impedance on the load side of the
    region.  With ``scaled=True`` every entry is multiplied by
    ``exp(-|Re(gamma l)|)``, which keeps it finite for thick barriers.
    """
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    u = params.gamma * width
    if scaled:
        ch, sh = _scaled_ch_sh(u)
    else:
        ch, sh = cmath.cosh(u), cmath.sinh(u)
    return np.array([[inner_z * ch, -params.z * sh], [-inner_z * sh, params.z * ch]], dtype=complex)


def propagate_state(load: complex, params: list[RegionParams], widths) -> tuple[complex, complex, complex]:
    """Apply the step matrices for regions 1..N to ``(1, 1)``.

    Returns ``(top, bottom, z_N)``.  The state is rescaled to unit max-modulus
    after every step.
    """
    top, bottom = 1.0 + 0j, 1.0 + 0j
    z_prev = load
    for p, width in zip(params, widths):
        ch, sh = _scaled_ch_sh(p.gamma * width)
        top, bottom = z_prev * ch * top - p.z * sh * bottom, -z_prev * sh * top + p.z * ch * bottom
        scale = max(abs(top), abs(bottom))
        top /= scale
        bottom /= scale
        z_prev = p.z
    return top, bottom, z_prev


def input_impedance_iterative(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> complex:
    """Impedance at the outer edge of the cascade, O(N).

    Raises DegenerateState when the impedance has a pole at this energy.
    """
    load, params = cascade_params(profile, energy, units)
    if not params:
        return load
    top, bottom, z_n = propagate_state(load, params, profile.widths)
    if abs(bottom) < POLE_THRESHOLD:
        raise DegenerateState(f"impedance pole at E={energy!r}")
    return z_n * top / bottom


def transmission_iterative(profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL) -> float:
    check_propagating_leads(profile, energy)
    z = input_impedance_iterative(profile, energy, units)
    outer = lead_impedance(energy, profile.left_lead_potential, units)
    return clamp_unit(1.0 - abs(reflection_amplitude(z, outer)) ** 2)
