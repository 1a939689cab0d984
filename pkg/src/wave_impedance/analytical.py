"""Closed-form impedance as an explicit sum over sign configurations.

For a cascade of N regions every sign vector ``(i_1, ..., i_N)`` with
``i_j = +-1`` contributes one term::

    K(i) = 2^-N * prod_j (z_{j-1} + i_j i_{j-1} z_j),   i_0 = +1
    term = K(i) * exp(-sum_j i_j gamma_j l_j)

and ``Z_N = z_N * sum(term) / sum(i_N * term)``.  ``z_0`` is the load
impedance.  Evaluation visits all 2^N terms, so the cost is exponential in N;
the iterative engine gives the same number in O(N).

Sign vectors are ordered by the bit pattern ``b = sum_j [i_j = -1] 2^(N-j)``
(``i_1`` is the most significant bit), ascending.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterator

from .core import (
    NATURAL,
    DegenerateState,
    PotentialProfile,
    ProfileTooLarge,
    RegionParams,
    UnitSystem,
    cascade_params,
    check_evanescent_leads,
    check_propagating_leads,
    clamp_unit,
    lead_impedance,
)
from .iterative import input_impedance_iterative, propagate_state, transmission_iterative

N_MAX = 24
# impedance (relative to the largest in the cascade) below which a region counts as at a band edge
EDGE_RATIO = 1e-2


@dataclass(frozen=True)
class AnalyticalTerm:
    signs: tuple[int, ...]
    coefficient: complex
    exponent: complex

    @property
    def last_sign(self) -> int:
        return self.signs[-1] if self.signs else 1


def _check_size(n: int, n_max: int) -> None:
    if n > n_max:
        raise ProfileTooLarge(f"{n} regions exceeds the sign-sum limit of {n_max}; use the iterative engine")


def sign_vectors(n: int) -> Iterator[tuple[int, ...]]:
    """All 2^n sign vectors in ascending bit-pattern order."""
    for b in range(1 << n):
        yield tuple(-1 if (b >> (n - 1 - j)) & 1 else 1 for j in range(n))


def enumerate_terms(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL, n_max: int = N_MAX
) -> list[AnalyticalTerm]:
    """Every term of the sign sum with its coefficient and (unshifted) exponent.

    The coefficients use the actual impedances, so the raw sum
    ``sum(K * exp(exponent))`` equals the numerator of the closed form.
    """
    n = profile.n_regions
    _check_size(n, n_max)
    load, params = cascade_params(profile, energy, units)
    zs = [load] + [p.z for p in params]
    gl = [p.gamma * w for p, w in zip(params, profile.widths)]
    norm = 0.5**n
    terms = []
    for signs in sign_vectors(n):
        k = norm
        exponent = 0j
        prev = 1
        for j, s in enumerate(signs, start=1):
            k *= zs[j - 1] + s * prev * zs[j]
            exponent -= s * gl[j - 1]
            prev = s
        terms.append(AnalyticalTerm(signs, k, exponent))
    return terms


def exponent_shift(params: list[RegionParams], widths) -> float:
    """Largest real part of ``-sum_j i_j gamma_j l_j`` over all sign vectors."""
    return sum(abs((p.gamma * w).real) for p, w in zip(params, widths))


def _scaled_exp(u: complex) -> tuple[complex, complex, complex, complex]:
    # e^{-u}, e^{u}, ch(u), sh(u), all times e^{-|Re u|}
    a = abs(u.real)
    e_plus = cmath.exp(-u - a)
    e_minus = cmath.exp(u - a)
    return e_plus, e_minus, 0.5 * (e_minus + e_plus), 0.5 * (e_minus - e_plus)


def _merge_edge_runs(zs: list[complex], gammas: list[complex], widths: list[float]):
    # adjacent identical band-edge regions act as one region of the summed width
    out_z, out_g, out_w = [zs[0]], [], []
    for z, g, w in zip(zs[1:], gammas, widths):
        if out_g and abs(z) <= EDGE_RATIO and z == out_z[-1] and g == out_g[-1]:
            out_w[-1] += w
            continue
        out_z.append(z)
        out_g.append(g)
        out_w.append(w)
    return out_z, out_g, out_w


def sign_sums(load: complex, params: list[RegionParams], widths) -> tuple[complex, complex]:
    """``(sum K e^x, sum i_N K e^x)`` over all 2^N sign vectors.

    Both sums carry the common factor ``exp(-shift) / scale^N`` (uniform
    exponent shift and impedance rescaling), which cancels in every ratio the
    engines form.  Terms are combined pairwise along the sign tree in
    ascending bit-pattern order.

    Near a band edge (``|z_j|`` small against the other impedances) the two
    branches of ``i_j`` cancel down to ``O(gamma_j)``; such a region is summed
    over ``i_j`` in closed form instead, with that factor pulled out first.
    """
    if not params:
        return 1.0 + 0j, 1.0 + 0j
    zs = [load] + [p.z for p in params]
    scale = max(abs(z) for z in zs) or 1.0
    zs, gammas, ls = _merge_edge_runs([z / scale for z in zs], [p.gamma for p in params], list(widths))
    n = len(gammas)
    exps = [_scaled_exp(g * l) for g, l in zip(gammas, ls)]

    def edge(j: int) -> bool:
        return abs(zs[j]) <= EDGE_RATIO and gammas[j - 1] != 0

    def fused(j: int, alpha_hat: complex, beta: complex, p: int) -> complex:
        # sum over i_j of level j times (alpha + i_j beta) with alpha = z_j alpha_hat; every term
        # carries z_j or sh(u_j), so gamma_j is factored out, the rest summed, and gamma_j restored
        g = gammas[j - 1]
        _, _, ch, sh = exps[j - 1]
        zeta = zs[j] / g
        shc = sh / g
        return g * (zs[j - 1] * (zeta * alpha_hat * ch - beta * shc) + p * zeta * (beta * ch - zs[j] * alpha_hat * sh))

    def final(j: int) -> list[tuple[complex, complex]]:
        _, _, ch, sh = exps[j - 1]
        return [(zs[j - 1] * ch - p * zs[j] * sh, -zs[j - 1] * sh + p * zs[j] * ch) for p in (1, -1)]

    steps = []  # steps[k][prev_negative][next_negative]
    last = None
    j = 1
    while last is None:
        if j == n:
            last = final(j)
        elif edge(j) and j + 1 == n:
            _, _, ch, sh = exps[n - 1]
            z_n = zs[n]
            last = [(fused(j, ch, -z_n * sh, p), fused(j, -sh, z_n * ch, p)) for p in (1, -1)]
        elif edge(j):
            e_plus, e_minus, _, _ = exps[j]
            steps.append([
                [fused(j, 0.5 * e, 0.5 * q * zs[j + 1] * e, p) for q, e in ((1, e_plus), (-1, e_minus))]
                for p in (1, -1)
            ])
            j += 2
        else:
            e_plus, e_minus, _, _ = exps[j - 1]
            same = 0.5 * (zs[j - 1] + zs[j])
            diff = 0.5 * (zs[j - 1] - zs[j])
            steps.append([[same * e_plus, diff * e_minus], [diff * e_plus, same * e_minus]])
            j += 1
    depth = len(steps)

    def walk(level: int, prev_negative: int, value: complex) -> tuple[complex, complex]:
        if level == depth:
            num, den = last[prev_negative]
            return value * num, value * den
        row = steps[level][prev_negative]
        n1, d1 = walk(level + 1, 0, value * row[0])
        n2, d2 = walk(level + 1, 1, value * row[1])
        return n1 + n2, d1 + d2

    return walk(0, 0, 1.0 + 0j)


def input_impedance_analytical(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL, n_max: int = N_MAX
) -> complex:
    """Impedance at the outer edge of the cascade from the 2^N-term sum."""
    _check_size(profile.n_regions, n_max)
    load, params = cascade_params(profile, energy, units)
    if not params:
        return load
    num, den = sign_sums(load, params, profile.widths)
    if den == 0:
        raise DegenerateState(f"impedance pole at E={energy!r}")
    return params[-1].z * num / den


def transmission(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL, n_max: int = N_MAX
) -> float:
    """Transmission probability through the cascade.

    ``T = 1 - |sum (z_N - i_N z_out) K e^x / sum (z_N + i_N z_out) K e^x|^2``
    where ``z_out`` is the impedance of the outer lead.  Profiles with more
    than ``n_max`` regions are routed through the iterative engine.
    Values within 1e-12 outside ``[0, 1]`` are clamped; larger excursions are
    returned as-is.
    """
    check_propagating_leads(profile, energy)
    if profile.n_regions > n_max:
        return transmission_iterative(profile, energy, units)
    load, params = cascade_params(profile, energy, units)
    outer = lead_impedance(energy, profile.left_lead_potential, units)
    if params:
        num, den = sign_sums(load, params, profile.widths)
        z_n = params[-1].z
    else:
        num, den, z_n = 1.0, 1.0, load
    reflected = (z_n * num - outer * den) / (z_n * num + outer * den)
    return clamp_unit(1.0 - abs(reflected) ** 2)


def bound_state_terms(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL, n_max: int = N_MAX
) -> tuple[complex, complex]:
    """``(F, z_N)`` where ``F = Z_N / z_N + z_out / z_N``."""
    check_evanescent_leads(profile, energy)
    outer = lead_impedance(energy, profile.left_lead_potential, units)
    if profile.n_regions > n_max:
        z = input_impedance_iterative(profile, energy, units)
        _, params = cascade_params(profile, energy, units)
        z_n = params[-1].z
        return z / z_n + outer / z_n, z_n
    load, params = cascade_params(profile, energy, units)
    if not params:
        return 1.0 + outer / load, load
    num, den = sign_sums(load, params, profile.widths)
    z_n = params[-1].z
    if den == 0:
        raise DegenerateState(f"impedance pole at E={energy!r}")
    return num / den + outer / z_n, z_n


def bound_state_residual(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL, n_max: int = N_MAX
) -> complex:
    """Bound-state mismatch ``F(E)``; bound states are the roots ``F = 0``.

    With both leads evanescent the outer lead impedance is ``+i hbar kappa/m``
    (decaying away from the structure), so ``F = 0`` means the solution
    decaying into the load lead also decays into the outer lead.
    """
    return bound_state_terms(profile, energy, units, n_max)[0]


def bound_state_determinant(
    profile: PotentialProfile, energy: float, units: UnitSystem = NATURAL, n_max: int = N_MAX
) -> complex:
    """Pole-free form of the bound-state condition.

    ``z_N * sum(K e^x) + z_out * sum(i_N K e^x)``, i.e. ``F(E)`` multiplied by
    ``z_N`` and the denominator sum.  Up to a positive factor its phase is
    constant between interior band edges, so its projection on that axis is a
    real function with sign changes exactly at bound states.
    """
    check_evanescent_leads(profile, energy)
    outer = lead_impedance(energy, profile.left_lead_potential, units)
    load, params = cascade_params(profile, energy, units)
    if not params:
        return load + outer
    if profile.n_regions > n_max:
        top, bottom, z_n = propagate_state(load, params, profile.widths)
        return z_n * top + outer * bottom
    num, den = sign_sums(load, params, profile.widths)
    return params[-1].z * num + outer * den
