import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import profiles
from oracles import barrier_transmission, random_energy, random_profile, relative
from wave_impedance import (
    N_MAX,
    PotentialProfile,
    ProfileTooLarge,
    PropagatingLead,
    EvanescentLead,
    Region,
    bound_state_residual,
    enumerate_terms,
    input_impedance_analytical,
    input_impedance_iterative,
    lead_impedance,
    oracle_transmission,
    region_params,
    transmission,
    transmission_iterative,
)
from wave_impedance.analytical import sign_vectors, sign_sums
from wave_impedance.core import cascade_params


def test_single_region_coefficients():
    profile = PotentialProfile(0.0, (Region(1.0, 1.0),), 0.0)
    terms = enumerate_terms(profile, 0.5)
    z0 = lead_impedance(0.5, 0.0)
    z1 = region_params(0.5, 1.0).z
    assert [t.signs for t in terms] == [(1,), (-1,)]
    assert terms[0].coefficient == pytest.approx((z0 + z1) / 2)
    assert terms[1].coefficient == pytest.approx((z0 - z1) / 2)


def test_three_region_coefficients_use_coupled_signs():
    profile = PotentialProfile(0.0, (Region(2.0, 0.5), Region(-1.0, 1.0), Region(3.0, 0.7)), 0.0)
    e = 1.2
    z = [lead_impedance(e, 0.0)] + [region_params(e, r.potential).z for r in profile.regions]
    terms = enumerate_terms(profile, e)
    assert len(terms) == 8
    for t in terms:
        s1, s2, s3 = t.signs
        k = (z[0] + s1 * z[1]) * (z[1] + s1 * s2 * z[2]) * (z[2] + s2 * s3 * z[3]) / 8
        assert t.coefficient == pytest.approx(k, rel=1e-14)


def test_uniform_medium_kills_mixed_terms():
    profile = PotentialProfile.uniform(0.0, [0.5, 1.0, 1.5, 0.2])
    terms = enumerate_terms(profile, 2.0)
    nonzero = [t.signs for t in terms if abs(t.coefficient) > 0]
    assert nonzero == [(1, 1, 1, 1), (-1, -1, -1, -1)] or nonzero == [(1, 1, 1, 1)]
    # the all-minus coefficient carries (z - z) from j=1 with i_0 = +1
    assert all(abs(t.coefficient) == 0 for t in terms if t.signs != (1, 1, 1, 1))


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
def test_term_count_and_order(n):
    vecs = list(sign_vectors(n))
    assert len(vecs) == 2**n
    assert len(set(vecs)) == 2**n
    bits = [sum((s == -1) << (n - 1 - j) for j, s in enumerate(v)) for v in vecs]
    assert bits == list(range(2**n))


def test_terms_reproduce_closed_form_sums():
    rng = random.Random(8)
    for _ in range(50):
        profile = random_profile(rng, 1, 8, l_max=1.0)
        e = random_energy(rng, profile)
        terms = enumerate_terms(profile, e)
        num = sum(t.coefficient * cmath.exp(t.exponent) for t in terms)
        den = sum(t.last_sign * t.coefficient * cmath.exp(t.exponent) for t in terms)
        load, params = cascade_params(profile, e)
        z = params[-1].z * num / den
        assert relative(z, input_impedance_iterative(profile, e)) < 1e-10
        # grouping by the last sign splits numerator and denominator
        plus = sum(t.coefficient * cmath.exp(t.exponent) for t in terms if t.last_sign == 1)
        minus = sum(t.coefficient * cmath.exp(t.exponent) for t in terms if t.last_sign == -1)
        assert plus + minus == pytest.approx(num, rel=1e-9, abs=1e-12 * abs(num))
        assert plus - minus == pytest.approx(den, rel=1e-9, abs=1e-12 * abs(den))
        # shifted tree sums agree with the raw term sums up to one common factor
        s_num, s_den = sign_sums(load, params, profile.widths)
        assert relative(s_num / s_den, num / den) < 1e-10


def test_bare_step():
    profile = PotentialProfile(1.0, (), -2.0)
    assert input_impedance_analytical(profile, 3.0) == lead_impedance(3.0, -2.0)


def test_all_widths_to_zero_collapse_to_load():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 8)
        profile = PotentialProfile(0.0, tuple(Region(rng.uniform(-10, 10), 1e-13) for _ in range(n)), rng.uniform(-5, 5))
        e = rng.uniform(-4, 12)
        assert relative(input_impedance_analytical(profile, e), lead_impedance(e, profile.right_lead_potential)) < 1e-9


def test_too_large_profile():
    profile = PotentialProfile.uniform(0.0, [0.1] * (N_MAX + 1))
    with pytest.raises(ProfileTooLarge):
        input_impedance_analytical(profile, 1.0)
    with pytest.raises(ProfileTooLarge):
        enumerate_terms(profile, 1.0, n_max=5)
    # transmission falls back to the iterative engine
    assert transmission(profile, 1.0) == pytest.approx(1.0)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_engines_agree(data):
    profile = data.draw(profiles(max_regions=10))
    e = data.draw(st.floats(-12, 15))
    levels = [profile.left_lead_potential, profile.right_lead_potential, *profile.potentials]
    if any(abs(e - v) < 1e-6 for v in levels):
        return
    za = input_impedance_analytical(profile, e)
    zi = input_impedance_iterative(profile, e)
    assert relative(za, zi) <= 1e-10


def test_flat_potential_transmits_fully():
    profile = PotentialProfile.uniform(0.0, [1.0, 2.0])
    for e in (0.1, 1.0, 7.0):
        assert transmission(profile, e) == pytest.approx(1.0, abs=1e-15)


def test_single_barrier_transmission():
    profile = PotentialProfile(0.0, (Region(1.0, 1.0),), 0.0)
    assert transmission(profile, 0.5) == pytest.approx(barrier_transmission(0.5, 1.0, 1.0), rel=1e-12)


def test_transmission_requires_propagating_leads():
    profile = PotentialProfile(1.0, (Region(2.0, 1.0),), 0.0)
    with pytest.raises(EvanescentLead):
        transmission(profile, 0.5)


@settings(max_examples=200, deadline=None)
@given(profiles(max_regions=8, same_leads=True), st.floats(0.01, 20))
def test_unitarity_and_reciprocity(profile, offset):
    e = profile.left_lead_potential + offset
    t = transmission(profile, e)
    assert 0.0 <= t <= 1.0 + 1e-12
    assert abs(t - transmission(profile.mirrored(), e)) <= 1e-9
    assert abs(t - transmission_iterative(profile, e)) <= 1e-9


def test_bound_state_residual_requires_evanescent_leads():
    profile = PotentialProfile(0.0, (Region(-10.0, 2.0),), 0.0)
    with pytest.raises(PropagatingLead):
        bound_state_residual(profile, 0.5)


def test_bound_state_residual_vanishes_at_well_levels():
    from oracles import square_well_levels

    profile = PotentialProfile(0.0, (Region(-10.0, 2.0),), 0.0)
    for level in square_well_levels(10.0, 2.0):
        assert abs(bound_state_residual(profile, level)) < 1e-9
    assert abs(bound_state_residual(profile, -6.0)) > 1e-3


def test_bound_state_residual_at_lead_edge():
    profile = PotentialProfile(0.0, (Region(-10.0, 2.0), Region(-3.0, 1.0)), 0.0)
    e = -1e-10
    f = bound_state_residual(profile, e)
    z = input_impedance_analytical(profile, e)
    z_n = region_params(e, -3.0).z
    assert abs(lead_impedance(e, 0.0)) < 1e-4
    assert f == pytest.approx(z / z_n, abs=1e-4)


def test_bound_state_residual_large_profile_falls_back():
    profile = PotentialProfile(0.0, tuple(Region(-1.0, 0.2) for _ in range(30)), 0.0)
    e = -0.5
    z_n = region_params(e, -1.0).z
    expected = (input_impedance_iterative(profile, e) + lead_impedance(e, 0.0)) / z_n
    assert bound_state_residual(profile, e) == pytest.approx(expected, rel=1e-12)


def test_overflow_robust_deep_tunneling():
    # ten barriers with total Re(gamma l) = 500
    kappa = 50.0
    profile = PotentialProfile(0.0, tuple(Region(kappa**2 + 1.0, 1.0) for _ in range(10)), 0.0)
    za = input_impedance_analytical(profile, 1.0)
    zi = input_impedance_iterative(profile, 1.0)
    assert cmath.isfinite(za) and cmath.isfinite(zi)
    assert relative(za, zi) < 1e-10
    assert transmission(profile, 1.0) >= 0.0


@pytest.mark.parametrize(
    "regions",
    [
        ((1.0, 1.0), (0.0, 1.0), (1.0, 1.0)),
        ((1.0, 2.0), (0.0, 1.0), (1.0, 1.0)),
        ((1.0, 1.0), (4.0, 3.0), (1.0, 1.0), (0.0, 1.0), (0.0, 1.0)),
        ((1.0, 1.0), (3.0, 1.0), (1.0, 0.5), (1.0, 1.0)),
        ((1.0, 1.0),),
    ],
)
def test_energy_on_region_potential(regions):
    # E = 1 sits exactly on a band edge; the sign sum must not lose precision there
    profile = PotentialProfile.from_left_to_right(0.0, regions, 0.0)
    za = input_impedance_analytical(profile, 1.0)
    zi = input_impedance_iterative(profile, 1.0)
    assert abs(za - zi) <= 1e-12 * abs(zi)
    assert abs(transmission(profile, 1.0) - oracle_transmission(profile, 1.0)) <= 1e-9
