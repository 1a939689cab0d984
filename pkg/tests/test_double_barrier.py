import random

import pytest

from oracles import relative
from wave_impedance import EvanescentLead, input_impedance_analytical, lead_impedance
from wave_impedance.double_barrier import (
    AsymmetricDoubleBarrier,
    SymmetricDoubleBarrier,
    impedance_asymmetric,
    impedance_symmetric,
    symmetric_impedance_explicit,
    symmetric_transmission,
    three_region_impedance,
)
from wave_impedance.spectrum import EnergyGrid, sweep_transmission


def test_uniform_three_region():
    z = 1.3 - 0.2j
    assert three_region_impedance((z, z, z, z), (0.3, 0.5j, 0.7), (1.0, 2.0, 0.5)) == pytest.approx(z)


def test_asymmetric_matches_generic():
    rng = random.Random(21)
    for _ in range(300):
        spec = AsymmetricDoubleBarrier(
            rng.uniform(-5, 5), tuple(rng.uniform(-10, 10) for _ in range(3)), tuple(rng.uniform(0.05, 3) for _ in range(3))
        )
        e = rng.uniform(-12, 15)
        assert relative(impedance_asymmetric(spec, e), input_impedance_analytical(spec.profile(), e)) < 1e-10


def test_zero_spacer_merges_barriers():
    spec = AsymmetricDoubleBarrier(0.0, (2.0, 0.0, 2.0), (0.4, 1e-14, 0.6))
    merged = AsymmetricDoubleBarrier(0.0, (2.0, 0.0, 2.0), (0.5, 1e-14, 0.5))
    for e in (0.7, 3.1):
        assert relative(impedance_asymmetric(spec, e), impedance_asymmetric(merged, e)) < 1e-10


def test_symmetric_matches_asymmetric_and_generic():
    rng = random.Random(22)
    for _ in range(300):
        spec = SymmetricDoubleBarrier(rng.uniform(-5, 5), rng.uniform(-10, 10), rng.uniform(0.05, 2), rng.uniform(0.05, 3))
        e = rng.uniform(spec.outer_potential + 1e-3, 15)
        zs = impedance_symmetric(spec, e)
        assert relative(zs, impedance_asymmetric(spec.asymmetric(), e)) < 1e-10
        assert relative(zs, input_impedance_analytical(spec.profile(), e)) < 1e-10


def test_symmetric_with_matched_barrier():
    z = 1.7
    assert symmetric_impedance_explicit(z, z, 0.8j, 0.8j, 0.4, 1.2) == pytest.approx(z)


def test_symmetric_requires_propagating_outer():
    spec = SymmetricDoubleBarrier(0.0, 5.0, 0.5, 2.0)
    with pytest.raises(EvanescentLead):
        impedance_symmetric(spec, -1.0)


def test_symmetric_resonance_is_matched():
    spec = SymmetricDoubleBarrier(0.0, 5.0, 0.5, 2.0)
    spectrum = sweep_transmission(spec.profile(), EnergyGrid(0.01, 4.99, 500))
    assert spectrum.resonances
    for res in spectrum.resonances:
        z = impedance_symmetric(spec, res.energy)
        zeta = lead_impedance(res.energy, 0.0)
        assert abs((z - zeta) / (z + zeta)) < 1e-6
        assert symmetric_transmission(spec, res.energy) > 1 - 1e-6
