import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from wave_impedance import PotentialProfile, Region  # noqa: E402

PROFILES_DIR = Path(__file__).resolve().parents[1] / "src" / "wave_impedance" / "profiles"

potentials = st.floats(-10, 10, allow_nan=False)
widths = st.floats(1e-3, 3, allow_nan=False)


@st.composite
def profiles(draw, max_regions=8, same_leads=False):
    left = draw(potentials)
    right = left if same_leads else draw(potentials)
    regions = draw(st.lists(st.builds(Region, potentials, widths), min_size=1, max_size=max_regions))
    return PotentialProfile(left, tuple(regions), right)


@pytest.fixture
def profiles_dir():
    return PROFILES_DIR
