"""Energy sweeps: transmission spectra, resonances, bound states and timing."""

from __future__ import annotations

import enum
import gc
import logging
import math
import random
import statistics
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, signal

from .analytical import (
    N_MAX,
    bound_state_determinant,
    bound_state_residual,
    input_impedance_analytical,
    transmission,
)
from .core import (
    BAND_EPSILON,
    NATURAL,
    ImpedanceError,
    PotentialProfile,
    PropagatingLead,
    EvanescentLead,
    Region,
    UnitSystem,
)
from .iterative import input_impedance_iterative, transmission_iterative

log = logging.getLogger(__name__)

PEAK_PROMINENCE = 1e-6


class Engine(enum.Enum):
    ANALYTICAL = "analytical"
    ITERATIVE = "iterative"


@dataclass(frozen=True)
class EnergyGrid:
    start: float
    stop: float
    samples: int

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError(f"grid start {self.start} must be below stop {self.stop}")
        if self.samples < 2:
            raise ValueError(f"need at least 2 samples, got {self.samples}")

    def points(self, avoid: Sequence[float] = ()) -> np.ndarray:
        energies = np.linspace(self.start, self.stop, self.samples)
        for level in avoid:
            hit = np.abs(energies - level) < BAND_EPSILON
            energies[hit] = level + BAND_EPSILON
        return energies

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.samples - 1)


@dataclass(frozen=True)
class Resonance:
    energy: float
    transmission: float
    fwhm: float


@dataclass
class Spectrum:
    energies: np.ndarray
    transmission: np.ndarray
    resonances: list[Resonance] = field(default_factory=list)
    failed: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class BoundStateSet:
    energies: tuple[float, ...]
    residuals: tuple[float, ...]

    def __len__(self):
        return len(self.energies)


def _levels(profile: PotentialProfile) -> list[float]:
    return [profile.left_lead_potential, profile.right_lead_potential, *profile.potentials]


def transmission_function(engine: Engine | str, units: UnitSystem = NATURAL, n_max: int = N_MAX):
    engine = Engine(engine)
    if engine is Engine.ANALYTICAL:
        return lambda profile, e: transmission(profile, e, units, n_max)
    return lambda profile, e: transmission_iterative(profile, e, units)


def impedance_function(engine: Engine | str, units: UnitSystem = NATURAL, n_max: int = N_MAX):
    engine = Engine(engine)
    if engine is Engine.ANALYTICAL:
        return lambda profile, e: input_impedance_analytical(profile, e, units, n_max)
    return lambda profile, e: input_impedance_iterative(profile, e, units)


def _half_crossing(energies, values, i, half, direction) -> float:
    j = i
    while 0 <= j + direction < len(values):
        a, b = values[j], values[j + direction]
        if b < half:
            ea, eb = energies[j], energies[j + direction]
            return ea + (half - a) * (eb - ea) / (b - a)
        j += direction
    return math.nan


def find_resonances(
    profile: PotentialProfile,
    energies: np.ndarray,
    values: np.ndarray,
    evaluate: Callable[[PotentialProfile, float], float],
    prominence: float = PEAK_PROMINENCE,
) -> list[Resonance]:
    """Local maxima of a sampled spectrum, refined between the flanking samples.

    Refinement is a bounded successive-parabolic search on the engine itself;
    FWHM comes from linear inverse interpolation of the samples at half the
    peak height.
    """
    filled = np.nan_to_num(values, nan=0.0)
    peaks, _ = signal.find_peaks(filled, prominence=prominence)
    found = []
    for i in peaks:
        lo, hi = energies[i - 1], energies[i + 1]
        e_peak, t_peak = float(energies[i]), float(values[i])
        try:
            res = optimize.minimize_scalar(
                lambda e: -evaluate(profile, e), bounds=(lo, hi), method="bounded",
                options={"xatol": 1e-12 * max(1.0, abs(hi))},
            )
            if -res.fun >= t_peak:
                e_peak, t_peak = float(res.x), float(-res.fun)
        except ImpedanceError:
            pass
        half = 0.5 * t_peak
        left = _half_crossing(energies, filled, i, half, -1)
        right = _half_crossing(energies, filled, i, half, 1)
        found.append(Resonance(e_peak, t_peak, float(right - left)))
    return sorted(found, key=lambda r: r.energy)


def sweep_transmission(
    profile: PotentialProfile,
    grid: EnergyGrid,
    engine: Engine | str = Engine.ANALYTICAL,
    units: UnitSystem = NATURAL,
    n_max: int = N_MAX,
) -> Spectrum:
    """Sample T(E) on the grid and locate resonances.

    Samples where the engine fails are recorded as NaN and listed in
    ``Spectrum.failed``; the sweep itself continues.
    """
    lowest = max(profile.left_lead_potential, profile.right_lead_potential)
    if not grid.start > lowest:
        raise EvanescentLead(f"grid starts at {grid.start}, not above the lead potential {lowest}")
    evaluate = transmission_function(engine, units, n_max)
    energies = grid.points(_levels(profile))
    values = np.empty_like(energies)
    failed = []
    for idx, e in enumerate(energies):
        try:
            values[idx] = evaluate(profile, float(e))
        except ImpedanceError as exc:
            log.warning("transmission failed at E=%r: %s", e, exc)
            values[idx] = math.nan
            failed.append(float(e))
    return Spectrum(energies, values, find_resonances(profile, energies, values, evaluate), failed)


def _segments(profile: PotentialProfile, e_min: float, e_max: float) -> list[tuple[float, float]]:
    """Split the window at interior band edges, where the determinant's phase jumps."""
    edges = sorted({v for v in profile.potentials if e_min < v < e_max})
    bounds = [e_min, *edges, e_max]
    out = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        pad = 4 * BAND_EPSILON * max(1.0, abs(lo), abs(hi))
        if hi - lo > 2 * pad:
            out.append((lo + (pad if lo in edges else 0.0), hi - (pad if hi in edges else 0.0)))
    return out


def matching_function(
    profile: PotentialProfile, lo: float, hi: float, units: UnitSystem = NATURAL, n_max: int = N_MAX, samples: int = 64
):
    """Real function on ``[lo, hi]`` whose zeros are the bound states.

    It is the pole-free determinant from :func:`bound_state_determinant`
    projected on its (constant) phase axis, which is sampled once from the
    largest-modulus value on ``samples`` points.
    """
    probe = [bound_state_determinant(profile, float(e), units, n_max) for e in np.linspace(lo, hi, samples)]
    ref = max(probe, key=abs)
    axis = ref / abs(ref) if ref != 0 else 1.0

    def h(energy: float) -> float:
        return (bound_state_determinant(profile, energy, units, n_max) * axis.conjugate()).real

    return h, axis


def _brackets(h, energies, values) -> list[tuple[float, float]]:
    """Sign-change cells, plus pairs of roots hidden between two samples.

    A near-degenerate pair makes ``h`` dip through zero and back between
    samples of equal sign; at every local minimum of ``|h|`` without a sign
    change the extremum is located and, if it crosses zero, both roots are
    bracketed around it.
    """
    out = []
    n = len(values)
    for i in range(n - 1):
        a, b = float(energies[i]), float(energies[i + 1])
        if values[i] == 0.0:
            out.append((a, a))
        elif values[i] * values[i + 1] < 0:
            out.append((a, b))
        if 0 < i and values[i - 1] * values[i] > 0 and values[i] * values[i + 1] > 0:
            if abs(values[i]) < abs(values[i - 1]) and abs(values[i]) <= abs(values[i + 1]):
                sign = math.copysign(1.0, values[i])
                lo, hi = float(energies[i - 1]), float(energies[i + 1])
                res = optimize.minimize_scalar(
                    lambda e: sign * h(e), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13 * max(1.0, abs(hi))}
                )
                if res.fun < 0:
                    out.extend([(lo, float(res.x)), (float(res.x), hi)])
    return sorted(set(out))


def find_bound_states(
    profile: PotentialProfile,
    e_min: float | None = None,
    e_max: float | None = None,
    scan_points: int = 2000,
    units: UnitSystem = NATURAL,
    n_max: int = N_MAX,
) -> BoundStateSet:
    """Bound-state energies between ``e_min`` and ``e_max``.

    Sign changes of the projected determinant on ``scan_points`` samples are
    bisected to 1e-12; a pair of levels hidden inside one scan cell is caught
    at the local minimum it leaves in the sampled values.  Defaults span from
    the lowest potential to just below the lower lead.
    """
    lead_floor = min(profile.left_lead_potential, profile.right_lead_potential)
    if e_max is None:
        e_max = lead_floor - 1e-9 * max(1.0, abs(lead_floor))
    if not e_max < lead_floor:
        raise PropagatingLead(f"e_max={e_max} is not below both lead potentials (lowest {lead_floor})")
    if e_min is None:
        e_min = min(_levels(profile))
    if scan_points < 2:
        raise ValueError(f"need at least 2 scan points, got {scan_points}")
    if not e_min < e_max:
        return BoundStateSet((), ())
    step = (e_max - e_min) / (scan_points - 1)
    roots, residuals = [], []
    for lo, hi in _segments(profile, e_min, e_max):
        h, axis = matching_function(profile, lo, hi, units, n_max)
        count = max(8, int(math.ceil((hi - lo) / step)) + 1)
        energies = np.linspace(lo, hi, count)
        values = [h(float(e)) for e in energies]
        for a, b in _brackets(h, energies, values):
            root = a if a == b else optimize.bisect(h, a, b, xtol=1e-12)
            det = bound_state_determinant(profile, root, units, n_max)
            if abs((det * axis.conjugate()).imag) > 1e-10 * max(abs(det), max(abs(v) for v in values)):
                warnings.warn(f"bound-state determinant off its phase axis at E={root}", RuntimeWarning)
            if roots and root - roots[-1] < 1e-12:
                continue
            roots.append(root)
            residuals.append(abs(bound_state_residual(profile, root, units, n_max)))
    if len(roots) > 1 and min(np.diff(roots)) < 2 * step:
        warnings.warn(
            "bound states closer than two scan steps; raise scan_points if a split pair looks incomplete", RuntimeWarning
        )
    return BoundStateSet(tuple(roots), tuple(residuals))


@dataclass(frozen=True)
class BenchmarkRow:
    n: int
    iterative: float
    analytical: float | None

    @property
    def ratio(self) -> float | None:
        return None if self.analytical is None else self.analytical / self.iterative


def benchmark_profile(n: int, seed: int = 0) -> PotentialProfile:
    """Reproducible random cascade of ``n`` regions with zero-potential leads."""
    rng = random.Random(seed + 7919 * n)
    return PotentialProfile(0.0, tuple(Region(rng.uniform(0.0, 2.0), rng.uniform(0.2, 1.0)) for _ in range(n)), 0.0)


def _calibrate(fn: Callable[[], object], min_time: float) -> int:
    fn()
    loops = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(loops):
            fn()
        elapsed = time.perf_counter() - t0
        if elapsed >= min_time:
            return loops
        loops *= 2 if elapsed == 0 else max(2, int(math.ceil(min_time / elapsed)))


def _time_loops(fn: Callable[[], object], loops: int) -> float:
    t0 = time.perf_counter()
    for _ in range(loops):
        fn()
    return (time.perf_counter() - t0) / loops


def benchmark(
    sizes: Sequence[int],
    repetitions: int = 5,
    units: UnitSystem = NATURAL,
    energy: float = 1.3,
    n_max: int = N_MAX,
    min_time: float = 2e-3,
) -> list[BenchmarkRow]:
    """Median wall time per impedance evaluation for both engines.

    Repetitions run round-robin over all sizes and both engines so that slow
    periods on a shared machine are spread across the table.  Sizes above
    ``n_max`` skip the analytical arm.
    """
    arms = []
    for n in sizes:
        profile = benchmark_profile(n)
        cells = [lambda p=profile: input_impedance_iterative(p, energy, units)]
        if n <= n_max:
            cells.append(lambda p=profile: input_impedance_analytical(p, energy, units, n_max))
        arms.append(cells)
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        loops = [[_calibrate(fn, min_time) for fn in cells] for cells in arms]
        samples = [[[] for _ in cells] for cells in arms]
        for _ in range(repetitions):
            for cells, cell_loops, cell_samples in zip(arms, loops, samples):
                for fn, count, out in zip(cells, cell_loops, cell_samples):
                    out.append(_time_loops(fn, count))
    finally:
        if gc_was_enabled:
            gc.enable()
    rows = []
    for n, cell_samples in zip(sizes, samples):
        medians = [statistics.median(x) for x in cell_samples]
        rows.append(BenchmarkRow(n, medians[0], medians[1] if len(medians) > 1 else None))
    return rows
