"""Reader for the plain-text profile format.

Example::

    # symmetric double barrier
    units = natural
    left_lead = 0
    right_lead = 0
    regions:
    # potential  width      (listed left to right)
    5.0  0.5
    0.0  2.0
    5.0  0.5

``units`` is ``natural`` or ``nm-ev``; ``effective_mass`` (electron masses)
applies to ``nm-ev`` only.  Regions are written in reading order, left to
right; the outer lead is on the left and the load lead on the right.
"""

from __future__ import annotations

import math
from pathlib import Path

from .core import PotentialProfile, Region, UnitMode, UnitSystem

KEYS = {"units", "effective_mass", "left_lead", "right_lead"}


class ProfileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<profile>"):
        self.line = line
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def _number(text: str, lineno: int, source: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ProfileFormatError(f"{what} is not a number: {text!r}", lineno, source) from None
    if not math.isfinite(value):
        raise ProfileFormatError(f"{what} must be finite, got {text!r}", lineno, source)
    return value


def parse_profile(text: str, source: str = "<profile>") -> tuple[PotentialProfile, UnitSystem]:
    values: dict[str, tuple[str, int]] = {}
    regions: list[Region] = []
    in_regions = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower() in ("regions:", "[regions]"):
            if in_regions:
                raise ProfileFormatError("duplicate regions section", lineno, source)
            in_regions = True
            continue
        if in_regions:
            fields = line.replace(",", " ").split()
            if len(fields) != 2:
                raise ProfileFormatError(f"expected 'potential width', got {line!r}", lineno, source)
            potential = _number(fields[0], lineno, source, "potential")
            width = _number(fields[1], lineno, source, "width")
            if width <= 0:
                raise ProfileFormatError(f"region width must be positive, got {width!r}", lineno, source)
            regions.append(Region(potential, width))
            continue
        if "=" not in line:
            raise ProfileFormatError(f"expected 'key = value', got {line!r}", lineno, source)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in KEYS:
            raise ProfileFormatError(f"unknown key {key!r}", lineno, source)
        if key in values:
            raise ProfileFormatError(f"duplicate key {key!r}", lineno, source)
        values[key] = (value, lineno)

    for key in ("left_lead", "right_lead"):
        if key not in values:
            raise ProfileFormatError(f"missing required key {key!r}", None, source)
    left = _number(values["left_lead"][0], values["left_lead"][1], source, "left_lead")
    right = _number(values["right_lead"][0], values["right_lead"][1], source, "right_lead")

    mode_text, mode_line = values.get("units", ("natural", None))
    try:
        mode = UnitMode(mode_text.lower())
    except ValueError:
        raise ProfileFormatError(f"unknown units {mode_text!r} (natural or nm-ev)", mode_line, source) from None
    mass = 1.0
    if "effective_mass" in values:
        mass = _number(values["effective_mass"][0], values["effective_mass"][1], source, "effective_mass")
        if mass <= 0:
            raise ProfileFormatError("effective_mass must be positive", values["effective_mass"][1], source)
    return PotentialProfile.from_left_to_right(left, regions, right), UnitSystem(mode, mass)


def load_profile(path: str | Path) -> tuple[PotentialProfile, UnitSystem]:
    path = Path(path)
    return parse_profile(path.read_text(), str(path))


def format_profile(profile: PotentialProfile, units: UnitSystem) -> str:
    lines = [f"units = {units.mode.value}"]
    if units.mode is UnitMode.NANO_EV:
        lines.append(f"effective_mass = {units.effective_mass_ratio!r}")
    lines += [f"left_lead = {profile.left_lead_potential!r}", f"right_lead = {profile.right_lead_potential!r}", "regions:"]
    lines += [f"{r.potential!r} {r.width!r}" for r in profile.left_to_right]
    return "\n".join(lines) + "\n"
