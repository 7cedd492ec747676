"""Movement-unit alphabet: band thresholds and the 48-symbol character map.

A movement unit is the joint (velocity band, acceleration band, turning band) of
one 0.1 s sample. Units are enumerated velocity-major in the order

    velocity (Walk, Jog, Run, Sprint) x acceleration (Deceleration, Neutral,
    Acceleration) x turning (Straight, Acute, Large, Backwards)

and assigned 'a'..'z' then 'A'..'V'. So Walk-Acceleration-Straight is 'i',
Jog-Acceleration-Straight is 'u' and Sprint-Acceleration-Acute is 'T'.
"""

from __future__ import annotations

import math
import string
from enum import Enum
from itertools import groupby

import numpy as np
from pydantic import BaseModel, Field, model_validator

from movepat.exceptions import ConfigError


class VelocityBand(str, Enum):
    WALK = "Walk"
    JOG = "Jog"
    RUN = "Run"
    SPRINT = "Sprint"


class AccelerationBand(str, Enum):
    DECELERATION = "Deceleration"
    NEUTRAL = "Neutral"
    ACCELERATION = "Acceleration"


class TurningBand(str, Enum):
    STRAIGHT = "Straight"
    ACUTE = "Acute"
    LARGE = "Large"
    BACKWARDS = "Backwards"


VELOCITY_BANDS = list(VelocityBand)
ACCELERATION_BANDS = list(AccelerationBand)
TURNING_BANDS = list(TurningBand)

ALPHABET = string.ascii_lowercase + string.ascii_uppercase[:22]
assert len(ALPHABET) == len(VELOCITY_BANDS) * len(ACCELERATION_BANDS) * len(TURNING_BANDS)

_CHAR_INDEX = {char: index for index, char in enumerate(ALPHABET)}

# Signal domains: (lower, upper, lower inclusive, upper inclusive)
_DOMAINS: dict[str, tuple[float, float, bool, bool]] = {
    "velocity": (0.0, math.inf, True, False),
    "acceleration": (-math.inf, math.inf, False, False),
    "turning": (0.0, 180.0, True, True),
}


class Band(BaseModel):
    """One interval of a signal; bounds may be open or closed."""

    lower: float
    upper: float
    lower_inclusive: bool = True
    upper_inclusive: bool = False

    def contains(self, value: float) -> bool:
        above = value >= self.lower if self.lower_inclusive else value > self.lower
        below = value <= self.upper if self.upper_inclusive else value < self.upper
        return above and below

    def mask(self, values: np.ndarray) -> np.ndarray:
        above = values >= self.lower if self.lower_inclusive else values > self.lower
        below = values <= self.upper if self.upper_inclusive else values < self.upper
        return above & below

    def interior(self, margin: float) -> tuple[float, float]:
        """A closed sub-interval strictly inside this band, clipped to finite values."""
        lower = self.lower if math.isfinite(self.lower) else self.upper - 4.0
        upper = self.upper if math.isfinite(self.upper) else self.lower + 4.0
        width = upper - lower
        pad = min(margin, width / 4)
        return lower + pad, upper - pad


def _band(lower: float, upper: float, lower_inclusive: bool, upper_inclusive: bool) -> Band:
    return Band(lower=lower, upper=upper, lower_inclusive=lower_inclusive, upper_inclusive=upper_inclusive)


def _check_cover(signal: str, bands: list[Band]) -> None:
    """Bands must be ordered, disjoint and cover the signal's domain exactly."""
    lower, upper, lower_inclusive, upper_inclusive = _DOMAINS[signal]
    first, last = bands[0], bands[-1]
    if first.lower != lower or first.lower_inclusive != lower_inclusive:
        raise ConfigError(f"{signal} bands must start at the domain lower bound {lower}", field=signal)
    if last.upper != upper or last.upper_inclusive != upper_inclusive:
        raise ConfigError(f"{signal} bands must end at the domain upper bound {upper}", field=signal)
    for left, right in zip(bands, bands[1:]):
        if left.upper != right.lower:
            raise ConfigError(f"{signal} bands leave a gap or overlap at {left.upper}/{right.lower}", field=signal)
        if left.upper_inclusive == right.lower_inclusive:
            raise ConfigError(
                f"{signal} boundary {left.upper} must belong to exactly one band", field=signal
            )
        if right.lower >= right.upper and not (right.lower_inclusive and right.upper_inclusive):
            raise ConfigError(f"{signal} band starting at {right.lower} is empty", field=signal)


class BandThresholds(BaseModel):
    """Per-signal band intervals; defaults are the standard rugby-tracking thresholds."""

    velocity: list[Band] = Field(
        default_factory=lambda: [
            _band(0.0, 1.70, True, False),  # Walk
            _band(1.70, 3.90, True, True),  # Jog
            _band(3.90, 5.00, False, False),  # Run
            _band(5.00, math.inf, True, False),  # Sprint
        ]
    )
    acceleration: list[Band] = Field(
        default_factory=lambda: [
            _band(-math.inf, -0.20, False, True),  # Deceleration
            _band(-0.20, 0.20, False, False),  # Neutral
            _band(0.20, math.inf, True, False),  # Acceleration
        ]
    )
    turning: list[Band] = Field(
        default_factory=lambda: [
            _band(0.0, 10.0, True, False),  # Straight
            _band(10.0, 45.0, True, False),  # Acute
            _band(45.0, 90.0, True, False),  # Large
            _band(90.0, 180.0, True, True),  # Backwards
        ]
    )

    @model_validator(mode="after")
    def _check_bands(self) -> BandThresholds:
        expected = {"velocity": VELOCITY_BANDS, "acceleration": ACCELERATION_BANDS, "turning": TURNING_BANDS}
        for signal, names in expected.items():
            bands = getattr(self, signal)
            if len(bands) != len(names):
                raise ConfigError(f"{signal} needs {len(names)} bands, got {len(bands)}", field=signal)
            _check_cover(signal, bands)
        return self


class MovementUnit(BaseModel):
    """A band triple and its alphabet character"""

    velocity_band: VelocityBand
    acceleration_band: AccelerationBand
    turning_band: TurningBand
    character: str = Field(min_length=1, max_length=1)

    @property
    def label(self) -> str:
        return f"{self.velocity_band.value}-{self.acceleration_band.value}-{self.turning_band.value}"


def unit_index(velocity_index: int, acceleration_index: int, turning_index: int) -> int:
    return (velocity_index * len(ACCELERATION_BANDS) + acceleration_index) * len(TURNING_BANDS) + turning_index


def encode(velocity: VelocityBand, acceleration: AccelerationBand, turning: TurningBand) -> MovementUnit:
    """Map a band triple to its movement unit."""
    index = unit_index(
        VELOCITY_BANDS.index(velocity), ACCELERATION_BANDS.index(acceleration), TURNING_BANDS.index(turning)
    )
    return MovementUnit(
        velocity_band=velocity, acceleration_band=acceleration, turning_band=turning, character=ALPHABET[index]
    )


def decode(character: str) -> MovementUnit:
    """Map an alphabet character back to its band triple."""
    try:
        index = _CHAR_INDEX[character]
    except KeyError:
        raise ValueError(f"{character!r} is not a movement-unit character") from None
    velocity_index, rest = divmod(index, len(ACCELERATION_BANDS) * len(TURNING_BANDS))
    acceleration_index, turning_index = divmod(rest, len(TURNING_BANDS))
    return MovementUnit(
        velocity_band=VELOCITY_BANDS[velocity_index],
        acceleration_band=ACCELERATION_BANDS[acceleration_index],
        turning_band=TURNING_BANDS[turning_index],
        character=character,
    )


def is_alphabet(symbols: str) -> bool:
    return all(char in _CHAR_INDEX for char in symbols)


def band_of(value: float, bands: list[Band]) -> int:
    """Index of the unique band holding value."""
    for index, band in enumerate(bands):
        if band.contains(value):
            return index
    raise ValueError(f"{value} falls outside every band")


def band_indices(values: np.ndarray, bands: list[Band]) -> np.ndarray:
    """Vectorized band_of; values outside every band get -1."""
    result = np.full(values.shape, -1, dtype=np.int64)
    for index, band in enumerate(bands):
        result[band.mask(values)] = index
    return result


def characters(velocity: np.ndarray, acceleration: np.ndarray, turning: np.ndarray, thresholds: BandThresholds) -> str:
    """Discretize aligned signal arrays into a movement-unit string."""
    v = band_indices(velocity, thresholds.velocity)
    a = band_indices(acceleration, thresholds.acceleration)
    ta = band_indices(turning, thresholds.turning)
    if (v < 0).any() or (a < 0).any() or (ta < 0).any():
        raise ValueError("signal value outside the band domain")
    codes = unit_index(v, a, ta)
    return "".join(ALPHABET[code] for code in codes.tolist())


def describe_pattern(symbols: str) -> list[str]:
    """Gloss a pattern as run-length grouped movement units.

    >>> describe_pattern("GGS")
    ['Run-Acceleration-Straight x2', 'Sprint-Acceleration-Straight']
    """
    glosses = []
    for char, run in groupby(symbols):
        count = len(list(run))
        label = decode(char).label
        glosses.append(f"{label} x{count}" if count > 1 else label)
    return glosses
