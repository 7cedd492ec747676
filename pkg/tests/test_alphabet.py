"""Tests for band thresholds, the 48-symbol movement-unit map and pattern glosses."""

import logging
import math
import random

import numpy as np
import pytest

from movepat.alphabet import (
    ALPHABET,
    AccelerationBand,
    Band,
    BandThresholds,
    TurningBand,
    VelocityBand,
    band_indices,
    characters,
    decode,
    describe_pattern,
    encode,
    is_alphabet,
)
from movepat.exceptions import ConfigError, InvalidSampleError
from movepat.ingest import discretize_sample
from movepat.types import TrackingSample

# =============================================================================
# Character map
# =============================================================================


class TestCharacterMap:
    """Tests for the band-triple <-> character bijection."""

    def test_alphabet_has_48_distinct_symbols(self):
        """The alphabet is a..z then A..V."""
        assert len(ALPHABET) == 48
        assert len(set(ALPHABET)) == 48
        assert ALPHABET[0] == "a" and ALPHABET[25] == "z" and ALPHABET[26] == "A" and ALPHABET[-1] == "V"

    def test_round_trip_every_character(self):
        """character -> band triple -> character is the identity."""
        for char in ALPHABET:
            unit = decode(char)
            assert encode(unit.velocity_band, unit.acceleration_band, unit.turning_band).character == char

    def test_every_triple_gets_a_distinct_character(self):
        """All 4 x 3 x 4 triples map to distinct characters."""
        seen = {
            encode(v, a, t).character for v in VelocityBand for a in AccelerationBand for t in TurningBand
        }
        assert seen == set(ALPHABET)

    @pytest.mark.parametrize(
        "char,label",
        [
            ("b", "Walk-Deceleration-Acute"),
            ("d", "Walk-Deceleration-Backwards"),
            ("e", "Walk-Neutral-Straight"),
            ("f", "Walk-Neutral-Acute"),
            ("h", "Walk-Neutral-Backwards"),
            ("i", "Walk-Acceleration-Straight"),
            ("j", "Walk-Acceleration-Acute"),
            ("k", "Walk-Acceleration-Large"),
            ("u", "Jog-Acceleration-Straight"),
            ("v", "Jog-Acceleration-Acute"),
            ("G", "Run-Acceleration-Straight"),
            ("H", "Run-Acceleration-Acute"),
            ("S", "Sprint-Acceleration-Straight"),
            ("T", "Sprint-Acceleration-Acute"),
        ],
    )
    def test_known_characters(self, char, label):
        """Known characters decode to their movement units."""
        assert decode(char).label == label

    def test_decode_rejects_unknown_character(self):
        """Symbols past 'V' are not movement units."""
        with pytest.raises(ValueError):
            decode("W")

    def test_is_alphabet(self):
        """is_alphabet accepts only movement-unit strings."""
        assert is_alphabet("ijfeikhddb")
        assert is_alphabet("GGGGSSTT")
        assert not is_alphabet("abcX")
        assert not is_alphabet("ab1")


# =============================================================================
# Band thresholds
# =============================================================================


class TestBandThresholds:
    """Tests for the default bands and their validation."""

    @pytest.mark.parametrize(
        "velocity,expected",
        [
            (0.0, VelocityBand.WALK),
            (1.6999, VelocityBand.WALK),
            (1.70, VelocityBand.JOG),
            (3.90, VelocityBand.JOG),
            (3.9001, VelocityBand.RUN),
            (4.999, VelocityBand.RUN),
            (5.00, VelocityBand.SPRINT),
            (12.0, VelocityBand.SPRINT),
        ],
    )
    def test_velocity_boundaries(self, velocity, expected):
        """Jog is closed at both ends; Run is open below."""
        unit = discretize_sample(TrackingSample(t=0.0, velocity=velocity, acceleration=0.0, turning_angle=0.0))
        assert unit.velocity_band == expected

    @pytest.mark.parametrize(
        "acceleration,expected",
        [
            (-3.0, AccelerationBand.DECELERATION),
            (-0.20, AccelerationBand.DECELERATION),
            (-0.1999, AccelerationBand.NEUTRAL),
            (0.0, AccelerationBand.NEUTRAL),
            (0.1999, AccelerationBand.NEUTRAL),
            (0.20, AccelerationBand.ACCELERATION),
        ],
    )
    def test_acceleration_boundaries(self, acceleration, expected):
        """-0.20 is a deceleration and 0.20 an acceleration."""
        unit = discretize_sample(TrackingSample(t=0.0, velocity=1.0, acceleration=acceleration, turning_angle=0.0))
        assert unit.acceleration_band == expected

    @pytest.mark.parametrize(
        "turning,expected",
        [
            (0.0, TurningBand.STRAIGHT),
            (9.99, TurningBand.STRAIGHT),
            (10.0, TurningBand.ACUTE),
            (45.0, TurningBand.LARGE),
            (89.99, TurningBand.LARGE),
            (90.0, TurningBand.BACKWARDS),
            (180.0, TurningBand.BACKWARDS),
        ],
    )
    def test_turning_boundaries(self, turning, expected):
        """Turning bounds are closed below."""
        unit = discretize_sample(TrackingSample(t=0.0, velocity=1.0, acceleration=0.0, turning_angle=turning))
        assert unit.turning_band == expected

    def test_worked_examples(self):
        """Three hand-checked samples map to i, q and d."""
        cases = [((1.0, 0.5, 5.0), "i"), ((1.70, 0.0, 0.0), "q"), ((0.5, -0.20, 95.0), "d")]
        for (v, a, ta), char in cases:
            sample = TrackingSample(t=0.0, velocity=v, acceleration=a, turning_angle=ta)
            assert discretize_sample(sample).character == char

    def test_every_finite_value_maps_to_one_band(self):
        """Random values, boundaries included, land in exactly one band per signal."""
        thresholds = BandThresholds()
        rng = random.Random(3)
        boundaries = {
            "velocity": [0.0, 1.7, 3.9, 5.0],
            "acceleration": [-0.2, 0.2],
            "turning": [0.0, 10.0, 45.0, 90.0, 180.0],
        }
        ranges = {"velocity": (0.0, 15.0), "acceleration": (-10.0, 10.0), "turning": (0.0, 180.0)}
        for signal, (low, high) in ranges.items():
            values = boundaries[signal] + [rng.uniform(low, high) for _ in range(500)]
            bands = getattr(thresholds, signal)
            for value in values:
                assert sum(band.contains(value) for band in bands) == 1, (signal, value)
            assert (band_indices(np.array(values), bands) >= 0).all()

    def test_characters_vectorized_matches_scalar(self):
        """The array discretizer agrees with discretize_sample."""
        rng = np.random.default_rng(11)
        v = rng.uniform(0, 9, 200)
        a = rng.uniform(-3, 3, 200)
        ta = rng.uniform(0, 180, 200)
        expected = "".join(
            discretize_sample(TrackingSample(t=0.0, velocity=x, acceleration=y, turning_angle=z)).character
            for x, y, z in zip(v, a, ta)
        )
        assert characters(v, a, ta, BandThresholds()) == expected

    def test_out_of_range_sample_is_clamped_with_a_warning(self, caplog):
        """Negative velocity and turning beyond 180 are clamped and logged, as for whole streams."""
        with caplog.at_level(logging.WARNING, logger="movepat"):
            unit = discretize_sample(TrackingSample(t=2.5, velocity=-0.3, acceleration=0.0, turning_angle=190.0))
        assert unit.velocity_band == VelocityBand.WALK
        assert unit.turning_band == TurningBand.BACKWARDS
        assert "clamped 1 negative velocity" in caplog.text
        assert "clamped 1 turning angle" in caplog.text

    def test_in_range_sample_logs_nothing(self, caplog):
        with caplog.at_level(logging.WARNING, logger="movepat"):
            discretize_sample(TrackingSample(t=0.0, velocity=0.0, acceleration=0.0, turning_angle=180.0))
        assert "clamped" not in caplog.text

    def test_non_finite_signal_is_rejected(self):
        """NaN or infinite signals raise InvalidSampleError."""
        with pytest.raises(InvalidSampleError):
            discretize_sample(TrackingSample(t=1.0, velocity=math.nan, acceleration=0.0, turning_angle=0.0))
        with pytest.raises(InvalidSampleError):
            discretize_sample(TrackingSample(t=1.0, velocity=1.0, acceleration=math.inf, turning_angle=0.0))

    def test_gap_between_bands_is_rejected(self):
        """Bands that leave a gap fail validation with the signal named."""
        bands = [
            Band(lower=0.0, upper=1.5),
            Band(lower=1.7, upper=3.9, upper_inclusive=True),
            Band(lower=3.9, upper=5.0, lower_inclusive=False),
            Band(lower=5.0, upper=math.inf),
        ]
        with pytest.raises(ConfigError) as excinfo:
            BandThresholds(velocity=bands)
        assert excinfo.value.field == "velocity"

    def test_wrong_band_count_is_rejected(self):
        """Acceleration needs exactly three bands."""
        with pytest.raises(ConfigError):
            BandThresholds(acceleration=[Band(lower=-math.inf, upper=math.inf, lower_inclusive=False)])


# =============================================================================
# Glosses
# =============================================================================


class TestDescribePattern:
    """Tests for run-length pattern glosses."""

    def test_runs_are_grouped(self):
        """Repeated units collapse into one gloss with a count."""
        assert describe_pattern("GGS") == ["Run-Acceleration-Straight x2", "Sprint-Acceleration-Straight"]

    def test_single_units(self):
        """Distinct neighbours get one gloss each."""
        assert describe_pattern("uv") == ["Jog-Acceleration-Straight", "Jog-Acceleration-Acute"]

    def test_long_motif(self):
        """A ten-unit run and an eight-unit run give two glosses."""
        assert describe_pattern("GGGGGGGGGGSSSSSSSS") == [
            "Run-Acceleration-Straight x10",
            "Sprint-Acceleration-Straight x8",
        ]
