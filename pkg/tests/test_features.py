"""Tests for binary observation x pattern matrices."""

import numpy as np
import pytest

from movepat.analysis import union_patterns
from movepat.exceptions import EmptyInputError, KindMismatchError, UnrecoverableInputError
from movepat.features import featurize, read_matrix, write_matrix
from movepat.types import Algorithm, MinedObservation, Pattern, UniquePatternSet


def _mined(observation_id: str, position: str, patterns: list[str]) -> MinedObservation:
    return MinedObservation(
        observation_id=observation_id,
        algorithm=Algorithm.LCCSPM,
        position=position,
        patterns=[Pattern(kind="contiguous", symbols=p, support_count=1, support_fraction=1.0) for p in patterns],
    )


@pytest.fixture
def mined() -> list[MinedObservation]:
    return [
        _mined("P1@M1", "hooker", ["ab", "cd"]),
        _mined("P2@M1", "winger", ["ab", "GGS"]),
        _mined("P3@M1", "winger", []),
    ]


class TestFeaturize:
    """Tests for featurize."""

    def test_columns_and_values(self, mined):
        """Columns follow frequency then ASCII; cells mark membership."""
        matrix = featurize(union_patterns(mined), mined)
        assert matrix.columns == ["ab", "GGS", "cd"]
        assert matrix.rows == ["P1@M1", "P2@M1", "P3@M1"]
        assert matrix.labels == ["hooker", "winger", "winger"]
        np.testing.assert_array_equal(matrix.values, [[1, 0, 1], [1, 1, 0], [0, 0, 0]])

    def test_column_sums_equal_frequencies(self, mined):
        unique = union_patterns(mined)
        assert featurize(unique, mined).column_sums() == unique.frequency

    def test_rows_reconstruct_mined_sets(self, mined):
        matrix = featurize(union_patterns(mined), mined)
        for r, observation in enumerate(mined):
            assert matrix.row_patterns(r) == set(observation.pattern_set)

    def test_pattern_outside_union(self, mined):
        unique = UniquePatternSet(algorithm=Algorithm.LCCSPM, frequency={"ab": 2, "cd": 1})
        with pytest.raises(KindMismatchError):
            featurize(unique, mined)

    def test_algorithm_mismatch(self, mined):
        unique = UniquePatternSet(algorithm=Algorithm.SMP_LCS, frequency={"ab": 2})
        with pytest.raises(KindMismatchError):
            featurize(unique, mined)

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            featurize(UniquePatternSet(algorithm=Algorithm.LCCSPM), [])


class TestMatrixFiles:
    """Tests for the matrix CSV."""

    def test_write_then_read(self, tmp_path, mined):
        matrix = featurize(union_patterns(mined), mined)
        path = tmp_path / "matrix.csv"
        write_matrix(matrix, path)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "observation_id,label,ab,GGS,cd"
        back = read_matrix(path)
        assert (back.columns, back.rows, back.labels) == (matrix.columns, matrix.rows, matrix.labels)
        np.testing.assert_array_equal(back.values, matrix.values)

    def test_pattern_named_like_a_key_column(self, tmp_path):
        """A mined pattern spelled "label" is an ordinary feature column."""
        mined = [_mined("P1@M1", "hooker", ["label", "ab"]), _mined("P2@M1", "winger", ["ab"])]
        matrix = featurize(union_patterns(mined), mined)
        path = tmp_path / "matrix.csv"
        write_matrix(matrix, path)
        assert path.read_text(encoding="utf-8").splitlines()[:2] == ["observation_id,label,ab,label", "P1@M1,hooker,1,1"]
        back = read_matrix(path)
        assert back.columns == ["ab", "label"]
        assert back.labels == ["hooker", "winger"]
        np.testing.assert_array_equal(back.values, [[1, 1], [1, 0]])

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,ab\nP1@M1,1\n", encoding="utf-8")
        with pytest.raises(UnrecoverableInputError):
            read_matrix(path)

    def test_no_rows(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("observation_id,label,ab\n", encoding="utf-8")
        with pytest.raises(EmptyInputError):
            read_matrix(path)
