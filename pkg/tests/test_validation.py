"""Tests for k-fold cross-validation, fold metrics and linear importance."""

import logging

import numpy as np
import pytest

from movepat.exceptions import ConfigError, DegenerateLabelsError, NotFittedError
from movepat.features import FeatureMatrix
from movepat.models import LogisticRegressionL1
from movepat.types import CvConfig, ModelName
from movepat.validation import (
    cross_validate,
    encode_labels,
    fold_indices,
    fold_metrics,
    importance_for_matrix,
    top_k_importance,
)


def _separable_matrix(n: int = 40) -> FeatureMatrix:
    """Column 'GG' marks wingers, column 'uv' marks hookers, 'ab' is noise."""
    rng = np.random.default_rng(0)
    labels = ["hooker"] * (n // 2) + ["winger"] * (n - n // 2)
    winger = np.array([label == "winger" for label in labels], dtype=np.uint8)
    noise = rng.integers(0, 2, n).astype(np.uint8)
    return FeatureMatrix(
        columns=["GG", "uv", "ab"],
        rows=[f"P{i:03d}@M01" for i in range(n)],
        values=np.column_stack([winger, 1 - winger, noise]),
        labels=labels,
    )


class _Fixed:
    """A fitted linear model with hand-set weights."""

    def __init__(self, weights):
        self.coef_ = np.asarray(weights, dtype=float)


# =============================================================================
# Labels and folds
# =============================================================================


class TestFolds:
    """Tests for label encoding and fold assignment."""

    def test_labels_in_sorted_order(self):
        y, classes = encode_labels(["winger", "hooker", "winger"])
        assert classes == ["hooker", "winger"]
        np.testing.assert_array_equal(y, [1, 0, 1])

    @pytest.mark.parametrize("labels", [["hooker"] * 3, ["a", "b", "c"]])
    def test_exactly_two_labels(self, labels):
        with pytest.raises(DegenerateLabelsError):
            encode_labels(labels)

    def test_fold_sizes(self):
        """1036 rows over 10 folds: six folds of 104 and four of 103."""
        sizes = [len(test) for _, test in fold_indices(1036)]
        assert sizes == [104] * 6 + [103] * 4

    def test_folds_partition_the_rows(self):
        splits = fold_indices(57, CvConfig(n_splits=5))
        tests = np.concatenate([test for _, test in splits])
        assert sorted(tests.tolist()) == list(range(57))
        for train, test in splits:
            assert not set(train.tolist()) & set(test.tolist())
            assert len(train) + len(test) == 57

    def test_seed_controls_the_shuffle(self):
        first = [test.tolist() for _, test in fold_indices(30, CvConfig(n_splits=3, seed=10))]
        again = [test.tolist() for _, test in fold_indices(30, CvConfig(n_splits=3, seed=10))]
        other = [test.tolist() for _, test in fold_indices(30, CvConfig(n_splits=3, seed=11))]
        assert first == again
        assert first != other

    def test_unshuffled_folds_are_contiguous(self):
        splits = fold_indices(6, CvConfig(n_splits=3, shuffle=False))
        assert [test.tolist() for _, test in splits] == [[0, 1], [2, 3], [4, 5]]

    def test_more_folds_than_rows(self):
        with pytest.raises(ConfigError) as excinfo:
            fold_indices(5, CvConfig(n_splits=10))
        assert excinfo.value.field == "n_splits"


# =============================================================================
# Metrics
# =============================================================================


class TestFoldMetrics:
    """Tests for fold_metrics."""

    def test_perfect(self):
        y = np.array([0, 1, 1, 0])
        metrics = fold_metrics(y, y)
        assert (metrics.accuracy, metrics.precision, metrics.recall, metrics.f1) == (100.0, 1.0, 1.0, 1.0)

    def test_weighted_by_label_frequency(self):
        """Three 0s and one 1; one 0 mispredicted as 1."""
        metrics = fold_metrics(np.array([0, 0, 0, 1]), np.array([0, 0, 1, 1]))
        assert metrics.accuracy == 75.0
        # label 0: p=1, r=2/3; label 1: p=1/2, r=1
        assert metrics.precision == pytest.approx(0.75 * 1.0 + 0.25 * 0.5)
        assert metrics.recall == pytest.approx(0.75)
        assert metrics.f1 == pytest.approx(0.75 * 0.8 + 0.25 * (2 / 3))

    def test_never_predicted_label(self, caplog):
        """Precision of a label never predicted counts as 0, with a warning."""
        with caplog.at_level(logging.WARNING, logger="movepat"):
            metrics = fold_metrics(np.array([0, 1]), np.array([0, 0]), fold=3)
        assert metrics.precision == pytest.approx(0.25)
        assert "fold 3" in caplog.text


# =============================================================================
# Cross-validation
# =============================================================================


class TestCrossValidate:
    """Tests for cross_validate."""

    @pytest.mark.parametrize("model", list(ModelName))
    def test_separable_matrix(self, model):
        """Every family separates a matrix with a perfectly informative column."""
        report = cross_validate(model, _separable_matrix(), CvConfig(n_splits=4), algorithm="lccspm")
        assert report.model == model
        assert report.algorithm == "lccspm"
        assert len(report.folds) == 4
        assert report.accuracy == pytest.approx(100.0)

    def test_mean_of_folds(self):
        report = cross_validate(ModelName.GNB, _separable_matrix(), CvConfig(n_splits=5))
        assert report.f1 == pytest.approx(np.mean([fold.f1 for fold in report.folds]))
        assert sum(fold.n_test for fold in report.folds) == 40

    def test_threads_do_not_change_the_report(self):
        matrix = _separable_matrix(30)
        serial = cross_validate(ModelName.RF, matrix, CvConfig(n_splits=3), threads=1)
        parallel = cross_validate(ModelName.RF, matrix, CvConfig(n_splits=3), threads=3)
        assert serial.model_dump() == parallel.model_dump()

    def test_factory(self):
        """A callable receives the fold index and returns the estimator."""
        seen = []

        def factory(fold):
            seen.append(fold)
            return LogisticRegressionL1()

        cross_validate(factory, _separable_matrix(), CvConfig(n_splits=4))
        assert sorted(seen) == [0, 1, 2, 3]

    def test_single_label_training_fold(self, caplog):
        """A training fold with one label falls back to predicting it."""
        matrix = _separable_matrix(6)
        matrix.labels = ["hooker"] * 5 + ["winger"]
        with caplog.at_level(logging.WARNING, logger="movepat"):
            report = cross_validate(ModelName.LOGREG, matrix, CvConfig(n_splits=6, shuffle=False))
        assert "training rows hold a single label" in caplog.text
        assert report.folds[-1].accuracy == 0.0


# =============================================================================
# Importance
# =============================================================================


class TestImportance:
    """Tests for linear feature importance."""

    def test_ranked_by_absolute_weight(self):
        ranking = top_k_importance(_Fixed([2.0, -3.0, 0.1, 0.0]), ["GG", "uv", "ab", "zz"])
        assert [(e.pattern, e.score) for e in ranking.entries] == [("uv", 3.0), ("GG", 2.0), ("ab", 0.1)]
        assert ranking.entries[0].gloss == ["Jog-Acceleration-Straight", "Jog-Acceleration-Acute"]

    def test_k_limits_the_ranking(self):
        ranking = top_k_importance(_Fixed([2.0, -3.0, 0.1]), ["GG", "uv", "ab"], k=1)
        assert [e.pattern for e in ranking.entries] == ["uv"]

    def test_ties_keep_column_order(self):
        ranking = top_k_importance(_Fixed([1.0, -1.0]), ["b", "a"])
        assert [e.pattern for e in ranking.entries] == ["b", "a"]

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            top_k_importance(LogisticRegressionL1(), ["a"])

    def test_column_count_mismatch(self):
        with pytest.raises(ValueError):
            top_k_importance(_Fixed([1.0]), ["a", "b"])

    def test_informative_columns_rank_first(self):
        """On the separable matrix the noise column is never on top."""
        ranking = importance_for_matrix(_separable_matrix(), k=3)
        assert ranking.entries[0].pattern in {"GG", "uv"}
