"""K-fold cross-validation, fold metrics and linear feature importance."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence

import numpy as np
from sklearn.metrics import accuracy_score, precision_recall_fscore_support
from sklearn.model_selection import KFold

from movepat._parallel import parallel_map
from movepat.alphabet import describe_pattern, is_alphabet
from movepat.exceptions import ConfigError, DegenerateLabelsError, NotFittedError
from movepat.features import FeatureMatrix
from movepat.models import Classifier, LogisticRegressionL1, make_model
from movepat.types import CvConfig, CvReport, FoldMetrics, ImportanceEntry, ImportanceRanking, ModelName

logger = logging.getLogger(__name__)

ModelFactory = Callable[[int], Classifier]


def encode_labels(labels: Sequence[str]) -> tuple[np.ndarray, list[str]]:
    """Map two position labels to 0/1 in sorted label order."""
    classes = sorted(set(labels))
    if len(classes) != 2:
        raise DegenerateLabelsError(f"classification needs exactly two labels, found {classes}")
    lookup = {label: index for index, label in enumerate(classes)}
    return np.array([lookup[label] for label in labels], dtype=np.int64), classes


def fold_indices(n_rows: int, cfg: CvConfig | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
    """(train, test) index pairs; test folds are contiguous runs of the shuffled rows."""
    cfg = cfg or CvConfig()
    if cfg.n_splits > n_rows:
        raise ConfigError(f"n_splits={cfg.n_splits} exceeds the {n_rows} available rows", field="n_splits")
    splitter = KFold(n_splits=cfg.n_splits, shuffle=cfg.shuffle, random_state=cfg.seed if cfg.shuffle else None)
    return list(splitter.split(np.zeros(n_rows)))


def fold_metrics(y_true: np.ndarray, y_pred: np.ndarray, fold: int = 0) -> FoldMetrics:
    """Accuracy (percent) and label-frequency-weighted precision, recall and F1.

    Precision of a label that is never predicted is undefined and counted as 0.
    """
    if len(set(y_true.tolist())) < 2:
        logger.warning(f"fold {fold}: test rows hold a single label")
    never_predicted = sorted(set(y_true.tolist()) - set(y_pred.tolist()))
    if never_predicted:
        logger.warning(f"fold {fold}: precision undefined for labels {never_predicted}, counted as 0")
    precision, recall, f1, _ = precision_recall_fscore_support(y_true, y_pred, average="weighted", zero_division=0)
    return FoldMetrics(
        fold=fold,
        n_test=len(y_true),
        accuracy=100.0 * accuracy_score(y_true, y_pred),
        precision=float(precision),
        recall=float(recall),
        f1=float(f1),
    )


class _ConstantModel:
    """Predicts the only label seen in training."""

    def __init__(self) -> None:
        self.label = 0

    def fit(self, X: np.ndarray, y: np.ndarray) -> _ConstantModel:
        self.label = int(y[0])
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.full(X.shape[0], self.label, dtype=np.int64)


def cross_validate(
    model: ModelName | str | ModelFactory,
    matrix: FeatureMatrix,
    cfg: CvConfig | None = None,
    algorithm: str = "",
    threads: int = 1,
) -> CvReport:
    """Cross-validate one model family on a feature matrix.

    `model` is a model name or a factory taking the fold index. Training folds
    holding a single label fall back to predicting that label, with a warning.
    """
    cfg = cfg or CvConfig()
    if isinstance(model, (ModelName, str)):
        name = ModelName(model)
        factory: ModelFactory = lambda fold: make_model(name, fold)
    else:
        name, factory = ModelName.LOGREG, model
    y, _ = encode_labels(matrix.labels)
    X = matrix.values.astype(float)
    splits = fold_indices(len(y), cfg)

    def run(job: tuple[int, tuple[np.ndarray, np.ndarray]]) -> FoldMetrics:
        fold, (train, test) = job
        if len(set(y[train].tolist())) < 2:
            logger.warning(f"{name.value} fold {fold}: training rows hold a single label")
            estimator: Classifier = _ConstantModel()
        else:
            estimator = factory(fold)
        estimator.fit(X[train], y[train])
        return fold_metrics(y[test], estimator.predict(X[test]), fold)

    folds = parallel_map(run, list(enumerate(splits)), threads)
    report = CvReport(
        model=name,
        algorithm=algorithm,
        folds=folds,
        accuracy=float(np.mean([f.accuracy for f in folds])),
        precision=float(np.mean([f.precision for f in folds])),
        recall=float(np.mean([f.recall for f in folds])),
        f1=float(np.mean([f.f1 for f in folds])),
    )
    logger.info(f"{algorithm or 'matrix'} / {name.value}: accuracy {report.accuracy:.2f}%")
    return report


def top_k_importance(model: LogisticRegressionL1, columns: Sequence[str], k: int = 20) -> ImportanceRanking:
    """Rank patterns by |weight|; zero weights are left out."""
    if model.coef_ is None:
        raise NotFittedError("importance needs a fitted linear model")
    if len(columns) != len(model.coef_):
        raise ValueError(f"{len(columns)} column names for {len(model.coef_)} weights")
    scores = np.abs(model.coef_)
    order = sorted(np.flatnonzero(scores).tolist(), key=lambda c: (-scores[c], c))[:k]
    return ImportanceRanking(
        entries=[
            ImportanceEntry(
                pattern=columns[c],
                score=float(scores[c]),
                gloss=describe_pattern(columns[c]) if is_alphabet(columns[c]) else [],
            )
            for c in order
        ]
    )


def importance_for_matrix(matrix: FeatureMatrix, k: int = 20) -> ImportanceRanking:
    """Fit L1 logistic regression on the whole matrix and rank its weights."""
    y, _ = encode_labels(matrix.labels)
    model = LogisticRegressionL1().fit(matrix.values.astype(float), y)
    return top_k_importance(model, matrix.columns, k)
