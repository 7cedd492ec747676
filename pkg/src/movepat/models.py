"""Binary classifiers used to separate positions: L1 logistic regression,
Gaussian naive Bayes, CART, random forest and a one-hidden-layer MLP.

Labels are encoded 0/1 by the caller. Every model is deterministic for a fixed
seed; random streams are derived from (seed, fold, tree), never from scheduling.
Feature matrices may be dense arrays or scipy sparse matrices.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from scipy import sparse
from scipy.special import expit, logsumexp

from movepat._parallel import parallel_map
from movepat.exceptions import DegenerateLabelsError, NotFittedError
from movepat.types import ModelName

logger = logging.getLogger(__name__)

Matrix = np.ndarray | sparse.spmatrix


class Classifier(Protocol):
    """Minimal estimator protocol used by cross-validation."""

    def fit(self, X: Matrix, y: np.ndarray) -> Classifier:
        """Fit on a feature matrix and 0/1 labels."""

    def predict(self, X: Matrix) -> np.ndarray:
        """Predict 0/1 labels."""


def _as_matrix(X: Matrix) -> Matrix:
    if sparse.issparse(X):
        return sparse.csr_matrix(X, dtype=float)
    return np.asarray(X, dtype=float)


def _dense(X: Matrix) -> np.ndarray:
    return X.toarray().astype(float) if sparse.issparse(X) else np.asarray(X, dtype=float)


def _check_training(X: Matrix, y: np.ndarray, *, allow_single_label: bool = False) -> tuple[Matrix, np.ndarray]:
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.int64)
    if len(X.shape) != 2 or X.shape[0] == 0:
        raise DegenerateLabelsError("training data must be a non-empty 2-D matrix")
    if X.shape[1] == 0:
        raise DegenerateLabelsError("training data has no features")
    if len(y) != X.shape[0]:
        raise DegenerateLabelsError(f"{X.shape[0]} rows but {len(y)} labels")
    labels = set(np.unique(y).tolist())
    if not labels <= {0, 1}:
        raise DegenerateLabelsError(f"labels must be encoded 0/1, got {sorted(labels)}")
    if len(labels) < 2 and not allow_single_label:
        raise DegenerateLabelsError("training data holds a single label")
    return X, y


# =============================================================================
# L1 logistic regression
# =============================================================================


def logistic_loss_and_grad(w: np.ndarray, b: float, X: Matrix, y: np.ndarray) -> tuple[float, np.ndarray, float]:
    """Mean log-loss and its gradient w.r.t. (w, b)."""
    z = X @ w + b
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    residual = expit(z) - y
    return loss, X.T @ residual / len(y), float(residual.mean())


def soft_threshold(x: np.ndarray, t: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


@dataclass
class LogisticRegressionL1:
    """Minimizes mean log-loss + ||w||_1 / (C n) by accelerated proximal gradient.

    The bias is not penalized. Stops when the proximal gradient norm drops below
    tol or after max_epochs.
    """

    C: float = 1.0
    tol: float = 1e-4
    max_epochs: int = 1000
    coef_: np.ndarray | None = field(default=None, init=False)
    intercept_: float = field(default=0.0, init=False)
    n_iter_: int = field(default=0, init=False)

    def fit(self, X: Matrix, y: np.ndarray) -> LogisticRegressionL1:
        X, y = _check_training(X, y)
        X = sparse.csr_matrix(X)
        n, p = X.shape
        penalty = 1.0 / (self.C * n)
        augmented = sparse.hstack([X, sparse.csr_matrix(np.ones((n, 1)))], format="csr")
        gram = (augmented @ augmented.T if n < p + 1 else augmented.T @ augmented).toarray()
        lipschitz = 0.25 * float(np.linalg.eigvalsh(gram)[-1]) / n
        step = 1.0 / max(lipschitz, 1e-12)

        w = np.zeros(p)
        b = 0.0
        zw, zb, momentum = w.copy(), b, 1.0
        for epoch in range(1, self.max_epochs + 1):
            _, gw, gb = logistic_loss_and_grad(zw, zb, X, y)
            w_next = soft_threshold(zw - step * gw, step * penalty)
            b_next = zb - step * gb
            mapping = math.sqrt(float(np.sum((zw - w_next) ** 2)) + (zb - b_next) ** 2) / step
            momentum_next = (1.0 + math.sqrt(1.0 + 4.0 * momentum**2)) / 2.0
            beta = (momentum - 1.0) / momentum_next
            zw = w_next + beta * (w_next - w)
            zb = b_next + beta * (b_next - b)
            w, b, momentum = w_next, b_next, momentum_next
            self.n_iter_ = epoch
            if mapping < self.tol:
                break
        else:
            logger.debug(f"logistic regression stopped at max_epochs={self.max_epochs}")
        self.coef_, self.intercept_ = w, b
        return self

    def decision_function(self, X: Matrix) -> np.ndarray:
        if self.coef_ is None:
            raise NotFittedError("LogisticRegressionL1 is not fitted")
        return _as_matrix(X) @ self.coef_ + self.intercept_

    def predict_proba(self, X: Matrix) -> np.ndarray:
        return expit(self.decision_function(X))

    def predict(self, X: Matrix) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)


# =============================================================================
# Gaussian naive Bayes
# =============================================================================


@dataclass
class GaussianNB:
    """Per-class Gaussian likelihood per feature with a variance floor."""

    var_floor: float = 1e-9
    priors_: np.ndarray | None = field(default=None, init=False)
    means_: np.ndarray | None = field(default=None, init=False)
    vars_: np.ndarray | None = field(default=None, init=False)

    def fit(self, X: Matrix, y: np.ndarray) -> GaussianNB:
        X, y = _check_training(X, y)
        X = _dense(X)
        epsilon = max(self.var_floor * float(X.var(axis=0).max()), self.var_floor)
        self.priors_ = np.array([np.mean(y == c) for c in (0, 1)])
        self.means_ = np.vstack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.vars_ = np.vstack([X[y == c].var(axis=0) for c in (0, 1)]) + epsilon
        return self

    def _joint_log_likelihood(self, X: Matrix) -> np.ndarray:
        if self.means_ is None:
            raise NotFittedError("GaussianNB is not fitted")
        X = _dense(X)
        columns = []
        for c in (0, 1):
            norm = -0.5 * np.sum(np.log(2.0 * np.pi * self.vars_[c]))
            quad = -0.5 * np.sum((X - self.means_[c]) ** 2 / self.vars_[c], axis=1)
            columns.append(np.log(self.priors_[c]) + norm + quad)
        return np.column_stack(columns)

    def predict_proba(self, X: Matrix) -> np.ndarray:
        jll = self._joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))

    def predict(self, X: Matrix) -> np.ndarray:
        return np.argmax(self._joint_log_likelihood(X), axis=1).astype(np.int64)


# =============================================================================
# CART and random forest
# =============================================================================

# Gains within this distance of the best count as ties.
GAIN_TOLERANCE = 1e-12


def _gini(positives: np.ndarray, totals: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        share = np.where(totals > 0, positives / np.maximum(totals, 1), 0.0)
    return 1.0 - share**2 - (1.0 - share) ** 2


def _split_gain(left_n: np.ndarray, left_pos: np.ndarray, total: float, positives: float) -> np.ndarray:
    right_n, right_pos = total - left_n, positives - left_pos
    parent = float(_gini(np.array([positives]), np.array([total]))[0])
    return parent - (left_n * _gini(left_pos, left_n) + right_n * _gini(right_pos, right_n)) / total


@dataclass
class _SplitData:
    """A training matrix prepared once for every tree grown on it.

    When every value is 0 or 1, `by_column` holds the transposed matrix in CSR
    form so one product gives the per-column counts of a node.
    """

    dense: np.ndarray
    y: np.ndarray
    by_column: sparse.csr_matrix | None

    @classmethod
    def build(cls, X: Matrix, y: np.ndarray) -> _SplitData:
        dense = _dense(X)
        binary = bool(((dense == 0.0) | (dense == 1.0)).all())
        return cls(dense=dense, y=y.astype(float), by_column=sparse.csr_matrix(dense.T) if binary else None)


@dataclass
class DecisionTree:
    """Greedy Gini CART with unlimited depth.

    A node becomes a leaf when it is pure or no candidate split separates its
    rows. Zero-gain splits are taken. Ties go to the lowest column index, then the
    lowest threshold. With max_features set, a uniform random subset of that
    many non-constant features is evaluated per node.

    Nodes carry a weight per training row (its multiplicity in the node), so a
    bootstrap sample is a weight vector and rows are never copied.
    """

    max_features: int | None = None
    rng: np.random.Generator | None = None
    feature_: list[int] = field(default_factory=list, init=False)
    threshold_: list[float] = field(default_factory=list, init=False)
    left_: list[int] = field(default_factory=list, init=False)
    right_: list[int] = field(default_factory=list, init=False)
    value_: list[int] = field(default_factory=list, init=False)
    depth_: int = field(default=0, init=False)

    def _candidates(self, varying: np.ndarray) -> np.ndarray:
        if self.max_features is None or self.max_features >= len(varying):
            return varying
        rng = self.rng if self.rng is not None else np.random.default_rng(0)
        return np.sort(rng.choice(varying, self.max_features, replace=False))

    def _binary_split(
        self, data: _SplitData, weights: np.ndarray, weighted_pos: np.ndarray, total: float, positives: float
    ) -> tuple[int, float] | None:
        """0/1 features have one cut each; all columns are scored in one product."""
        counts = data.by_column @ np.column_stack([weights, weighted_pos])
        ones, ones_pos = counts[:, 0], counts[:, 1]
        candidates = self._candidates(np.flatnonzero((ones > 0) & (ones < total)))
        if len(candidates) == 0:
            return None
        # zeros go left
        gains = _split_gain(total - ones[candidates], positives - ones_pos[candidates], total, positives)
        best = int(np.flatnonzero(gains >= gains.max() - GAIN_TOLERANCE)[0])
        return int(candidates[best]), 0.5

    def _sorted_split(
        self, data: _SplitData, weights: np.ndarray, weighted_pos: np.ndarray, total: float, positives: float
    ) -> tuple[int, float] | None:
        rows = np.flatnonzero(weights)
        sub = data.dense[rows]
        candidates = self._candidates(np.flatnonzero(sub.min(axis=0) != sub.max(axis=0)))
        if len(candidates) == 0:
            return None
        values = sub[:, candidates]
        order = np.argsort(values, axis=0, kind="stable")
        values = np.take_along_axis(values, order, axis=0)
        left_n = np.cumsum(weights[rows][order], axis=0)[:-1]  # split after sorted position i
        left_pos = np.cumsum(weighted_pos[rows][order], axis=0)[:-1]
        gains = np.where(values[:-1] < values[1:], _split_gain(left_n, left_pos, total, positives), -np.inf)
        per_column = gains.max(axis=0)
        column = int(np.flatnonzero(per_column >= per_column.max() - GAIN_TOLERANCE)[0])
        cut = int(np.argmax(gains[:, column]))
        return int(candidates[column]), float((values[cut, column] + values[cut + 1, column]) / 2.0)

    def _add_leaf(self, value: int) -> int:
        self.feature_.append(-1)
        self.threshold_.append(0.0)
        self.left_.append(-1)
        self.right_.append(-1)
        self.value_.append(value)
        return len(self.feature_) - 1

    def _grow(self, data: _SplitData, weights: np.ndarray) -> DecisionTree:
        self.feature_, self.threshold_, self.left_, self.right_, self.value_ = [], [], [], [], []
        self.depth_ = 0
        split_rule = self._binary_split if data.by_column is not None else self._sorted_split
        root = self._add_leaf(0)
        stack = [(root, np.asarray(weights, dtype=float), 0)]
        while stack:
            node, node_weights, depth = stack.pop()
            weighted_pos = node_weights * data.y
            total, positives = float(node_weights.sum()), float(weighted_pos.sum())
            self.value_[node] = int(positives * 2 > total)  # majority, ties to 0
            self.depth_ = max(self.depth_, depth)
            if positives in (0.0, total):
                continue
            split = split_rule(data, node_weights, weighted_pos, total, positives)
            if split is None:
                continue
            feature, threshold = split
            goes_left = data.dense[:, feature] <= threshold
            left, right = self._add_leaf(0), self._add_leaf(0)
            self.feature_[node], self.threshold_[node] = feature, threshold
            self.left_[node], self.right_[node] = left, right
            stack.append((right, np.where(goes_left, 0.0, node_weights), depth + 1))
            stack.append((left, np.where(goes_left, node_weights, 0.0), depth + 1))
        return self

    def fit(self, X: Matrix, y: np.ndarray) -> DecisionTree:
        X, y = _check_training(X, y, allow_single_label=True)
        return self._grow(_SplitData.build(X, y), np.ones(len(y)))

    @property
    def node_count(self) -> int:
        return len(self.feature_)

    def predict(self, X: Matrix) -> np.ndarray:
        if not self.feature_:
            raise NotFittedError("DecisionTree is not fitted")
        X = _dense(X)
        feature = np.asarray(self.feature_)
        threshold = np.asarray(self.threshold_)
        left, right = np.asarray(self.left_), np.asarray(self.right_)
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            internal = feature[node] >= 0
            if not internal.any():
                break
            at = rows[internal]
            current = node[internal]
            go_left = X[at, feature[current]] <= threshold[current]
            node[internal] = np.where(go_left, left[current], right[current])
        return np.asarray(self.value_)[node].astype(np.int64)


@dataclass
class RandomForest:
    """Majority vote of CART trees grown on bootstrap samples.

    Tree t of fold f draws from default_rng([seed, f, t]). max_features=None
    uses every feature; "sqrt" uses floor(sqrt(columns)), at least 1.
    """

    n_trees: int = 100
    seed: int = 1
    max_features: int | str | None = "sqrt"
    bootstrap: bool = True
    fold: int = 0
    threads: int = 1
    trees_: list[DecisionTree] = field(default_factory=list, init=False)

    def _features(self, p: int) -> int | None:
        if self.max_features == "sqrt":
            return max(1, int(math.isqrt(p)))
        return self.max_features

    def fit(self, X: Matrix, y: np.ndarray) -> RandomForest:
        X, y = _check_training(X, y)
        n, p = X.shape
        max_features = self._features(p)
        data = _SplitData.build(X, y)

        def grow(tree_index: int) -> DecisionTree:
            rng = np.random.default_rng([self.seed, self.fold, tree_index])
            if self.bootstrap:
                weights = np.bincount(rng.integers(0, n, n), minlength=n)
            else:
                weights = np.ones(n)
            return DecisionTree(max_features=max_features, rng=rng)._grow(data, weights)

        self.trees_ = parallel_map(grow, range(self.n_trees), self.threads)
        return self

    def predict(self, X: Matrix) -> np.ndarray:
        if not self.trees_:
            raise NotFittedError("RandomForest is not fitted")
        X = _dense(X)
        votes = np.sum([tree.predict(X) for tree in self.trees_], axis=0)
        return (votes * 2 > len(self.trees_)).astype(np.int64)


# =============================================================================
# Multi-layer perceptron
# =============================================================================


def mlp_loss_and_grad(
    params: dict[str, np.ndarray], X: np.ndarray, y: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy of a ReLU hidden layer + logistic output, with gradients."""
    pre = X @ params["W1"] + params["b1"]
    hidden = np.maximum(pre, 0.0)
    z = hidden @ params["W2"] + params["b2"]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    dz = (expit(z) - y) / len(y)
    dhidden = np.outer(dz, params["W2"]) * (pre > 0)
    grads = {
        "W1": X.T @ dhidden,
        "b1": dhidden.sum(axis=0),
        "W2": hidden.T @ dz,
        "b2": np.array(dz.sum()),
    }
    return loss, grads


def _batch_columns(X: sparse.csr_matrix, batch: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The batch's non-zero columns and the batch restricted to them, dense."""
    rows = X[batch]
    touched, inverse = np.unique(rows.indices, return_inverse=True)
    block = np.zeros((len(batch), len(touched)))
    block[np.repeat(np.arange(len(batch)), np.diff(rows.indptr)), inverse.ravel()] = rows.data
    return touched, block


@dataclass
class MLPClassifier:
    """One hidden ReLU layer trained with Adam on mini-batches.

    Input weights and their moments are only updated for features that are
    non-zero somewhere in the batch (lazy Adam); every other parameter takes a
    full Adam step. Training stops after max_epochs or when the epoch loss has
    not improved by tol for `patience` consecutive epochs.
    """

    hidden: int = 100
    max_epochs: int = 300
    seed: int = 5
    learning_rate: float = 1e-3
    batch_size: int = 32
    tol: float = 1e-6
    patience: int = 10
    fold: int = 0
    params_: dict[str, np.ndarray] | None = field(default=None, init=False)
    loss_curve_: list[float] = field(default_factory=list, init=False)

    def init_params(self, n_features: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
        def glorot(fan_in: int, fan_out: int, shape: tuple[int, ...]) -> np.ndarray:
            bound = math.sqrt(6.0 / (fan_in + fan_out))
            return rng.uniform(-bound, bound, size=shape)

        return {
            "W1": glorot(n_features, self.hidden, (n_features, self.hidden)),
            "b1": glorot(n_features, self.hidden, (self.hidden,)),
            "W2": glorot(self.hidden, 1, (self.hidden,)),
            "b2": np.array(glorot(self.hidden, 1, (1,))[0]),
        }

    def fit(self, X: Matrix, y: np.ndarray) -> MLPClassifier:
        X, y = _check_training(X, y)
        X = sparse.csr_matrix(X)
        y = y.astype(float)
        n = X.shape[0]
        rng = np.random.default_rng([self.seed, self.fold])
        params = self.init_params(X.shape[1], rng)
        first = {name: np.zeros_like(value) for name, value in params.items()}
        second = {name: np.zeros_like(value) for name, value in params.items()}
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        step = 0
        best, stale = np.inf, 0
        self.loss_curve_ = []
        for _ in range(self.max_epochs):
            order = rng.permutation(n)
            total = 0.0
            for start in range(0, n, self.batch_size):
                batch = order[start : start + self.batch_size]
                touched, block = _batch_columns(X, batch)
                loss, grads = mlp_loss_and_grad({**params, "W1": params["W1"][touched]}, block, y[batch])
                total += loss * len(batch)
                step += 1
                corrected = self.learning_rate * math.sqrt(1 - beta2**step) / (1 - beta1**step)
                for name, grad in grads.items():
                    at = touched if name == "W1" else Ellipsis
                    first[name][at] = beta1 * first[name][at] + (1 - beta1) * grad
                    second[name][at] = beta2 * second[name][at] + (1 - beta2) * grad**2
                    params[name][at] -= corrected * first[name][at] / (np.sqrt(second[name][at]) + eps)
            epoch_loss = total / n
            self.loss_curve_.append(epoch_loss)
            if epoch_loss > best - self.tol:
                stale += 1
                if stale >= self.patience:
                    break
            else:
                stale = 0
            best = min(best, epoch_loss)
        self.params_ = params
        return self

    def predict_proba(self, X: Matrix) -> np.ndarray:
        if self.params_ is None:
            raise NotFittedError("MLPClassifier is not fitted")
        hidden = np.maximum(_as_matrix(X) @ self.params_["W1"] + self.params_["b1"], 0.0)
        return expit(hidden @ self.params_["W2"] + self.params_["b2"])

    def predict(self, X: Matrix) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(np.int64)


# =============================================================================
# Factory
# =============================================================================


def make_model(name: ModelName | str, fold: int = 0, threads: int = 1) -> Classifier:
    """Build a model with the default settings for the given CV fold."""
    name = ModelName(name)
    if name == ModelName.LOGREG:
        return LogisticRegressionL1()
    if name == ModelName.GNB:
        return GaussianNB()
    if name == ModelName.CART:
        return DecisionTree()
    if name == ModelName.RF:
        return RandomForest(seed=1, fold=fold, threads=threads)
    return MLPClassifier(seed=5, fold=fold)


def fit_logreg_l1(X: np.ndarray, y: np.ndarray, C: float = 1.0) -> LogisticRegressionL1:
    return LogisticRegressionL1(C=C).fit(X, y)


def fit_gaussian_nb(X: np.ndarray, y: np.ndarray) -> GaussianNB:
    return GaussianNB().fit(X, y)


def fit_cart(X: np.ndarray, y: np.ndarray) -> DecisionTree:
    return DecisionTree().fit(X, y)


def fit_random_forest(
    X: np.ndarray, y: np.ndarray, n_trees: int = 100, seed: int = 1, max_features: int | str | None = "sqrt", bootstrap: bool = True
) -> RandomForest:
    return RandomForest(n_trees=n_trees, seed=seed, max_features=max_features, bootstrap=bootstrap).fit(X, y)


def fit_mlp(X: np.ndarray, y: np.ndarray, hidden: int = 100, max_epochs: int = 300, seed: int = 5) -> MLPClassifier:
    return MLPClassifier(hidden=hidden, max_epochs=max_epochs, seed=seed).fit(X, y)
