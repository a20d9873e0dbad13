"""Gradient-boosted decision trees for binary classification, from scratch.

Second-order boosting on the logistic loss: each round fits a regression
tree to the per-row gradient/hessian pair, with exact greedy split search
and shrunken Newton leaf values.  Everything is deterministic given the
inputs and the seed — split ties resolve to the lowest feature index, then
the lowest threshold, and subsampling is the only consumer of randomness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y


@dataclass(frozen=True)
class ClassifierConfig:
    """Pipeline-facing hyperparameters for the boosted classifier."""

    n_trees: int = 100
    max_depth: int = 3
    learning_rate: float = 0.1
    subsample: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if not 0.0 < self.subsample <= 1.0:
            raise ValueError(f"subsample must be in (0, 1], got {self.subsample}")


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, value=0.0):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.value = value

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log_loss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())


class GradientBoostedTreesClassifier(BaseEstimator, ClassifierMixin):
    """Boosted regression trees with logistic loss for 0/1 labels.

    Parameters
    ----------
    n_estimators : int
        Boosting rounds.
    max_depth : int
        Maximum tree depth (a stump is depth 1).
    learning_rate : float in (0, 1]
        Shrinkage applied to every leaf value.
    subsample : float in (0, 1]
        Row fraction drawn (without replacement) per round; 1.0 disables
        sampling and makes the fit independent of random_state.
    reg_lambda : float
        L2 regularizer on leaf values.
    random_state : int
        Seed for row subsampling.
    """

    def __init__(self, n_estimators=100, max_depth=3, learning_rate=0.1,
                 subsample=1.0, reg_lambda=1.0, random_state=0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.subsample = subsample
        self.reg_lambda = reg_lambda
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, ensure_min_features=1)
        classes = np.unique(y)
        if not np.array_equal(classes, [0, 1]):
            raise ValueError(f"labels must contain both classes 0 and 1, got {classes}")
        y = y.astype(np.float64)
        n, p = X.shape
        cfg = ClassifierConfig(self.n_estimators, self.max_depth, self.learning_rate, self.subsample)

        rng = np.random.default_rng(self.random_state)
        base_rate = float(y.mean())
        self.init_score_ = float(np.log(base_rate / (1.0 - base_rate)))
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = p

        # one global presort and one contiguous copy per feature; nodes hand
        # partitioned index lists down the tree so search cost tracks node size
        columns = [np.ascontiguousarray(X[:, j]) for j in range(p)]
        presorted = [np.argsort(col, kind="stable") for col in columns]

        margin = np.full(n, self.init_score_)
        self.trees_: list[_Node] = []
        self.train_losses_: list[float] = []
        n_sub = max(1, int(np.floor(self.subsample * n)))
        for _ in range(cfg.n_trees):
            prob = _sigmoid(margin)
            grad = prob - y
            hess = prob * (1.0 - prob)
            if self.subsample < 1.0:
                rows = rng.choice(n, size=n_sub, replace=False)
                in_sample = np.zeros(n, dtype=bool)
                in_sample[rows] = True
                root_lists = [s[in_sample[s]] for s in presorted]
            else:
                root_lists = presorted
            root = self._build(columns, grad, hess, root_lists, depth=0)
            self.trees_.append(root)
            margin = margin + self._tree_margin(root, X)
            self.train_losses_.append(_log_loss(y, _sigmoid(margin)))
        return self

    def _build(self, columns, grad, hess, lists, depth) -> _Node:
        g_sum = float(grad[lists[0]].sum())
        h_sum = float(hess[lists[0]].sum())
        node = _Node(value=-self.learning_rate * g_sum / (h_sum + self.reg_lambda))
        if depth >= self.max_depth or len(lists[0]) < 2:
            return node
        split = self._find_split(columns, grad, hess, lists, g_sum, h_sum)
        if split is None:
            return node
        feature, threshold = split
        node.feature = feature
        node.threshold = threshold
        go_left = columns[feature] <= threshold
        node.left = self._build(columns, grad, hess, [s[go_left[s]] for s in lists], depth + 1)
        node.right = self._build(columns, grad, hess, [s[~go_left[s]] for s in lists], depth + 1)
        return node

    def _find_split(self, columns, grad, hess, lists, g_sum, h_sum):
        lam = self.reg_lambda
        parent = g_sum * g_sum / (h_sum + lam)
        best_gain = 0.0
        best = None
        for j, idx in enumerate(lists):
            xj = columns[j][idx]
            if xj[0] == xj[-1]:
                continue
            # candidate cuts sit between distinct consecutive values only
            cuts = np.flatnonzero(xj[:-1] < xj[1:])
            gl = np.cumsum(grad[idx])[cuts]
            hl = np.cumsum(hess[idx])[cuts]
            gr = g_sum - gl
            hr = h_sum - hl
            gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
            i = int(np.argmax(gain))
            if gain[i] > best_gain:
                best_gain = float(gain[i])
                c = cuts[i]
                best = (j, float((xj[c] + xj[c + 1]) / 2.0))
        return best

    def _tree_margin(self, root: _Node, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X))
        stack = [(root, np.ones(len(X), dtype=bool))]
        while stack:
            node, mask = stack.pop()
            if node.is_leaf:
                out[mask] = node.value
                continue
            left = mask & (X[:, node.feature] <= node.threshold)
            stack.append((node.left, left))
            stack.append((node.right, mask & ~left))
        return out

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "trees_")
        X = check_array(X, dtype=np.float64, ensure_min_samples=0)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, model was fit with {self.n_features_in_}")
        margin = np.full(len(X), self.init_score_)
        for tree in self.trees_:
            margin += self._tree_margin(tree, X)
        return margin

    def predict_proba(self, X) -> np.ndarray:
        p = _sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(np.int64)


def train_classifier(X, y, cfg: ClassifierConfig = ClassifierConfig()) -> GradientBoostedTreesClassifier:
    """Fit the boosted classifier under a pipeline config."""
    model = GradientBoostedTreesClassifier(
        n_estimators=cfg.n_trees,
        max_depth=cfg.max_depth,
        learning_rate=cfg.learning_rate,
        subsample=cfg.subsample,
        random_state=cfg.seed,
    )
    return model.fit(X, y)


def predict_scores(model: GradientBoostedTreesClassifier, X) -> np.ndarray:
    """Raw margins: higher means more link-like; monotone in probability."""
    return model.decision_function(X)
