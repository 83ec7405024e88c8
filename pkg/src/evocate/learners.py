"""Treatment-effect estimators built from generic regression models.

Two in-repo base learners, a cross-validated ridge regression and a
squared-error gradient-boosted tree ensemble, both supporting sample
weights, plus the standard meta-learning recipes on top of them:

* SLearner: one model on features augmented with the treatment indicator.
* TLearner: separate models per arm.
* XLearner: per-arm imputed-effect regressions combined by a weight function.
* XLearnerDirectT / XLearnerDirectS: a single regression on the pooled
  imputed effects.
* RLearner: residual-on-residual regression with cross-fitted nuisances.

Every estimator exposes ``fit(X, y, w)`` and ``predict_cate(X)`` and is a
deterministic function of its inputs and construction seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_LAMBDA_GRID = tuple(10.0**k for k in range(-4, 4))


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d feature matrix, got shape {X.shape}")
    return X


def _shuffled_folds(n: int, folds: int, seed: int) -> list[np.ndarray]:
    if not (2 <= folds <= n):
        raise ValueError(f"need 2 <= folds <= n, got folds={folds}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(chunk) for chunk in np.array_split(perm, folds)]


# ---------------------------------------------------------------------------
# Base learner: cross-validated ridge regression
# ---------------------------------------------------------------------------


def solve_ridge(X, y, lam: float, sample_weight=None) -> tuple[np.ndarray, float]:
    """Closed-form ridge coefficients and unpenalized intercept.

    Minimizes sum_i w_i (y_i - x_i . beta - beta0)^2 + lam * |beta|^2 by
    centering at the (weighted) means and solving the normal equations.
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float)
    n, d = X.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
    if w.shape != (n,) or (w < 0).any() or w.sum() <= 0:
        raise ValueError("sample_weight must be nonnegative with positive total")
    wsum = w.sum()
    xm = (w @ X) / wsum
    ym = float(w @ y) / wsum
    Xc = X - xm
    yc = y - ym
    A = (Xc * w[:, None]).T @ Xc + lam * np.eye(d)
    rhs = (Xc * w[:, None]).T @ yc
    try:
        beta = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        beta = np.linalg.lstsq(A, rhs, rcond=None)[0]
    intercept = ym - float(xm @ beta)
    return beta, intercept


class RidgeCV:
    """Ridge regression with the penalty chosen by K-fold cross-validation.

    The grid is searched in ascending order and ties go to the smaller
    penalty. Fold assignment is a deterministic function of ``seed``.
    """

    kind = "ridge-cv"

    def __init__(self, lambdas=DEFAULT_LAMBDA_GRID, folds: int = 5, seed: int = 0):
        if len(lambdas) == 0:
            raise ValueError("lambda grid must be nonempty")
        self.lambdas = tuple(sorted(float(l) for l in lambdas))
        self.folds = folds
        self.seed = seed
        self.coef_ = None
        self.intercept_ = None
        self.lambda_ = None

    def fit(self, X, y, sample_weight=None) -> "RidgeCV":
        X = _as_matrix(X)
        y = np.asarray(y, dtype=float)
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("ridge inputs must be finite")
        n = X.shape[0]
        w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        folds = _shuffled_folds(n, min(self.folds, n), self.seed)
        best_lam, best_mse = None, math.inf
        for lam in self.lambdas:
            sq_sum, w_sum = 0.0, 0.0
            for hold in folds:
                rest = np.setdiff1d(np.arange(n), hold, assume_unique=False)
                beta, b0 = solve_ridge(X[rest], y[rest], lam, w[rest])
                resid = y[hold] - (X[hold] @ beta + b0)
                sq_sum += float(w[hold] @ (resid**2))
                w_sum += float(w[hold].sum())
            mse = sq_sum / w_sum
            if mse < best_mse:
                best_lam, best_mse = lam, mse
        self.lambda_ = best_lam
        self.coef_, self.intercept_ = solve_ridge(X, y, best_lam, w)
        return self

    def predict(self, X) -> np.ndarray:
        if self.coef_ is None:
            raise RuntimeError("predict called before fit")
        return _as_matrix(X) @ self.coef_ + self.intercept_


# ---------------------------------------------------------------------------
# Base learner: gradient-boosted regression trees
# ---------------------------------------------------------------------------


@dataclass
class _TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "_TreeNode | None" = None
    right: "_TreeNode | None" = None
    value: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def best_split(X, r, sample_weight=None, min_leaf: int = 1):
    """Exhaustive best split of a node by weighted squared-error reduction.

    Returns (feature, threshold, gain) or None when no split leaves both
    children with at least ``min_leaf`` rows. Rows with x < threshold go left.
    """
    X = _as_matrix(X)
    r = np.asarray(r, dtype=float)
    n, d = X.shape
    w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
    if n < 2 * min_leaf:
        return None
    order = np.argsort(X, axis=0, kind="stable")
    Xs = np.take_along_axis(X, order, axis=0)
    ws = w[order]
    wrs = (w * r)[order]
    cw = np.cumsum(ws, axis=0)
    cwr = np.cumsum(wrs, axis=0)
    W, S = cw[-1], cwr[-1]
    wl, sl = cw[:-1], cwr[:-1]
    wr_, sr = W - wl, S - sl
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = sl**2 / wl + sr**2 / wr_ - S**2 / W
    counts = np.arange(1, n)[:, None]
    valid = (
        (counts >= min_leaf)
        & (n - counts >= min_leaf)
        & (Xs[1:] > Xs[:-1])
        & (wl > 0)
        & (wr_ > 0)
    )
    gain = np.where(valid, gain, -np.inf)
    flat = int(np.argmax(gain))
    i, f = np.unravel_index(flat, gain.shape)
    if not np.isfinite(gain[i, f]) or gain[i, f] <= 1e-12:
        return None
    lo, hi = Xs[i, f], Xs[i + 1, f]
    threshold = lo + 0.5 * (hi - lo)
    if threshold <= lo:  # adjacent floats; fall back to the upper value
        threshold = hi
    return int(f), float(threshold), float(gain[i, f])


def _weighted_mean(r: np.ndarray, w: np.ndarray) -> float:
    return float((w @ r) / w.sum())


def _grow_tree(X, r, w, depth: int, max_depth: int, min_leaf: int) -> _TreeNode:
    if depth >= max_depth:
        return _TreeNode(value=_weighted_mean(r, w))
    found = best_split(X, r, w, min_leaf)
    if found is None:
        return _TreeNode(value=_weighted_mean(r, w))
    f, t, _ = found
    mask = X[:, f] < t
    return _TreeNode(
        feature=f,
        threshold=t,
        left=_grow_tree(X[mask], r[mask], w[mask], depth + 1, max_depth, min_leaf),
        right=_grow_tree(X[~mask], r[~mask], w[~mask], depth + 1, max_depth, min_leaf),
    )


def _tree_predict(node: _TreeNode, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0])
    stack = [(node, np.arange(X.shape[0]))]
    while stack:
        nd, idx = stack.pop()
        if nd.is_leaf:
            out[idx] = nd.value
            continue
        mask = X[idx, nd.feature] < nd.threshold
        stack.append((nd.left, idx[mask]))
        stack.append((nd.right, idx[~mask]))
    return out


class GradientBoostedTrees:
    """Additive stagewise ensemble of depth-limited regression trees.

    Each stage fits a tree to the current residuals (the squared-error
    gradients) and is shrunk by the learning rate; the initial prediction is
    the (weighted) mean of the targets. Splits are exhaustive, so fitting is
    deterministic; ``seed`` is accepted for interface uniformity.
    """

    kind = "boosted-trees"

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int = 3,
        learning_rate: float = 0.1,
        min_leaf: int = 5,
        seed: int = 0,
    ):
        if n_trees < 0 or max_depth < 1 or min_leaf < 1 or learning_rate <= 0:
            raise ValueError("invalid boosted-trees hyperparameters")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.min_leaf = min_leaf
        self.seed = seed
        self.init_ = None
        self.trees_ = None

    def fit(self, X, y, sample_weight=None) -> "GradientBoostedTrees":
        X = _as_matrix(X)
        y = np.asarray(y, dtype=float)
        n = X.shape[0]
        w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        if w.sum() <= 0:
            raise ValueError("sample_weight must have positive total")
        self.init_ = _weighted_mean(y, w)
        pred = np.full(n, self.init_)
        self.trees_ = []
        for _ in range(self.n_trees):
            tree = _grow_tree(X, y - pred, w, 0, self.max_depth, self.min_leaf)
            self.trees_.append(tree)
            pred += self.learning_rate * _tree_predict(tree, X)
        return self

    def predict(self, X) -> np.ndarray:
        if self.init_ is None:
            raise RuntimeError("predict called before fit")
        X = _as_matrix(X)
        pred = np.full(X.shape[0], self.init_)
        for tree in self.trees_:
            pred += self.learning_rate * _tree_predict(tree, X)
        return pred


# ---------------------------------------------------------------------------
# Propensity estimation
# ---------------------------------------------------------------------------

PROPENSITY_CLIP = 0.01


def _logistic_gd(X, w, l2: float, max_iter: int = 500, tol: float = 1e-10):
    """Full-batch gradient descent for L2-penalized logistic regression.

    Features are standardized internally; the step size comes from the
    Lipschitz bound of the penalized loss, so no line search is needed.
    Returns (coef, intercept, mean, sd) in the original feature scale terms.
    """
    X = _as_matrix(X)
    y = np.asarray(w, dtype=float)
    n, d = X.shape
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd <= 1e-12 * (1.0 + np.abs(mean)), 1.0, sd)
    Z = (X - mean) / sd
    A = np.hstack([Z, np.ones((n, 1))])
    lam = np.concatenate([np.full(d, l2), [0.0]])  # intercept unpenalized
    lip = np.linalg.eigvalsh(A.T @ A / n).max() / 4.0 + 2.0 * l2
    step = 1.0 / lip
    beta = np.zeros(d + 1)
    for _ in range(max_iter):
        p = 1.0 / (1.0 + np.exp(-(A @ beta)))
        grad = A.T @ (p - y) / n + 2.0 * lam * beta
        beta = beta - step * grad
        if np.abs(grad).max() < tol:
            break
    return beta[:d], float(beta[d]), mean, sd


@dataclass
class _LogisticModel:
    coef: np.ndarray
    intercept: float
    mean: np.ndarray
    sd: np.ndarray

    def predict_proba(self, X) -> np.ndarray:
        Z = (_as_matrix(X) - self.mean) / self.sd
        p = 1.0 / (1.0 + np.exp(-(Z @ self.coef + self.intercept)))
        return np.clip(p, PROPENSITY_CLIP, 1.0 - PROPENSITY_CLIP)


@dataclass
class PropensityModel:
    """Cross-fitted treatment-probability estimates, clipped to [0.01, 0.99].

    ``cross_fitted[i]`` comes from the fold model that never saw row i;
    ``predict`` uses the full-data model for new points.
    """

    full_model: _LogisticModel
    fold_models: list
    fold_of: np.ndarray
    cross_fitted: np.ndarray
    clip: float = PROPENSITY_CLIP

    def predict(self, X) -> np.ndarray:
        return self.full_model.predict_proba(X)


def fit_propensity(X, w, folds: int = 5, seed: int = 0, l2: float = 1e-3) -> PropensityModel:
    """L2-regularized logistic regression for P(W=1|X), cross-fitted over folds."""
    X = _as_matrix(X)
    w = np.asarray(w, dtype=float)
    n = X.shape[0]
    if len(np.unique(w)) < 2:
        raise ValueError("treatment has a single class; propensity is not estimable")
    parts = _shuffled_folds(n, folds, seed)
    fold_of = np.empty(n, dtype=int)
    cross = np.empty(n)
    fold_models = []
    for j, hold in enumerate(parts):
        rest = np.setdiff1d(np.arange(n), hold)
        coef, b0, mean, sd = _logistic_gd(X[rest], w[rest], l2)
        model = _LogisticModel(coef, b0, mean, sd)
        fold_models.append(model)
        fold_of[hold] = j
        cross[hold] = model.predict_proba(X[hold])
    coef, b0, mean, sd = _logistic_gd(X, w, l2)
    return PropensityModel(
        full_model=_LogisticModel(coef, b0, mean, sd),
        fold_models=fold_models,
        fold_of=fold_of,
        cross_fitted=cross,
    )


# ---------------------------------------------------------------------------
# Meta-learners
# ---------------------------------------------------------------------------


def _check_xyw(X, y, w):
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    n = X.shape[0]
    if y.shape != (n,) or w.shape != (n,):
        raise ValueError("X, y, w must agree in length")
    if not np.isin(w, (0.0, 1.0)).all():
        raise ValueError("treatment entries must all be 0 or 1")
    return X, y, w


class SLearner:
    """Single model on [X, W]; the effect is the prediction gap W=1 vs W=0.

    The treatment indicator is appended as the last feature column.
    """

    kind = "S"

    def __init__(self, make_base):
        self.make_base = make_base
        self.model_ = None
        self.d_ = None

    def fit(self, X, y, w) -> "SLearner":
        X, y, w = _check_xyw(X, y, w)
        self.d_ = X.shape[1]
        self.model_ = self.make_base().fit(np.hstack([X, w[:, None]]), y)
        return self

    def predict_cate(self, X) -> np.ndarray:
        X = _as_matrix(X)
        ones = np.ones((X.shape[0], 1))
        return self.model_.predict(np.hstack([X, ones])) - self.model_.predict(
            np.hstack([X, 0.0 * ones])
        )


class TLearner:
    """Independent per-arm outcome models; the effect is their difference."""

    kind = "T"

    def __init__(self, make_base):
        self.make_base = make_base
        self.model_treated_ = None
        self.model_control_ = None

    def fit(self, X, y, w) -> "TLearner":
        X, y, w = _check_xyw(X, y, w)
        treated, control = w == 1.0, w == 0.0
        if not treated.any():
            raise ValueError("empty treated arm")
        if not control.any():
            raise ValueError("empty control arm")
        self.model_treated_ = self.make_base().fit(X[treated], y[treated])
        self.model_control_ = self.make_base().fit(X[control], y[control])
        return self

    def predict_cate(self, X) -> np.ndarray:
        return self.model_treated_.predict(X) - self.model_control_.predict(X)


class XLearner:
    """Imputed-effect regressions per arm, blended by a weight function.

    Stage one fits per-arm outcome models as in the T-learner. Stage two
    regresses the imputed effects, y - mu0(x) on the treated and
    mu1(x) - y on the control, and blends the two predictions with weight
    g(x) on the control-side model: ``weight="half"`` uses g = 1/2,
    ``weight="propensity"`` uses a cross-fitted propensity estimate.
    """

    kind = "X"

    def __init__(self, make_base, weight: str = "half", folds: int = 5, seed: int = 0):
        if weight not in ("half", "propensity"):
            raise ValueError("weight must be 'half' or 'propensity'")
        self.make_base = make_base
        self.weight = weight
        self.folds = folds
        self.seed = seed
        self.model_treated_ = None
        self.model_control_ = None
        self.tau_treated_ = None
        self.tau_control_ = None
        self.propensity_ = None
        self.d1_ = None
        self.d0_ = None

    def fit(self, X, y, w) -> "XLearner":
        X, y, w = _check_xyw(X, y, w)
        treated, control = w == 1.0, w == 0.0
        if not treated.any():
            raise ValueError("empty treated arm")
        if not control.any():
            raise ValueError("empty control arm")
        self.model_treated_ = self.make_base().fit(X[treated], y[treated])
        self.model_control_ = self.make_base().fit(X[control], y[control])
        self.d1_ = y[treated] - self.model_control_.predict(X[treated])
        self.d0_ = self.model_treated_.predict(X[control]) - y[control]
        self.tau_treated_ = self.make_base().fit(X[treated], self.d1_)
        self.tau_control_ = self.make_base().fit(X[control], self.d0_)
        if self.weight == "propensity":
            self.propensity_ = fit_propensity(X, w, folds=self.folds, seed=self.seed)
        return self

    def predict_cate(self, X) -> np.ndarray:
        X = _as_matrix(X)
        g = 0.5 if self.weight == "half" else self.propensity_.predict(X)
        return g * self.tau_control_.predict(X) + (1.0 - g) * self.tau_treated_.predict(X)


class _PooledImputedLearner:
    """Shared machinery: one regression on the pooled imputed effects."""

    def __init__(self, make_base):
        self.make_base = make_base
        self.tau_model_ = None
        self.pooled_n_ = None

    def _pooled_targets(self, X, y, w) -> np.ndarray:
        raise NotImplementedError

    def fit(self, X, y, w):
        X, y, w = _check_xyw(X, y, w)
        targets = self._pooled_targets(X, y, w)
        self.pooled_n_ = targets.shape[0]
        self.tau_model_ = self.make_base().fit(X, targets)
        return self

    def predict_cate(self, X) -> np.ndarray:
        return self.tau_model_.predict(X)


class XLearnerDirectT(_PooledImputedLearner):
    """Direct variant: regress pooled imputed effects from per-arm models."""

    kind = "X-direct-T"

    def _pooled_targets(self, X, y, w) -> np.ndarray:
        treated, control = w == 1.0, w == 0.0
        if not treated.any():
            raise ValueError("empty treated arm")
        if not control.any():
            raise ValueError("empty control arm")
        mu1 = self.make_base().fit(X[treated], y[treated])
        mu0 = self.make_base().fit(X[control], y[control])
        targets = np.empty(X.shape[0])
        targets[treated] = y[treated] - mu0.predict(X[treated])
        targets[control] = mu1.predict(X[control]) - y[control]
        return targets


class XLearnerDirectS(_PooledImputedLearner):
    """Direct variant with imputations from a single model on [X, W]."""

    kind = "X-direct-S"

    def _pooled_targets(self, X, y, w) -> np.ndarray:
        mu = self.make_base().fit(np.hstack([X, w[:, None]]), y)
        n = X.shape[0]
        mu0 = mu.predict(np.hstack([X, np.zeros((n, 1))]))
        mu1 = mu.predict(np.hstack([X, np.ones((n, 1))]))
        treated = w == 1.0
        targets = np.where(treated, y - mu0, mu1 - y)
        return targets


class RLearner:
    """Residual-on-residual effect regression with cross-fitted nuisances.

    Out-of-fold estimates of the conditional mean outcome and the treatment
    propensity residualize the data; the effect model is then a weighted
    regression of (y - m(x)) / (w - e(x)) on X with weights (w - e(x))^2,
    which minimizes the empirical residualized squared-error objective over
    the base-learner class.
    """

    kind = "R"

    def __init__(self, make_base, folds: int = 5, seed: int = 0, propensity_l2: float = 1e-3):
        self.make_base = make_base
        self.folds = folds
        self.seed = seed
        self.propensity_l2 = propensity_l2
        self.tau_model_ = None
        self.m_hat_ = None
        self.e_hat_ = None

    def fit(self, X, y, w) -> "RLearner":
        X, y, w = _check_xyw(X, y, w)
        n = X.shape[0]
        if len(np.unique(w)) < 2:
            raise ValueError("treatment has a single class")
        if n < 2 * self.folds:
            raise ValueError(f"need n >= {2 * self.folds} rows for {self.folds}-fold fitting")
        parts = _shuffled_folds(n, self.folds, self.seed)
        m_hat = np.empty(n)
        e_hat = np.empty(n)
        for hold in parts:
            rest = np.setdiff1d(np.arange(n), hold)
            m_hat[hold] = self.make_base().fit(X[rest], y[rest]).predict(X[hold])
            coef, b0, mean, sd = _logistic_gd(X[rest], w[rest], self.propensity_l2)
            e_hat[hold] = _LogisticModel(coef, b0, mean, sd).predict_proba(X[hold])
        self.m_hat_, self.e_hat_ = m_hat, e_hat
        w_resid = w - e_hat  # |w_resid| >= clip > 0 by construction
        pseudo = (y - m_hat) / w_resid
        self.tau_model_ = self.make_base().fit(X, pseudo, sample_weight=w_resid**2)
        return self

    def predict_cate(self, X) -> np.ndarray:
        return self.tau_model_.predict(X)


# ---------------------------------------------------------------------------
# Fitted-model serialization
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def _save_ridge(model: RidgeCV, path: Path) -> None:
    with path.open("w") as fh:
        fh.write("ridge-cv 1\n")
        fh.write(f"lambda {_fmt(model.lambda_)}\n")
        fh.write(f"intercept {_fmt(model.intercept_)}\n")
        fh.write("coef " + " ".join(_fmt(c) for c in model.coef_) + "\n")


def _load_ridge(path: Path) -> RidgeCV:
    lines = path.read_text().splitlines()
    if lines[0] != "ridge-cv 1":
        raise ValueError(f"{path} is not a ridge-cv model file")
    model = RidgeCV()
    model.lambda_ = float(lines[1].split()[1])
    model.intercept_ = float(lines[2].split()[1])
    model.coef_ = np.array([float(v) for v in lines[3].split()[1:]])
    return model


def _write_tree(fh, node: _TreeNode) -> None:
    if node.is_leaf:
        fh.write(f"leaf {_fmt(node.value)}\n")
    else:
        fh.write(f"split {node.feature} {_fmt(node.threshold)}\n")
        _write_tree(fh, node.left)
        _write_tree(fh, node.right)


def _read_tree(lines: list[str], pos: int) -> tuple[_TreeNode, int]:
    parts = lines[pos].split()
    if parts[0] == "leaf":
        return _TreeNode(value=float(parts[1])), pos + 1
    feature, threshold = int(parts[1]), float(parts[2])
    left, pos = _read_tree(lines, pos + 1)
    right, pos = _read_tree(lines, pos)
    return _TreeNode(feature=feature, threshold=threshold, left=left, right=right), pos


def _save_gbrt(model: GradientBoostedTrees, path: Path) -> None:
    with path.open("w") as fh:
        fh.write("boosted-trees 1\n")
        fh.write(f"n_trees {len(model.trees_)}\n")
        fh.write(f"learning_rate {_fmt(model.learning_rate)}\n")
        fh.write(f"init {_fmt(model.init_)}\n")
        for tree in model.trees_:
            _write_tree(fh, tree)


def _load_gbrt(path: Path) -> GradientBoostedTrees:
    lines = path.read_text().splitlines()
    if lines[0] != "boosted-trees 1":
        raise ValueError(f"{path} is not a boosted-trees model file")
    n_trees = int(lines[1].split()[1])
    model = GradientBoostedTrees(n_trees=n_trees)
    model.learning_rate = float(lines[2].split()[1])
    model.init_ = float(lines[3].split()[1])
    model.trees_ = []
    pos = 4
    for _ in range(n_trees):
        tree, pos = _read_tree(lines, pos)
        model.trees_.append(tree)
    return model


_BASE_SAVERS = {"ridge-cv": _save_ridge, "boosted-trees": _save_gbrt}
_BASE_LOADERS = {"ridge-cv": _load_ridge, "boosted-trees": _load_gbrt}


def _save_base(model, path: Path) -> str:
    kind = getattr(model, "kind", None)
    if kind not in _BASE_SAVERS:
        raise ValueError(f"cannot serialize base model of kind {kind!r}")
    _BASE_SAVERS[kind](model, path)
    return kind


@dataclass
class _LoadedCateModel:
    """A deserialized effect model; supports prediction only."""

    kind: str
    parts: dict
    weight: str = "half"

    def predict_cate(self, X) -> np.ndarray:
        X = _as_matrix(X)
        if self.kind == "S":
            ones = np.ones((X.shape[0], 1))
            mu = self.parts["model"]
            return mu.predict(np.hstack([X, ones])) - mu.predict(np.hstack([X, 0 * ones]))
        if self.kind == "T":
            return self.parts["treated"].predict(X) - self.parts["control"].predict(X)
        if self.kind == "X":
            return 0.5 * self.parts["tau_control"].predict(X) + 0.5 * self.parts[
                "tau_treated"
            ].predict(X)
        return self.parts["tau"].predict(X)


_SUBMODEL_FILES = {
    "S": {"model": "model_"},
    "T": {"treated": "model_treated_", "control": "model_control_"},
    "X": {"tau_treated": "tau_treated_", "tau_control": "tau_control_"},
    "X-direct-T": {"tau": "tau_model_"},
    "X-direct-S": {"tau": "tau_model_"},
    "R": {"tau": "tau_model_"},
}


def save_cate_model(model, directory) -> None:
    """Write a fitted effect model as a manifest plus one file per sub-model."""
    kind = getattr(model, "kind", None)
    if kind not in _SUBMODEL_FILES:
        raise ValueError(f"cannot serialize learner of kind {kind!r}")
    if kind == "X" and model.weight != "half":
        raise ValueError("only the constant-weight X-learner is serializable")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for name, attr in _SUBMODEL_FILES[kind].items():
        sub = getattr(model, attr)
        if sub is None:
            raise RuntimeError("model must be fit before serialization")
        filename = f"{name}.txt"
        base_kind = _save_base(sub, directory / filename)
        entries.append((name, base_kind, filename))
    with (directory / "manifest.txt").open("w") as fh:
        fh.write("cate-model 1\n")
        fh.write(f"kind {kind}\n")
        for name, base_kind, filename in entries:
            fh.write(f"part {name} {base_kind} {filename}\n")


def load_cate_model(directory) -> _LoadedCateModel:
    """Reload a serialized effect model for prediction."""
    directory = Path(directory)
    lines = (directory / "manifest.txt").read_text().splitlines()
    if lines[0] != "cate-model 1":
        raise ValueError(f"{directory} does not hold a cate-model manifest")
    kind = lines[1].split()[1]
    parts = {}
    for line in lines[2:]:
        if not line.strip():
            continue
        _, name, base_kind, filename = line.split()
        parts[name] = _BASE_LOADERS[base_kind](directory / filename)
    return _LoadedCateModel(kind=kind, parts=parts)
