"""Observational data containers: (X, W, Y) triples, splitting, scaling, CSV I/O."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A CSV file does not conform to the declared column schema."""


def _frozen_array(values, dtype=float) -> np.ndarray:
    out = np.array(values, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Dataset:
    """An observational sample: feature matrix, binary treatment, real outcome.

    ``true_cate`` holds the exact per-row treatment effect and is only
    available for synthetic data; estimators never see it.

    All arrays are copied and marked read-only, so a Dataset can be shared
    freely between workers.
    """

    features: np.ndarray
    treatment: np.ndarray
    outcome: np.ndarray
    true_cate: np.ndarray | None = None

    def __post_init__(self):
        X = _frozen_array(self.features)
        w = _frozen_array(self.treatment)
        y = _frozen_array(self.outcome)
        if X.ndim != 2:
            raise ValueError(f"features must be 2-d, got shape {X.shape}")
        n, d = X.shape
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got shape {X.shape}")
        if w.shape != (n,) or y.shape != (n,):
            raise ValueError(
                f"row-count mismatch: features {n}, treatment {w.shape}, outcome {y.shape}"
            )
        if not np.isfinite(X).all():
            raise ValueError("features contain non-finite values")
        if not np.isfinite(y).all():
            raise ValueError("outcome contains non-finite values")
        if not np.isin(w, (0.0, 1.0)).all():
            raise ValueError("treatment entries must all be 0 or 1")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "treatment", w)
        object.__setattr__(self, "outcome", y)
        if self.true_cate is not None:
            tau = _frozen_array(self.true_cate)
            if tau.shape != (n,):
                raise ValueError(f"true_cate length {tau.shape} != n={n}")
            if not np.isfinite(tau).all():
                raise ValueError("true_cate contains non-finite values")
            object.__setattr__(self, "true_cate", tau)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        """New Dataset containing the given rows, in the given order."""
        idx = np.asarray(indices, dtype=int)
        tau = None if self.true_cate is None else self.true_cate[idx]
        return Dataset(self.features[idx], self.treatment[idx], self.outcome[idx], tau)


def merge(*parts: Dataset) -> Dataset:
    """Stack datasets row-wise. true_cate is kept only if every part has it."""
    if not parts:
        raise ValueError("nothing to merge")
    X = np.vstack([p.features for p in parts])
    w = np.concatenate([p.treatment for p in parts])
    y = np.concatenate([p.outcome for p in parts])
    tau = None
    if all(p.true_cate is not None for p in parts):
        tau = np.concatenate([p.true_cate for p in parts])
    return Dataset(X, w, y, tau)


@dataclass(frozen=True)
class SplitSpec:
    """Deterministic train/validation/test split fractions plus a shuffle seed."""

    train_frac: float = 0.70
    valid_frac: float = 0.15
    test_frac: float = 0.15
    seed: int = 0

    def __post_init__(self):
        fracs = (self.train_frac, self.valid_frac, self.test_frac)
        for f in fracs:
            if not (0.0 < f < 1.0):
                raise ValueError(f"split fractions must lie in (0,1), got {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-12:
            raise ValueError(f"split fractions must sum to 1, got {sum(fracs)!r}")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


def split(data: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Partition rows into (train, valid, test) subsets.

    Validation and test sizes are floored; the remainder goes to train.
    The permutation depends only on ``spec.seed``.
    """
    n = data.n
    n_valid = int(math.floor(spec.valid_frac * n + 1e-9))
    n_test = int(math.floor(spec.test_frac * n + 1e-9))
    n_train = n - n_valid - n_test
    if min(n_train, n_valid, n_test) < 1:
        raise ValueError(
            f"n={n} too small for nonempty parts with fractions "
            f"({spec.train_frac}, {spec.valid_frac}, {spec.test_frac})"
        )
    perm = np.random.default_rng(spec.seed).permutation(n)
    train = data.subset(perm[:n_train])
    valid = data.subset(perm[n_train : n_train + n_valid])
    test = data.subset(perm[n_train + n_valid :])
    return train, valid, test


_CONSTANT_TOL = 1e-12


@dataclass(frozen=True)
class Standardizer:
    """Per-column location/scale learned from a training feature matrix.

    Columns whose sample standard deviation is (numerically) zero are flagged
    constant and passed through unscaled (effective sd of 1).
    """

    mean: np.ndarray
    sd: np.ndarray
    constant: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen_array(self.mean))
        object.__setattr__(self, "sd", _frozen_array(self.sd))
        object.__setattr__(self, "constant", _frozen_array(self.constant, dtype=bool))
        if not (self.sd > 0).all():
            raise ValueError("stored sd must be positive")

    @property
    def d(self) -> int:
        return self.mean.shape[0]

    def transform_features(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.d:
            raise ValueError(f"expected {self.d} columns, got {X.shape[-1]}")
        return (X - self.mean) / self.sd

    def transform(self, data: Dataset) -> Dataset:
        """Standardize features; treatment, outcome and true_cate pass through."""
        return Dataset(
            self.transform_features(data.features),
            data.treatment,
            data.outcome,
            data.true_cate,
        )


def fit_standardizer(train: Dataset) -> Standardizer:
    """Column means and sample standard deviations (divisor n-1) of train features."""
    if train.n < 2:
        raise ValueError("need at least 2 rows to fit a standardizer")
    mean = train.features.mean(axis=0)
    sd = train.features.std(axis=0, ddof=1)
    constant = sd <= _CONSTANT_TOL * (1.0 + np.abs(mean))
    sd = np.where(constant, 1.0, sd)
    return Standardizer(mean=mean, sd=sd, constant=constant)


def apply_representation(data: Dataset, rep) -> Dataset:
    """Map features through a learned representation; W, Y, true_cate unchanged.

    ``rep`` needs ``input_dim`` and an ``apply(X)`` method (see
    :class:`evocate.nets.RepresentationMap`).
    """
    if rep.input_dim != data.d:
        raise ValueError(
            f"representation expects {rep.input_dim} input columns, data has {data.d}"
        )
    return Dataset(rep.apply(data.features), data.treatment, data.outcome, data.true_cate)


@dataclass(frozen=True)
class CsvSchema:
    """Column names binding a CSV file to a Dataset."""

    feature_cols: tuple[str, ...]
    treatment_col: str = "w"
    outcome_col: str = "y"
    true_cate_col: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "feature_cols", tuple(self.feature_cols))
        if len(self.feature_cols) < 1:
            raise ValueError("need at least one feature column")
        names = list(self.feature_cols) + [self.treatment_col, self.outcome_col]
        if self.true_cate_col is not None:
            names.append(self.true_cate_col)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names in schema: {names}")


def default_schema(d: int, true_cate: bool = False) -> CsvSchema:
    """Schema with feature columns x1..xd, treatment 'w', outcome 'y'."""
    return CsvSchema(
        feature_cols=tuple(f"x{j + 1}" for j in range(d)),
        true_cate_col="true_cate" if true_cate else None,
    )


def _parse_cell(raw: str, column: str, line: int) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise SchemaError(
            f"non-numeric cell {raw!r} in column {column!r} at data row {line}"
        ) from None


def load_csv(path, schema: CsvSchema) -> Dataset:
    """Read a Dataset from a headered CSV file.

    Rows keep file order; columns outside the schema are ignored.
    Raises FileNotFoundError for a missing file and SchemaError for a missing
    column, a non-numeric cell, or a treatment value outside {0, 1}.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        wanted = list(schema.feature_cols) + [schema.treatment_col, schema.outcome_col]
        if schema.true_cate_col is not None:
            wanted.append(schema.true_cate_col)
        missing = [c for c in wanted if c not in header]
        if missing:
            raise SchemaError(f"missing columns {missing} in {path}")
        feats, w, y, tau = [], [], [], []
        for i, row in enumerate(reader, start=1):
            feats.append([_parse_cell(row[c], c, i) for c in schema.feature_cols])
            w_val = _parse_cell(row[schema.treatment_col], schema.treatment_col, i)
            if w_val not in (0.0, 1.0):
                raise SchemaError(
                    f"invalid treatment value {w_val!r} at data row {i}; must be 0 or 1"
                )
            w.append(w_val)
            y.append(_parse_cell(row[schema.outcome_col], schema.outcome_col, i))
            if schema.true_cate_col is not None:
                tau.append(_parse_cell(row[schema.true_cate_col], schema.true_cate_col, i))
    if not feats:
        raise SchemaError(f"no data rows in {path}")
    return Dataset(
        np.array(feats, dtype=float),
        np.array(w, dtype=float),
        np.array(y, dtype=float),
        np.array(tau, dtype=float) if tau else None,
    )


def _fmt(x: float) -> str:
    # repr round-trips float64 exactly through float(), keeping save/load lossless
    return repr(float(x))


def save_csv(data: Dataset, path, schema: CsvSchema | None = None) -> CsvSchema:
    """Write a Dataset as decimal-text CSV; returns the schema used."""
    if schema is None:
        schema = default_schema(data.d, true_cate=data.true_cate is not None)
    if len(schema.feature_cols) != data.d:
        raise ValueError(
            f"schema has {len(schema.feature_cols)} feature columns, data has {data.d}"
        )
    if schema.true_cate_col is not None and data.true_cate is None:
        raise ValueError("schema names a true_cate column but data has none")
    header = list(schema.feature_cols) + [schema.treatment_col, schema.outcome_col]
    if schema.true_cate_col is not None:
        header.append(schema.true_cate_col)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(data.n):
            row = [_fmt(v) for v in data.features[i]]
            row.append(str(int(data.treatment[i])))
            row.append(_fmt(data.outcome[i]))
            if schema.true_cate_col is not None:
                row.append(_fmt(data.true_cate[i]))
            writer.writerow(row)
    return schema
