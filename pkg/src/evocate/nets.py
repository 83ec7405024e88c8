"""Minimal dense-network engine.

One shared architecture family, written directly in numpy so that training is
a pure function of (data, seed):

* an outcome network ``y ~ M2 . a(M1 . x + b1) + b2`` trained by minibatch
  Adam on squared error, with inverted dropout after the hidden activation
  and an L2 penalty on weight matrices (never on biases);
* its hidden layer ``a(M1 . x + b1)``, reusable as a feature map;
* a treatment probe ``sigmoid(M4 . a(M3 . h + b3) + b4)`` that scores how
  much treatment information a feature map retains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset


class TrainingFailure(RuntimeError):
    """Optimization produced a non-finite loss (exploded training)."""


ACTIVATIONS = ("tanh", "relu", "elu")


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "tanh":
        return np.tanh(z)
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "elu":
        return np.where(z > 0.0, z, np.expm1(z))
    raise ValueError(f"unknown activation {kind!r}")


def _activate_deriv(z: np.ndarray, h: np.ndarray, kind: str) -> np.ndarray:
    # h is the already-computed activation value for the same z
    if kind == "tanh":
        return 1.0 - h * h
    if kind == "relu":
        return (z > 0.0).astype(float)
    if kind == "elu":
        return np.where(z > 0.0, 1.0, h + 1.0)
    raise ValueError(f"unknown activation {kind!r}")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for minibatch Adam training with early stopping."""

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 32
    max_epochs: int = 200
    patience: int = 20
    dropout: float = 0.2
    l2: float = 1e-4
    activation: str = "tanh"
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError("dropout must lie in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.patience < 0:
            raise ValueError("patience must be >= 0")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


def _check_block(name: str, a: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    if arr.shape != shape:
        raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class RepresentationMap:
    """The hidden layer of an outcome network, used as a feature map."""

    M1: np.ndarray
    b1: np.ndarray
    activation: str = "tanh"

    def __post_init__(self):
        m = np.asarray(self.b1).shape[0]
        d = np.asarray(self.M1).shape[1] if np.asarray(self.M1).ndim == 2 else -1
        object.__setattr__(self, "M1", _check_block("M1", self.M1, (m, d)))
        object.__setattr__(self, "b1", _check_block("b1", self.b1, (m,)))
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")

    @property
    def input_dim(self) -> int:
        return self.M1.shape[1]

    @property
    def output_dim(self) -> int:
        return self.M1.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Map one vector (d,) or a matrix (n, d) to the hidden features."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.input_dim:
            raise ValueError(f"expected {self.input_dim} input columns, got {x.shape[-1]}")
        return _activate(x @ self.M1.T + self.b1, self.activation)


@dataclass(frozen=True)
class OutcomeNetParams:
    """Parameters of the single-hidden-layer outcome network."""

    M1: np.ndarray  # (m, d)
    b1: np.ndarray  # (m,)
    M2: np.ndarray  # (1, m)
    b2: float
    activation: str = "tanh"

    def __post_init__(self):
        M1 = np.asarray(self.M1, dtype=float)
        if M1.ndim != 2:
            raise ValueError(f"M1 must be 2-d, got shape {M1.shape}")
        m, d = M1.shape
        object.__setattr__(self, "M1", _check_block("M1", M1, (m, d)))
        object.__setattr__(self, "b1", _check_block("b1", self.b1, (m,)))
        object.__setattr__(self, "M2", _check_block("M2", self.M2, (1, m)))
        object.__setattr__(self, "b2", float(self.b2))
        if not math.isfinite(self.b2):
            raise ValueError("b2 is not finite")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")

    @property
    def d(self) -> int:
        return self.M1.shape[1]

    @property
    def m(self) -> int:
        return self.M1.shape[0]

    def representation_map(self) -> RepresentationMap:
        return RepresentationMap(self.M1, self.b1, self.activation)


@dataclass(frozen=True)
class TreatmentHeadParams:
    """Parameters of the treatment probe stacked on a representation."""

    M3: np.ndarray  # (k, m)
    b3: np.ndarray  # (k,)
    M4: np.ndarray  # (1, k)
    b4: float
    activation: str = "tanh"

    def __post_init__(self):
        M3 = np.asarray(self.M3, dtype=float)
        if M3.ndim != 2:
            raise ValueError(f"M3 must be 2-d, got shape {M3.shape}")
        k, m = M3.shape
        object.__setattr__(self, "M3", _check_block("M3", M3, (k, m)))
        object.__setattr__(self, "b3", _check_block("b3", self.b3, (k,)))
        object.__setattr__(self, "M4", _check_block("M4", self.M4, (1, k)))
        object.__setattr__(self, "b4", float(self.b4))
        if not math.isfinite(self.b4):
            raise ValueError("b4 is not finite")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")

    @property
    def m(self) -> int:
        return self.M3.shape[1]

    @property
    def k(self) -> int:
        return self.M3.shape[0]


def glorot_init(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Normal draws with mean 0 and variance 2 / (rows + cols)."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    return rng.normal(0.0, math.sqrt(2.0 / (rows + cols)), size=(rows, cols))


def init_outcome_params(
    d: int, m: int, rng: np.random.Generator, activation: str = "tanh"
) -> OutcomeNetParams:
    """Fresh outcome network: Glorot-normal weights, zero biases."""
    return OutcomeNetParams(
        M1=glorot_init(m, d, rng),
        b1=np.zeros(m),
        M2=glorot_init(1, m, rng),
        b2=0.0,
        activation=activation,
    )


def init_treatment_head(
    m: int, k: int, rng: np.random.Generator, activation: str = "tanh"
) -> TreatmentHeadParams:
    """Fresh treatment probe: Glorot-normal weights, zero biases."""
    return TreatmentHeadParams(
        M3=glorot_init(k, m, rng),
        b3=np.zeros(k),
        M4=glorot_init(1, k, rng),
        b4=0.0,
        activation=activation,
    )


# ---------------------------------------------------------------------------
# Forward passes (inference, dropout always off)
# ---------------------------------------------------------------------------


def representation(params: OutcomeNetParams, x: np.ndarray) -> np.ndarray:
    """Hidden activations a(M1 . x + b1) for a vector (d,) or matrix (n, d)."""
    return params.representation_map().apply(x)


def forward_outcome(params: OutcomeNetParams, x: np.ndarray):
    """Network output for a vector (returns a float) or a matrix (returns (n,))."""
    h = representation(params, x)
    out = h @ params.M2.ravel() + params.b2
    return float(out) if h.ndim == 1 else out


def forward_treatment(head: TreatmentHeadParams, rep_input: np.ndarray):
    """Probe output in (0, 1) for one representation vector (m,) or a matrix (n, m)."""
    h = np.asarray(rep_input, dtype=float)
    if h.shape[-1] != head.m:
        raise ValueError(f"expected {head.m} input columns, got {h.shape[-1]}")
    a = _activate(h @ head.M3.T + head.b3, head.activation)
    out = _sigmoid(a @ head.M4.ravel() + head.b4)
    return float(out) if h.ndim == 1 else out


# ---------------------------------------------------------------------------
# Losses and gradients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeGrads:
    M1: np.ndarray
    b1: np.ndarray
    M2: np.ndarray
    b2: float


@dataclass(frozen=True)
class TreatmentGrads:
    M3: np.ndarray
    b3: np.ndarray
    M4: np.ndarray
    b4: float


def draw_dropout_mask(rng: np.random.Generator, shape, p: float) -> np.ndarray:
    """Inverted-dropout multiplier: entries are 0 with probability p, else 1/(1-p)."""
    if not (0.0 <= p < 1.0):
        raise ValueError("dropout rate must lie in [0, 1)")
    return (rng.random(shape) >= p).astype(float) / (1.0 - p)


def outcome_loss(
    params: OutcomeNetParams,
    X: np.ndarray,
    y: np.ndarray,
    dropout_mask: np.ndarray | None = None,
    l2: float = 0.0,
) -> float:
    """Mean squared error plus l2 * (|M1|^2 + |M2|^2), with an optional fixed mask."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    h = _activate(X @ params.M1.T + params.b1, params.activation)
    if dropout_mask is not None:
        h = h * dropout_mask
    pred = h @ params.M2.ravel() + params.b2
    mse = float(np.mean((y - pred) ** 2))
    return mse + l2 * (float(np.sum(params.M1**2)) + float(np.sum(params.M2**2)))


def backprop_outcome(
    params: OutcomeNetParams,
    X: np.ndarray,
    y: np.ndarray,
    dropout_mask: np.ndarray | None = None,
    l2: float = 0.0,
) -> OutcomeGrads:
    """Exact gradients of :func:`outcome_loss` for all four parameter blocks."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if X.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    n = X.shape[0]
    z = X @ params.M1.T + params.b1
    h = _activate(z, params.activation)
    h_kept = h if dropout_mask is None else h * dropout_mask
    pred = h_kept @ params.M2.ravel() + params.b2
    dpred = 2.0 * (pred - y) / n
    gM2 = (dpred[None, :] @ h_kept) + 2.0 * l2 * params.M2
    gb2 = float(np.sum(dpred))
    dh = np.outer(dpred, params.M2.ravel())
    if dropout_mask is not None:
        dh = dh * dropout_mask
    dz = dh * _activate_deriv(z, h, params.activation)
    gM1 = dz.T @ X + 2.0 * l2 * params.M1
    gb1 = dz.sum(axis=0)
    return OutcomeGrads(M1=gM1, b1=gb1, M2=gM2, b2=gb2)


def treatment_loss(
    head: TreatmentHeadParams,
    H: np.ndarray,
    w: np.ndarray,
    dropout_mask: np.ndarray | None = None,
    l2: float = 0.0,
) -> float:
    """Mean squared error of the probe against binary labels, plus weight penalty."""
    H = np.atleast_2d(np.asarray(H, dtype=float))
    w = np.asarray(w, dtype=float)
    a = _activate(H @ head.M3.T + head.b3, head.activation)
    if dropout_mask is not None:
        a = a * dropout_mask
    p = _sigmoid(a @ head.M4.ravel() + head.b4)
    mse = float(np.mean((w - p) ** 2))
    return mse + l2 * (float(np.sum(head.M3**2)) + float(np.sum(head.M4**2)))


def backprop_treatment(
    head: TreatmentHeadParams,
    H: np.ndarray,
    w: np.ndarray,
    dropout_mask: np.ndarray | None = None,
    l2: float = 0.0,
) -> TreatmentGrads:
    """Exact gradients of :func:`treatment_loss`."""
    H = np.atleast_2d(np.asarray(H, dtype=float))
    w = np.asarray(w, dtype=float)
    if H.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    n = H.shape[0]
    z3 = H @ head.M3.T + head.b3
    a = _activate(z3, head.activation)
    a_kept = a if dropout_mask is None else a * dropout_mask
    z4 = a_kept @ head.M4.ravel() + head.b4
    p = _sigmoid(z4)
    dz4 = 2.0 * (p - w) / n * p * (1.0 - p)
    gM4 = (dz4[None, :] @ a_kept) + 2.0 * l2 * head.M4
    gb4 = float(np.sum(dz4))
    da = np.outer(dz4, head.M4.ravel())
    if dropout_mask is not None:
        da = da * dropout_mask
    dz3 = da * _activate_deriv(z3, a, head.activation)
    gM3 = dz3.T @ H + 2.0 * l2 * head.M3
    gb3 = dz3.sum(axis=0)
    return TreatmentGrads(M3=gM3, b3=gb3, M4=gM4, b4=gb4)


# ---------------------------------------------------------------------------
# Adam
# ---------------------------------------------------------------------------


@dataclass
class AdamState:
    """First and second moment accumulators plus the step counter."""

    m: dict
    v: dict
    step: int = 0


def adam_init(blocks: dict) -> AdamState:
    return AdamState(
        m={k: np.zeros_like(v) for k, v in blocks.items()},
        v={k: np.zeros_like(v) for k, v in blocks.items()},
        step=0,
    )


def adam_step(
    blocks: dict, grads: dict, state: AdamState, config: TrainConfig
) -> tuple[dict, AdamState]:
    """One bias-corrected Adam update; returns new blocks and new state."""
    t = state.step + 1
    new_blocks, new_m, new_v = {}, {}, {}
    c1 = 1.0 - config.beta1**t
    c2 = 1.0 - config.beta2**t
    for key, g in grads.items():
        m = config.beta1 * state.m[key] + (1.0 - config.beta1) * g
        v = config.beta2 * state.v[key] + (1.0 - config.beta2) * (g * g)
        update = config.learning_rate * (m / c1) / (np.sqrt(v / c2) + config.eps)
        new_blocks[key] = blocks[key] - update
        new_m[key], new_v[key] = m, v
    for key in blocks:
        if key not in grads:
            new_blocks[key] = blocks[key]
            new_m[key], new_v[key] = state.m[key], state.v[key]
    return new_blocks, AdamState(m=new_m, v=new_v, step=t)


# ---------------------------------------------------------------------------
# Training loops
# ---------------------------------------------------------------------------


def _fit_blocks(
    blocks: dict,
    trainable: tuple[str, ...],
    hidden_width: int,
    predict,
    grad_fn,
    X: np.ndarray,
    y: np.ndarray,
    Xv: np.ndarray | None,
    yv: np.ndarray | None,
    config: TrainConfig,
    rng: np.random.Generator,
    max_epochs: int | None = None,
):
    """Shared minibatch-Adam loop with best-epoch selection on validation MSE.

    The initial parameters count as the epoch-0 candidate, so the returned
    blocks never validate worse than the starting point. Passing ``Xv=None``
    disables validation: the loop runs a fixed number of epochs and returns
    the final parameters (used for the short offspring polish).
    """
    n = X.shape[0]
    epochs = config.max_epochs if max_epochs is None else max_epochs
    state = adam_init({k: blocks[k] for k in trainable})
    validate = Xv is not None

    def val_mse(b):
        return float(np.mean((yv - predict(b, Xv)) ** 2))

    best = {k: v.copy() for k, v in blocks.items()}
    best_val = val_mse(blocks) if validate else math.inf
    if validate and not math.isfinite(best_val):
        raise TrainingFailure("validation loss is non-finite at initialization")
    since_best = 0
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            mask = None
            if config.dropout > 0.0:
                mask = draw_dropout_mask(rng, (len(idx), hidden_width), config.dropout)
            grads = grad_fn(blocks, X[idx], y[idx], mask)
            grads = {k: grads[k] for k in trainable}
            updated, state = adam_step(
                {k: blocks[k] for k in trainable}, grads, state, config
            )
            blocks = {**blocks, **updated}
        if validate:
            v = val_mse(blocks)
            if not math.isfinite(v):
                raise TrainingFailure("validation loss became non-finite during training")
            if v < best_val:
                best_val = v
                best = {k: b.copy() for k, b in blocks.items()}
                since_best = 0
            else:
                since_best += 1
                if since_best >= config.patience:
                    break
    if not validate:
        best = blocks
        train_loss = float(np.mean((y - predict(blocks, X)) ** 2))
        if not math.isfinite(train_loss):
            raise TrainingFailure("loss became non-finite during training")
        best_val = train_loss
    return best, best_val


def _outcome_blocks(params: OutcomeNetParams) -> dict:
    return {
        "M1": params.M1.copy(),
        "b1": params.b1.copy(),
        "M2": params.M2.copy(),
        "b2": np.array([params.b2]),
    }


def _outcome_from_blocks(blocks: dict, activation: str) -> OutcomeNetParams:
    return OutcomeNetParams(
        M1=blocks["M1"],
        b1=blocks["b1"],
        M2=blocks["M2"],
        b2=float(blocks["b2"][0]),
        activation=activation,
    )


def _outcome_predict(activation: str):
    def predict(blocks: dict, X: np.ndarray) -> np.ndarray:
        h = _activate(X @ blocks["M1"].T + blocks["b1"], activation)
        return h @ blocks["M2"].ravel() + blocks["b2"][0]

    return predict


def _outcome_grad(activation: str, l2: float):
    def grad(blocks: dict, X: np.ndarray, y: np.ndarray, mask) -> dict:
        params = _outcome_from_blocks(blocks, activation)
        g = backprop_outcome(params, X, y, dropout_mask=mask, l2=l2)
        return {"M1": g.M1, "b1": g.b1, "M2": g.M2, "b2": np.array([g.b2])}

    return grad


def train_outcome(
    train: Dataset,
    valid: Dataset,
    config: TrainConfig,
    width: int,
    init: OutcomeNetParams | None = None,
    trainable: tuple[str, ...] = ("M1", "b1", "M2", "b2"),
    max_epochs: int | None = None,
) -> OutcomeNetParams:
    """Fit the outcome network to ``train``, keeping the best-validating epoch.

    Everything random (initialization, batch order, dropout) is driven by
    ``config.seed``, so identical inputs give bitwise-identical parameters.
    ``init`` and ``trainable`` allow resuming from given parameters and
    freezing blocks (used when polishing crossover offspring).
    """
    rng = np.random.default_rng(config.seed)
    params = init if init is not None else init_outcome_params(
        train.d, width, rng, config.activation
    )
    if params.d != train.d:
        raise ValueError(f"network expects d={params.d}, data has d={train.d}")
    blocks = _outcome_blocks(params)
    best, _ = _fit_blocks(
        blocks,
        trainable,
        params.m,
        _outcome_predict(config.activation),
        _outcome_grad(config.activation, config.l2),
        train.features,
        train.outcome,
        valid.features,
        valid.outcome,
        config,
        rng,
        max_epochs=max_epochs,
    )
    return _outcome_from_blocks(best, config.activation)


def polish_output_layer(
    init: OutcomeNetParams,
    train: Dataset,
    config: TrainConfig,
    rng: np.random.Generator,
    epochs: int,
) -> OutcomeNetParams:
    """Short fixed-budget optimization of (M2, b2) only, with (M1, b1) frozen.

    No validation is consulted; the parameters after the final epoch are
    returned. The caller supplies the random stream (batch order, dropout).
    """
    if init.d != train.d:
        raise ValueError(f"network expects d={init.d}, data has d={train.d}")
    blocks = _outcome_blocks(init)
    best, _ = _fit_blocks(
        blocks,
        ("M2", "b2"),
        init.m,
        _outcome_predict(config.activation),
        _outcome_grad(config.activation, config.l2),
        train.features,
        train.outcome,
        None,
        None,
        config,
        rng,
        max_epochs=epochs,
    )
    return _outcome_from_blocks(best, config.activation)


def _head_blocks(head: TreatmentHeadParams) -> dict:
    return {
        "M3": head.M3.copy(),
        "b3": head.b3.copy(),
        "M4": head.M4.copy(),
        "b4": np.array([head.b4]),
    }


def _head_from_blocks(blocks: dict, activation: str) -> TreatmentHeadParams:
    return TreatmentHeadParams(
        M3=blocks["M3"],
        b3=blocks["b3"],
        M4=blocks["M4"],
        b4=float(blocks["b4"][0]),
        activation=activation,
    )


def train_treatment_head(
    theta: OutcomeNetParams,
    train: Dataset,
    valid: Dataset,
    config: TrainConfig,
    width: int,
) -> tuple[TreatmentHeadParams, float]:
    """Fit the treatment probe on top of a frozen representation.

    Returns the probe and its validation score, the empirical mean of
    |W - g(X)|^2 on the validation split at the best epoch. The score lies
    in [0, 1]; larger means the representation reveals less about treatment.
    """
    rng = np.random.default_rng(config.seed)
    H = representation(theta, train.features)
    Hv = representation(theta, valid.features)
    head = init_treatment_head(theta.m, width, rng, config.activation)
    blocks = _head_blocks(head)

    def predict(b: dict, X: np.ndarray) -> np.ndarray:
        a = _activate(X @ b["M3"].T + b["b3"], config.activation)
        return _sigmoid(a @ b["M4"].ravel() + b["b4"][0])

    def grad(b: dict, X: np.ndarray, w: np.ndarray, mask) -> dict:
        g = backprop_treatment(
            _head_from_blocks(b, config.activation), X, w, dropout_mask=mask, l2=config.l2
        )
        return {"M3": g.M3, "b3": g.b3, "M4": g.M4, "b4": np.array([g.b4])}

    best, best_val = _fit_blocks(
        blocks,
        ("M3", "b3", "M4", "b4"),
        head.k,
        predict,
        grad,
        H,
        train.treatment,
        Hv,
        valid.treatment,
        config,
        rng,
    )
    return _head_from_blocks(best, config.activation), best_val


# ---------------------------------------------------------------------------
# Decimal-text checkpoints
# ---------------------------------------------------------------------------


def _write_values(fh, tag: str, values: np.ndarray) -> None:
    fh.write(tag + " " + " ".join(repr(float(v)) for v in np.ravel(values)) + "\n")


def _read_values(line: str, tag: str, count: int) -> np.ndarray:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise ValueError(f"expected a {tag!r} line, got {line[:40]!r}")
    if len(parts) - 1 != count:
        raise ValueError(f"{tag} carries {len(parts) - 1} values, expected {count}")
    return np.array([float(p) for p in parts[1:]])


def save_outcome_net(params: OutcomeNetParams, path) -> None:
    """Checkpoint all four blocks as decimal text (M1 row-major, then b1, M2, b2)."""
    with Path(path).open("w") as fh:
        fh.write("outcome-net 1\n")
        fh.write(f"dims {params.d} {params.m}\n")
        fh.write(f"activation {params.activation}\n")
        _write_values(fh, "M1", params.M1)
        _write_values(fh, "b1", params.b1)
        _write_values(fh, "M2", params.M2)
        _write_values(fh, "b2", np.array([params.b2]))


def load_outcome_net(path) -> OutcomeNetParams:
    lines = Path(path).read_text().splitlines()
    if len(lines) < 7 or lines[0].strip() != "outcome-net 1":
        raise ValueError(f"{path} is not an outcome-net checkpoint")
    d, m = (int(v) for v in lines[1].split()[1:3])
    activation = lines[2].split()[1]
    M1 = _read_values(lines[3], "M1", m * d).reshape(m, d)
    b1 = _read_values(lines[4], "b1", m)
    M2 = _read_values(lines[5], "M2", m).reshape(1, m)
    b2 = float(_read_values(lines[6], "b2", 1)[0])
    return OutcomeNetParams(M1=M1, b1=b1, M2=M2, b2=b2, activation=activation)


def save_representation(rep: RepresentationMap, path) -> None:
    """Checkpoint a feature map (M1 row-major, b1) as decimal text."""
    with Path(path).open("w") as fh:
        fh.write("feature-map 1\n")
        fh.write(f"dims {rep.input_dim} {rep.output_dim}\n")
        fh.write(f"activation {rep.activation}\n")
        _write_values(fh, "M1", rep.M1)
        _write_values(fh, "b1", rep.b1)


def load_representation(path) -> RepresentationMap:
    lines = Path(path).read_text().splitlines()
    if len(lines) < 5 or lines[0].strip() != "feature-map 1":
        raise ValueError(f"{path} is not a feature-map checkpoint")
    d, m = (int(v) for v in lines[1].split()[1:3])
    activation = lines[2].split()[1]
    M1 = _read_values(lines[3], "M1", m * d).reshape(m, d)
    b1 = _read_values(lines[4], "b1", m)
    return RepresentationMap(M1=M1, b1=b1, activation=activation)
