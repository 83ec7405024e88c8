"""Synthetic observational benchmarks with exact effect oracles.

Two data generating processes, identified by their setup tag:

* Setup "a": confounded uniform features.
    X ~ Uniform([0,1]^d),
    e(x) = max(0.1, min(sin(pi x1 x2), 0.9)),
    b(x) = sin(pi x1 x2) + 2 (x3 - 0.5)^2 + x4 + 0.5 x5,
    tau(x) = (x1 + x2) / 2.

* Setup "c": confounded standard-normal features with a constant effect.
    X ~ N(0, I_d),
    e(x) = 1 / (1 + exp(x2 + x3)),
    b(x) = 2 log(1 + exp(x1 + x2 + x3)),
    tau(x) = 1.

In both, W | X ~ Bernoulli(e(X)) and Y | X, W ~ N(b(X) + (W - 0.5) tau(X),
sigma^2). Feature, treatment, and noise draws use independent substreams of
the given seed, so two generators with the same seed agree on X regardless
of what is consumed downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

SETUPS = ("a", "c")


@dataclass(frozen=True)
class SynthSpec:
    """Which generator to use and at what size."""

    setup: str
    d: int
    n: int
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "setup", self.setup.lower())
        if self.setup not in SETUPS:
            raise ValueError(f"setup must be one of {SETUPS}, got {self.setup!r}")
        if self.setup == "a" and self.d < 5:
            raise ValueError("setup 'a' needs d >= 5")
        if self.setup == "c" and self.d < 3:
            raise ValueError("setup 'c' needs d >= 3")
        if self.n < 10:
            raise ValueError("need n >= 10")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


def setup_a_spec(n: int = 200, d: int = 24, sigma: float = 1.0) -> SynthSpec:
    return SynthSpec(setup="a", d=d, n=n, sigma=sigma)


def setup_c_spec(n: int = 500, d: int = 12, sigma: float = 1.0) -> SynthSpec:
    return SynthSpec(setup="c", d=d, n=n, sigma=sigma)


def propensity_a(X: np.ndarray) -> np.ndarray:
    """max(0.1, min(sin(pi x1 x2), 0.9)) rowwise."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.clip(np.sin(np.pi * X[:, 0] * X[:, 1]), 0.1, 0.9)


def baseline_a(X: np.ndarray) -> np.ndarray:
    """sin(pi x1 x2) + 2 (x3 - 0.5)^2 + x4 + 0.5 x5 rowwise."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return (
        np.sin(np.pi * X[:, 0] * X[:, 1])
        + 2.0 * (X[:, 2] - 0.5) ** 2
        + X[:, 3]
        + 0.5 * X[:, 4]
    )


def cate_a(X: np.ndarray) -> np.ndarray:
    """(x1 + x2) / 2 rowwise."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return (X[:, 0] + X[:, 1]) / 2.0


def propensity_c(X: np.ndarray) -> np.ndarray:
    """1 / (1 + exp(x2 + x3)) rowwise."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return 1.0 / (1.0 + np.exp(X[:, 1] + X[:, 2]))


def baseline_c(X: np.ndarray) -> np.ndarray:
    """2 log(1 + exp(x1 + x2 + x3)) rowwise, evaluated stably."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return 2.0 * np.logaddexp(0.0, X[:, 0] + X[:, 1] + X[:, 2])


def cate_c(X: np.ndarray) -> np.ndarray:
    """Constant 1 rowwise."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.ones(X.shape[0])


def _substreams(seed) -> tuple[np.random.Generator, ...]:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return tuple(np.random.default_rng(child) for child in ss.spawn(3))


def _assemble(spec: SynthSpec, X, e, b, tau, rng_w, rng_noise) -> Dataset:
    w = (rng_w.random(spec.n) < e).astype(float)
    y = b + (w - 0.5) * tau + spec.sigma * rng_noise.standard_normal(spec.n)
    return Dataset(features=X, treatment=w, outcome=y, true_cate=tau)


def gen_setup_a(spec: SynthSpec, seed) -> Dataset:
    """Draw a setup-'a' dataset; true_cate holds the exact per-row effect."""
    if spec.setup != "a":
        raise ValueError(f"spec is for setup {spec.setup!r}, not 'a'")
    rng_x, rng_w, rng_noise = _substreams(seed)
    X = rng_x.random((spec.n, spec.d))
    return _assemble(spec, X, propensity_a(X), baseline_a(X), cate_a(X), rng_w, rng_noise)


def gen_setup_c(spec: SynthSpec, seed) -> Dataset:
    """Draw a setup-'c' dataset; true_cate is identically 1."""
    if spec.setup != "c":
        raise ValueError(f"spec is for setup {spec.setup!r}, not 'c'")
    rng_x, rng_w, rng_noise = _substreams(seed)
    X = rng_x.standard_normal((spec.n, spec.d))
    return _assemble(spec, X, propensity_c(X), baseline_c(X), cate_c(X), rng_w, rng_noise)


def generate(spec: SynthSpec, seed) -> Dataset:
    """Dispatch to the generator named by ``spec.setup``."""
    return gen_setup_a(spec, seed) if spec.setup == "a" else gen_setup_c(spec, seed)
