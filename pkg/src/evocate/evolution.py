"""Genetic search over hidden-layer feature maps.

A candidate is an outcome network trained to predict Y from X; its hidden
layer is the feature map under selection. A candidate's fitness is the
validation squared error of a freshly trained treatment probe on its hidden
features, so maps that hide treatment information score higher.

Each generation after the first consists of

* the single best candidate of the previous generation, carried over with
  its cached fitness (elitism),
* one offspring per unique pair of the top ``progenitors`` candidates,
  built by row-wise crossover of (M1, b1) followed by a short re-fit of the
  output layer, and
* entirely fresh candidates filling the cohort back to size.

The search returns the feature map of the final generation's fittest
candidate plus a lineage log. Every random choice derives from the master
seed via (generation, slot, purpose) keys, so a run is reproducible and
candidates could be trained concurrently without changing the result.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import Dataset
from .nets import (
    OutcomeNetParams,
    RepresentationMap,
    TrainConfig,
    glorot_init,
    polish_output_layer,
    train_outcome,
    train_treatment_head,
)

_PURPOSE_CANDIDATE = 0
_PURPOSE_HEAD = 1
_PURPOSE_CROSSOVER = 2


def derive_seed(master_seed: int, *key: int) -> int:
    """Deterministic child seed for a (generation, slot, purpose) key."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class EvolveConfig:
    """Search-space and budget parameters for the generational loop."""

    cohort_size: int = 4
    progenitors: int = 2
    generations: int = 5
    rep_width: int = 20
    head_width: int = 10
    offspring_epochs: int = 30
    train: TrainConfig = TrainConfig()
    seed: int = 0

    def __post_init__(self):
        if self.cohort_size < 1:
            raise ValueError("cohort_size must be >= 1")
        if self.progenitors < 2:
            raise ValueError("progenitors must be >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.rep_width < 1 or self.head_width < 1:
            raise ValueError("rep_width and head_width must be >= 1")
        if self.offspring_epochs < 1:
            raise ValueError("offspring_epochs must be >= 1")
        n_offspring = self.progenitors * (self.progenitors - 1) // 2
        if self.generations >= 2 and self.cohort_size < 1 + n_offspring:
            raise ValueError(
                f"cohort_size must be >= {1 + n_offspring} to hold the elite and "
                f"all {n_offspring} offspring of {self.progenitors} progenitors"
            )
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class ScoredCandidate:
    """A trained candidate, its fitness estimate, and how it was created."""

    params: OutcomeNetParams
    fitness: float
    provenance: str  # "fresh", "elite", or "offspring(i,j)"


@dataclass(frozen=True)
class LineageRecord:
    generation: int
    index: int
    provenance: str
    fitness: float


@dataclass(frozen=True)
class EvolveResult:
    representation: RepresentationMap
    best: ScoredCandidate
    lineage: tuple[LineageRecord, ...]


def format_lineage(records) -> str:
    """One structured-text line per candidate."""
    return "\n".join(
        f"generation={r.generation} index={r.index} provenance={r.provenance} "
        f"fitness={r.fitness!r}"
        for r in records
    )


def fitness(
    theta: OutcomeNetParams, train: Dataset, valid: Dataset, config: EvolveConfig
) -> float:
    """Validation squared error of a trained treatment probe on Phi(X).

    Larger values mean the candidate's hidden features are less useful for
    predicting treatment. The probe's seed comes from ``config.train.seed``.
    """
    _, score = train_treatment_head(theta, train, valid, config.train, config.head_width)
    return score


def crossover_rows(
    parent_a: OutcomeNetParams, parent_b: OutcomeNetParams, take_b: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise mix of (M1, b1): row k comes jointly from one parent.

    ``take_b[k]`` true selects parent_b's row k and bias k, else parent_a's.
    """
    if parent_a.M1.shape != parent_b.M1.shape:
        raise ValueError(
            f"parents disagree on shape: {parent_a.M1.shape} vs {parent_b.M1.shape}"
        )
    take_b = np.asarray(take_b, dtype=bool)
    if take_b.shape != (parent_a.m,):
        raise ValueError(f"need one coin per hidden row, got shape {take_b.shape}")
    M1 = np.where(take_b[:, None], parent_b.M1, parent_a.M1)
    b1 = np.where(take_b, parent_b.b1, parent_a.b1)
    return M1, b1


def crossover(
    parent_a: OutcomeNetParams,
    parent_b: OutcomeNetParams,
    train: Dataset,
    config: EvolveConfig,
    rng: np.random.Generator,
) -> OutcomeNetParams:
    """Offspring of two candidates.

    Each hidden row of (M1, b1) is taken from a fair-coin-chosen parent; the
    output layer (M2, b2) is freshly initialized and briefly re-optimized on
    the training data with the mixed rows frozen.
    """
    take_b = rng.integers(0, 2, size=parent_a.m).astype(bool)
    M1, b1 = crossover_rows(parent_a, parent_b, take_b)
    child = OutcomeNetParams(
        M1=M1,
        b1=b1,
        M2=glorot_init(1, parent_a.m, rng),
        b2=0.0,
        activation=parent_a.activation,
    )
    return polish_output_layer(child, train, config.train, rng, config.offspring_epochs)


def _train_candidate(
    train: Dataset, valid: Dataset, config: EvolveConfig, generation: int, slot: int
) -> OutcomeNetParams:
    seed = derive_seed(config.seed, generation, slot, _PURPOSE_CANDIDATE)
    cfg = replace(config.train, seed=seed)
    return train_outcome(train, valid, cfg, config.rep_width)


def _score(
    theta: OutcomeNetParams,
    train: Dataset,
    valid: Dataset,
    config: EvolveConfig,
    generation: int,
    slot: int,
) -> float:
    seed = derive_seed(config.seed, generation, slot, _PURPOSE_HEAD)
    cfg = replace(config, train=replace(config.train, seed=seed))
    return fitness(theta, train, valid, cfg)


def _ranked(cohort: list[ScoredCandidate]) -> list[int]:
    # ties broken by lowest candidate index
    return sorted(range(len(cohort)), key=lambda i: (-cohort[i].fitness, i))


def evolve(train: Dataset, valid: Dataset, config: EvolveConfig) -> EvolveResult:
    """Run the generational search and return the fittest feature map."""
    if train.d != valid.d:
        raise ValueError("train and valid disagree on feature count")
    records: list[LineageRecord] = []
    cohort: list[ScoredCandidate] = []
    for j in range(config.cohort_size):
        theta = _train_candidate(train, valid, config, 1, j)
        score = _score(theta, train, valid, config, 1, j)
        cohort.append(ScoredCandidate(theta, score, "fresh"))
        records.append(LineageRecord(1, j, "fresh", score))

    for t in range(2, config.generations + 1):
        order = _ranked(cohort)
        elite_idx = order[0]
        elite = cohort[elite_idx]
        new_cohort = [ScoredCandidate(elite.params, elite.fitness, "elite")]
        records.append(LineageRecord(t, 0, "elite", elite.fitness))
        top = order[: config.progenitors]
        slot = 1
        for a in range(len(top)):
            for b in range(a + 1, len(top)):
                i, j = top[a], top[b]
                rng = np.random.default_rng(
                    np.random.SeedSequence(
                        config.seed, spawn_key=(t, slot, _PURPOSE_CROSSOVER)
                    )
                )
                child = crossover(cohort[i].params, cohort[j].params, train, config, rng)
                score = _score(child, train, valid, config, t, slot)
                provenance = f"offspring({i},{j})"
                new_cohort.append(ScoredCandidate(child, score, provenance))
                records.append(LineageRecord(t, slot, provenance, score))
                slot += 1
        while len(new_cohort) < config.cohort_size:
            theta = _train_candidate(train, valid, config, t, slot)
            score = _score(theta, train, valid, config, t, slot)
            new_cohort.append(ScoredCandidate(theta, score, "fresh"))
            records.append(LineageRecord(t, slot, "fresh", score))
            slot += 1
        cohort = new_cohort

    best = cohort[_ranked(cohort)[0]]
    return EvolveResult(
        representation=best.params.representation_map(),
        best=best,
        lineage=tuple(records),
    )


def no_fitness_baseline(
    train: Dataset, valid: Dataset, config: EvolveConfig
) -> RepresentationMap:
    """Single candidate's feature map, with no scoring, selection, or crossover.

    Under the same master seed this trains exactly the first candidate that
    :func:`evolve` would train.
    """
    theta = _train_candidate(train, valid, config, 1, 0)
    return theta.representation_map()
