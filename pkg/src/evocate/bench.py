"""Three-arm ablation harness and calibration reports.

Each trial draws one synthetic dataset, splits it 70/15/15, and evaluates
every requested effect learner under three feature conditions sharing that
same split:

* ``initial``: the raw features;
* ``no-fitness``: features mapped by a single trained candidate, no search;
* ``transformed``: features mapped by the full generational search.

Feature maps are learned on standardized train/valid features (train-set
statistics); effect learners fit on the merged train+valid rows and are
scored by the mean squared error of their effect predictions against the
exact per-row oracle on the test rows. A benchmark aggregates many trials
and runs paired t-tests of each mapped arm against the initial arm.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .data import Dataset, SplitSpec, apply_representation, fit_standardizer, merge, split
from .evolution import EvolveConfig, derive_seed, evolve, no_fitness_baseline
from .learners import (
    GradientBoostedTrees,
    RidgeCV,
    RLearner,
    SLearner,
    TLearner,
    XLearner,
    XLearnerDirectS,
    XLearnerDirectT,
)
from .nets import TrainingFailure
from .stats import paired_t_test
from .synth import generate

ARMS = ("initial", "no-fitness", "transformed")

# trial-level substream purposes (kept distinct from the generator's own)
_TRIAL_DATA = 10
_TRIAL_SPLIT = 11
_TRIAL_EVOLVE = 12
_TRIAL_NO_FITNESS = 13
_TRIAL_LEARNERS = 14


def make_learner_registry() -> dict:
    """Name -> (seed -> fresh estimator) for every learner/base pairing."""

    def ridge(seed):
        return lambda: RidgeCV(seed=seed)

    def gbrt(seed):
        return lambda: GradientBoostedTrees(seed=seed)

    registry = {}
    for base_name, base in (("ridge", ridge), ("gbrt", gbrt)):
        registry[f"s_{base_name}"] = lambda seed, b=base: SLearner(b(seed))
        registry[f"t_{base_name}"] = lambda seed, b=base: TLearner(b(seed))
        registry[f"x_{base_name}"] = lambda seed, b=base: XLearner(b(seed))
        registry[f"xdt_{base_name}"] = lambda seed, b=base: XLearnerDirectT(b(seed))
        registry[f"xds_{base_name}"] = lambda seed, b=base: XLearnerDirectS(b(seed))
        registry[f"r_{base_name}"] = lambda seed, b=base: RLearner(b(seed), seed=seed)
    return registry


LEARNER_REGISTRY = make_learner_registry()
DEFAULT_LEARNERS = (
    "s_ridge",
    "t_ridge",
    "x_ridge",
    "s_gbrt",
    "t_gbrt",
    "x_gbrt",
    "r_ridge",
    "r_gbrt",
)


def resolve_learners(names) -> dict:
    unknown = [n for n in names if n not in LEARNER_REGISTRY]
    if unknown:
        raise ValueError(f"unknown learners {unknown}; choose from {sorted(LEARNER_REGISTRY)}")
    return {n: LEARNER_REGISTRY[n] for n in names}


@dataclass(frozen=True)
class TrialReport:
    """Per-(learner, arm) test MSE for one trial; None marks a failed fit."""

    trial_seed: int
    learner_names: tuple[str, ...]
    cells: dict

    def mse(self, learner: str, arm: str):
        return self.cells[(learner, arm)]


def run_trial(spec, learner_factories: dict, evolve_config: EvolveConfig, trial_seed: int) -> TrialReport:
    """One dataset, one split, all learners on all three arms."""
    data = generate(spec, np.random.SeedSequence(trial_seed, spawn_key=(_TRIAL_DATA,)))
    parts = split(data, SplitSpec(seed=derive_seed(trial_seed, _TRIAL_SPLIT)))
    train, valid, test = parts
    std = fit_standardizer(train)
    strain, svalid, stest = (std.transform(p) for p in parts)

    arms = {"initial": (merge(train, valid), test)}
    try:
        evo_cfg = replace(evolve_config, seed=derive_seed(trial_seed, _TRIAL_EVOLVE))
        rep = evolve(strain, svalid, evo_cfg).representation
        arms["transformed"] = (
            merge(apply_representation(strain, rep), apply_representation(svalid, rep)),
            apply_representation(stest, rep),
        )
    except TrainingFailure:
        arms["transformed"] = None
    try:
        nf_cfg = replace(evolve_config, seed=derive_seed(trial_seed, _TRIAL_NO_FITNESS))
        rep_nf = no_fitness_baseline(strain, svalid, nf_cfg)
        arms["no-fitness"] = (
            merge(apply_representation(strain, rep_nf), apply_representation(svalid, rep_nf)),
            apply_representation(stest, rep_nf),
        )
    except TrainingFailure:
        arms["no-fitness"] = None

    learner_seed = derive_seed(trial_seed, _TRIAL_LEARNERS)
    cells = {}
    for name, factory in learner_factories.items():
        for arm in ARMS:
            if arms[arm] is None:
                cells[(name, arm)] = None
                continue
            fit_part, test_part = arms[arm]
            try:
                model = factory(learner_seed).fit(
                    fit_part.features, fit_part.outcome, fit_part.treatment
                )
                tau_hat = model.predict_cate(test_part.features)
                cells[(name, arm)] = float(np.mean((tau_hat - test_part.true_cate) ** 2))
            except (TrainingFailure, ValueError, np.linalg.LinAlgError):
                cells[(name, arm)] = None
    return TrialReport(
        trial_seed=trial_seed, learner_names=tuple(learner_factories), cells=cells
    )


@dataclass(frozen=True)
class BenchmarkTable:
    """Aggregated trial MSEs plus paired t-tests of each arm vs 'initial'."""

    spec: object
    evolve_config: EvolveConfig
    master_seed: int
    learner_names: tuple[str, ...]
    trial_seeds: tuple[int, ...]
    mse: dict  # (learner, arm) -> tuple of float|None, one per trial
    tests: dict  # (learner, arm != initial) -> (TTestResult|None, n_pairs)

    @property
    def n_trials(self) -> int:
        return len(self.trial_seeds)

    def mean(self, learner: str, arm: str) -> float:
        values = [v for v in self.mse[(learner, arm)] if v is not None]
        if not values:
            return math.nan
        return float(np.mean(values))

    def missing(self, learner: str, arm: str) -> int:
        return sum(v is None for v in self.mse[(learner, arm)])


def _aggregate(spec, evolve_config, master_seed, reports, learner_names) -> BenchmarkTable:
    mse = {
        (name, arm): tuple(r.cells[(name, arm)] for r in reports)
        for name in learner_names
        for arm in ARMS
    }
    tests = {}
    for name in learner_names:
        base = mse[(name, "initial")]
        for arm in ("no-fitness", "transformed"):
            other = mse[(name, arm)]
            pairs = [(a, b) for a, b in zip(other, base) if a is not None and b is not None]
            if len(pairs) >= 2:
                a_vec, b_vec = zip(*pairs)
                tests[(name, arm)] = (paired_t_test(a_vec, b_vec), len(pairs))
            else:
                tests[(name, arm)] = (None, len(pairs))
    return BenchmarkTable(
        spec=spec,
        evolve_config=evolve_config,
        master_seed=master_seed,
        learner_names=tuple(learner_names),
        trial_seeds=tuple(r.trial_seed for r in reports),
        mse=mse,
        tests=tests,
    )


def _trial_worker(args):
    spec, names, evolve_config, trial_seed = args
    return run_trial(spec, resolve_learners(names), evolve_config, trial_seed)


def run_benchmark(
    spec,
    learner_names,
    evolve_config: EvolveConfig,
    trials: int,
    master_seed: int,
    jobs: int = 1,
) -> BenchmarkTable:
    """Run ``trials`` independent trials with seeds master+1 .. master+trials.

    Results are identical for any ``jobs`` value because each trial is a pure
    function of its own seed.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials")
    names = tuple(learner_names)
    resolve_learners(names)  # validate upfront
    seeds = [master_seed + 1 + t for t in range(trials)]
    args = [(spec, names, evolve_config, s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_trial_worker, args))
    else:
        reports = [_trial_worker(a) for a in args]
    return _aggregate(spec, evolve_config, master_seed, reports, names)


def table_to_csv(table: BenchmarkTable) -> str:
    """Rows are learner x arm; columns are per-trial MSEs, mean, t, p, pairs."""
    out = io.StringIO()
    trial_cols = ",".join(f"trial_{i + 1}" for i in range(table.n_trials))
    out.write(f"learner,arm,{trial_cols},mean,t_vs_initial,p_vs_initial,pairs_vs_initial\n")
    for name in table.learner_names:
        for arm in ARMS:
            row = [name, arm]
            row += ["" if v is None else repr(v) for v in table.mse[(name, arm)]]
            mean = table.mean(name, arm)
            row.append("" if math.isnan(mean) else repr(mean))
            if arm == "initial":
                row += ["", "", ""]
            else:
                result, pairs = table.tests[(name, arm)]
                if result is None:
                    row += ["", "", str(pairs)]
                else:
                    row += [repr(result.t), repr(result.p), str(pairs)]
            out.write(",".join(row) + "\n")
    return out.getvalue()


def save_table_csv(table: BenchmarkTable, path) -> None:
    Path(path).write_text(table_to_csv(table))


def format_summary(table: BenchmarkTable) -> str:
    """Human-readable layout: one block per learner, one line per arm."""
    cfg = table.evolve_config
    lines = [
        f"benchmark: setup={getattr(table.spec, 'setup', '?')} trials={table.n_trials} "
        f"master_seed={table.master_seed}",
        f"search: cohort={cfg.cohort_size} progenitors={cfg.progenitors} "
        f"generations={cfg.generations} rep_width={cfg.rep_width} "
        f"head_width={cfg.head_width}",
        "",
        f"{'learner':<12} {'features':<12} {'mean MSE':>10} {'t vs init':>10} "
        f"{'p':>10} {'pairs':>6} {'missing':>8}",
    ]
    for name in table.learner_names:
        for arm in ARMS:
            mean = table.mean(name, arm)
            mean_s = f"{mean:.4f}" if not math.isnan(mean) else "n/a"
            if arm == "initial":
                t_s = p_s = pairs_s = ""
            else:
                result, pairs = table.tests[(name, arm)]
                pairs_s = str(pairs)
                if result is None:
                    t_s, p_s = "n/a", "n/a"
                else:
                    t_s, p_s = f"{result.t:.3f}", f"{result.p:.4g}"
            label = name if arm == "initial" else ""
            lines.append(
                f"{label:<12} {arm:<12} {mean_s:>10} {t_s:>10} {p_s:>10} "
                f"{pairs_s:>6} {table.missing(name, arm):>8}"
            )
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Calibration by predicted-effect bins
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinStats:
    count: int
    n_treated: int
    n_control: int
    predicted_lo: float
    predicted_hi: float
    mean_predicted: float
    realized: float  # nan when undefined
    defined: bool


@dataclass(frozen=True)
class BinReport:
    bins: tuple[BinStats, ...]

    @property
    def all_defined(self) -> bool:
        return all(b.defined for b in self.bins)


def quintile_calibration(tau_hat, w, y, bins: int = 5) -> BinReport:
    """Realized vs predicted effects within equal-count bins of predicted effect.

    Rows are sorted by predicted effect (ties by original index) and cut into
    ``bins`` groups; when the count does not divide evenly the lowest bins
    take one extra row. A bin's realized effect is the mean outcome of its
    treated rows minus the mean outcome of its control rows, undefined when
    either side is empty.
    """
    tau_hat = np.asarray(tau_hat, dtype=float)
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    n = tau_hat.shape[0]
    if w.shape != (n,) or y.shape != (n,):
        raise ValueError("tau_hat, w, y must agree in length")
    if not (1 <= bins <= n):
        raise ValueError(f"need 1 <= bins <= n, got bins={bins}, n={n}")
    order = np.argsort(tau_hat, kind="stable")
    base, extra = divmod(n, bins)
    stats = []
    start = 0
    for b in range(bins):
        size = base + (1 if b < extra else 0)
        idx = order[start : start + size]
        start += size
        treated = idx[w[idx] == 1.0]
        control = idx[w[idx] == 0.0]
        defined = treated.size > 0 and control.size > 0
        realized = float(y[treated].mean() - y[control].mean()) if defined else math.nan
        stats.append(
            BinStats(
                count=int(size),
                n_treated=int(treated.size),
                n_control=int(control.size),
                predicted_lo=float(tau_hat[idx].min()),
                predicted_hi=float(tau_hat[idx].max()),
                mean_predicted=float(tau_hat[idx].mean()),
                realized=realized,
                defined=defined,
            )
        )
    return BinReport(bins=tuple(stats))


def rms_bin_discrepancy(report: BinReport) -> float:
    """Root mean square gap between per-bin mean predicted and realized effects."""
    if not report.all_defined:
        raise ValueError("realized effect is undefined in at least one bin")
    gaps = np.array([b.mean_predicted - b.realized for b in report.bins])
    return float(np.sqrt(np.mean(gaps**2)))


def bins_to_csv(report: BinReport) -> str:
    out = io.StringIO()
    out.write(
        "bin,count,n_treated,n_control,predicted_lo,predicted_hi,"
        "mean_predicted,realized,defined\n"
    )
    for i, b in enumerate(report.bins, start=1):
        realized = "" if not b.defined else repr(b.realized)
        out.write(
            f"{i},{b.count},{b.n_treated},{b.n_control},{b.predicted_lo!r},"
            f"{b.predicted_hi!r},{b.mean_predicted!r},{realized},{int(b.defined)}\n"
        )
    return out.getvalue()
