"""Evolved neural feature representations for treatment-effect estimation.

The package learns a hidden-layer feature map by genetic search: candidates
are small networks trained to predict the outcome, and selection favors maps
whose features are least useful for predicting treatment assignment. The
resulting map feeds standard meta-learners (S/T/X/R) whose accuracy is
measured on synthetic benchmarks with exact effect oracles.
"""

from .bench import (
    ARMS,
    DEFAULT_LEARNERS,
    LEARNER_REGISTRY,
    BenchmarkTable,
    BinReport,
    BinStats,
    TrialReport,
    bins_to_csv,
    format_summary,
    quintile_calibration,
    resolve_learners,
    rms_bin_discrepancy,
    run_benchmark,
    run_trial,
    save_table_csv,
    table_to_csv,
)
from .data import (
    CsvSchema,
    Dataset,
    SchemaError,
    SplitSpec,
    Standardizer,
    apply_representation,
    default_schema,
    fit_standardizer,
    load_csv,
    merge,
    save_csv,
    split,
)
from .evolution import (
    EvolveConfig,
    EvolveResult,
    LineageRecord,
    ScoredCandidate,
    crossover,
    crossover_rows,
    derive_seed,
    evolve,
    fitness,
    format_lineage,
    no_fitness_baseline,
)
from .learners import (
    GradientBoostedTrees,
    PropensityModel,
    RidgeCV,
    RLearner,
    SLearner,
    TLearner,
    XLearner,
    XLearnerDirectS,
    XLearnerDirectT,
    fit_propensity,
    load_cate_model,
    save_cate_model,
    solve_ridge,
)
from .nets import (
    OutcomeNetParams,
    RepresentationMap,
    TrainConfig,
    TrainingFailure,
    TreatmentHeadParams,
    adam_init,
    adam_step,
    backprop_outcome,
    backprop_treatment,
    forward_outcome,
    forward_treatment,
    glorot_init,
    init_outcome_params,
    init_treatment_head,
    load_outcome_net,
    load_representation,
    outcome_loss,
    representation,
    save_outcome_net,
    save_representation,
    train_outcome,
    train_treatment_head,
    treatment_loss,
)
from .stats import TTestResult, paired_t_test, regularized_incomplete_beta
from .synth import (
    SynthSpec,
    baseline_a,
    baseline_c,
    cate_a,
    cate_c,
    gen_setup_a,
    gen_setup_c,
    generate,
    propensity_a,
    propensity_c,
    setup_a_spec,
    setup_c_spec,
)

__version__ = "0.1.0"
