"""Kneser-type hypergraphs: construction, binomial random subhypergraphs,
exact weak chromatic numbers at desk scale, blow-up/quotient machinery, and
log-space probability-bound evaluators."""

from .blowup import (
    QuotientMap,
    QuotientViolation,
    WitnessBudgetError,
    WitnessReport,
    apply_quotient,
    blow_up,
    check_quotient,
    find_mono_multipartite,
    kneser_quotient,
    lemma1_witness,
    majority_lift,
    validate_witness,
)
from .bounds import (
    BoundReport,
    Schedule,
    ThresholdPredicate,
    case_i_bound,
    case_ii_bound,
    chromatic_formula,
    lemma31_lhs,
    lemma42_lhs,
    schedule,
    shadow_bound,
    thm1_bound,
    threshold_check,
    upper_cond,
)
from .coloring import (
    ChiCertificate,
    Coloring,
    SolverTimeout,
    exact_chi,
    greedy_upper,
    is_colorable,
    packing_lower,
    standard_coloring,
    validate,
)
from .combinatorics import (
    LogReal,
    binom_exact,
    ceil_div,
    colex_rank,
    colex_unrank,
    enumerate_stable,
    linear_stable_count,
    log_binom,
    stable_count_bound,
)
from .family import (
    Family,
    Hypergraph,
    SampleConfig,
    VertexSet,
    edge_count,
    full_family,
    hypergraph_from_json,
    hypergraph_to_json,
    kneser_hypergraph,
    mask_elements,
    sample,
    shadow,
    stable_family,
)
from .harness import (
    ExperimentConfig,
    FamilySpec,
    TrialRecord,
    coupled_curve,
    derive_trial_seed,
    empty_window_search,
    improved_coloring,
    mc_run,
    mc_summary,
    records_to_csv,
    thm1_reference_bound,
    upper_pipeline,
    window_potential_counts,
)

__version__ = "0.1.0"
