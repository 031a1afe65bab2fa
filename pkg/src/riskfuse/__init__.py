"""riskfuse: software project risk scoring.

Combines fuzzy DEMATEL criterion weighting, a crow-search-tuned
Takagi-Sugeno neuro-fuzzy risk-magnitude model, intuitionistic fuzzy
TOPSIS ranking, and a final weighted risk score over COCOMO-style
project data.
"""

from .anfis import (
    AnfisModel,
    AnfisRule,
    BellMembership,
    apply_parameter_scaling,
    bell_membership,
    fit_consequents_least_squares,
    forward,
    init_fis,
    mape,
    rmse,
    subtractive_clustering,
)
from .config import PipelineConfig, load_config
from .dataset import (
    CriteriaCatalog,
    FeatureMapping,
    ProjectRecord,
    bundled_path,
    default_catalog,
    load_dataset,
    map_ratings_to_features,
)
from .dematel import (
    DematelResult,
    DirectRelationMatrix,
    aggregate_responses,
    normalize_direct_matrix,
    priority_weights,
    prominence_relation,
    total_relation_matrix,
)
from .ecsa import (
    CrowPopulation,
    EcsaConfig,
    OptimizationResult,
    binarize,
    dynamic_awareness_probability,
    fitness,
    global_update,
    init_population,
    local_neighborhood_update,
    optimize,
)
from .errors import DataError, NumericalError, PipelineError, RiskfuseError
from .fuzzy import (
    DEFAULT_DEMATEL_SCALE,
    IntuitionisticFuzzyValue,
    LinguisticScale,
    TriangularFuzzyNumber,
    cfcs_defuzzify,
    ifv_multiply,
    tfn_from_linguistic,
)
from .pipeline import (
    RiskReport,
    aggregate_risk,
    cv_folds,
    derive_weights,
    potential_scores,
    run_pipeline,
    split_train_test,
    tune_anfis_with_ecsa,
)
from .reporting import emit_report, read_report
from .topsis import (
    CriterionKind,
    IdealSolutions,
    IfDecisionMatrix,
    closeness,
    ideal_solutions,
    rank_alternatives,
    separation_measures,
    weighted_if_matrix,
)

__version__ = "0.1.0"
