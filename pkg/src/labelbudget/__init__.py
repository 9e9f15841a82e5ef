"""Budgeted label allocation for anomaly detection with a reject option.

The toolkit wires together an unsupervised prior (an isolation forest),
a semi-supervised detector that folds purchased labels into that prior,
a cost-sensitive reject option, and a round-by-round loop that decides
whether the next batch of labels is better spent on the detector
(active learning) or on the rejection threshold (learning to reject).
"""

from .data import (
    CostInequalityError,
    CostParams,
    Dataset,
    DatasetFormatError,
    LabelStore,
    SplitView,
    load_dataset,
    stratified_split,
    validate_costs,
    write_dataset_csv,
)
from .isoforest import IsolationForestModel, fit_iforest
from .detector import (
    DecisionThreshold,
    DetectorConfig,
    SemiSupervisedModel,
    fit_detector,
    quantile_threshold,
    refit_semi_supervised,
    squash,
)
from .rejection import (
    RejectState,
    Trinary,
    confidence,
    optimize_tau,
    predict_many,
    predict_trinary,
    reject_probability,
    rejection_rate,
)
from .rewards import (
    ProbabilityTrace,
    RewardSnapshot,
    Side,
    binarize,
    cosine_reward,
    entropy_reward,
    entropy_term,
)
from .allocation import (
    AllocationLoop,
    BudgetError,
    BudgetLedger,
    RewardKind,
    RoundQuery,
    RoundRecord,
    Strategy,
    plan_budget,
    run_allocation,
)
from .evaluation import CostReport, aggregate, auc, empirical_cost
from .synthetic import generate_clustered, generate_synthetic
from .harness import ExperimentConfig, run_experiment

__version__ = "0.1.0"
