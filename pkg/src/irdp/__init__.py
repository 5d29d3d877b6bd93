"""Tree-form decision problems with imperfect recall: evaluation, first-order
CDT-equilibrium solvers, benchmark generators and an experiment harness."""

from .evaluate import (
    EvalReport,
    cdt_deviation_utility,
    cdt_gap,
    continuation_values,
    evaluate,
    expected_utility,
    gradient,
    oracle_grid_search,
    oracle_pure_enumeration,
    reach_probabilities,
)
from .model import (
    DecisionProblem,
    InfoSet,
    Node,
    ProblemFormatError,
    ProblemValidationError,
    RecallClass,
    Strategy,
    TreeBuilder,
    classify_recall,
    load,
    save,
    seq,
    validate,
)
from .optimize import Kind, OptimizerConfig, RunTrace, TerminationCriteria, run, uniform_random_strategy

__version__ = "0.1.0"
