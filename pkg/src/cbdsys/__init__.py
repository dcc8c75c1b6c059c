"""cbdsys: contextuality analysis for context-content systems of binary variables.

Represent systems of +1/-1 random variables labeled by what they measure
(content) and the conditions they are measured under (context), then decide
whether a coupling with the requested within-connection property exists:
closed-form criteria for cyclic systems of rank 2 and 4, and a linear
feasibility search with an explicit witness for everything else.
"""

from .coupling import (
    BRUTE_M_MAX,
    M_MAX,
    CouplingConstraint,
    CouplingWitness,
    FeasibilityProblem,
    FeasibilityVerdict,
    brute_force_decide,
    build_feasibility_problem,
    coupling_variables,
    decide,
    max_equality_probability,
    witness_violation,
)
from .cyclic import (
    CriterionResult,
    CyclicLayout,
    cbd_cyclic2,
    cbd_cyclic4,
    chsh_fine,
    detect_cyclic,
    qq_statistic,
)
from .errors import (
    CbdError,
    ConnectionSizeError,
    ContentNotInContextError,
    InconsistentSystemError,
    MomentError,
    ParameterError,
    ParseError,
    RankError,
    SolverError,
    SystemSizeError,
    ValidationError,
)
from .fileio import parse_system, parse_system_text, serialize_system, system_to_dict
from .scenarios import (
    DoubleSlitParams,
    QuestionOrderParams,
    build_bell,
    build_double_slit,
    build_question_order,
    check_double_slit,
    sample_double_slit_params,
)
from .system import (
    EPS_FEAS,
    EPS_PROB,
    NO,
    YES,
    Bunch,
    Connection,
    ConsistencyReport,
    Content,
    Context,
    System,
    build_system,
    connections,
    consistency,
    expectation,
    marginal,
    product_expectation,
    validate_system,
)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_M_MAX",
    "Bunch",
    "CbdError",
    "Connection",
    "ConnectionSizeError",
    "ConsistencyReport",
    "Content",
    "ContentNotInContextError",
    "Context",
    "CouplingConstraint",
    "CouplingWitness",
    "CriterionResult",
    "CyclicLayout",
    "DoubleSlitParams",
    "EPS_FEAS",
    "EPS_PROB",
    "FeasibilityProblem",
    "FeasibilityVerdict",
    "InconsistentSystemError",
    "M_MAX",
    "MomentError",
    "NO",
    "ParameterError",
    "ParseError",
    "QuestionOrderParams",
    "RankError",
    "SolverError",
    "System",
    "SystemSizeError",
    "ValidationError",
    "YES",
    "brute_force_decide",
    "build_bell",
    "build_double_slit",
    "build_feasibility_problem",
    "build_question_order",
    "build_system",
    "check_double_slit",
    "chsh_fine",
    "cbd_cyclic2",
    "cbd_cyclic4",
    "connections",
    "consistency",
    "coupling_variables",
    "decide",
    "detect_cyclic",
    "expectation",
    "marginal",
    "max_equality_probability",
    "parse_system",
    "parse_system_text",
    "product_expectation",
    "qq_statistic",
    "sample_double_slit_params",
    "serialize_system",
    "system_to_dict",
    "validate_system",
    "witness_violation",
]
