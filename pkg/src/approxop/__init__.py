"""Bernstein-type approximation operators on infinite-dimensional sequence spaces."""

from approxop.bounds import BoundReport, bound_vs_actual, gamma_sq, general_bound, ucb_bound, ucb_bound_relaxed
from approxop.diag_operator import (
    ClosedForm,
    Enumerate,
    EvalReport,
    MonteCarlo,
    OperatorConfig,
    RankFactor,
    apply_operator,
    closed_form_eval,
    enumerate_eval,
    evaluate_with_fallback,
    index_count,
    mc_eval,
    operator_mapping,
    product_eval_k,
    rank_eval,
)
from approxop.errors import (
    ApproxOpError,
    DomainError,
    EvaluationError,
    FeasibilityError,
    SpecError,
    StrategyError,
)
from approxop.function_model import (
    BlackBox,
    Combination,
    Coord,
    CoordSq,
    Fbar,
    Fn1D,
    LinearFunctional,
    Mapping,
    ModulusValue,
    NormOf,
    NormSq,
    One,
    PsiSq,
    RankStructured,
    RankTerm,
    Tensor,
    convexity_probe,
    empirical_modulus,
    evaluate,
    mapping_from_dict,
    modulus,
)
from approxop.kernels1d import (
    BASKAKOV,
    BERNSTEIN,
    FAMILIES,
    GAUSS_WEIERSTRASS,
    POST_WIDDER,
    SZASZ_MIRAKJAN,
    KernelFamily,
    bernstein_basis,
    bernstein_row,
    family_check,
    family_moment,
    family_sample,
    lift1d,
)
from approxop.sequence_space import GeometricTail, SequencePoint, Space, ZeroTail

__version__ = "0.1.0"
