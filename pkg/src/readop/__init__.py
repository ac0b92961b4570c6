"""Exact-arithmetic model of a Read-type operator on the countable power of s.

Everything is computed with exact dyadic-rational scalars: the snake ordering
of N x N, the power-of-two weight grid, the perturbed weighted shift T, the
stage parameters and their growth conditions, and per-vector cyclicity
certificates |Q(T)x - e_0|_N <= 4.
"""

from .cyclicity import (
    CyclicityReport,
    PolynomialCertificate,
    cyclic_certificate,
    find_polynomial,
    head_qualify,
    tail_bound_check,
)
from .errors import (
    BoundViolated,
    FormatError,
    HorizonExceeded,
    NotInHead,
    NotInTail,
    NotQualifying,
    ReadopError,
    ResidualTooLarge,
    SampleFailure,
    SearchBudgetExhausted,
    Unresolved,
    ZeroVector,
)
from .operator import (
    STRICT,
    TOY,
    OperatorModel,
    StageSpec,
    alpha,
    apply_polynomial,
    apply_T,
    apply_T_power,
    from_gamma,
    t_power_e0,
    to_gamma,
)
from .ordering import PathGeometry, coord_to_rank, next_coord, rank_to_coord
from .params_io import ParameterFile
from .scalar import Scalar
from .stages import (
    ConditionReport,
    SamplerConfig,
    SearchConfig,
    build_strict,
    check_conditions,
    estimate_D,
    extend_stage,
    k_membership,
    pi,
    sample_K,
    tau,
    toy_model,
)
from .suites import Ranges, run_verification_suite
from .vectors import Coord, SparseVector
from .weights import WeightConfig, WeightTable, column_seminorm, graded_seminorm, product_seminorm

__version__ = "0.1.0"
