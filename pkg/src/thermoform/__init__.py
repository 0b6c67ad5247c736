"""Thermodynamic quantities for finite tuples of real square matrices.

The package computes certified brackets for the pressure function and
the induced p-radii / joint spectral radius, constructs the quadratic
(s = 2) equilibrium state in closed form from Perron eigenmatrices of
the transfer operators, and runs executable classification checks
(irreducibility, mixing obstructions, zero entropy, Bernoulli
multiplicativity, conformal conjugacy, rate independence).

Matrix tuples carry one of two scalar policies: exact rational entries
(fractions.Fraction) or double precision.  Word products follow the
reverse-order convention A_w = A[x_n] ... A[x_1].
"""

from .core import (
    DOUBLE,
    EXACT,
    MatrixTuple,
    characteristic_polynomial,
    conjugate_tuple,
    enumerate_words,
    frobenius_norm,
    frobenius_norm_squared,
    kronecker_power,
    make_tuple,
    operator_norm,
    spectral_radius,
    transpose_tuple,
    word_index,
    word_product,
)
from .errors import (
    BudgetExceededError,
    DegenerateEigenmatrixError,
    NoConnectingWordError,
    NotConvergedError,
    ThermoformError,
    TupleFormatError,
    UnsupportedPrecisionError,
)
from .structure import (
    BlockForm,
    IrreducibilityVerdict,
    MixingObstruction,
    SearchBudget,
    StrongIrreducibilityVerdict,
    Subspace,
    block_triangularize,
    connecting_word,
    find_invariant_subspace,
    mixing_obstruction_scan,
    orbit_span,
    strong_irreducibility_scan,
    zero_product_search,
)
from .pressure import (
    PressureBracket,
    RadiusBracket,
    jsr_bracket,
    log_partition_sum,
    p_radius,
    partition_sum,
    pressure_bracket,
    pressure_exact_even,
)
from .kusuoka import (
    CylinderTable,
    EntropyEstimate,
    GibbsReport,
    KusuokaData,
    PeripheralSpectrum,
    SymOperator,
    build_transfer_operator,
    consistency_check,
    correlation,
    cylinder_measure,
    cylinder_table,
    entropy_estimate,
    gibbs_constants,
    gibbs_verify,
    kusuoka_measure,
    lyapunov_spectrum,
    lyapunov_top,
    peripheral_spectrum,
    perron_eigen,
)
from .classify import (
    ClassificationReport,
    ConformalResult,
    CounterexamplePair,
    EqualityVerdict,
    MaximalEntropyResult,
    MultiplicativeVerdict,
    PeriodicStructure,
    SIndependenceResult,
    classification_report,
    conformal_conjugacy_check,
    equilibrium_equality_check,
    maximal_entropy_check,
    multiplicative_sr_check,
    s_independence_check,
    verify_periodic_structure,
    zero_entropy_structure,
)
from .registry import builtin_names, get_builtin
from .tuplefile import load_tuple, parse_word, save_tuple, tuple_digest

__version__ = "0.1.0"

__all__ = [
    "BlockForm",
    "BudgetExceededError",
    "ClassificationReport",
    "ConformalResult",
    "CounterexamplePair",
    "CylinderTable",
    "DOUBLE",
    "DegenerateEigenmatrixError",
    "EXACT",
    "EntropyEstimate",
    "EqualityVerdict",
    "GibbsReport",
    "IrreducibilityVerdict",
    "KusuokaData",
    "MatrixTuple",
    "MaximalEntropyResult",
    "MixingObstruction",
    "MultiplicativeVerdict",
    "NoConnectingWordError",
    "NotConvergedError",
    "PeriodicStructure",
    "PeripheralSpectrum",
    "PressureBracket",
    "RadiusBracket",
    "SIndependenceResult",
    "SearchBudget",
    "StrongIrreducibilityVerdict",
    "Subspace",
    "SymOperator",
    "ThermoformError",
    "TupleFormatError",
    "UnsupportedPrecisionError",
    "block_triangularize",
    "build_transfer_operator",
    "builtin_names",
    "characteristic_polynomial",
    "classification_report",
    "conformal_conjugacy_check",
    "conjugate_tuple",
    "connecting_word",
    "consistency_check",
    "correlation",
    "cylinder_measure",
    "cylinder_table",
    "entropy_estimate",
    "enumerate_words",
    "equilibrium_equality_check",
    "find_invariant_subspace",
    "frobenius_norm",
    "frobenius_norm_squared",
    "get_builtin",
    "gibbs_constants",
    "gibbs_verify",
    "jsr_bracket",
    "kronecker_power",
    "kusuoka_measure",
    "load_tuple",
    "log_partition_sum",
    "lyapunov_spectrum",
    "lyapunov_top",
    "make_tuple",
    "maximal_entropy_check",
    "mixing_obstruction_scan",
    "multiplicative_sr_check",
    "operator_norm",
    "orbit_span",
    "p_radius",
    "parse_word",
    "partition_sum",
    "peripheral_spectrum",
    "perron_eigen",
    "pressure_bracket",
    "pressure_exact_even",
    "s_independence_check",
    "save_tuple",
    "spectral_radius",
    "strong_irreducibility_scan",
    "transpose_tuple",
    "tuple_digest",
    "verify_periodic_structure",
    "word_index",
    "word_product",
    "zero_entropy_structure",
    "zero_product_search",
]
