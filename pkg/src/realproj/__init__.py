"""Real projections of the zeros of exponential sums.

For ``f(s) = sum_j a_j exp(lambda_j s)`` on a vertical strip, compute the
closure of ``{Re s : f(s) = 0}`` as a certified union of intervals, and
check it against zeros located by the argument principle.
"""

from .basis import (
    BasisRepresentation,
    IndependenceResult,
    check_rational_independence,
    independence_status,
    is_integral,
    natural_basis,
    representation_for,
)
from .core import (
    EndKind,
    ExponentialSum,
    Interval,
    RSetResult,
    SumValidationError,
    Symbol,
    TailBound,
    Term,
    Tolerances,
    VerticalStrip,
    validate_sum,
)
from .probe import (
    PhaseAssignment,
    eval_aux,
    eval_f,
    min_modulus_scan,
    sample_image,
    torus_membership,
)
from .rset import (
    AmbiguousBoundaryError,
    NumericalRangeError,
    b_profile,
    b_roots,
    b_value,
    b_values,
    check_edge_conditions,
    check_nonempty_entire,
    classify_boundary,
    compute_rset,
    inf_modulus,
    inf_modulus_bounds,
    term_moduli,
)
from .specfile import corpus_path, load_spec, parse_spec
from .zerofind import (
    ClearanceError,
    Rectangle,
    ZeroRecord,
    crosscheck_rset,
    locate_zeros,
    winding_number,
)

__version__ = "0.1.0"


def __getattr__(name):
    # scikit-learn is slow to import; load the estimators on first use
    if name in ("RealProjectionSet", "ZeroLocator"):
        from . import estimator
        return getattr(estimator, name)
    raise AttributeError(f"module 'realproj' has no attribute {name!r}")


__all__ = [
    "AmbiguousBoundaryError", "BasisRepresentation", "ClearanceError", "EndKind",
    "ExponentialSum", "IndependenceResult", "Interval", "NumericalRangeError",
    "PhaseAssignment", "RSetResult", "RealProjectionSet", "Rectangle", "SumValidationError",
    "Symbol", "TailBound", "Term", "Tolerances", "VerticalStrip", "ZeroLocator", "ZeroRecord",
    "b_profile", "b_roots", "b_value", "b_values", "check_edge_conditions", "check_nonempty_entire",
    "check_rational_independence", "classify_boundary", "compute_rset", "corpus_path",
    "crosscheck_rset", "eval_aux", "eval_f", "independence_status", "inf_modulus",
    "inf_modulus_bounds", "is_integral", "load_spec", "locate_zeros", "min_modulus_scan",
    "natural_basis", "parse_spec", "representation_for", "sample_image", "term_moduli",
    "torus_membership", "validate_sum", "winding_number",
]
