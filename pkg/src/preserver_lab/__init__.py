"""Exact-arithmetic tools for positivity and hyperbolicity preservers."""

from .classify import PolyClass, SOSWitness, Tri, classify, is_nonnegative, sos_decompose
from .hankel import (
    HankelReport,
    Verdict,
    const_coeff_hankel,
    diag_hankel,
    necessary_conditions,
    positive_counterexample,
)
from .operators import (
    ConstCoeffOperator,
    DiagSequence,
    DiffOperator,
    Generator,
    OperatorError,
    apply_diag,
    apply_diff,
    invert_diag,
    operator_from_json,
    operator_to_json,
    truncate,
)
from .polycore import RatPoly, parse_poly, poly_from_json, poly_to_json
from .roots import CxRoot, approx_roots, count_real_roots, sturm_chain
from .witness import (
    WitnessCertificate,
    WitnessError,
    verify_certificate,
    witness_auto,
    witness_ct3,
    witness_t1,
    witness_t2,
    witness_t3,
)

__version__ = "0.1.0"
