"""Exact computations with the Fibonacci difference matrix and its sequence spaces."""

from .bandops import (
    BandMatrixSpec,
    TruncatedMatrix,
    apply,
    apply_fhat_inverse,
    build_B_from_A,
    build_C_from_a,
    build_D_from_A,
    build_Dm_from_A,
    roundtrip_check,
)
from .classify import (
    classify_domain_source,
    classify_into_domain,
    classify_pair,
    dual_membership,
    eval_condition,
)
from .fibcore import fib, fib_ratio, golden_ratio
from .spaces import (
    SpaceTag,
    basis_c_minus1,
    basis_sequence,
    counterexample,
    f_lim_estimate,
    fhat_norm,
    membership_estimate,
    reconstruct,
    t_matrix,
)

__version__ = "0.1.0"
