"""Lifted-product quantum LDPC codes over group algebras, with distance tools."""

from __future__ import annotations

__version__ = "0.1.0"

from .bounds import autocorr_witness, perm_upper_trivial, permanent, qc_distance_bound
from .chains import (
    ChainComplex,
    balance_construct,
    balance_params,
    balance_twice,
    complex_from_matrix,
    complex_of_code,
    css_from_complex,
    homology_dims,
    lift_complex,
    lifted_tensor,
    tensor,
)
from .csscode import (
    CodeParams,
    CssCode,
    classical_code,
    classify_codeword,
    code_params,
    css_dimension,
    css_new,
    distance_upper,
    exact_distance,
    limitedness,
    logical_operators,
    tanner_degree,
)
from .errors import (
    BudgetExceededError,
    ChainComplexError,
    ClassificationError,
    DimensionError,
    DomainError,
    GroupMismatchError,
    LPCodesError,
    OrthogonalityError,
    ParseError,
    SearchExhaustedError,
    UnsupportedError,
)
from .expander import (
    ExpansionCert,
    Graph,
    ShiftLift,
    SpectralReport,
    TannerSpec,
    certify_expanding,
    local_code_search,
    mixing_check,
    prop3_gamma,
    qc_tanner_parity,
    random_regular,
    shift_lift,
    spectrum_lambda,
    tanner_parity,
    theorem1_pipeline,
)
from .f2core import BinMatrix, FieldSpec, GfMatrix, f2_kernel_basis, f2_rank, f2_solve
from .groupring import (
    AlgElem,
    AlgMatrix,
    GroupSpec,
    block_lift,
    conj_transpose,
    factor_cyclic,
    parse_matrix,
)
from .products import gb, hp, lp, lp_ab, lp_ab_dim, lp_dim_crt, lp_from_field, lp_square
