"""Exact arithmetic for truncated series transformations, their
coefficient-matrix embeddings, and invertibility probes for lazily
generated infinite matrices."""

from .series import (
    AnalyticCoefficientStream,
    GroupoidElement,
    analytic_stream,
    builtin_coefficient,
    builtin_series,
    compose,
    identity_at,
    invert,
    make_series,
    pointwise_power,
    rebase,
    series_from_json,
    series_to_json,
    substitute_analytic,
)
from .matrices import (
    InfiniteMatrixHandle,
    LatentProduct,
    MonomialCheck,
    MonomialColumn,
    TruncatedMatrix,
    builtin_carleman_handle,
    carleman_embed,
    carleman_handle,
    explicit_handle,
    from_function,
    identity_matrix,
    lul_decompose,
    matrix_from_json,
    matrix_from_rows,
    matrix_to_json,
    matrix_to_text,
    monomial_column,
    monomial_column_check,
    product_handle,
    translation_handle,
    translation_matrix,
    truncated_multiply,
)
from .linalg import (
    BlockInjection,
    FiniteSupportVector,
    GammaVerdict,
    PermutationSpec,
    find_pivot_rows,
    gamma_probe,
    invert_triangular,
    kernel_basis,
    plu_decompose,
    sigma_determinants,
)
from .convergence import (
    EntryProbeReport,
    LatentReport,
    entry_series_probe,
    latent_product_report,
)
from .polynomials import Poly
from .scenarios import (
    AdjointFamily,
    MuCheck,
    adjoint_family,
    adjoint_handle,
    adjoint_mu_check,
    circle_composite_series,
    circle_cover_extend,
    circle_generator_matrix,
    circle_raw_product,
    diag_deviation,
    mu_compose,
    scaling_diagonal,
)
from .localgroup import (
    AssociativityReport,
    CoveredPoint,
    associativity_demo,
    identity_element,
    lift_segment,
    local_inverse,
    local_product,
    sheet_index,
)
from .goldens import FIXTURES, GoldenFixture, verify_goldens

__all__ = [name for name in dir() if not name.startswith("_")]
