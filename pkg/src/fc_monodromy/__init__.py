"""Exact monodromy matrices and intersection numbers for the m-variable
Lauricella F_C hypergeometric system, plus series-level consistency checks.

The rank-2^m local solution space is indexed by subsets of {1..m}; circuit
matrices, the diagonal intersection pairing, the chamber pairing matrix and
its determinant are all rational functions of the multiplicative parameters
(alpha, beta, gamma_1..gamma_m) and are evaluated here in exact
rational-complex arithmetic so that every identity check is literal equality.
"""

from .scalars import (
    DEFAULT_PRECISION,
    FieldScalar,
    GenericityError,
    ParamPoint,
    SamplingError,
    SeriesParams,
    Violation,
    check_genericity,
    dualize,
    param_exponentials,
    require_generic,
    sample_generic,
)
from .combinatorics import (
    SubsetIndex,
    basis_order,
    position_map,
    subset_product_identities,
)
from .matrices import (
    CycleVector,
    RepMatrix,
    fraction_free_det,
    fraction_free_rank,
    solve_upper_triangular,
)
from .intersection import (
    d_self_intersection,
    h_diagonal,
    h_entry,
    h_matrix,
    ih_delta_D,
    ih_delta_D_raw,
    lambda0_matrix,
    pairing_with_D,
)
from .monodromy import (
    GeneratorWord,
    apply_m0,
    basis_change_matrix,
    eigen_multiplicity,
    infinity_loop_word,
    m_0_matrix,
    m_i_matrix,
    m_infinity,
    m_k_matrix,
    m_prime_matrix,
    m_prime_oracle,
    n0_column_entry,
    special_m0_eigenvalue,
    verify_relations,
    word_matrix,
)
from .determinant import (
    det_bruteforce,
    det_decomposition_check,
    det_lambda0_closed,
    elimination_sequence,
    elimination_step,
    lambda0_prefactor,
    lambda_matrix,
)
from .series import (
    DomainError,
    GammaPoleError,
    SeriesParameterError,
    SeriesValue,
    TruncatedSeries,
    ec_residual,
    f_I_eval,
    fc_coefficients,
    fc_eval,
    in_convergence_domain,
    multi_indices,
    phi_gamma_constant,
    residual_coefficients,
    shifted_params,
)

__version__ = "0.1.0"
