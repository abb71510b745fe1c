"""K-theoretic invariants of rings of finite Cohen-Macaulay type from AR quiver data."""

from .arquiver import (
    ARMatrix,
    ARQuiver,
    ARSequence,
    EndoDescriptor,
    Indecomposable,
    ValidationReport,
    ar_matrix,
    deleted_ar_matrix,
    full_subcategory_indices,
    multiplicity,
    relation_vector,
    validate,
)
from .catalogue import CatalogueEntry, a2n_entry, a2n_quiver, load_quiver, save_quiver
from .errors import InputError, OracleBudgetError, ParseError, RefusalError
from .ktheory import (
    CoefficientSpec,
    GroupExpression,
    det_deleted_matrix,
    instantiate,
    k0_lambda,
    k0_mf,
    k0_prime,
    k1_additive_category,
    k1_mf_presentation,
    k1_prime_presentation,
)
from .localization import (
    filtration_report,
    k0_localization_sequence,
    semiperfect_view,
    unit_group_of_endo,
)
from .zmodule import (
    FGAbelianGroup,
    FiniteAbelianGroup,
    IntegerMatrix,
    SNFDecomposition,
    brute_force_cokernel,
    cokernel,
    cokernel_with_coefficients,
    image_lattice,
    is_exact_at,
    kernel_lattice,
    smith_normal_form,
)

__version__ = "0.1.0"
