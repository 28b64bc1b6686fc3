"""linkform: exact classification, signatures, and matrix representability
of linking forms over real and complex Laurent polynomial rings.

The public surface re-exported here covers the full pipeline: exact field
and circle-point arithmetic (:mod:`linkform.field`), Laurent polynomials
and circle-root isolation (:mod:`linkform.laurent`), form containers and
the basic-form classification (:mod:`linkform.forms`), signature jumps,
signature functions, and Witt classes (:mod:`linkform.signature`), the
matrix-side step function and local diagonalization
(:mod:`linkform.matrixrep`), and representability decisions and
constructions (:mod:`linkform.represent`).  The command-line front end
lives in :mod:`linkform.cli`.
"""

from __future__ import annotations

from .errors import (
    DegenerateFormError,
    ExactnessError,
    FieldExtensionError,
    IdentityError,
    LinkformError,
    ParseError,
    PreconditionError,
    RefinementLimitError,
    TruncationError,
)
from .field import (
    CirclePoint,
    ExactPoint,
    FieldElem,
    IsolatedPoint,
    RootOfUnity,
    cayley,
    hermitian_signature,
    same_point,
)
from .laurent import (
    CircleRootSet,
    LaurentPoly,
    basic_poly,
    circle_roots,
    poly_from_dict,
    symmetric_representative,
)
from .forms import (
    CyclicForm,
    EForm,
    FForm,
    HodgeNumbers,
    PresentedForm,
    QuotientClass,
    StructuredForm,
    classify_cyclic,
    form_from_json,
    form_to_json,
    hodge_numbers,
    is_isometric,
    point_from_json,
    point_to_json,
    poly_to_json,
    symmetrize_rep,
)
from .signature import (
    JUMP_CONVENTION,
    SignatureFunction,
    WittClass,
    averaged_signature,
    is_metabolic,
    is_witt_equivalent,
    signature_function,
    signature_jump,
    sublagrangian_reduce,
    witt_class,
    witt_normal_form,
)
from .matrixrep import (
    MatrixStepFunction,
    check_hermitian,
    classify_matrix,
    congruence_transform,
    jumps_from_matrix,
    local_diagonalize,
    presented_form,
    sign_at,
    signature_step_function,
    snf,
    stabilize,
    sublagrangian_reduce_presented,
    verify_identities,
)
from .represent import (
    RepresentabilityVerdict,
    build_representative,
    choose_pair_coeffs,
    is_representable,
    pair_polynomial,
    total_jump,
)

__version__ = "0.1.0"

__all__ = [
    "CirclePoint",
    "CircleRootSet",
    "CyclicForm",
    "DegenerateFormError",
    "EForm",
    "ExactPoint",
    "ExactnessError",
    "FForm",
    "FieldElem",
    "FieldExtensionError",
    "HodgeNumbers",
    "IdentityError",
    "IsolatedPoint",
    "JUMP_CONVENTION",
    "LaurentPoly",
    "LinkformError",
    "MatrixStepFunction",
    "ParseError",
    "PreconditionError",
    "PresentedForm",
    "QuotientClass",
    "RefinementLimitError",
    "RepresentabilityVerdict",
    "RootOfUnity",
    "SignatureFunction",
    "StructuredForm",
    "TruncationError",
    "WittClass",
    "averaged_signature",
    "basic_poly",
    "build_representative",
    "cayley",
    "check_hermitian",
    "choose_pair_coeffs",
    "circle_roots",
    "classify_cyclic",
    "classify_matrix",
    "congruence_transform",
    "form_from_json",
    "form_to_json",
    "hermitian_signature",
    "hodge_numbers",
    "is_isometric",
    "is_metabolic",
    "is_representable",
    "is_witt_equivalent",
    "jumps_from_matrix",
    "local_diagonalize",
    "pair_polynomial",
    "point_from_json",
    "point_to_json",
    "poly_from_dict",
    "poly_to_json",
    "presented_form",
    "same_point",
    "sign_at",
    "signature_function",
    "signature_jump",
    "signature_step_function",
    "snf",
    "stabilize",
    "sublagrangian_reduce",
    "sublagrangian_reduce_presented",
    "symmetrize_rep",
    "symmetric_representative",
    "total_jump",
    "verify_identities",
    "witt_class",
    "witt_normal_form",
]
