"""Slice monogenic and slice regular functions on Clifford algebras and quaternions.

Multivector arithmetic in ``R_n``, truncated power series with the *-product
calculus, and numerical checks of the modulus identities, growth and
distortion bounds and the one-quarter covering for slice functions.
"""
from .clifford import (
    CliffordContext,
    Multivector,
    SlicePoint,
    SliceStructure,
    inner,
    make_context,
    make_structure,
    mv_conjugate,
    mv_inverse,
    mv_mul,
    norm,
    paravector_structure,
    parse_multivector,
    quaternion_structure,
    slice_decompose,
    slice_embed,
    sphere_sample,
    wedge_half,
)
from .errors import (
    ConfigurationError,
    InvalidPointError,
    NotInvertibleError,
    NumericalFailure,
    PreconditionError,
    SliceError,
    UsageError,
    ZeroSetError,
)
from .series import (
    ComplexSeries,
    SliceSeries,
    SplittingResult,
    derivative,
    divide_by_variable,
    eval_representation,
    eval_series,
    ext,
    ratio_eval,
    series_conjugate,
    splitting,
    star_inverse_eval,
    star_inverse_series,
    star_product,
    symmetrization,
)

__version__ = "0.1.0"
