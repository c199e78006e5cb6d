"""Polynomial lattice rules in weighted Walsh spaces, built digit by digit.

Typical use::

    from cbcdbd import construct_fast, wce_product

    gamma = [j**-2.0 for j in range(1, 101)]
    gv = construct_fast(10, 100, gamma)
    err = wce_product(gv.rule(), 1.5, [g**1.5 for g in gamma])
"""

from .cbc_baseline import construct_cbc_naive
from .cbc_dbd import (
    ConstructionState,
    GeneratingVector,
    construct_fast,
    construct_reference,
    h_direct,
    h_quantity,
)
from .errors import (
    CBCDBDError,
    DegenerateInputError,
    InternalStateError,
    InvalidParameterError,
    ParseError,
    ResourceLimitError,
    UnsupportedBaseError,
)
from .field_poly import (
    Poly,
    digitlog,
    laurent_numerator,
    monomial,
    poly_from_index,
    primitive_poly_f2,
    vm_numerator,
)
from .pointset import PointMatrix, PolyLatticeRule, coordinate, generate_points, iter_point_rows
from .walsh_space import (
    ProductWeights,
    SpaceParams,
    char_sum,
    dual_box_set,
    mu_b,
    phi_alpha,
    t_measure,
    trunc_gap_bound,
    walsh_eval,
    wce_product,
)

__version__ = "0.1.0"

__all__ = [
    "CBCDBDError",
    "ConstructionState",
    "DegenerateInputError",
    "GeneratingVector",
    "InternalStateError",
    "InvalidParameterError",
    "ParseError",
    "PointMatrix",
    "Poly",
    "PolyLatticeRule",
    "ProductWeights",
    "ResourceLimitError",
    "SpaceParams",
    "UnsupportedBaseError",
    "char_sum",
    "construct_cbc_naive",
    "construct_fast",
    "construct_reference",
    "coordinate",
    "digitlog",
    "dual_box_set",
    "generate_points",
    "h_direct",
    "h_quantity",
    "iter_point_rows",
    "laurent_numerator",
    "monomial",
    "mu_b",
    "phi_alpha",
    "poly_from_index",
    "primitive_poly_f2",
    "t_measure",
    "trunc_gap_bound",
    "vm_numerator",
    "walsh_eval",
    "wce_product",
]
