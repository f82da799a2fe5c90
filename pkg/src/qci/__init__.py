"""Exact computations with quantum complete intersections over prime fields."""

from .algebra import (
    AlgebraElement,
    FrobeniusForm,
    MonomialAlgebra,
    NakayamaMap,
    QciAlgebra,
    exterior_algebra,
    frobenius_form,
    is_symmetric,
    nakayama,
    opposite,
    root_of_unity_algebra,
    symmetric_double,
    truncated_polynomial,
)
from .errors import *  # noqa: F401,F403
from .field import PrimeField, Scalar, make_field, multiplicative_order, solve_linear
from .homology import (
    ExtTable,
    bar_ext_oracle,
    betti_numbers,
    ext_dims,
    ext_symmetry_check,
    hochschild_dims,
    kunneth_check,
    minimal_resolution,
)
from .module import GradedModule, cyclic_quotient, free_module, random_graded_module, regular_module, trivial_module
from .twist import (
    TwistedAlgebra,
    TwistMap,
    enveloping_algebra,
    qci_decomposition_check,
    split_factors,
    standard_twist,
    twisted_tensor_module,
)

__version__ = "0.1.0"
