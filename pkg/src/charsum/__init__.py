"""Exact quadratic-character sum evaluation over prime fields."""

__version__ = "0.1.0"

from .algebra import FpPolynomial, OddPrime, centered_lift, kronecker, legendre, sqrt_mod  # noqa: F401
from .closedform import (  # noqa: F401
    eval_cubic_cm,
    eval_derived_gn,
    eval_form,
    eval_power_2k,
    eval_quadratic,
    evaluate,
    phi_closed,
    psi_closed,
    quartic_reduce,
)
from .hasse import class_number, factor_counts, hasse_eval, is_supersingular, legendre_form_sum  # noqa: F401
from .oracle import SumValue, affine_point_count, char_sum_direct, jacobsthal_direct  # noqa: F401
