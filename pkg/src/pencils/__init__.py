"""Special values of Ephraim pencils and critical values at infinity.

The pipeline runs bottom-up: exact bivariate polynomials
(:mod:`pencils.poly`), Newton-Puiseux roots (:mod:`pencils.puiseux`), the
Kuo-Lu tree with its ``F_B`` and ``q(B)`` (:mod:`pencils.kuolu`), the Eggers
tree (:mod:`pencils.eggers`), then special values (:mod:`pencils.pencil`)
and the global analysis at infinity (:mod:`pencils.infinity`).
"""

from .config import RunConfig, configured
from .eggers import EggersTree, conjugacy_classes
from .infinity import (
    branches_at_infinity,
    critical_values_at_infinity,
    homogenize,
    local_germ,
    points_at_infinity,
)
from .kuolu import KuoLuTree, annotate, build_tree, place_derivative_roots
from .parser import PolySyntaxError, parse_poly
from .pencil import (
    NoWitnessError,
    analyze,
    bound_check,
    certify_special_value,
    normalize_l,
    special_values,
    special_values_all_M,
    zero_special_value_irreducible,
)
from .poly import BivarPoly, X, Y
from .puiseux import PreconditionError, SeparationError, newton_puiseux
from .series import FractionalPowerSeries, contact_order, leading_eval
from .uni import UniPoly, critical_values, uni_roots

__version__ = "0.1.0"

__all__ = [
    "BivarPoly",
    "EggersTree",
    "FractionalPowerSeries",
    "KuoLuTree",
    "NoWitnessError",
    "PolySyntaxError",
    "PreconditionError",
    "RunConfig",
    "SeparationError",
    "UniPoly",
    "X",
    "Y",
    "analyze",
    "annotate",
    "bound_check",
    "branches_at_infinity",
    "build_tree",
    "certify_special_value",
    "configured",
    "conjugacy_classes",
    "contact_order",
    "critical_values",
    "critical_values_at_infinity",
    "homogenize",
    "leading_eval",
    "local_germ",
    "newton_puiseux",
    "normalize_l",
    "parse_poly",
    "place_derivative_roots",
    "points_at_infinity",
    "special_values",
    "special_values_all_M",
    "uni_roots",
    "zero_special_value_irreducible",
]
