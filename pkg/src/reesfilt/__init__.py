"""Filtered complexes, Rees modules and their spectral sequences over exact base rings."""
from .errors import InvariantError, ReesfiltError, RingMismatchError, SchemaError
from .exactla import GF, QQ, ZZ, BaseRing, ChainComplex, ChainMap, HomologyModule, Matrix
from .filtered import (FilteredComplex, adjunction_check, algebra_A, day_tensor_filtered, gr, is_cellular,
                       kan_extend, res, tensor_with_A, underlying, unit_filtered)
from .graded import (Comodule, GradedComplex, day_tensor_graded, from_comodule, from_comodule_with_iso,
                     to_comodule, total, total_tensor_comparison, twist, unit_graded)
from .rees import (ReesModule, closed_point_pullback, from_rees, generic_point_pullback, rees_resolution,
                   rees_tensor, rees_unit, to_rees)
from .specseq import SSPage, compare_with_abutment, page, stabilization
from .tstruct import (is_connective_beilinson, is_connective_beilinson_filtered, is_connective_standard, truncate,
                      truncate_beilinson)

__version__ = "0.1.0"

__all__ = [
    "ReesfiltError", "InvariantError", "RingMismatchError", "SchemaError",
    "BaseRing", "ZZ", "QQ", "GF", "Matrix", "ChainComplex", "ChainMap", "HomologyModule",
    "GradedComplex", "Comodule", "unit_graded", "twist", "total", "day_tensor_graded", "total_tensor_comparison",
    "to_comodule", "from_comodule", "from_comodule_with_iso",
    "FilteredComplex", "unit_filtered", "algebra_A", "res", "kan_extend", "gr", "underlying", "is_cellular",
    "adjunction_check", "day_tensor_filtered", "tensor_with_A",
    "ReesModule", "to_rees", "from_rees", "rees_unit", "rees_resolution", "rees_tensor", "closed_point_pullback",
    "generic_point_pullback",
    "truncate", "truncate_beilinson", "is_connective_standard", "is_connective_beilinson",
    "is_connective_beilinson_filtered",
    "SSPage", "page", "stabilization", "compare_with_abutment",
]
