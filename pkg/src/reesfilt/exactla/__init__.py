"""Exact linear algebra: rings, matrices, normal forms, complexes, colimits."""
from .colimit import PosetDiagram, PresentedComplex, poset_colimit
from .complexes import (ChainComplex, ChainMap, boundaries, cone, cone_inclusion, cone_projection, cycles,
                        direct_sum, homology, homology_presentation, is_split_injective, shift, tensor, tensor_maps)
from .lattice import HomologyModule, Lattice, NotInLattice, Subquotient, from_orders, image, kernel
from .matrix import Matrix, block, block_diag
from .normal import diagonalize, echelon, invariant_factors, rank, rank_normal_form, smith_normal_form
from .rings import GF, QQ, ZZ, BaseRing

__all__ = [
    "BaseRing", "ZZ", "QQ", "GF", "Matrix", "block", "block_diag",
    "smith_normal_form", "rank_normal_form", "diagonalize", "invariant_factors", "rank", "echelon",
    "Lattice", "Subquotient", "HomologyModule", "NotInLattice", "from_orders", "kernel", "image",
    "ChainComplex", "ChainMap", "homology", "homology_presentation", "cycles", "boundaries", "cone",
    "cone_inclusion", "cone_projection", "shift", "direct_sum", "tensor", "tensor_maps", "is_split_injective",
    "PosetDiagram", "PresentedComplex", "poset_colimit",
]
