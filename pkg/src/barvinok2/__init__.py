"""Exact tropical rank-2 decisions and the homology of the rank-two space.

The package decides Barvinok rank <= 2 for rational matrices, canonicalizes
matrix classes, builds the simplicial model of the space of rank-two classes
as a quotient order complex, and computes its integral homology by four
mutually independent routes (simplicial, cellular quotient, discrete Morse
reduction, closed formulas) that cross-validate each other.
"""

from .errors import (
    Barvinok2Error,
    DomainError,
    InternalError,
    InvalidCharacteristic,
    NotAChainError,
    NotAComplexError,
    NotInvertibleError,
    RankError,
    RelationError,
    ResourceError,
    ZeroClassError,
)
from .trop import (
    RationalMatrix,
    TropPoint,
    TropSegment,
    barvinok_rank_le2,
    column_min_point,
    normalize_point,
    segment_contains,
    sweep_parameter,
    sweep_point,
    trop_segment,
)
from .canonical import CanonicalMatrix, canonicalize, equivalent
from .tree_complex import (
    BalancedComposition,
    Bipartition,
    Leaf,
    QuotientComplex,
    build_complex,
    build_unquotiented,
    canonical_orbit,
    chain_counts,
    chain_to_composition,
    composition_counts,
    composition_to_chain,
    tree_from_matrix,
)
from .homology import (
    ChainComplex,
    HomologyProfile,
    IntMatrix,
    euler_characteristic,
    homology_Z,
    homology_field,
    rank_over_field,
    simplicial_chain_complex,
    smith_normal_form,
    smith_with_transform,
    tensor_complexes,
)
from .equivariant import (
    StructuredZ2Complex,
    Z2ChainComplex,
    hemispherical,
    hemispherical_structured,
    minus_part,
    plus_part,
    plus_tensor_hemispherical,
    split_decomposition_check,
    structured_to_z2,
    tensor,
)
from .morse import (
    MorseSplitting,
    ReducedComplex,
    beta_closed_form,
    morse_reduce,
    reduced_boundaries,
    standard_splitting,
)
from .formulas import (
    FormulaProfile,
    euler_characteristic_formula,
    field_betti_formula,
    freepart_formula,
    homology_formula,
    rp_homology,
    torsion_formula,
)

__version__ = "0.1.0"
