"""Exact-arithmetic lattice tools for lens space surgery obstructions."""

from .lattices import (
    E8_GRAM,
    Embedding,
    GramLattice,
    discriminant,
    embeds_in_diagonal,
    gram_of_vectors,
    indecomposable_summands,
    is_isometric,
    orthogonal_complement,
    pairing,
    short_vectors,
)
from .changemakers import (
    POINCARE_D,
    Changemaker,
    CovectorSearch,
    EmptyCovectorClassError,
    TorsionProfile,
    cm_torsion_profile,
    complement_embedding,
    complement_lattice,
    enumerate_changemakers,
    is_changemaker,
    min_char_defect,
    subset_sums_cover,
)

__all__ = [
    "E8_GRAM",
    "Embedding",
    "GramLattice",
    "discriminant",
    "embeds_in_diagonal",
    "gram_of_vectors",
    "indecomposable_summands",
    "is_isometric",
    "orthogonal_complement",
    "pairing",
    "short_vectors",
    "POINCARE_D",
    "Changemaker",
    "CovectorSearch",
    "EmptyCovectorClassError",
    "TorsionProfile",
    "cm_torsion_profile",
    "complement_embedding",
    "complement_lattice",
    "enumerate_changemakers",
    "is_changemaker",
    "min_char_defect",
    "subset_sums_cover",
]
