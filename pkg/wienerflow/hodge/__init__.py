"""Hodge-type decomposition and the antisymmetric representation of divergence-free fields."""

from .decomposition import (
    EXACT_ATOL,
    HodgeBundle,
    HodgeDecomposition,
    NotDivergenceFreeError,
    antisym_representation,
    hodge_bundle,
    hodge_decompose,
    random_divergence_free_field,
    require_divergence_free,
)

__all__ = [
    "EXACT_ATOL",
    "HodgeBundle",
    "HodgeDecomposition",
    "NotDivergenceFreeError",
    "antisym_representation",
    "hodge_bundle",
    "hodge_decompose",
    "random_divergence_free_field",
    "require_divergence_free",
]
