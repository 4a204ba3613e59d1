"""Seeded random chaos objects for identity suites and tests."""

import numpy as np

from .field import ChaosField, ChaosMatrix
from .poly import ChaosPoly
from .space import GaussianSpace, MultiIndex


def random_index(rng: np.random.Generator, space: GaussianSpace, max_degree: int) -> MultiIndex:
    """A multi-index of total degree uniform in 0..max_degree, directions uniform."""
    degree = int(rng.integers(0, max_degree + 1))
    powers: dict[int, int] = {}
    for _ in range(degree):
        i = int(rng.integers(0, space.dim))
        powers[i] = powers.get(i, 0) + 1
    return MultiIndex.from_mapping(powers)


def random_poly(
    rng: np.random.Generator,
    space: GaussianSpace,
    max_degree: int | None = None,
    terms: int = 4,
    zero_mean: bool = False,
) -> ChaosPoly:
    max_degree = space.degree_cap if max_degree is None else min(max_degree, space.degree_cap)
    coeffs: dict[MultiIndex, float] = {}
    for _ in range(terms):
        alpha = random_index(rng, space, max_degree)
        if zero_mean and alpha.degree == 0:
            continue
        coeffs[alpha] = coeffs.get(alpha, 0.0) + float(rng.normal())
    return ChaosPoly.from_coeffs(space, coeffs)


def random_field(
    rng: np.random.Generator,
    space: GaussianSpace,
    max_degree: int | None = None,
    terms: int = 3,
) -> ChaosField:
    return ChaosField(
        space, tuple(random_poly(rng, space, max_degree, terms) for _ in range(space.dim))
    )


def random_matrix(
    rng: np.random.Generator,
    space: GaussianSpace,
    max_degree: int | None = None,
    terms: int = 2,
) -> ChaosMatrix:
    return ChaosMatrix.from_function(
        space, lambda i, j: random_poly(rng, space, max_degree, terms)
    )


def random_antisymmetric_matrix(
    rng: np.random.Generator,
    space: GaussianSpace,
    max_degree: int | None = None,
    terms: int = 2,
) -> ChaosMatrix:
    """A with A + A^T = 0 exactly (upper triangle drawn, lower mirrored)."""
    upper = {
        (i, j): random_poly(rng, space, max_degree, terms)
        for i in range(space.dim)
        for j in range(i + 1, space.dim)
    }

    def entry(i: int, j: int) -> ChaosPoly:
        if i < j:
            return upper[(i, j)]
        if i > j:
            return -upper[(j, i)]
        return ChaosPoly.zero(space)

    return ChaosMatrix.from_function(space, entry)
