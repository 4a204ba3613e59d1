"""Sparse Wiener-chaos expansions of scalar random variables."""

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .hermite import hermite_table, linearization_table
from .space import (
    ChaosError,
    DegreeOverflowError,
    DimensionMismatchError,
    GaussianSpace,
    MultiIndex,
    TruncationPolicy,
    check_index,
)

EVAL_CHUNK = 8192


@dataclass(frozen=True, eq=False)
class ChaosPoly:
    """Random variable sum_alpha c_alpha H_alpha in the normalized Hermite basis.

    Canonical form: no stored zeros, keys ordered by (degree, entries), every
    key valid for ``space``. Build instances through the constructors below or
    ``ChaosPoly.from_coeffs``; direct construction skips canonicalization.
    """

    space: GaussianSpace
    coeffs: Mapping[MultiIndex, float]

    # numpy scalars defer to our __rmul__ instead of broadcasting
    __array_ufunc__ = None

    # --- construction -----------------------------------------------------

    @classmethod
    def from_coeffs(
        cls,
        space: GaussianSpace,
        coeffs: Mapping[MultiIndex, float],
        policy: TruncationPolicy = TruncationPolicy.ERROR,
    ) -> "ChaosPoly":
        clean = {}
        for alpha, c in coeffs.items():
            if alpha.degree > space.degree_cap and policy is TruncationPolicy.TRUNCATE:
                continue
            c = float(c)
            if c == 0.0:
                continue
            check_index(space, alpha)
            clean[alpha] = c
        ordered = dict(sorted(clean.items(), key=lambda item: item[0].sort_key()))
        return cls(space, ordered)

    @classmethod
    def zero(cls, space: GaussianSpace) -> "ChaosPoly":
        return cls(space, {})

    @classmethod
    def constant(cls, space: GaussianSpace, value: float) -> "ChaosPoly":
        return cls.from_coeffs(space, {MultiIndex.zero(): value})

    @classmethod
    def coordinate(cls, space: GaussianSpace, direction: int, scale: float = 1.0) -> "ChaosPoly":
        """scale * x_direction (= delta e_direction)."""
        return cls.from_coeffs(space, {MultiIndex.unit(direction): scale})

    @classmethod
    def hermite(cls, space: GaussianSpace, powers: Mapping[int, int], scale: float = 1.0) -> "ChaosPoly":
        """scale * prod_i H_{powers[i]}(x_i)."""
        return cls.from_coeffs(space, {MultiIndex.from_mapping(dict(powers)): scale})

    @classmethod
    def from_terms(
        cls, space: GaussianSpace, terms: Iterable[tuple[Sequence[int], float]]
    ) -> "ChaosPoly":
        """Build from (dense multi-index, coefficient) pairs, summing repeats."""
        acc: dict[MultiIndex, float] = {}
        for powers, c in terms:
            alpha = MultiIndex.from_dense(powers)
            acc[alpha] = acc.get(alpha, 0.0) + float(c)
        return cls.from_coeffs(space, acc)

    # --- inspection -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Largest total degree present (0 for the zero poly)."""
        return max((alpha.degree for alpha in self.coeffs), default=0)

    @property
    def mean(self) -> float:
        return self.coeffs.get(MultiIndex.zero(), 0.0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, alpha: MultiIndex) -> float:
        return self.coeffs.get(alpha, 0.0)

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(c * c for c in self.coeffs.values()))

    def max_abs_diff(self, other: "ChaosPoly") -> float:
        self.space.require_same(other.space)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coefficient(k) - other.coefficient(k)) for k in keys), default=0.0)

    def allclose(self, other: "ChaosPoly", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def chop(self, atol: float) -> "ChaosPoly":
        """Drop coefficients with |c| <= atol (roundoff floor)."""
        return ChaosPoly(
            self.space, {alpha: c for alpha, c in self.coeffs.items() if abs(c) > atol}
        )

    def lift(self, space: GaussianSpace) -> "ChaosPoly":
        """Same coefficients in a space with the same dimension and a larger cap."""
        if space.dim != self.space.dim or space.degree_cap < self.degree:
            raise DimensionMismatchError(f"cannot lift {self.space} into {space}")
        return ChaosPoly(space, dict(self.coeffs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChaosPoly):
            return NotImplemented
        return self.space == other.space and dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        terms = " + ".join(f"{c:.6g}*H{alpha.entries}" for alpha, c in self.coeffs.items())
        return f"ChaosPoly({terms or '0'})"

    # --- linear structure -------------------------------------------------

    def __add__(self, other: "ChaosPoly") -> "ChaosPoly":
        return linear_combine([(1.0, self), (1.0, other)])

    def __sub__(self, other: "ChaosPoly") -> "ChaosPoly":
        return linear_combine([(1.0, self), (-1.0, other)])

    def __neg__(self) -> "ChaosPoly":
        return ChaosPoly(self.space, {alpha: -c for alpha, c in self.coeffs.items()})

    def __mul__(self, scalar: float) -> "ChaosPoly":
        if isinstance(scalar, ChaosPoly):
            raise TypeError("use multiply() for products of chaos polys")
        return linear_combine([(float(scalar), self)])

    __rmul__ = __mul__

    # --- evaluation -------------------------------------------------------

    def evaluate(self, x: np.ndarray) -> np.ndarray | float:
        return evaluate(self, x)


def _require_shared(polys: Sequence[ChaosPoly]) -> GaussianSpace:
    if not polys:
        raise ChaosError("need at least one poly")
    space = polys[0].space
    for p in polys[1:]:
        space.require_same(p.space)
    return space


def linear_combine(terms: Sequence[tuple[float, ChaosPoly]]) -> ChaosPoly:
    """sum_j a_j * p_j, coefficient-wise, with canonical sparsity restored."""
    space = _require_shared([p for _, p in terms])
    acc: dict[MultiIndex, float] = {}
    for scale, p in terms:
        for alpha, c in p.coeffs.items():
            acc[alpha] = acc.get(alpha, 0.0) + scale * c
    return ChaosPoly.from_coeffs(space, acc)


def multiply(
    a: ChaosPoly,
    b: ChaosPoly,
    policy: TruncationPolicy = TruncationPolicy.ERROR,
) -> ChaosPoly:
    """Exact product via per-direction Hermite linearization.

    Under ``ERROR`` any nonzero term above the cap raises; under ``TRUNCATE``
    such terms are dropped.
    """
    space = _require_shared([a, b])
    cap = space.degree_cap
    table = linearization_table(cap)
    acc: dict[MultiIndex, float] = {}
    for alpha, ca in a.coeffs.items():
        for beta, cb in b.coeffs.items():
            if policy is TruncationPolicy.TRUNCATE and alpha.degree + beta.degree - 2 * _overlap(alpha, beta) > cap:
                # even the lowest-degree term of this pair is above the cap
                continue
            directions = sorted(set(alpha.support) | set(beta.support))
            factors = [table[(alpha.get(i), beta.get(i))] for i in directions]
            for choice in itertools.product(*factors):
                degree = sum(k for k, _ in choice)
                coefficient = ca * cb
                for _, lin in choice:
                    coefficient *= lin
                if coefficient == 0.0:
                    continue
                if degree > cap:
                    if policy is TruncationPolicy.ERROR:
                        raise DegreeOverflowError(
                            f"product degree {degree} exceeds cap {cap}"
                        )
                    continue
                key = MultiIndex(tuple((i, k) for i, (k, _) in zip(directions, choice) if k))
                acc[key] = acc.get(key, 0.0) + coefficient
    return ChaosPoly.from_coeffs(space, acc)


def _overlap(alpha: MultiIndex, beta: MultiIndex) -> int:
    return sum(min(k, beta.get(i)) for i, k in alpha.entries)


def evaluate(p: ChaosPoly, x: np.ndarray) -> np.ndarray | float:
    """Pointwise value at one point (shape (dim,)) or a batch (shape (N, dim))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    batch = np.atleast_2d(x)
    if batch.shape[-1] != p.space.dim:
        raise DimensionMismatchError(
            f"points have {batch.shape[-1]} coordinates, space has {p.space.dim}"
        )
    values = np.zeros(batch.shape[0])
    if p.is_zero:
        return float(values[0]) if single else values
    alphas, coeffs = compiled_terms(p)
    directions = np.arange(p.space.dim)[None, :]
    for start in range(0, batch.shape[0], EVAL_CHUNK):
        rows = batch[start : start + EVAL_CHUNK]
        table = hermite_table(rows, max(p.degree, 1))
        # table[n, i, k] -> gather H_{alpha[t, i]}(x[n, i]) for every term t
        gathered = table[:, directions, alphas]
        values[start : start + EVAL_CHUNK] = np.prod(gathered, axis=-1) @ coeffs
    return float(values[0]) if single else values


def compiled_terms(p: ChaosPoly) -> tuple[np.ndarray, np.ndarray]:
    """Dense (T, dim) int array of multi-indices and (T,) coefficients."""
    alphas = np.array([alpha.to_dense(p.space.dim) for alpha in p.coeffs], dtype=int)
    coeffs = np.fromiter(p.coeffs.values(), dtype=float, count=len(p.coeffs))
    return alphas.reshape(len(p.coeffs), p.space.dim), coeffs


def expectation(p: ChaosPoly) -> float:
    """E[p]: the coefficient of the zero multi-index."""
    return p.mean


def l2_inner(a: ChaosPoly, b: ChaosPoly) -> float:
    """E[ab] = sum_alpha a_alpha b_alpha (orthonormal basis)."""
    _require_shared([a, b])
    small, large = (a, b) if len(a.coeffs) <= len(b.coeffs) else (b, a)
    return math.fsum(c * large.coeffs[alpha] for alpha, c in small.coeffs.items() if alpha in large.coeffs)


def compose_linear(p: ChaosPoly, matrix: np.ndarray) -> ChaosPoly:
    """Chaos expansion of x -> p(Rx) for a real dim x dim matrix R.

    Each H_k(<r_i, x>) is built inside the algebra with the three-term
    recurrence, so the result is exact up to roundoff and degree preserving.
    """
    space = p.space
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (space.dim, space.dim):
        raise DimensionMismatchError(
            f"matrix shape {matrix.shape} does not match dimension {space.dim}"
        )
    rows = [
        ChaosPoly.from_coeffs(
            space, {MultiIndex.unit(j): matrix[i, j] for j in range(space.dim)}
        )
        for i in range(space.dim)
    ]
    ladders: dict[int, list[ChaosPoly]] = {}

    def hermite_of_row(i: int, k: int) -> ChaosPoly:
        ladder = ladders.setdefault(i, [ChaosPoly.constant(space, 1.0), rows[i]])
        while len(ladder) <= k:
            n = len(ladder) - 1
            nxt = linear_combine(
                [
                    (1.0 / math.sqrt(n + 1), multiply(rows[i], ladder[n])),
                    (-math.sqrt(n) / math.sqrt(n + 1), ladder[n - 1]),
                ]
            )
            ladder.append(nxt)
        return ladder[k]

    terms = []
    for alpha, c in p.coeffs.items():
        product = ChaosPoly.constant(space, c)
        for i, k in alpha.entries:
            product = multiply(product, hermite_of_row(i, k))
        terms.append((1.0, product))
    if not terms:
        return ChaosPoly.zero(space)
    return linear_combine(terms)
