"""Vector- and matrix-valued random variables built from chaos polys."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .poly import ChaosPoly, linear_combine, multiply
from .space import DimensionMismatchError, GaussianSpace, MultiIndex, TruncationPolicy


@dataclass(frozen=True, eq=False)
class ChaosField:
    """Random vector field v with component i = <v, e_i>."""

    space: GaussianSpace
    components: tuple[ChaosPoly, ...]

    __array_ufunc__ = None

    def __post_init__(self):
        components = tuple(self.components)
        if len(components) != self.space.dim:
            raise DimensionMismatchError(
                f"field has {len(components)} components, space has dim {self.space.dim}"
            )
        for c in components:
            self.space.require_same(c.space)
        object.__setattr__(self, "components", components)

    @classmethod
    def zero(cls, space: GaussianSpace) -> "ChaosField":
        return cls(space, tuple(ChaosPoly.zero(space) for _ in range(space.dim)))

    @classmethod
    def constant(cls, space: GaussianSpace, vector: Sequence[float]) -> "ChaosField":
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (space.dim,):
            raise DimensionMismatchError(f"vector shape {vector.shape} for dim {space.dim}")
        return cls(space, tuple(ChaosPoly.constant(space, c) for c in vector))

    @classmethod
    def identity(cls, space: GaussianSpace) -> "ChaosField":
        """The field x -> x, component i = x_i."""
        return cls(space, tuple(ChaosPoly.coordinate(space, i) for i in range(space.dim)))

    def __getitem__(self, i: int) -> ChaosPoly:
        return self.components[i]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def l2_norm(self) -> float:
        """sqrt(E ||v||^2)."""
        return float(np.sqrt(sum(c.l2_norm() ** 2 for c in self.components)))

    def max_abs_diff(self, other: "ChaosField") -> float:
        self.space.require_same(other.space)
        return max(a.max_abs_diff(b) for a, b in zip(self.components, other.components))

    def allclose(self, other: "ChaosField", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def chop(self, atol: float) -> "ChaosField":
        return ChaosField(self.space, tuple(c.chop(atol) for c in self.components))

    def lift(self, space: GaussianSpace) -> "ChaosField":
        return ChaosField(space, tuple(c.lift(space) for c in self.components))

    def map(self, fn) -> "ChaosField":
        """Apply a poly -> poly function to every component."""
        return ChaosField(self.space, tuple(fn(c) for c in self.components))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Values at a batch (N, dim) -> (N, dim), or a point (dim,) -> (dim,)."""
        x = np.asarray(x, dtype=float)
        values = np.stack([np.atleast_1d(c.evaluate(x)) for c in self.components], axis=-1)
        return values[0] if x.ndim == 1 else values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChaosField):
            return NotImplemented
        return self.space == other.space and self.components == other.components

    __hash__ = None

    def __add__(self, other: "ChaosField") -> "ChaosField":
        return combine_fields([(1.0, self), (1.0, other)])

    def __sub__(self, other: "ChaosField") -> "ChaosField":
        return combine_fields([(1.0, self), (-1.0, other)])

    def __neg__(self) -> "ChaosField":
        return self.map(lambda c: -c)

    def __mul__(self, scalar: float) -> "ChaosField":
        return combine_fields([(float(scalar), self)])

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class ChaosMatrix:
    """Random bilinear form K with entry (i, j) = <K e_j, e_i>, stored row-major."""

    space: GaussianSpace
    entries: tuple[tuple[ChaosPoly, ...], ...]

    __array_ufunc__ = None

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        n = self.space.dim
        if len(rows) != n or any(len(row) != n for row in rows):
            raise DimensionMismatchError(f"matrix must be {n}x{n}")
        for row in rows:
            for entry in row:
                self.space.require_same(entry.space)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zero(cls, space: GaussianSpace) -> "ChaosMatrix":
        return cls.from_function(space, lambda i, j: ChaosPoly.zero(space))

    @classmethod
    def constant(cls, space: GaussianSpace, matrix: Sequence[Sequence[float]]) -> "ChaosMatrix":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (space.dim, space.dim):
            raise DimensionMismatchError(f"matrix shape {matrix.shape} for dim {space.dim}")
        return cls.from_function(space, lambda i, j: ChaosPoly.constant(space, matrix[i, j]))

    @classmethod
    def from_function(cls, space: GaussianSpace, fn) -> "ChaosMatrix":
        n = space.dim
        return cls(space, tuple(tuple(fn(i, j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[ChaosField]) -> "ChaosMatrix":
        space = rows[0].space
        return cls(space, tuple(tuple(row.components) for row in rows))

    def __getitem__(self, index: tuple[int, int]) -> ChaosPoly:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> ChaosField:
        return ChaosField(self.space, self.entries[i])

    def column(self, j: int) -> ChaosField:
        return ChaosField(self.space, tuple(row[j] for row in self.entries))

    @property
    def degree(self) -> int:
        return max(entry.degree for row in self.entries for entry in row)

    @property
    def is_zero(self) -> bool:
        return all(entry.is_zero for row in self.entries for entry in row)

    @property
    def is_constant(self) -> bool:
        zero = MultiIndex.zero()
        return all(
            set(entry.coeffs) <= {zero} for row in self.entries for entry in row
        )

    def constant_values(self) -> np.ndarray:
        """Deterministic part E[K] as a dim x dim array."""
        return np.array([[entry.mean for entry in row] for row in self.entries])

    def map(self, fn) -> "ChaosMatrix":
        return ChaosMatrix(self.space, tuple(tuple(fn(e) for e in row) for row in self.entries))

    def max_abs_diff(self, other: "ChaosMatrix") -> float:
        self.space.require_same(other.space)
        return max(
            a.max_abs_diff(b)
            for row_a, row_b in zip(self.entries, other.entries)
            for a, b in zip(row_a, row_b)
        )

    def allclose(self, other: "ChaosMatrix", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def chop(self, atol: float) -> "ChaosMatrix":
        return self.map(lambda e: e.chop(atol))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Values at a batch (N, dim) -> (N, dim, dim)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.stack(
            [np.stack([e.evaluate(x) for e in row], axis=-1) for row in self.entries],
            axis=-2,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChaosMatrix):
            return NotImplemented
        return self.space == other.space and self.entries == other.entries

    __hash__ = None

    def __add__(self, other: "ChaosMatrix") -> "ChaosMatrix":
        return _combine_matrices([(1.0, self), (1.0, other)])

    def __sub__(self, other: "ChaosMatrix") -> "ChaosMatrix":
        return _combine_matrices([(1.0, self), (-1.0, other)])

    def __neg__(self) -> "ChaosMatrix":
        return self.map(lambda e: -e)

    def __mul__(self, scalar: float) -> "ChaosMatrix":
        return _combine_matrices([(float(scalar), self)])

    __rmul__ = __mul__


def combine_fields(terms: Sequence[tuple[float, ChaosField]]) -> ChaosField:
    space = terms[0][1].space
    for _, f in terms[1:]:
        space.require_same(f.space)
    return ChaosField(
        space,
        tuple(
            linear_combine([(a, f.components[i]) for a, f in terms])
            for i in range(space.dim)
        ),
    )


def _combine_matrices(terms: Sequence[tuple[float, ChaosMatrix]]) -> ChaosMatrix:
    space = terms[0][1].space
    for _, m in terms[1:]:
        space.require_same(m.space)
    return ChaosMatrix.from_function(
        space, lambda i, j: linear_combine([(a, m.entries[i][j]) for a, m in terms])
    )


def field_pair(
    u: ChaosField, v: ChaosField, policy: TruncationPolicy = TruncationPolicy.ERROR
) -> ChaosPoly:
    """Pointwise pairing <u, v> = sum_i u_i v_i."""
    u.space.require_same(v.space)
    return linear_combine(
        [(1.0, multiply(a, b, policy)) for a, b in zip(u.components, v.components)]
    )


def scale_field(
    alpha: ChaosPoly, v: ChaosField, policy: TruncationPolicy = TruncationPolicy.ERROR
) -> ChaosField:
    """The field alpha * v for a scalar random variable alpha."""
    return v.map(lambda c: multiply(alpha, c, policy))


def scale_matrix(
    alpha: ChaosPoly, k: ChaosMatrix, policy: TruncationPolicy = TruncationPolicy.ERROR
) -> ChaosMatrix:
    return k.map(lambda e: multiply(alpha, e, policy))
