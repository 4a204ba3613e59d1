"""Gaussian space, multi-indices and the chaos error hierarchy."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class ChaosError(Exception):
    """Base class for chaos algebra failures."""

    pass


class DimensionMismatchError(ChaosError):
    """Operands live in different Gaussian spaces (or have incompatible shapes)."""

    pass


class DegreeOverflowError(ChaosError):
    """A result would exceed the degree cap under the error-on-overflow policy."""

    pass


class ChaosDomainError(ChaosError):
    """An operator was applied outside its domain."""

    pass


class TruncationPolicy(str, Enum):
    """What to do with terms whose total degree exceeds the cap."""

    ERROR = "error-on-overflow"
    TRUNCATE = "truncate-to-cap"


@dataclass(frozen=True)
class GaussianSpace:
    """Standard Gaussian on R^dim with polynomials of total degree <= degree_cap.

    Directions are 0-based: direction ``i`` is the basis vector e_{i+1}.
    ``weights`` (q_1..q_n) define the surrogate norm ||x||_W = ||Qx||.
    """

    dim: int
    degree_cap: int
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ChaosError(f"dim must be >= 1, got {self.dim}")
        if self.degree_cap < 1:
            raise ChaosError(f"degree_cap must be >= 1, got {self.degree_cap}")
        if self.weights is not None:
            weights = tuple(float(q) for q in self.weights)
            if len(weights) != self.dim:
                raise ChaosError(
                    f"weights has length {len(weights)}, expected {self.dim}"
                )
            if any(q <= 0 for q in weights):
                raise ChaosError("weights must be strictly positive")
            object.__setattr__(self, "weights", weights)

    def with_cap(self, degree_cap: int) -> "GaussianSpace":
        """Same directions and weights, different degree cap."""
        return GaussianSpace(self.dim, degree_cap, self.weights)

    def require_same(self, other: "GaussianSpace") -> None:
        if self != other:
            raise DimensionMismatchError(f"space mismatch: {self} vs {other}")


@dataclass(frozen=True, order=False)
class MultiIndex:
    """Sparse multi-index: sorted ``(direction, power)`` pairs with power > 0."""

    entries: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def zero(cls) -> "MultiIndex":
        return _ZERO

    @classmethod
    def unit(cls, direction: int, power: int = 1) -> "MultiIndex":
        if power < 0 or direction < 0:
            raise ChaosError(f"invalid unit index ({direction}, {power})")
        return cls(((direction, power),)) if power else _ZERO

    @classmethod
    def from_dense(cls, powers: Sequence[int]) -> "MultiIndex":
        if any(int(k) < 0 for k in powers):
            raise ChaosError(f"negative power in multi-index {list(powers)}")
        return cls(tuple((i, int(k)) for i, k in enumerate(powers) if k))

    @classmethod
    def from_mapping(cls, powers: dict[int, int]) -> "MultiIndex":
        if any(k < 0 or i < 0 for i, k in powers.items()):
            raise ChaosError(f"invalid multi-index {powers}")
        return cls(tuple(sorted((i, k) for i, k in powers.items() if k)))

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.entries)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def max_direction(self) -> int:
        """Largest direction used, -1 for the zero index."""
        return self.entries[-1][0] if self.entries else -1

    def get(self, direction: int) -> int:
        for i, k in self.entries:
            if i == direction:
                return k
        return 0

    def shifted(self, direction: int, delta: int) -> "MultiIndex | None":
        """alpha + delta * e_direction, or None if a power would go negative."""
        powers = dict(self.entries)
        new_power = powers.get(direction, 0) + delta
        if new_power < 0:
            return None
        powers[direction] = new_power
        return MultiIndex.from_mapping(powers)

    def to_dense(self, dim: int) -> list[int]:
        dense = [0] * dim
        for i, k in self.entries:
            if i >= dim:
                raise DimensionMismatchError(
                    f"direction {i} outside a space of dimension {dim}"
                )
            dense[i] = k
        return dense

    def supported_below(self, m: int) -> bool:
        """True when every used direction is < m."""
        return self.max_direction < m

    def sort_key(self) -> tuple:
        return (self.degree, self.entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}:{k}" for i, k in self.entries)
        return f"MultiIndex({{{inner}}})"


_ZERO = MultiIndex(())


def check_index(space: GaussianSpace, alpha: MultiIndex) -> None:
    """Validate an index against a space (directions and degree cap)."""
    if alpha.max_direction >= space.dim:
        raise DimensionMismatchError(
            f"{alpha} uses direction {alpha.max_direction} in a {space.dim}-dim space"
        )
    if alpha.degree > space.degree_cap:
        raise DegreeOverflowError(
            f"{alpha} has degree {alpha.degree} > cap {space.degree_cap}"
        )


def total_degree_indices(dim: int, degree: int) -> Iterable[MultiIndex]:
    """All multi-indices of exactly the given total degree, in a fixed order."""
    if degree == 0:
        yield _ZERO
        return

    def _rec(start: int, remaining: int, prefix: tuple[tuple[int, int], ...]):
        if remaining == 0:
            yield MultiIndex(prefix)
            return
        for i in range(start, dim):
            for k in range(remaining, 0, -1):
                yield from _rec(i + 1, remaining - k, prefix + ((i, k),))

    yield from _rec(0, degree, ())
