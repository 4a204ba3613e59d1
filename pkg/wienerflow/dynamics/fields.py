"""Time-dependent vector fields on R^n: chaos-valued fields and a closed-form registry.

All evaluation methods are vectorized over a batch ``x`` of shape (N, dim):
``velocity`` returns (N, dim), ``divergence`` returns (N,) and ``jacobian``
returns (N, dim, dim) with ``jacobian[n, i, j] = d v_i / d x_j``.
"""

import math
from abc import ABC, abstractmethod
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from wienerflow.calculus import conditional_project, divergence, field_jacobian
from wienerflow.chaos import ChaosField, ChaosMatrix, ChaosPoly, combine_fields


class FlowError(Exception):
    """Base class for flow engine failures."""

    pass


class FieldEvaluationError(FlowError):
    """The field cannot be evaluated at the requested time or shape."""

    pass


class MissingDivergenceError(FlowError):
    """A density was requested for a field without a computable divergence."""

    pass


class WindowError(FlowError):
    """The time window violates the admissibility condition of a moment bound."""

    pass


class VectorField(ABC):
    """A time-dependent vector field v_t on R^dim over ``time_domain``."""

    name: str = "field"

    def __init__(self, dim: int, time_domain: tuple[float, float] = (-math.inf, math.inf)):
        if dim < 1:
            raise FieldEvaluationError(f"dim must be >= 1, got {dim}")
        a, b = time_domain
        if not a < b:
            raise FieldEvaluationError(f"empty time domain {time_domain}")
        self.dim = dim
        self.time_domain = (float(a), float(b))

    @property
    def autonomous(self) -> bool:
        return True

    @property
    def has_divergence(self) -> bool:
        return True

    def check_window(self, s: float, t: float) -> None:
        a, b = self.time_domain
        if min(s, t) < a or max(s, t) > b:
            raise FieldEvaluationError(
                f"{self.name} is defined on [{a}, {b}], flow requested on [{min(s, t)}, {max(s, t)}]"
            )

    @abstractmethod
    def velocity(self, t: float, x: np.ndarray) -> np.ndarray: ...

    def divergence(self, t: float, x: np.ndarray) -> np.ndarray:
        raise MissingDivergenceError(f"{self.name} has no divergence")

    @abstractmethod
    def jacobian(self, t: float, x: np.ndarray) -> np.ndarray: ...

    def dependency_pattern(self) -> np.ndarray:
        """Boolean (dim, dim): entry (i, j) is True when v_i may depend on x_j."""
        return np.ones((self.dim, self.dim), dtype=bool)

    def flow_map(self, s: float, t: float, x: np.ndarray) -> np.ndarray | None:
        """Closed-form T_{s,t}(x), or None when not available."""
        return None

    def log_density(self, s: float, t: float, y: np.ndarray) -> np.ndarray | None:
        """Closed-form log Lambda_{s,t}(y), or None when not available."""
        return None

    def is_representable(self) -> bool:
        """Finite-dimensional fields are always representable along the basis."""
        return True

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, dim={self.dim})"


class ChaosVectorField(VectorField):
    """Chaos fields at strictly increasing time nodes, interpolated linearly.

    With one node the field is autonomous on ``time_domain``. Divergences are
    taken in a space one degree above the cap, so full-cap fields never
    overflow.
    """

    name = "chaos"

    def __init__(
        self,
        nodes: Sequence[float],
        fields: Sequence[ChaosField],
        time_domain: tuple[float, float] | None = None,
    ):
        nodes = np.asarray(nodes, dtype=float)
        if len(nodes) != len(fields) or len(fields) == 0:
            raise FieldEvaluationError("need one chaos field per time node")
        if np.any(np.diff(nodes) <= 0):
            raise FieldEvaluationError(f"time nodes must be strictly increasing: {nodes}")
        space = fields[0].space
        for f in fields[1:]:
            space.require_same(f.space)
        if time_domain is None:
            time_domain = (nodes[0], nodes[-1]) if len(nodes) > 1 else (-math.inf, math.inf)
        super().__init__(space.dim, time_domain)
        self.space = space
        self.nodes = nodes
        self.fields = tuple(fields)
        lifted = space.with_cap(space.degree_cap + 1)
        self._divergences = tuple(divergence(f.lift(lifted)) for f in fields)
        self._jacobians = tuple(field_jacobian(f) for f in fields)

    @classmethod
    def autonomous_field(cls, field: ChaosField) -> "ChaosVectorField":
        return cls([0.0], [field])

    @property
    def autonomous(self) -> bool:
        return len(self.nodes) == 1

    def _weights(self, t: float) -> list[tuple[int, float]]:
        if len(self.nodes) == 1:
            return [(0, 1.0)]
        a, b = self.time_domain
        if t < a - 1e-12 or t > b + 1e-12:
            raise FieldEvaluationError(f"time {t} outside [{a}, {b}]")
        t = min(max(t, self.nodes[0]), self.nodes[-1])
        k = int(np.searchsorted(self.nodes, t, side="right")) - 1
        k = min(max(k, 0), len(self.nodes) - 2)
        w = (t - self.nodes[k]) / (self.nodes[k + 1] - self.nodes[k])
        return [(k, 1.0 - w), (k + 1, w)]

    def _mix(self, t: float, evaluate: Callable[[int], np.ndarray]) -> np.ndarray:
        return sum(w * evaluate(k) for k, w in self._weights(t) if w != 0.0)

    def velocity(self, t: float, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return self._mix(t, lambda k: self.fields[k].evaluate(x)) + np.zeros_like(x)

    def divergence(self, t: float, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return self._mix(t, lambda k: self._divergences[k].evaluate(x)) + np.zeros(len(x))

    def jacobian(self, t: float, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        zero = np.zeros((len(x), self.dim, self.dim))
        return self._mix(t, lambda k: self._jacobians[k].evaluate(x)) + zero

    def field_at(self, t: float) -> ChaosField:
        """The interpolated chaos field v_t."""
        return combine_fields([(w, self.fields[k]) for k, w in self._weights(t)])

    def dependency_pattern(self) -> np.ndarray:
        pattern = np.zeros((self.dim, self.dim), dtype=bool)
        for f in self.fields:
            for i, component in enumerate(f.components):
                for alpha in component.coeffs:
                    pattern[i, list(alpha.support)] = True
        return pattern

    def truncated(self, m: int) -> "ChaosVectorField":
        """Galerkin truncation E_m(pi_m v_t) at every node."""
        return ChaosVectorField(
            self.nodes,
            [conditional_project(f, m) for f in self.fields],
            self.time_domain,
        )


class ZeroField(VectorField):
    name = "zero"

    def velocity(self, t, x):
        return np.zeros_like(np.atleast_2d(x), dtype=float)

    def divergence(self, t, x):
        return np.zeros(len(np.atleast_2d(x)))

    def jacobian(self, t, x):
        return np.zeros((len(np.atleast_2d(x)), self.dim, self.dim))

    def dependency_pattern(self):
        return np.zeros((self.dim, self.dim), dtype=bool)

    def flow_map(self, s, t, x):
        return np.array(np.atleast_2d(x), dtype=float)

    def log_density(self, s, t, y):
        return np.zeros(len(np.atleast_2d(y)))


class TanhField(VectorField):
    """v(x) = tanh(x_d) e_d; delta v = x_d tanh x_d - sech^2 x_d.

    The flow is x_d -> asinh(e^(t-s) sinh x_d) and the pushforward density is
    known in closed form.
    """

    name = "tanh"

    def __init__(self, dim: int, direction: int = 0, **kwargs):
        super().__init__(dim, **kwargs)
        if not 0 <= direction < dim:
            raise FieldEvaluationError(f"direction {direction} outside 0..{dim - 1}")
        self.direction = direction

    def velocity(self, t, x):
        x = np.atleast_2d(x)
        out = np.zeros_like(x, dtype=float)
        out[:, self.direction] = np.tanh(x[:, self.direction])
        return out

    def divergence(self, t, x):
        xd = np.atleast_2d(x)[:, self.direction]
        return xd * np.tanh(xd) - 1.0 / np.cosh(xd) ** 2

    def jacobian(self, t, x):
        x = np.atleast_2d(x)
        out = np.zeros((len(x), self.dim, self.dim))
        out[:, self.direction, self.direction] = 1.0 / np.cosh(x[:, self.direction]) ** 2
        return out

    def dependency_pattern(self):
        pattern = np.zeros((self.dim, self.dim), dtype=bool)
        pattern[self.direction, self.direction] = True
        return pattern

    def flow_map(self, s, t, x):
        out = np.array(np.atleast_2d(x), dtype=float)
        d = self.direction
        out[:, d] = np.arcsinh(math.exp(t - s) * np.sinh(out[:, d]))
        return out

    def log_density(self, s, t, y):
        yd = np.atleast_2d(y)[:, self.direction]
        tau = t - s
        x0 = np.arcsinh(math.exp(-tau) * np.sinh(yd))
        return (
            0.5 * (yd**2 - x0**2)
            - tau
            + np.log(np.cosh(yd))
            - np.log(np.cosh(x0))
        )


class LinearField(VectorField):
    """v(x) = M x; delta v = x^T M x - tr M; flow expm((t - s) M)."""

    name = "linear"

    def __init__(self, matrix: Sequence[Sequence[float]], **kwargs):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise FieldEvaluationError(f"linear field needs a square matrix, got {matrix.shape}")
        super().__init__(matrix.shape[0], **kwargs)
        self.matrix = matrix

    def velocity(self, t, x):
        return np.atleast_2d(x) @ self.matrix.T

    def divergence(self, t, x):
        x = np.atleast_2d(x)
        return np.einsum("ni,ij,nj->n", x, self.matrix, x) - np.trace(self.matrix)

    def jacobian(self, t, x):
        return np.broadcast_to(self.matrix, (len(np.atleast_2d(x)), self.dim, self.dim)).copy()

    def dependency_pattern(self):
        return self.matrix != 0

    def propagator(self, s: float, t: float) -> np.ndarray:
        return linalg.expm((t - s) * self.matrix)

    def flow_map(self, s, t, x):
        return np.atleast_2d(x) @ self.propagator(s, t).T

    def log_density(self, s, t, y):
        y = np.atleast_2d(y)
        x0 = y @ self.propagator(t, s).T
        return 0.5 * (np.sum(y**2, axis=1) - np.sum(x0**2, axis=1)) - (t - s) * np.trace(self.matrix)


class RotationField(LinearField):
    """omega (-x_2, x_1) in the plane of the first two coordinates; divergence free."""

    name = "rotation"

    def __init__(self, dim: int, omega: float = 1.0, **kwargs):
        if dim < 2:
            raise FieldEvaluationError("rotation needs dim >= 2")
        matrix = np.zeros((dim, dim))
        matrix[0, 1] = -omega
        matrix[1, 0] = omega
        super().__init__(matrix, **kwargs)
        self.omega = omega


class BlowupField(VectorField):
    """v(x) = x_1^2 e_1; blows up at time 1/x_1 for x_1 > 0."""

    name = "blowup"

    def velocity(self, t, x):
        x = np.atleast_2d(x)
        out = np.zeros_like(x, dtype=float)
        out[:, 0] = x[:, 0] ** 2
        return out

    def divergence(self, t, x):
        x1 = np.atleast_2d(x)[:, 0]
        return x1**3 - 2.0 * x1

    def jacobian(self, t, x):
        x = np.atleast_2d(x)
        out = np.zeros((len(x), self.dim, self.dim))
        out[:, 0, 0] = 2.0 * x[:, 0]
        return out

    def dependency_pattern(self):
        pattern = np.zeros((self.dim, self.dim), dtype=bool)
        pattern[0, 0] = True
        return pattern

    def flow_map(self, s, t, x):
        out = np.array(np.atleast_2d(x), dtype=float)
        x1 = out[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            denominator = 1.0 - x1 * (t - s)
            out[:, 0] = np.where(denominator > 0, x1 / denominator, np.nan)
        return out


FIELD_REGISTRY: dict[str, Callable[..., VectorField]] = {
    "zero": ZeroField,
    "tanh": TanhField,
    "rotation": RotationField,
    "linear": LinearField,
    "blowup": BlowupField,
}


def closed_form_field(name: str, dim: int, **params) -> VectorField:
    """Build a registry field by name; ``linear`` takes ``matrix`` instead of ``dim``."""
    try:
        factory = FIELD_REGISTRY[name]
    except KeyError:
        raise FieldEvaluationError(
            f"unknown field {name!r}; registry has {sorted(FIELD_REGISTRY)}"
        ) from None
    if factory is LinearField:
        field = LinearField(params.pop("matrix"), **params)
        if field.dim != dim:
            raise FieldEvaluationError(f"matrix is {field.dim}x{field.dim}, space has dim {dim}")
        return field
    return factory(dim, **params)


def constant_matrix_field(a: ChaosMatrix) -> LinearField:
    """The linear field B = dd(A^T) = A^T x of a constant matrix A."""
    return LinearField(a.constant_values().T)


def poly_functional(poly: ChaosPoly) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized pointwise evaluation of a chaos poly, for estimators."""
    return lambda x: np.atleast_1d(poly.evaluate(x))
