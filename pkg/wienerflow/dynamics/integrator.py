"""Batched ODE integration of flow maps T_{s,t}, with optional variational and density channels.

The integrated state per sample is ``x`` (dim), optionally the running
divergence integral ``int_s^r delta v_q(x_q) dq`` (1) and optionally the
Jacobian ``DT_{s,r}`` (dim x dim, row-major). Backward flows (t < s) are
allowed.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from prefect.logging import get_logger
from scipy.integrate import solve_ivp

from .fields import FlowError, MissingDivergenceError, VectorField

logger = get_logger("wienerflow.dynamics")


class SolverMethod(str, Enum):
    RK45 = "rk45"
    RK4 = "rk4"


@dataclass(frozen=True)
class SolverOptions:
    method: SolverMethod = SolverMethod.RK45
    atol: float = 1e-9
    rtol: float = 1e-9
    steps: int = 400
    chunk_size: int = 256

    def __post_init__(self):
        object.__setattr__(self, "method", SolverMethod(self.method))
        if self.steps < 1 or self.chunk_size < 1:
            raise FlowError("steps and chunk_size must be positive")

    @property
    def tolerance(self) -> float:
        """Nominal per-sample accuracy target used in check bounds."""
        if self.method is SolverMethod.RK4:
            return max(self.atol, 1e-9)
        return max(self.atol, self.rtol)


@dataclass
class FlowDiagnostics:
    method: str
    atol: float
    rtol: float
    steps: int = 0
    evaluations: int = 0
    failures: int = 0
    messages: list[str] = field(default_factory=list)


@dataclass
class FlowResult:
    """Trajectories of T_{s, r}(x) for r on ``times`` (times[0] = s, times[-1] = t).

    ``log_density`` holds int_s^t delta v_r(T_{s,r} x) dr, which is
    log Lambda_{s,t} evaluated at the endpoint T_{s,t} x. Failed samples have
    NaN trajectories and ``failed`` set.
    """

    s: float
    t: float
    sample_points: np.ndarray
    times: np.ndarray
    trajectories: np.ndarray
    failed: np.ndarray
    diagnostics: FlowDiagnostics
    options: SolverOptions
    log_density: np.ndarray | None = None
    jacobians: np.ndarray | None = None
    jacobian_path: np.ndarray | None = None

    @property
    def endpoints(self) -> np.ndarray:
        return self.trajectories[:, -1, :]

    @property
    def density(self) -> np.ndarray | None:
        return None if self.log_density is None else np.exp(self.log_density)

    @property
    def success(self) -> bool:
        return not bool(self.failed.any())

    @property
    def error(self) -> str:
        return "; ".join(self.diagnostics.messages)


def _time_grid(s: float, t: float, grid: np.ndarray | int | None) -> np.ndarray:
    if grid is None:
        return np.array([s, t], dtype=float)
    if isinstance(grid, (int, np.integer)):
        return np.linspace(s, t, max(int(grid), 2))
    grid = np.asarray(grid, dtype=float)
    if grid[0] != s or grid[-1] != t:
        raise FlowError(f"time grid must run from s={s} to t={t}")
    if s != t and np.any(np.diff(grid) * np.sign(t - s) <= 0):
        raise FlowError("time grid must be strictly monotone in the flow direction")
    return grid


class _System:
    """Right-hand side of the augmented flow ODE on a flat state vector."""

    def __init__(self, field: VectorField, n: int, with_log_density: bool, with_jacobian: bool):
        self.field = field
        self.n = n
        self.dim = field.dim
        self.with_log_density = with_log_density
        self.with_jacobian = with_jacobian
        self.width = self.dim + int(with_log_density) + (self.dim**2 if with_jacobian else 0)
        self.evaluations = 0

    def initial(self, x0: np.ndarray) -> np.ndarray:
        parts = [x0]
        if self.with_log_density:
            parts.append(np.zeros((len(x0), 1)))
        if self.with_jacobian:
            parts.append(np.tile(np.eye(self.dim).ravel(), (len(x0), 1)))
        return np.concatenate(parts, axis=1)

    def split(self, state: np.ndarray) -> tuple[np.ndarray, np.ndarray | None, np.ndarray | None]:
        d = self.dim
        x = state[:, :d]
        ell = state[:, d] if self.with_log_density else None
        offset = d + int(self.with_log_density)
        jac = state[:, offset:].reshape(-1, d, d) if self.with_jacobian else None
        return x, ell, jac

    def derivative(self, r: float, state: np.ndarray) -> np.ndarray:
        """State (N, width) -> time derivative (N, width)."""
        self.evaluations += 1
        x, _, jac = self.split(state)
        parts = [self.field.velocity(r, x)]
        if self.with_log_density:
            parts.append(self.field.divergence(r, x)[:, None])
        if self.with_jacobian:
            dv = self.field.jacobian(r, x)
            parts.append(np.einsum("nij,njk->nik", dv, jac).reshape(len(x), -1))
        return np.concatenate(parts, axis=1)

    def flat(self, r: float, y: np.ndarray) -> np.ndarray:
        state = y.reshape(-1, self.width)
        with np.errstate(all="ignore"):
            return self.derivative(r, state).ravel()


def _solve_rk45(system: _System, times: np.ndarray, y0: np.ndarray, options: SolverOptions):
    """solve_ivp on a chunk; tolerances shrink with the chunk size so the RMS
    error norm still bounds every component."""
    size = y0.size
    shrink = math.sqrt(size)
    rtol = max(options.rtol / shrink, 1e-13)
    atol = options.atol / shrink
    span = (times[0], times[-1])
    solution = solve_ivp(
        system.flat, span, y0.ravel(), method="RK45", t_eval=times, rtol=rtol, atol=atol
    )
    if solution.status != 0 or solution.y.shape[1] != len(times):
        return None, solution.message
    states = solution.y.T.reshape(len(times), -1, system.width)
    return np.transpose(states, (1, 0, 2)), solution.message


def _solve_rk4(system: _System, times: np.ndarray, y0: np.ndarray, options: SolverOptions):
    """Classical fixed-step RK4; the step budget is spread over the grid intervals."""
    total = abs(times[-1] - times[0])
    out = np.empty((len(y0), len(times), system.width))
    out[:, 0] = y0
    state = y0.copy()
    with np.errstate(all="ignore"):
        for k in range(len(times) - 1):
            a, b = times[k], times[k + 1]
            n_steps = max(1, math.ceil(options.steps * abs(b - a) / total)) if total else 1
            h = (b - a) / n_steps
            r = a
            for _ in range(n_steps):
                k1 = system.derivative(r, state)
                k2 = system.derivative(r + h / 2, state + h / 2 * k1)
                k3 = system.derivative(r + h / 2, state + h / 2 * k2)
                k4 = system.derivative(r + h, state + h * k3)
                state = state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
                r += h
            out[:, k + 1] = state
    return out


def integrate_flow(
    field: VectorField,
    s: float,
    t: float,
    x0: np.ndarray,
    options: SolverOptions | None = None,
    grid: np.ndarray | int | None = None,
    with_log_density: bool = False,
    with_jacobian: bool = False,
) -> FlowResult:
    """Solve dx/dr = v_r(x), x(s) = x0, up to r = t for every sample.

    Samples whose solve fails (step-size underflow, non-finite state) are
    reported in ``failed`` rather than raised. An adaptive chunk that fails
    is re-solved sample by sample so one bad sample does not sink its chunk.
    """
    options = options or SolverOptions()
    field.check_window(s, t)
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    if x0.shape[1] != field.dim:
        raise FlowError(f"start points have {x0.shape[1]} coordinates, field has {field.dim}")
    if with_log_density and not field.has_divergence:
        raise MissingDivergenceError(f"{field.name} has no divergence")
    times = _time_grid(s, t, grid)
    n = len(x0)
    system = _System(field, n, with_log_density, with_jacobian)
    y0 = system.initial(x0)
    diagnostics = FlowDiagnostics(method=options.method.value, atol=options.atol, rtol=options.rtol)

    if s == t:
        states = np.repeat(y0[:, None, :], len(times), axis=1)
    elif options.method is SolverMethod.RK4:
        states = _solve_rk4(system, times, y0, options)
        diagnostics.steps = options.steps
    else:
        states = np.full((n, len(times), system.width), np.nan)
        for start in range(0, n, options.chunk_size):
            chunk = slice(start, min(start + options.chunk_size, n))
            solved, message = _solve_rk45(system, times, y0[chunk], options)
            if solved is not None and np.all(np.isfinite(solved)):
                states[chunk] = solved
                continue
            logger.warning(f"[SOLVER] chunk {chunk.start}..{chunk.stop} failed ({message}); solving per sample")
            for i in range(chunk.start, chunk.stop):
                single = _System(field, 1, with_log_density, with_jacobian)
                solved, message = _solve_rk45(single, times, y0[i : i + 1], options)
                system.evaluations += single.evaluations
                if solved is not None:
                    states[i] = solved[0]
                else:
                    diagnostics.messages.append(f"sample {i}: {message}")

    failed = ~np.all(np.isfinite(states.reshape(n, -1)), axis=1)
    states[failed] = np.nan
    states[~failed, 0] = y0[~failed]
    diagnostics.evaluations = system.evaluations
    diagnostics.failures = int(failed.sum())
    if diagnostics.failures:
        logger.warning(f"[SOLVER] {diagnostics.failures}/{n} samples failed on [{s}, {t}]")

    x, ell, jac = system.split(states.reshape(n * len(times), system.width))
    trajectories = x.reshape(n, len(times), field.dim)
    log_density = ell.reshape(n, len(times))[:, -1] if with_log_density else None
    jacobian_path = jac.reshape(n, len(times), field.dim, field.dim) if with_jacobian else None
    jacobians = jacobian_path[:, -1] if with_jacobian else None
    return FlowResult(
        s=s,
        t=t,
        sample_points=x0,
        times=times,
        trajectories=trajectories,
        failed=failed,
        diagnostics=diagnostics,
        options=options,
        log_density=log_density,
        jacobians=jacobians,
        jacobian_path=jacobian_path,
    )
