"""Command bodies behind the CLI: plain functions returning a report plus output tables."""

import math
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Callable

import numpy as np
from pydantic import BaseModel

from wienerflow.blocks import EngineConfig
from wienerflow.calculus import (
    CounterexampleRow,
    divergence,
    gradient,
    hermite_counterexample_demo,
    matrix_transpose,
    op_divergence,
    weight_profile,
)
from wienerflow.chaos import ChaosError, ChaosField, ChaosMatrix, ChaosPoly, GaussianSpace
from wienerflow.chaos.serialization import matrix_from_doc, poly_from_doc
from wienerflow.dynamics import (
    ChaosVectorField,
    DensityMode,
    FlowError,
    FlowResult,
    GalerkinTable,
    SolverOptions,
    TransportTable,
    VectorField,
    adaptedness_check,
    converse_residuals,
    density_along_flow,
    density_lp_check,
    exp_moment_diagnostics,
    flow_law_residual,
    galerkin_convergence,
    group_law_residual,
    integrate_flow,
    measure_preservation_check,
    reversibility_residual,
    transport_field,
    transport_pde_residual,
)
from wienerflow.hodge import (
    HodgeDecomposition,
    NotDivergenceFreeError,
    antisym_representation,
    hodge_bundle,
    hodge_decompose,
)
from wienerflow.montecarlo import Estimate, pushforward_pair, sample_gaussian
from wienerflow.state import CheckRecord, ConfigError, RunConfig, RunReport, load_document
from wienerflow.verification import run_suite
from wienerflow.verification.checks import (
    exact_check,
    flag_check,
    mc_check,
    path_count,
    solver_bound,
)

# accumulated roundoff in exact chaos identities
IDENTITY_ATOL = 1e-10


@dataclass
class CsvTable:
    """Plot-ready table written with one header line."""

    columns: list[str]
    rows: np.ndarray

    def write(self, path: Path) -> None:
        np.savetxt(path, self.rows, delimiter=",", header=",".join(self.columns), comments="")


@dataclass
class Outcome:
    """What a command produced: the report, CSV tables and extra JSON documents."""

    report: RunReport
    tables: dict[str, CsvTable] = dataclass_field(default_factory=dict)
    documents: dict[str, BaseModel] = dataclass_field(default_factory=dict)
    galerkin: GalerkinTable | None = None
    transport: TransportTable | None = None
    demo: list[CounterexampleRow] | None = None

    @property
    def passed(self) -> bool:
        return self.report.passed


# =============================================================================
# verify
# =============================================================================


def verify_experiment(suite: str, config: RunConfig, engine: EngineConfig) -> Outcome:
    checks = run_suite(suite, config, engine)
    return Outcome(RunReport(command=f"verify {suite}", config=config, checks=checks))


# =============================================================================
# hodge
# =============================================================================


def _hodge_checks(v: ChaosField, parts: HodgeDecomposition, a: ChaosMatrix | None) -> list[CheckRecord]:
    free = max((abs(c) for c in divergence(parts.v0).coeffs.values()), default=0.0)
    records = [
        exact_check("delta v0 = 0", free, IDENTITY_ATOL),
        exact_check("ve = grad psi", parts.ve.max_abs_diff(gradient(parts.psi)), IDENTITY_ATOL),
        exact_check("v0 + ve = v", parts.reconstruct().max_abs_diff(v), IDENTITY_ATOL),
    ]
    if a is None:
        records.append(flag_check("dd A = v0", False, detail="v0 has no antisymmetric representation"))
    else:
        records.append(exact_check("dd A = v0", op_divergence(a).max_abs_diff(parts.v0), IDENTITY_ATOL))
        records.append(
            exact_check("A + A^T = 0", (a + matrix_transpose(a)).max_abs_diff(ChaosMatrix.zero(a.space)), 0.0)
        )
    return records


def hodge_experiment(field_file: str, config: RunConfig, engine: EngineConfig) -> Outcome:
    """Decompose the field stored in ``field_file`` and represent its divergence-free part."""
    v = load_document(field_file)
    if not isinstance(v, ChaosField):
        raise ConfigError(f"{field_file}: expected a field document, got a {type(v).__name__}")
    parts = hodge_decompose(v)
    try:
        a = antisym_representation(parts.v0)
    except NotDivergenceFreeError:
        a = None
    report = RunReport(
        command="hodge",
        config=config,
        checks=_hodge_checks(v, parts, a),
        results={
            "field_file": field_file,
            "v0_norm": parts.v0.l2_norm(),
            "ve_norm": parts.ve.l2_norm(),
            "psi_degree": parts.psi.degree,
        },
    )
    return Outcome(report, documents={"bundle": hodge_bundle(parts, a)})


# =============================================================================
# flow
# =============================================================================


@dataclass
class _FlowRun:
    config: RunConfig
    engine: EngineConfig
    field: VectorField
    flow: FlowResult
    options: SolverOptions
    results: dict = dataclass_field(default_factory=dict)
    tables: dict[str, CsvTable] = dataclass_field(default_factory=dict)
    galerkin: GalerkinTable | None = None

    @property
    def ok_points(self) -> np.ndarray:
        return self.flow.sample_points[~self.flow.failed]

    @property
    def seed(self) -> int:
        return self.config.batch.seed

    @property
    def n(self) -> int:
        return self.config.batch.n or self.engine.mc_samples


def _density_checks(run: _FlowRun) -> list[CheckRecord]:
    field, s, t = run.field, run.config.s, run.config.t
    if not field.has_divergence:
        return [flag_check("density", False, detail=f"{field.name} has no divergence")]
    y = run.flow.endpoints[~run.flow.failed]
    routed = density_along_flow(field, s, t, y, options=run.options)
    jacobian = density_along_flow(field, s, t, y, DensityMode.JACOBIAN, run.options)
    run.tables["densities"] = CsvTable(
        ["sample"] + [f"y{i + 1}" for i in range(field.dim)] + ["log_density", "density"],
        np.column_stack([np.flatnonzero(~run.flow.failed), y, routed.log_density, routed.density]),
    )
    records = [
        exact_check(
            "divergence route = jacobian route",
            float(np.nanmax(np.abs(routed.log_density - jacobian.log_density), initial=0.0)),
            1e-6,
        )
    ]
    analytic = field.log_density(s, t, y)
    if analytic is not None:
        gap = float(np.nanmax(np.abs(routed.log_density - analytic), initial=0.0))
        records.append(exact_check("divergence route = analytic", gap, 1e-6))

    fresh = sample_gaussian(field.dim, run.n, run.seed + 1)
    mean = density_along_flow(field, s, t, fresh, options=run.options)
    records.append(
        mc_check("E[Lambda] = 1", Estimate.from_values(mean.density, run.seed + 1), 1.0, run.engine.se_multiplier)
    )
    return records


def _reversibility_checks(run: _FlowRun) -> list[CheckRecord]:
    x = run.ok_points
    residual = reversibility_residual(run.field, run.config.s, run.config.t, x, run.options)
    return [exact_check("T_{t,s} o T_{s,t} = id", residual, solver_bound(run.options, x))]


def _flow_law_checks(run: _FlowRun) -> list[CheckRecord]:
    s, t = run.config.s, run.config.t
    x = run.ok_points
    residual = flow_law_residual(run.field, s, 0.5 * (s + t), t, x, run.options)
    records = [exact_check("T_{s,t} = T_{r,t} o T_{s,r}", residual, solver_bound(run.options, x))]
    if run.field.autonomous and s == 0.0 and t > 0:
        group = group_law_residual(run.field, 0.4 * t, 0.6 * t, x, run.options)
        records.append(exact_check("group law T_a o T_b = T_{a+b}", group, 1e-7))
    return records


def _measure_checks(run: _FlowRun) -> list[CheckRecord]:
    check = measure_preservation_check(run.field, run.config.s, run.config.t, run.n, run.seed + 2, run.options)
    run.results["ks_p_values"] = list(check.p_values)
    return [
        CheckRecord(
            name="T_{s,t} preserves the Gaussian measure",
            mode="mc",
            value=min(check.p_values),
            bound=check.alpha,
            passed=check.passed,
            detail=f"max |Lambda - 1| = {check.max_density_deviation:.2e}",
        )
    ]


def _pushforward_checks(run: _FlowRun) -> list[CheckRecord]:
    field, s, t = run.field, run.config.s, run.config.t
    if not field.has_divergence:
        return [flag_check("pushforward", False, detail=f"{field.name} has no divergence")]
    x = sample_gaussian(field.dim, run.n, run.seed + 3)
    flow = integrate_flow(field, s, t, x, run.options)
    keep = ~flow.failed
    density = density_along_flow(field, s, t, x[keep], options=run.options)
    functions: dict[str, Callable[[np.ndarray], np.ndarray]] = {
        "x1": lambda z: z[:, 0],
        "x1^2": lambda z: z[:, 0] ** 2,
    }
    records = []
    for name, f in functions.items():
        pair = pushforward_pair(f, x[keep], flow.endpoints[keep], density.log_density, run.seed + 3)
        records.append(mc_check(f"E[{name} o T] = E[{name} Lambda]", pair.difference, 0.0, run.engine.se_multiplier))
    return records


def _adapted_checks(run: _FlowRun) -> list[CheckRecord]:
    report = adaptedness_check(run.field, run.flow)
    records = [flag_check("field is adapted", report.field_adapted)]
    records += [
        exact_check(f"flow adapted at theta={row.theta}", row.sensitivity, report.tolerance, f"level {row.level}")
        for row in report.rows
    ]
    return records


def _moment_checks(run: _FlowRun) -> list[CheckRecord]:
    field, s, t = run.field, run.config.s, run.config.t
    theta, p = run.config.bounds.theta, run.config.bounds.p
    n = min(run.n, 20_000)
    moments = exp_moment_diagnostics(field, theta, s, t, n=n, seed=run.seed + 4, workers=run.config.batch.workers or 1)
    run.results["moments"] = moments.model_dump()
    records = [
        flag_check(
            f"exponential moments finite at theta={theta}",
            moments.finite,
            mode="mc",
            detail=f"Gamma_H={moments.gamma_h.mean:.6g}, Gamma_W={moments.gamma_w.mean:.6g}",
        )
    ]
    if abs(t - s) < theta / (2.0 * p) and field.has_divergence:
        lp = density_lp_check(field, s, t, p, theta, n=n, seed=run.seed + 5, options=run.options,
                              k=run.engine.se_multiplier)
        records.append(
            CheckRecord(
                name=f"E Lambda^{p:g} <= moment bound",
                mode="mc",
                value=lp.estimate.mean,
                bound=lp.two_part_bound,
                passed=lp.passed,
                detail=f"single-field bound {lp.single_field_bound:.6g}",
            )
        )
    return records


def _galerkin_checks(run: _FlowRun) -> list[CheckRecord]:
    field = run.field
    if not isinstance(field, ChaosVectorField):
        return [flag_check("Galerkin convergence", False, detail="needs a chaos field")]
    table = galerkin_convergence(
        field,
        range(1, field.dim + 1),
        run.config.s,
        run.config.t,
        n=min(run.n, 2_000),
        seed=run.seed + 6,
        p=run.config.bounds.p,
        grid=run.config.grid,
        options=run.options,
    )
    run.galerkin = table
    run.tables["galerkin"] = CsvTable(
        ["m", "flow_deviation", "std_error", "field_gap"],
        np.array([[row.m, row.flow_deviation.mean, row.flow_deviation.std_error, row.field_gap] for row in table.rows]),
    )
    return [flag_check("Galerkin deviation non-increasing in m", table.monotone)]


FLOW_CHECKS: dict[str, Callable[[_FlowRun], list[CheckRecord]]] = {
    "density": _density_checks,
    "reversibility": _reversibility_checks,
    "flow-law": _flow_law_checks,
    "measure-preservation": _measure_checks,
    "pushforward": _pushforward_checks,
    "adapted": _adapted_checks,
    "moments": _moment_checks,
    "galerkin": _galerkin_checks,
}


def _trajectory_table(flow: FlowResult) -> CsvTable:
    n, g, d = flow.trajectories.shape
    rows = np.column_stack(
        [
            np.repeat(np.arange(n), g),
            np.tile(flow.times, n),
            flow.trajectories.reshape(n * g, d),
        ]
    )
    return CsvTable(["sample", "t"] + [f"x{i + 1}" for i in range(d)], rows)


def flow_experiment(config: RunConfig, engine: EngineConfig) -> Outcome:
    """Simulate the configured field over [s, t] and run the selected checks."""
    space = config.space.to_space()
    field = config.field.build(space)
    options = config.solver.to_options()
    x = sample_gaussian(field.dim, path_count(config), config.batch.seed)
    try:
        flow = integrate_flow(field, config.s, config.t, x, options, grid=config.grid)
    except FlowError as e:
        raise ConfigError(f"flow: {e}") from e

    run = _FlowRun(config, engine, field, flow, options)
    run.tables["trajectories"] = _trajectory_table(flow)
    checks = []
    for name in dict.fromkeys(config.checks):
        checks.extend(FLOW_CHECKS[name](run))
    run.results.update(
        field=field.name,
        samples=len(x),
        failures=flow.diagnostics.failures,
        evaluations=flow.diagnostics.evaluations,
        solver_messages=flow.diagnostics.messages[:20],
    )
    report = RunReport(command="flow", config=config, checks=checks, results=run.results)
    return Outcome(report, tables=run.tables, galerkin=run.galerkin)


# =============================================================================
# pde
# =============================================================================


def _pde_inputs(config: RunConfig) -> tuple[ChaosMatrix, ChaosPoly]:
    try:
        if config.pde.a is not None:
            a = matrix_from_doc(config.pde.a)
        else:
            matrix = np.asarray(config.pde.matrix, dtype=float)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ConfigError(f"pde.matrix must be square, got shape {matrix.shape}")
            a = ChaosMatrix.constant(GaussianSpace(len(matrix), config.space.degree_cap), matrix)
        f0 = poly_from_doc(config.pde.f0) if config.pde.f0 is not None else ChaosPoly.coordinate(a.space, 0)
        if f0.space != a.space:
            f0 = f0.lift(a.space)
    except ChaosError as e:
        raise ConfigError(f"pde: {e}") from e
    if (a + matrix_transpose(a)).max_abs_diff(ChaosMatrix.zero(a.space)) > 1e-12:
        raise ConfigError("pde: A must be antisymmetric")
    return a, f0


def pde_experiment(config: RunConfig, engine: EngineConfig) -> Outcome:
    """Residual of df/dt = delta(A grad f) along f0 o T_t, plus the group law."""
    a, f0 = _pde_inputs(config)
    options = config.solver.to_options()
    t_grid = np.linspace(0.0, config.pde.t_max, config.pde.t_grid)
    x = sample_gaussian(a.space.dim, path_count(config), config.batch.seed)
    table = transport_pde_residual(a, f0, t_grid, x, options)

    b = transport_field(a)
    t_max = config.pde.t_max
    checks = [
        exact_check("transport residual", table.max_residual, table.tolerance, f"{len(table.rows)} grid times"),
        exact_check("group law T_a o T_b = T_{a+b}", group_law_residual(b, 0.4 * t_max, 0.6 * t_max, x, options), 1e-7),
    ]
    if a.is_constant:
        dim = a.space.dim
        converse = converse_residuals(b, [1.0] * dim, [0.1 * (j + 1) for j in range(dim)], t_grid, x, options)
        checks.append(exact_check("shifted coordinate combinations solve the equation", converse.linear, 1e-6))
        checks.append(exact_check("exp(i sum of coordinates) solves the equation", converse.exponential, 1e-6))

    def column(values):
        return [math.nan if v is None else v for v in values]

    rows = np.array(
        [
            [row.t, row.pathwise_residual, row.first_order_residual]
            + column([row.chaos_residual, row.pullback_gap])
            for row in table.rows
        ]
    )
    report = RunReport(
        command="pde",
        config=config,
        checks=checks,
        results={"residuals": table.model_dump(), "constant_a": a.is_constant},
    )
    residuals = CsvTable(["t", "pathwise", "first_order", "chaos", "pullback_gap"], rows)
    return Outcome(report, tables={"residuals": residuals}, transport=table)


# =============================================================================
# demo
# =============================================================================


def demo_experiment(config: RunConfig, engine: EngineConfig) -> Outcome:
    """Partial-sum table of the Hermite series counterexample against direct summation."""
    m_max = config.demo.m_max
    try:
        q = weight_profile(config.demo.weights, m_max)
    except ChaosError as e:
        raise ConfigError(f"demo.weights: {e}") from e
    rows = hermite_counterexample_demo(m_max, q)

    n = np.arange(2, m_max + 1)
    energy = 2.0 / np.log(n) ** 2
    h_oracle = np.cumsum(energy)
    w_oracle = np.cumsum(np.asarray(q)[n - 1] ** 2 * energy)
    h_column = np.array([row.h_norm_sq for row in rows])
    w_column = np.array([row.weighted_norm_sq for row in rows])

    checks = [
        exact_check("H column = sum 2/(log n)^2", float(np.max(np.abs(h_column - h_oracle) / h_oracle)), 1e-10),
        exact_check("weighted column = sum 2 q_n^2/(log n)^2",
                    float(np.max(np.abs(w_column - w_oracle) / w_oracle)), 1e-10),
    ]
    tail = float(w_column[-1] - w_column[-2]) if len(w_column) > 1 else 0.0
    if m_max >= 10_000:
        checks.append(
            CheckRecord(
                name="H column exceeds 10",
                mode="exact",
                value=float(h_column[-1]),
                bound=10.0,
                passed=bool(h_column[-1] > 10.0),
            )
        )
        checks.append(exact_check("weighted tail increment", tail, 1e-6))

    report = RunReport(
        command="demo",
        config=config,
        checks=checks,
        results={"h_norm_sq": float(h_column[-1]), "weighted_norm_sq": float(w_column[-1]), "tail_increment": tail},
    )
    table = CsvTable(["m", "h_norm_sq", "weighted_norm_sq"], np.column_stack([n, h_column, w_column]))
    return Outcome(report, tables={"counterexample": table}, demo=rows)
