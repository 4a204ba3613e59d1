"""Exact-arithmetic suites: duality, product rules, spectral calculus, operators, Hodge."""

import math

import numpy as np

from wienerflow.blocks import EngineConfig
from wienerflow.calculus import (
    SpectralFunction,
    divergence,
    field_jacobian,
    gradient,
    matrix_transpose,
    op_divergence,
    ou_mehler_mc,
    resolvent_by_quadrature,
    second_moment_check,
    spectral_apply,
    weakb_combine,
    weakb_rhs,
)
from wienerflow.chaos import (
    ChaosField,
    ChaosMatrix,
    ChaosPoly,
    GaussianSpace,
    MultiIndex,
    field_pair,
    l2_inner,
    multiply,
    scale_field,
)
from wienerflow.chaos.random import (
    random_antisymmetric_matrix,
    random_field,
    random_matrix,
    random_poly,
)
from wienerflow.hodge import (
    antisym_representation,
    hodge_decompose,
    random_divergence_free_field,
)
from wienerflow.state import CheckRecord, RunConfig

from .checks import case_count, exact_check, suite_space

# accumulated roundoff over a suite of exact identities
SUITE_ATOL = 1e-10


def _max_coefficient(p: ChaosPoly) -> float:
    return max((abs(c) for c in p.coeffs.values()), default=0.0)


def duality_suite(config: RunConfig, engine: EngineConfig) -> list[CheckRecord]:
    space = suite_space(config, GaussianSpace(3, 4))
    rng = np.random.default_rng(config.batch.seed)
    cases = case_count(config, 200)
    duality = mean_zero = 0.0
    for _ in range(cases):
        v = random_field(rng, space, space.degree_cap - 1)
        phi = random_poly(rng, space)
        dv = divergence(v)
        lhs = sum(l2_inner(a, b) for a, b in zip(v.components, gradient(phi).components))
        duality = max(duality, abs(lhs - l2_inner(phi, dv)))
        mean_zero = max(mean_zero, abs(dv.mean))
    return [
        exact_check("E<v, grad phi> = E[phi delta v]", duality, SUITE_ATOL, f"{cases} cases"),
        exact_check("E[delta v] = 0", mean_zero, engine.exact_atol, f"{cases} cases"),
    ]


def product_rule_suite(config: RunConfig, engine: EngineConfig) -> list[CheckRecord]:
    space = suite_space(config, GaussianSpace(3, 4))
    rng = np.random.default_rng(config.batch.seed)
    cases = case_count(config, 200)
    scalar = commutator = 0.0
    for _ in range(cases):
        a = random_poly(rng, space, 1)
        v = random_field(rng, space, max(space.degree_cap - 2, 0))
        lhs = divergence(scale_field(a, v))
        rhs = multiply(a, divergence(v)) - field_pair(gradient(a), v)
        scalar = max(scalar, lhs.max_abs_diff(rhs))

        g = random_field(rng, space, space.degree_cap - 1)
        lifted = gradient(divergence(g))
        expected = g + op_divergence(matrix_transpose(field_jacobian(g)))
        commutator = max(commutator, lifted.max_abs_diff(expected))
    return [
        exact_check("delta(a v) = a delta v - <grad a, v>", scalar, SUITE_ATOL, f"{cases} cases"),
        exact_check("grad delta G = G + delta (grad G)^T", commutator, SUITE_ATOL, f"{cases} cases"),
    ]


def spectral_suite(config: RunConfig, engine: EngineConfig) -> list[CheckRecord]:
    space = suite_space(config, GaussianSpace(2, 4))
    seed = config.batch.seed
    rng = np.random.default_rng(seed)
    cases = case_count(config, 50)
    n = config.batch.n or engine.mc_samples

    number = 0.0
    worst_z = 0.0
    valid = True
    for case in range(cases):
        p = random_poly(rng, space)
        number = max(number, divergence(gradient(p)).max_abs_diff(spectral_apply(p, SpectralFunction.number_op())))
        t = float(rng.uniform(0.1, 1.0))
        point = rng.normal(size=(1, space.dim))
        exact = float(np.atleast_1d(spectral_apply(p, SpectralFunction.ou_semigroup(t)).evaluate(point))[0])
        (mehler,) = ou_mehler_mc(p, t, point, n, seed + case, workers=config.batch.workers or 1)
        valid = valid and mehler.valid
        # antithetic pairs make degree <= 1 exact, leaving only roundoff in the error
        floor = 1e-12 * max(1.0, abs(exact))
        worst_z = max(worst_z, abs(mehler.mean - exact) / (mehler.std_error + floor))

    quadrature = max(
        abs(resolvent_by_quadrature(k, beta) - (1.0 + k) ** (-beta))
        for k in range(7)
        for beta in (0.5, 1.0, 2.0)
    )
    return [
        exact_check("delta grad = L", number, SUITE_ATOL, f"{cases} cases"),
        CheckRecord(
            name="spectral T_t = Mehler Monte Carlo",
            mode="mc",
            value=worst_z,
            bound=engine.se_multiplier,
            passed=valid and worst_z <= engine.se_multiplier,
            detail=f"largest deviation in standard errors over {cases} cases, N={n}",
        ),
        exact_check("Gamma-integral resolvent = (1+k)^-beta", quadrature, 1e-8, "k <= 6, beta in {0.5, 1, 2}"),
    ]


def operator_suite(config: RunConfig, engine: EngineConfig) -> list[CheckRecord]:
    space = suite_space(config, GaussianSpace(3, 4))
    rng = np.random.default_rng(config.batch.seed)
    cases = case_count(config, 100)
    cap = space.degree_cap

    closed = weak = moment = 0.0
    for _ in range(cases):
        a = random_antisymmetric_matrix(rng, space, max(cap - 2, 0))
        closed = max(closed, _max_coefficient(divergence(op_divergence(a))))

        k = random_matrix(rng, space, 1)
        f = random_field(rng, space, max(cap - 2, 0))
        weak = max(weak, weakb_combine(k, f).max_abs_diff(weakb_rhs(k, f)))

    for _ in range(case_count(config, 200)):
        u = random_field(rng, space, cap - 1)
        g = random_field(rng, space, cap - 1)
        moment = max(moment, second_moment_check(u, g).spread())
    return [
        exact_check("delta(dd A) = 0 for antisymmetric A", closed, SUITE_ATOL, f"{cases} cases"),
        exact_check("delta(K^T F) = <F, dd K> - tr(K^T J_F)", weak, SUITE_ATOL, f"{cases} cases"),
        exact_check("E(du dG) three-way identity", moment, SUITE_ATOL),
    ]


def hodge_suite(config: RunConfig, engine: EngineConfig) -> list[CheckRecord]:
    space = suite_space(config, GaussianSpace(3, 4))
    rng = np.random.default_rng(config.batch.seed)
    cases = case_count(config, 100)
    cap = space.degree_cap

    free = exact = rebuild = 0.0
    for _ in range(cases):
        v = random_field(rng, space, cap - 1)
        parts = hodge_decompose(v)
        free = max(free, _max_coefficient(divergence(parts.v0)))
        exact = max(exact, parts.ve.max_abs_diff(gradient(parts.psi)))
        rebuild = max(rebuild, parts.reconstruct().max_abs_diff(v))

    round_trip = symmetric = 0.0
    for _ in range(cases):
        v0 = random_divergence_free_field(rng, space)
        a = antisym_representation(v0)
        round_trip = max(round_trip, op_divergence(a).max_abs_diff(v0))
        symmetric = max(symmetric, (a + matrix_transpose(a)).max_abs_diff(ChaosMatrix.zero(space)))

    identity = hodge_decompose(ChaosField.identity(space))
    potential = ChaosPoly.from_coeffs(
        space, {MultiIndex.unit(i, 2): 1.0 / math.sqrt(2.0) for i in range(space.dim)}
    )
    records = [
        exact_check("delta v0 = 0", free, SUITE_ATOL, f"{cases} random fields"),
        exact_check("ve = grad psi", exact, engine.exact_atol),
        exact_check("v0 + ve = v", rebuild, SUITE_ATOL),
        exact_check("dd antisym(v0) = v0", round_trip, SUITE_ATOL, f"{cases} divergence-free fields"),
        exact_check("A + A^T = 0", symmetric, 0.0),
        exact_check("identity field: psi = sum (x_i^2 - 1)/2", identity.psi.max_abs_diff(potential), engine.exact_atol),
    ]
    if space.dim >= 2:
        rotation = ChaosField(
            space,
            (ChaosPoly.coordinate(space, 1),)
            + (ChaosPoly.coordinate(space, 0, -1.0),)
            + tuple(ChaosPoly.zero(space) for _ in range(space.dim - 2)),
        )
        parts = hodge_decompose(rotation)
        records.append(exact_check("delta(x2, -x1) = 0", _max_coefficient(divergence(rotation)), 0.0))
        records.append(exact_check("rotation: v0 = v", parts.v0.max_abs_diff(rotation), 0.0))
    return records
