"""Prefect artifact helpers for wienerflow runs."""

import re

from prefect.artifacts import create_markdown_artifact, create_table_artifact

from wienerflow.calculus import CounterexampleRow
from wienerflow.dynamics import GalerkinTable, TransportTable
from wienerflow.state import CheckRecord, RunReport


def sanitize_key(name: str) -> str:
    """Suite or command name as an artifact key; every run of other characters becomes one dash."""
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


def _format(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4g}"


def check_rows(checks: list[CheckRecord]) -> list[dict]:
    return [
        {
            "Check": c.name,
            "Mode": c.mode,
            "Value": _format(c.value),
            "Bound": _format(c.bound),
            "Pass": "yes" if c.passed else "NO",
        }
        for c in checks
    ]


# =============================================================================
# verify
# =============================================================================


async def verify_artifacts(suite: str, report: RunReport) -> None:
    """Per-check table plus a markdown summary."""
    await create_table_artifact(
        table=check_rows(report.checks),
        key=f"verify-{sanitize_key(suite)}",
        description=f"Checks of the {suite} suite",
    )

    failed = [c for c in report.checks if not c.passed]
    status = "PASSED" if report.passed else "FAILED"
    md = f"""# Verify: {suite}

**Status:** {status}

| Metric | Value |
|--------|-------|
| Checks | {len(report.checks)} |
| Failed | {len(failed)} |
| Seed | {report.config.batch.seed} |
"""
    if failed:
        md += "\n**Failed checks:**\n" + "\n".join(f"- {c.name}: {c.detail}" for c in failed)

    await create_markdown_artifact(
        markdown=md,
        key=f"verify-{sanitize_key(suite)}-summary",
        description=f"Summary of the {suite} suite",
    )


# =============================================================================
# hodge / flow
# =============================================================================


async def report_artifact(report: RunReport) -> None:
    await create_table_artifact(
        table=check_rows(report.checks),
        key=f"{sanitize_key(report.command)}-checks",
        description=f"Checks of the {report.command} run",
    )


async def galerkin_artifact(table: GalerkinTable) -> None:
    rows = [
        {
            "m": row.m,
            "Flow deviation": f"{row.flow_deviation.mean:.4g} +- {row.flow_deviation.std_error:.2g}",
            "Field gap": _format(row.field_gap),
            "Ratio": _format(row.ratio),
        }
        for row in table.rows
    ]
    await create_table_artifact(
        table=rows,
        key="galerkin-convergence",
        description=f"Galerkin truncation over [{table.s}, {table.t}], p={table.p:g}",
    )


# =============================================================================
# pde / demo
# =============================================================================


async def transport_artifact(table: TransportTable) -> None:
    rows = [
        {
            "t": f"{row.t:.4g}",
            "Pathwise": _format(row.pathwise_residual),
            "First order": _format(row.first_order_residual),
            "Chaos": _format(row.chaos_residual),
        }
        for row in table.rows
    ]
    await create_table_artifact(
        table=rows,
        key="transport-residuals",
        description=f"Transport equation residuals (tolerance {table.tolerance:g})",
    )


async def demo_artifact(rows: list[CounterexampleRow]) -> None:
    # every power of ten plus the last row
    picked = [row for row in rows if str(row.m).rstrip("0") == "1"] + rows[-1:]
    await create_table_artifact(
        table=[
            {"m": row.m, "E||grad a_m||_H^2": f"{row.h_norm_sq:.6g}", "E||Q grad a_m||^2": f"{row.weighted_norm_sq:.6g}"}
            for row in dict.fromkeys(picked)
        ],
        key="counterexample-demo",
        description="Hermite series counterexample partial sums",
    )
