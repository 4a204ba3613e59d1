"""Pydantic models for run configuration and reports."""

from pathlib import Path
from typing import Any, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, computed_field

from wienerflow.blocks import EngineConfig
from wienerflow.calculus import weight_profile
from wienerflow.chaos import ChaosError, ChaosField, GaussianSpace
from wienerflow.chaos.serialization import (
    FieldDoc,
    MatrixDoc,
    PolyDoc,
    field_from_doc,
    load_file,
)
from wienerflow.dynamics import (
    ChaosVectorField,
    FlowError,
    SolverMethod,
    SolverOptions,
    VectorField,
    closed_form_field,
)


class ConfigError(Exception):
    """The run configuration is malformed or inconsistent."""

    pass


CheckName = Literal[
    "density",
    "reversibility",
    "flow-law",
    "measure-preservation",
    "pushforward",
    "adapted",
    "moments",
    "galerkin",
]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpaceSection(_Section):
    dim: int = Field(default=2, ge=1)
    degree_cap: int = Field(default=4, ge=1)
    weights: str | List[float] | None = Field(
        default=None, description="Weight profile name or explicit q_1..q_dim"
    )

    def to_space(self) -> GaussianSpace:
        weights = self.weights
        try:
            if isinstance(weights, str):
                weights = weight_profile(weights, self.dim)
            return GaussianSpace(self.dim, self.degree_cap, weights)
        except ChaosError as e:
            raise ConfigError(f"space: {e}") from e


class FieldSection(_Section):
    kind: Literal["closed_form", "chaos"] = "closed_form"
    name: str = Field(default="zero", description="Registry name for closed-form fields")
    params: dict[str, Any] = Field(default_factory=dict)
    nodes: Optional[List[float]] = None
    fields: List[FieldDoc] = Field(default_factory=list)
    file: Optional[str] = Field(default=None, description="Field document for an autonomous chaos field")

    def build(self, space: GaussianSpace) -> VectorField:
        if self.kind == "closed_form":
            try:
                return closed_form_field(self.name, space.dim, **self.params)
            except (FlowError, TypeError, KeyError) as e:
                raise ConfigError(f"field: {e}") from e
        try:
            fields = [field_from_doc(doc) for doc in self.fields]
        except ChaosError as e:
            raise ConfigError(f"field.fields: {e}") from e
        if self.file is not None:
            loaded = load_document(self.file)
            if not isinstance(loaded, ChaosField):
                raise ConfigError(f"field.file: {self.file} does not hold a field")
            fields.append(loaded)
        if not fields:
            raise ConfigError("field: chaos kind needs 'fields' or 'file'")
        for f in fields:
            if f.space.dim != space.dim:
                raise ConfigError(f"field: chaos field has dim {f.space.dim}, space.dim is {space.dim}")
        nodes = self.nodes if self.nodes is not None else [0.0] * len(fields)
        try:
            if len(fields) == 1:
                return ChaosVectorField.autonomous_field(fields[0])
            return ChaosVectorField(nodes, fields)
        except (FlowError, ChaosError) as e:
            raise ConfigError(f"field: {e}") from e


class BatchSection(_Section):
    n: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    workers: Optional[int] = Field(default=None, ge=1)


class SolverSection(_Section):
    method: Optional[SolverMethod] = None
    atol: Optional[float] = Field(default=None, gt=0)
    rtol: Optional[float] = Field(default=None, gt=0)
    steps: Optional[int] = Field(default=None, ge=1)
    chunk_size: Optional[int] = Field(default=None, ge=1)

    def to_options(self) -> SolverOptions:
        return SolverOptions(
            method=self.method or SolverMethod.RK45,
            atol=self.atol or 1e-9,
            rtol=self.rtol or 1e-9,
            steps=self.steps or 400,
            chunk_size=self.chunk_size or 256,
        )


class BoundsSection(_Section):
    theta: float = Field(default=1.0, gt=0)
    p: float = Field(default=2.0, gt=1)


class VerifySection(_Section):
    suite: Optional[str] = None
    cases: Optional[int] = Field(default=None, ge=1, description="Overrides per-suite case counts")


class PdeSection(_Section):
    matrix: List[List[float]] = Field(default_factory=lambda: [[0.0, 1.0], [-1.0, 0.0]])
    a: Optional[MatrixDoc] = Field(default=None, description="Random antisymmetric A in chaos form")
    f0: Optional[PolyDoc] = Field(default=None, description="Initial functional, x_1 when absent")
    t_grid: int = Field(default=20, ge=2)
    t_max: float = Field(default=1.0, gt=0)


class DemoSection(_Section):
    name: Literal["counterexample"] = "counterexample"
    m_max: int = Field(default=100, ge=2)
    weights: str = "harmonic"


class RunConfig(_Section):
    """One schema for every subcommand; unknown keys are rejected."""

    space: SpaceSection = Field(default_factory=SpaceSection)
    field: FieldSection = Field(default_factory=FieldSection)
    s: float = 0.0
    t: float = 1.0
    grid: int = Field(default=11, ge=2)
    batch: BatchSection = Field(default_factory=BatchSection)
    solver: SolverSection = Field(default_factory=SolverSection)
    bounds: BoundsSection = Field(default_factory=BoundsSection)
    checks: List[CheckName] = Field(default_factory=lambda: ["density", "reversibility"])
    verify: VerifySection = Field(default_factory=VerifySection)
    pde: PdeSection = Field(default_factory=PdeSection)
    demo: DemoSection = Field(default_factory=DemoSection)

    def resolved(self, engine: EngineConfig, seed: int | None = None) -> "RunConfig":
        """Copy with every engine default and the seed override filled in."""
        if seed is None:
            seed = self.batch.seed if self.batch.seed is not None else engine.seed
        batch = BatchSection(
            n=self.batch.n or engine.mc_samples,
            seed=seed,
            workers=self.batch.workers or engine.workers,
        )
        solver = SolverSection(
            method=self.solver.method or engine.solver,
            atol=self.solver.atol or engine.atol,
            rtol=self.solver.rtol or engine.rtol,
            steps=self.solver.steps or engine.rk4_steps,
            chunk_size=self.solver.chunk_size or engine.chunk_size,
        )
        return self.model_copy(update={"batch": batch, "solver": solver})


def load_document(path: str):
    try:
        return load_file(path)
    except FileNotFoundError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except (ValidationError, ValueError, ChaosError) as e:
        raise ConfigError(f"{path}: {e}") from e


def load_run_config(path: str | Path | None) -> RunConfig:
    """Parse and validate a run config file; no file means all defaults."""
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    try:
        return RunConfig.model_validate_json(text)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"invalid config {path}: {problems}") from e


class CheckRecord(BaseModel):
    """One verified property: measured value against its bound or tolerance."""

    name: str
    mode: Literal["exact", "mc"]
    value: float | None = None
    bound: float | None = None
    passed: bool
    detail: str = ""


class RunReport(BaseModel):
    """Machine-readable outcome of one CLI command, with its resolved config."""

    command: str
    config: RunConfig
    checks: List[CheckRecord] = Field(default_factory=list)
    results: dict[str, Any] = Field(default_factory=dict)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json(self) -> str:
        """Non-finite values serialize as null."""
        return self.model_dump_json(indent=2)
