"""Configuration schema using Pydantic."""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..exceptions import ConfigurationError
from ..solvers.schedules import Schedule, constant_schedule, default_schedule, linear_schedule
from ..solvers.scheme import UpdateOrder


ALGORITHM_NAMES = (
    "classical_alm",
    "proximal_alm",
    "chambolle_pock",
    "balanced_alm",
    "dual_primal_alm",
    "lifted_admm",
    "drs_balanced",
    "drs_dual_primal",
    "prox_admm_balanced",
    "prox_admm_dual_primal",
    "accel_balanced",
    "accel_dual_primal",
    "accel_prox_admm",
    "ratio_dual_admm",
    "ratio_dual_primal_alm",
)

# Alternate names accepted in configs and on the command line.
ALGORITHM_ALIASES = {
    "prox_admm_5": "prox_admm_balanced",
    "prox_admm_6": "prox_admm_dual_primal",
    "variant_80": "ratio_dual_admm",
    "variant_81": "ratio_dual_primal_alm",
}

SCHEDULE_ALIASES = {"paper_linear": "mu_linear"}

SCHEME_PREFIX = "scheme:"


def validate_algorithm_name(name: str) -> str:
    """Accept a registered name, an alias or scheme:<order>; returns the canonical name."""
    name = name.strip()
    name = ALGORITHM_ALIASES.get(name, name)
    if name.startswith(SCHEME_PREFIX):
        order = UpdateOrder.parse(name[len(SCHEME_PREFIX):])
        return f"{SCHEME_PREFIX}{order}"
    if name not in ALGORITHM_NAMES:
        raise ConfigurationError(
            f"Unknown algorithm '{name}'",
            context={"available": ", ".join(ALGORITHM_NAMES) + ", scheme:<order>"}
        )
    return name


class ProblemSpec(BaseModel):
    """Problem description: an explicit instance or a seeded random generator."""

    type: Literal["quadratic", "elastic_net", "random_quadratic", "random_elastic_net"] = Field(
        ..., description="Problem family"
    )
    Q: Optional[List[List[float]]] = Field(None, description="Quadratic term (default identity)")
    c: Optional[List[float]] = Field(None, description="Linear term (default zero)")
    A: Optional[List[List[float]]] = Field(None, description="Constraint matrix (m×n)")
    b: Optional[List[float]] = Field(None, description="Constraint right-hand side")
    mu: Optional[float] = Field(None, gt=0, description="Elastic-net strong convexity")
    weight: Optional[float] = Field(None, ge=0, description="Elastic-net l1 weight")
    n: Optional[int] = Field(None, gt=0, description="Variables of a random instance")
    m: Optional[int] = Field(None, gt=0, description="Constraints of a random instance")
    seed: int = Field(0, description="Seed of a random instance")

    @model_validator(mode="after")
    def check_shapes(self):
        """Validate the fields each family needs and their shapes."""
        if self.type.startswith("random_"):
            if self.n is None or self.m is None:
                raise ValueError("random problems need n and m")
            if self.m > self.n:
                raise ValueError("random problems need m <= n")
            return self
        if self.A is None or self.b is None:
            raise ValueError(f"{self.type} problems need A and b")
        if not self.A or any(len(row) != len(self.A[0]) for row in self.A):
            raise ValueError("A must be a non-empty rectangular matrix")
        m, n = len(self.A), len(self.A[0])
        if len(self.b) != m:
            raise ValueError(f"b has {len(self.b)} entries, A has {m} rows")
        if self.Q is not None and (len(self.Q) != n or any(len(row) != n for row in self.Q)):
            raise ValueError(f"Q must be {n}x{n}")
        if self.c is not None and len(self.c) != n:
            raise ValueError(f"c must have {n} entries")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class ScheduleConfig(BaseModel):
    """Step-size schedule of the accelerated methods."""

    type: Literal["constant", "mu_linear", "linear"] = Field(..., description="Schedule family")
    r: Optional[float] = Field(None, gt=0, description="Constant r (type constant)")
    r0: Optional[float] = Field(None, gt=0, description="Initial r (type linear)")
    slope: float = Field(1.0, ge=0, description="Increment per iteration (type linear)")
    delta_prime: float = Field(1.0, gt=0, description="Shift δ′ of H = AAᵀ + δ′I")
    mu: Optional[float] = Field(None, ge=0, description="Override of the problem's μ")

    @field_validator("type", mode="before")
    @classmethod
    def resolve_alias(cls, value):
        return SCHEDULE_ALIASES.get(value, value) if isinstance(value, str) else value

    @model_validator(mode="after")
    def check_type_fields(self):
        if self.type == "constant" and self.r is None:
            raise ValueError("constant schedules need r")
        if self.type == "linear" and self.r0 is None:
            raise ValueError("linear schedules need r0")
        return self

    def build(self, problem_mu: float = 0.0) -> Schedule:
        """Turn the config into a Schedule; μ defaults to the problem's modulus."""
        mu = problem_mu if self.mu is None else self.mu
        if self.type == "constant":
            return constant_schedule(self.r, delta_prime=self.delta_prime, mu=mu)
        if self.type == "linear":
            return linear_schedule(self.r0, self.slope, delta_prime=self.delta_prime, mu=mu)
        return default_schedule(mu, delta_prime=self.delta_prime)


class SolverParams(BaseModel):
    """Numeric parameters; unset fields take the algorithm's defaults."""

    r: Optional[float] = Field(None, gt=0, description="Primal step parameter r")
    delta: Optional[float] = Field(None, gt=0, description="Multiplier regularization δ")
    beta: Optional[float] = Field(None, gt=0, description="Penalty β (ALM, lifted ADMM)")
    beta1: Optional[float] = Field(None, gt=0, description="Scheme / dual ADMM β₁")
    beta2: Optional[float] = Field(None, gt=0, description="Scheme / dual ADMM β₂")
    delta_prime: Optional[float] = Field(None, gt=0, description="Shift δ′ of H")
    s: Optional[float] = Field(None, gt=0, description="Chambolle-Pock dual step parameter")
    rho_factor: Optional[float] = Field(None, gt=0, le=1, description="Chambolle-Pock ρ scaling")


class ExperimentConfig(BaseModel):
    """Complete experiment configuration."""

    problem: Union[ProblemSpec, str] = Field(..., description="Problem file, catalog name or inline spec")
    algorithm: str = Field(..., description="Registered algorithm name or scheme:<order>")
    params: SolverParams = Field(default_factory=SolverParams, description="Solver parameters")
    schedule: Optional[ScheduleConfig] = Field(None, description="Accelerated-method schedule")
    iterations: Optional[int] = Field(None, ge=1, description="Iterations K (default per algorithm)")
    seed: int = Field(0, description="Seed for random problems and random starts")
    output: Optional[str] = Field(None, description="CSV output path")
    workers: int = Field(1, ge=1, description="Worker threads for sweeps")
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Additional metadata")

    @field_validator("algorithm")
    @classmethod
    def check_algorithm(cls, v: str) -> str:
        """Validate against the registry grammar."""
        try:
            return validate_algorithm_name(v)
        except ConfigurationError as e:
            raise ValueError(e.message) from e
