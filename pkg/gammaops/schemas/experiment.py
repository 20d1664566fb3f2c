"""
Experiment configuration schema.

A declarative experiment manifest (JSON) is parsed into ExperimentConfig;
command-line flags are merged on top before validation.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, ConfigDict, field_validator

from gammaops.models.builtins import builtin_ids
from gammaops.schemas.operator import OperatorParams, QuadratureConfig


class Command(str, Enum):
    """Experiment subcommands."""
    moments = "moments"
    eval = "eval"
    voronovskaja = "voronovskaja"
    bounds = "bounds"
    order = "order"
    audit = "audit"


class OutputFormat(str, Enum):
    """Output rendering."""
    csv = "csv"
    human = "human"


class OperatorKind(str, Enum):
    """Which operator `eval` applies."""
    M = "M"
    derivative = "derivative"
    mstar = "mstar"
    G = "G"
    F = "F"
    L = "L"


class ExperimentConfig(BaseModel):
    """One experiment run: command, parameter grid, functions and output."""
    command: Command
    n_values: List[int] = Field(default_factory=lambda: [5], description="n values or doubling ladder")
    k_values: List[int] = Field(default_factory=lambda: [1])
    r_values: List[int] = Field(default_factory=lambda: [0])
    m_values: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    x_values: List[float] = Field(default_factory=lambda: [1.0])
    function_ids: List[str] = Field(default_factory=lambda: ['exp-neg'])
    operator: OperatorKind = OperatorKind.M
    theorems: List[str] = Field(default_factory=lambda: ['first-modulus', 'second-modulus'])
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    tolerance: Optional[float] = Field(None, gt=0, description="Voronovskaja convergence tolerance")
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.csv

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "command": "voronovskaja",
                "n_values": [25, 50, 100, 200, 400],
                "k_values": [1],
                "r_values": [0],
                "x_values": [1.0],
                "function_ids": ["exp-neg"],
                "format": "csv"
            }
        }
    )

    @field_validator('n_values', 'k_values')
    @classmethod
    def validate_positive(cls, v):
        if not v:
            raise ValueError('at least one value is required')
        if any(value < 1 for value in v):
            raise ValueError('values must be >= 1')
        return v

    @field_validator('r_values', 'm_values')
    @classmethod
    def validate_non_negative(cls, v):
        if not v:
            raise ValueError('at least one value is required')
        if any(value < 0 for value in v):
            raise ValueError('values must be >= 0')
        return v

    @field_validator('x_values')
    @classmethod
    def validate_x(cls, v):
        if not v:
            raise ValueError('at least one x value is required')
        if any(not (value > 0) for value in v):
            raise ValueError('x values must be positive')
        return v

    @field_validator('function_ids')
    @classmethod
    def validate_function_ids(cls, v):
        known = set(builtin_ids())
        unknown = [function_id for function_id in v if function_id not in known]
        if unknown:
            raise ValueError(f"unknown function id(s) {', '.join(unknown)}; available: {', '.join(sorted(known))}")
        return v

    @field_validator('theorems')
    @classmethod
    def validate_theorems(cls, v):
        allowed = {'first-modulus', 'second-modulus'}
        if not v or any(theorem not in allowed for theorem in v):
            raise ValueError(f'theorems must be a non-empty subset of {sorted(allowed)}')
        return v

    def operator_params(self) -> List[OperatorParams]:
        """
        Every (n, k, r) of the grid, sorted.

        Raises:
            ParameterConstraintError: If any combination violates k <= n or r <= n
        """
        return [
            OperatorParams.checked(n, k, r)
            for n in sorted(set(self.n_values))
            for k in sorted(set(self.k_values))
            for r in sorted(set(self.r_values))
        ]
