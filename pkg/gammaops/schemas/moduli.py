"""
Modulus-of-continuity schemas.
"""

from enum import Enum

from pydantic import BaseModel, Field, ConfigDict, model_validator


class ModulusKind(str, Enum):
    """Where a modulus value comes from."""
    grid = "grid-lower-estimate"
    analytic = "analytic-exact"


class ModulusEstimate(BaseModel):
    """One modulus value at one delta."""
    delta: float = Field(..., gt=0)
    value: float = Field(..., ge=0)
    kind: ModulusKind
    order: int = Field(default=1, ge=1, le=2, description="1 for omega, 2 for omega_2")
    grid_points: int = Field(default=1, ge=1)
    domain_cap: float = Field(default=20.0, gt=0, description="Truncation T of [0, inf)")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def validate_value(self):
        """Analytic moduli may be +inf (unbounded growth); grid estimates may not."""
        if self.kind == ModulusKind.grid and self.value == float('inf'):
            raise ValueError('grid estimates must be finite')
        return self
