"""
Operator-related Pydantic schemas.

These schemas identify one operator instance and describe how it is
evaluated numerically.
"""

from enum import Enum

from pydantic import BaseModel, Field, ConfigDict, ValidationError, model_validator

from gammaops.exceptions import ParameterConstraintError


class OperatorParams(BaseModel):
    """The triple (n, k, r) identifying M_{n,k} and its r-th derivative form."""
    n: int = Field(..., ge=1, description="Operator index")
    k: int = Field(..., ge=1, description="Kernel shift; exponent of t is n-k")
    r: int = Field(default=0, ge=0, description="Derivative order")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"n": 5, "k": 1, "r": 0}
        }
    )

    @model_validator(mode='after')
    def validate_constraints(self):
        """Ensure the kernel exponent and the normalizer are defined."""
        if self.k > self.n:
            raise ValueError(f'k={self.k} must not exceed n={self.n}')
        if self.r > self.n:
            raise ValueError(f'r={self.r} must not exceed n={self.n}')
        return self

    @classmethod
    def checked(cls, n, k, r=0):
        """Build params, raising ParameterConstraintError instead of ValidationError."""
        try:
            return cls(n=n, k=k, r=r)
        except ValidationError as e:
            messages = '; '.join(err['msg'] for err in e.errors())
            raise ParameterConstraintError(f'Invalid operator parameters (n={n}, k={k}, r={r}): {messages}') from e

    @property
    def max_raw_order(self) -> int:
        """Largest m with M_{n,k}(t^m) defined."""
        return self.n - self.k

    @property
    def max_mstar_order(self) -> int:
        """Largest m with M*_{n,k,r}(t^m) defined."""
        return self.n - self.r


class SplitPolicy(str, Enum):
    """How the truncated integration domain is split into panels."""
    mode_centered = "mode-centered-panels"
    uniform = "uniform-panels"


class QuadratureConfig(BaseModel):
    """Node budget, tolerances and panel policy for numeric evaluation."""
    node_budget: int = Field(default=8192, ge=15, description="Maximum number of integrand evaluations")
    rel_tolerance: float = Field(default=1e-12, gt=0)
    abs_tolerance: float = Field(default=1e-13, gt=0)
    split_policy: SplitPolicy = Field(default=SplitPolicy.mode_centered)
    order: int = Field(default=20, ge=2, le=200, description="Gauss-Legendre nodes per panel")
    log_drop: float = Field(default=60.0, gt=0, description="Truncate where the log-density falls this far below its mode")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "node_budget": 8192,
                "rel_tolerance": 1e-12,
                "abs_tolerance": 1e-13,
                "split_policy": "mode-centered-panels"
            }
        }
    )

    @classmethod
    def from_config(cls, config, **overrides):
        """Build from a gammaops.config class, applying overrides."""
        values = {
            'node_budget': config.QUADRATURE_NODE_BUDGET,
            'rel_tolerance': config.QUADRATURE_REL_TOL,
            'abs_tolerance': config.QUADRATURE_ABS_TOL,
            'order': config.QUADRATURE_ORDER,
            'log_drop': config.TRUNCATION_LOG_DROP,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


class SpecialKind(str, Enum):
    """Named special cases of M_{n,k}."""
    F = "F_n"
    L = "L_n"
