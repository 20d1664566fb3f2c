"""
Verification report schemas.

Reports are plain records: every number that went into a verdict is kept so
that a CSV row can be reproduced from the report alone.
"""

from fractions import Fraction
from typing import Optional, List, Dict

from pydantic import BaseModel, Field, ConfigDict, field_serializer, model_validator


class ClosedFormComparison(BaseModel):
    """Published closed form versus binomial-sum oracle at one (n, k, r, m)."""
    n: int
    k: int
    r: int
    m: int
    closed_form: Fraction
    oracle: Fraction

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def match(self) -> bool:
        return self.closed_form == self.oracle

    @field_serializer('closed_form', 'oracle')
    def serialize_fraction(self, value: Fraction) -> str:
        return str(value)


class ClosedFormAudit(BaseModel):
    """All comparisons of one audit run."""
    comparisons: List[ClosedFormComparison] = Field(default_factory=list)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def match_rate(self, m: int) -> Optional[float]:
        """Fraction of matching comparisons at order m, or None if none ran."""
        rows = [c for c in self.comparisons if c.m == m]
        if not rows:
            return None
        return sum(c.match for c in rows) / len(rows)

    @property
    def orders(self) -> List[int]:
        return sorted({c.m for c in self.comparisons})

    @property
    def mismatches(self) -> List[ClosedFormComparison]:
        return [c for c in self.comparisons if not c.match]


class VoronovskajaReport(BaseModel):
    """Scaled deviations E_n along an n-ladder and their extrapolated limit."""
    k: int
    r: int
    x: float = Field(..., gt=0)
    function_id: str
    n_values: List[int]
    e_n: List[float] = Field(..., description="n * (M*(f^(r)) - f^(r)(x)) per rung")
    target: float = Field(..., description="Limit predicted from analytic derivatives")
    extrapolated: float = Field(..., description="2 E_{2n} - E_n from the last two rungs")
    extrapolated_tableau: Optional[float] = Field(None, description="Full Richardson tableau over the ladder")
    tolerance: float = Field(..., gt=0)
    converged: bool

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def validate_lengths(self):
        if len(self.e_n) != len(self.n_values):
            raise ValueError('e_n must have one entry per ladder rung')
        return self


class ExactVoronovskajaReport(BaseModel):
    """Rational E_n for polynomial f, computed from exact moments."""
    k: int
    r: int
    x: Fraction
    coefficients: List[Fraction]
    n_values: List[int]
    e_n: List[Fraction]
    target: Fraction
    extrapolated: Fraction
    extrapolated_tableau: Fraction

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_serializer('x', 'target', 'extrapolated', 'extrapolated_tableau')
    def serialize_fraction(self, value: Fraction) -> str:
        return str(value)

    @field_serializer('coefficients', 'e_n')
    def serialize_fractions(self, values: List[Fraction]) -> List[str]:
        return [str(v) for v in values]


class BoundReport(BaseModel):
    """One error-bound check at one (n, k, r, x, f)."""
    theorem: str = Field(..., pattern="^(first-modulus|second-modulus)$")
    n: int
    k: int
    r: int
    x: float = Field(..., gt=0)
    function_id: str
    lhs: float = Field(..., ge=0)
    rhs_components: Dict[str, float]
    rhs: float
    slack: float
    margin: float = Field(..., ge=0)
    holds: bool
    asserted: bool = Field(..., description="Whether a failure counts as a violation")
    empirical_C: Optional[float] = None
    reference_C: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def validate_verdict(self):
        if self.holds != (self.slack >= -self.margin):
            raise ValueError('holds must equal slack >= -margin')
        return self

    @property
    def sort_key(self):
        return (self.theorem, self.function_id, self.k, self.r, self.x, self.n)


class OrderReport(BaseModel):
    """Scaled central moments n^floor((m+1)/2) |mu_m| along an n-ladder."""
    m: int = Field(..., ge=1)
    k: int
    r: int
    n_values: List[int]
    scaled: List[float]
    ratios: List[float]
    lower: float = 0.3
    upper: float = 3.0
    degenerate: bool
    passed: bool

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def validate_lengths(self):
        if len(self.scaled) != len(self.n_values):
            raise ValueError('scaled must have one entry per n')
        if not self.degenerate and len(self.ratios) != len(self.n_values) - 1:
            raise ValueError('ratios must have one entry per consecutive pair')
        return self
