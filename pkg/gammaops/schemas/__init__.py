"""
Pydantic schemas package.

This package contains Pydantic schemas for:
- Operator parameters and quadrature settings
- Modulus estimates
- Verification reports
- Experiment configuration for the CLI
"""

from gammaops.schemas.operator import (
    OperatorParams,
    QuadratureConfig,
    SplitPolicy,
    SpecialKind,
)

from gammaops.schemas.moduli import (
    ModulusEstimate,
    ModulusKind,
)

from gammaops.schemas.reports import (
    ClosedFormComparison,
    ClosedFormAudit,
    VoronovskajaReport,
    ExactVoronovskajaReport,
    BoundReport,
    OrderReport,
)

from gammaops.schemas.experiment import (
    Command,
    OutputFormat,
    OperatorKind,
    ExperimentConfig,
)

__all__ = [
    # Operator
    "OperatorParams",
    "QuadratureConfig",
    "SplitPolicy",
    "SpecialKind",
    # Moduli
    "ModulusEstimate",
    "ModulusKind",
    # Reports
    "ClosedFormComparison",
    "ClosedFormAudit",
    "VoronovskajaReport",
    "ExactVoronovskajaReport",
    "BoundReport",
    "OrderReport",
    # Experiment
    "Command",
    "OutputFormat",
    "OperatorKind",
    "ExperimentConfig",
]
