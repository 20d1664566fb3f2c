"""
Services package.

Each service handles one domain area:
- moment_service: exact rational moments and the closed-form audit
- operator_service: quadrature evaluation of the operators
- moduli_service: moduli of continuity and the K-functional bound
- verification_service: Voronovskaja, bound and order checks
- export_service: CSV / metadata export
"""

from gammaops.services.moment_service import MomentService
from gammaops.services.operator_service import OperatorService
from gammaops.services.moduli_service import ModuliService
from gammaops.services.verification_service import VerificationService
from gammaops.services.export_service import ExportService

__all__ = [
    'MomentService',
    'OperatorService',
    'ModuliService',
    'VerificationService',
    'ExportService',
]
