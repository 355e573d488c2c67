from .family import FamilyParams
from .basis import BasisDocument
from .report import (
    ClosureSignature, ClosureCheck, WeightBlock, EigenProfile,
    ClassificationEvidence, ClassificationReport, ConvexityWitness,
    CertificateReport, CuspReport, CurvatureReport, NormalFormReport,
    OrbitClosureReport, RegionReport, MeshReport
)
from .verification import (
    VerificationRecord, VerificationSummary, VerificationCoverage, VerificationReport
)

__all__ = [
    "FamilyParams", "BasisDocument",
    "ClosureSignature", "ClosureCheck", "WeightBlock", "EigenProfile",
    "ClassificationEvidence", "ClassificationReport", "ConvexityWitness",
    "CertificateReport", "CuspReport", "CurvatureReport", "NormalFormReport",
    "OrbitClosureReport", "RegionReport", "MeshReport",
    "VerificationRecord", "VerificationSummary", "VerificationCoverage", "VerificationReport"
]
