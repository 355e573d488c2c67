from typing import Dict, List, Optional

from pydantic import BaseModel

from .family import FamilyParams


class ClosureSignature(BaseModel):
    dim_histogram: List[int]  # counts of closure dimension 0..3 over the battery
    fixed_set_dim: int
    generic_dim: int
    battery_dims: Dict[str, int]

    class Config:
        from_attributes = True


class ClosureCheck(BaseModel):
    family: str
    point: str
    expected: int
    observed: int
    passed: bool


class WeightBlock(BaseModel):
    weight: float  # on the generic element
    multiplicity: int
    jordan_blocks: List[int]
    fixed_dim: int  # dimension of the joint eigenspace


class EigenProfile(BaseModel):
    blocks: List[WeightBlock]
    real: bool = True
    coefficients: List[float]  # the generic element, in the normalized basis

    @property
    def multiplicities(self) -> List[int]:
        return sorted((b.multiplicity for b in self.blocks), reverse=True)


class ClassificationEvidence(BaseModel):
    eigen_profile: EigenProfile
    closure_signature: ClosureSignature
    pairing_rank: Optional[int] = None
    detII_sign: Optional[int] = None


class ClassificationReport(BaseModel):
    label: str
    evidence: ClassificationEvidence
    triangularizer: List[List[float]]


class ConvexityWitness(BaseModel):
    point: List[float]
    det: float


class CertificateReport(BaseModel):
    source: str
    target: str
    factors: List[str]
    conjugator: List[List[float]]
    residual: Optional[float] = None
    passed: Optional[bool] = None


class CuspReport(BaseModel):
    label: str  # a cusp label or "NotCusp"
    params: Optional[FamilyParams] = None
    ambient_label: Optional[str] = None
    verdict: str
    witness: Optional[ConvexityWitness] = None
    counter_witness: Optional[ConvexityWitness] = None
    certificate: Optional[CertificateReport] = None
    triangularizer: List[List[float]]


class CurvatureReport(BaseModel):
    family: str
    params: Optional[FamilyParams] = None
    point: List[float]
    det_numeric: float
    det_closed: Optional[float] = None
    error_estimate: float = 0.0
    verdict: str


class NormalFormReport(BaseModel):
    family: str
    input_params: List[float]
    canonical_params: List[float]
    certificate: CertificateReport


class OrbitClosureReport(BaseModel):
    family: str
    signature: ClosureSignature
    table: List[ClosureCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.table)


class RegionReport(BaseModel):
    resolution: int
    bound: float
    convex_count: int
    total: int
    csv: Optional[str] = None
    svg: Optional[str] = None


class MeshReport(BaseModel):
    family: str
    params: Optional[FamilyParams] = None
    k: float
    vertices: int
    quads: int
    height: Optional[float] = None
    expected_height: Optional[float] = None
    min_curvature: float
    obj: Optional[str] = None
    csv: Optional[str] = None
