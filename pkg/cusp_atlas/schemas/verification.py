from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class VerificationRecord(BaseModel):
    check_id: str
    suite: str
    family: str
    params: Optional[str] = None
    expected: str
    observed: str
    residual: Optional[float] = None
    passed: bool
    # "ok", "mislabel" or the name of the error the check ended with
    outcome: Optional[str] = None
    # catalog labels ("label:N4") and certificate kinds ("cert:P") the check exercised
    covers: List[str] = Field(default_factory=list)


class VerificationSummary(BaseModel):
    total: int
    passed: int
    failed: int
    by_suite: Dict[str, Dict[str, int]]


class VerificationCoverage(BaseModel):
    labels: List[str]
    certificates: List[str]
    complete: bool


class VerificationReport(BaseModel):
    suites: List[str]
    seed: int
    records: List[VerificationRecord]
    summary: VerificationSummary
    coverage: Optional[VerificationCoverage] = None

    @property
    def ok(self) -> bool:
        coverage_ok = self.coverage is None or self.coverage.complete
        return self.summary.failed == 0 and coverage_ok
