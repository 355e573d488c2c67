import math
from typing import List, Optional

from pydantic import BaseModel, field_validator

from .family import FamilyParams


class BasisDocument(BaseModel):
    """Input document for `classify`: 2 or 3 row-major 4x4 matrices."""

    version: int = 1
    matrices: List[List[List[float]]]
    label: Optional[str] = None  # hint only, never trusted
    params: Optional[FamilyParams] = None

    @field_validator("version")
    @classmethod
    def check_version(cls, v: int) -> int:
        if v != 1:
            raise ValueError(f"unsupported document version {v}")
        return v

    @field_validator("matrices")
    @classmethod
    def check_matrices(cls, v: List[List[List[float]]]) -> List[List[List[float]]]:
        if len(v) not in (2, 3):
            raise ValueError(f"expected 2 or 3 matrices, got {len(v)}")
        for k, m in enumerate(v):
            if len(m) != 4 or any(len(row) != 4 for row in m):
                raise ValueError(f"matrix {k + 1} is not 4x4")
            if not all(math.isfinite(x) for row in m for x in row):
                raise ValueError(f"matrix {k + 1} has non-finite entries")
        return v

    class Config:
        from_attributes = True
