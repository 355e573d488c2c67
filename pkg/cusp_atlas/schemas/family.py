import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, field_validator


class FamilyParams(BaseModel):
    """Parameters of a family, plane subgroup or cusp chart.

    rst is a projective triple stored with unit norm and first non-zero entry
    positive; rs abbreviates the plane [r:s:-1]; s is the Cusp:E parameter.
    """

    rst: Optional[Tuple[float, float, float]] = None
    rs: Optional[Tuple[float, float]] = None
    s: Optional[float] = None

    @field_validator("rst")
    @classmethod
    def normalize_rst(cls, v: Optional[Tuple[float, float, float]]) -> Optional[Tuple[float, float, float]]:
        if v is None:
            return v
        if not all(math.isfinite(x) for x in v):
            raise ValueError(f"rst must be finite, got {v}")
        norm = math.sqrt(sum(x * x for x in v))
        if norm == 0.0:
            raise ValueError("rst must not be the zero triple")
        first = next(x for x in v if x != 0.0)
        sign = 1.0 if first > 0 else -1.0
        return tuple(sign * x / norm for x in v)

    @field_validator("rs")
    @classmethod
    def check_rs(cls, v: Optional[Tuple[float, float]]) -> Optional[Tuple[float, float]]:
        if v is not None and not all(math.isfinite(x) for x in v):
            raise ValueError(f"rs must be finite, got {v}")
        return v

    @field_validator("s")
    @classmethod
    def check_s(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not math.isfinite(v):
            raise ValueError(f"s must be finite, got {v}")
        return v

    def describe(self) -> str:
        parts: List[str] = []
        if self.rst is not None:
            parts.append("[" + ":".join(f"{x:.6g}" for x in self.rst) + "]")
        if self.rs is not None:
            parts.append(f"(r={self.rs[0]:.6g}, s={self.rs[1]:.6g})")
        if self.s is not None:
            parts.append(f"s={self.s:.6g}")
        return " ".join(parts) or "-"

    class Config:
        from_attributes = True
