"""Reading input documents, resolving family arguments and writing JSON output."""

import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, ValidationError

from cusp_atlas.core.catalog import FamilyLabel, GroupChart, cusp_chart, plane_subalgebra, rs_chart
from cusp_atlas.core.errors import BadParams, ParseError
from cusp_atlas.schemas.basis import BasisDocument
from cusp_atlas.schemas.family import FamilyParams


def read_basis_document(source: str) -> BasisDocument:
    """Load a BasisDocument from a path, or from stdin when source is '-'."""
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {source}: {e}")
    try:
        return BasisDocument.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON in {source}: {e}")
    except ValidationError as e:
        raise ParseError(f"invalid basis document {source}: {e.errors()[0]['msg']}")


def emit(model: BaseModel, stream: Optional[TextIO] = None, exclude: Optional[set] = None) -> None:
    out = stream or sys.stdout
    out.write(model.model_dump_json(indent=2, exclude=exclude))
    out.write("\n")


def parse_label(text: str) -> FamilyLabel:
    return FamilyLabel.parse(text)


def _need(label: FamilyLabel, values: Sequence[float], count: int, names: str) -> List[float]:
    if len(values) != count:
        raise BadParams(f"{label} takes {count} parameters ({names}), got {len(values)}")
    return [float(v) for v in values]


def surface_chart(label: FamilyLabel, values: Sequence[float]) -> Tuple[GroupChart, FamilyLabel, FamilyParams]:
    """
    The 2-dim chart a curvature query refers to

    Args:
        label: a family or cusp label
        values: C takes r s t (the plane), E1/F0/F1 take r s (the plane
            [r:s:-1]); the nilpotent families take r s optionally (default 0 0);
            Cusp:C takes r s t, Cusp:E takes s

    Returns:
        (chart, label of the tabulated det II row, params for that row)
    """
    if label == FamilyLabel.C:
        rst = _need(label, values, 3, "r s t")
        chart = plane_subalgebra(label, None, rst)
        return chart, label, chart.params
    if label == FamilyLabel.CUSP_C:
        rst = _need(label, values, 3, "r s t")
        chart = cusp_chart(label, FamilyParams(rst=rst))
        return chart, FamilyLabel.C, chart.params
    if label == FamilyLabel.CUSP_E:
        (s,) = _need(label, values, 1, "s")
        return cusp_chart(label, FamilyParams(s=s)), FamilyLabel.E1, FamilyParams(rs=(1.0, s))
    if label == FamilyLabel.CUSP_F:
        _need(label, values, 0, "none")
        return cusp_chart(label), FamilyLabel.F1, FamilyParams(rs=(1.0, 0.0))
    if label == FamilyLabel.CUSP_N:
        _need(label, values, 0, "none")
        return cusp_chart(label), FamilyLabel.N4P, FamilyParams()
    if not values and label not in (FamilyLabel.E1, FamilyLabel.F0, FamilyLabel.F1):
        values = [0.0, 0.0]
    r, s = _need(label, values, 2, "r s")
    return rs_chart(label, r, s), label, FamilyParams(rs=(r, s))


def cusp_mesh_chart(label: FamilyLabel, values: Sequence[float]) -> GroupChart:
    if not label.is_cusp:
        raise BadParams(f"meshes are leaves of cusp groups, not {label}")
    return surface_chart(label, values)[0]
