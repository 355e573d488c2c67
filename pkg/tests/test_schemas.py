import json
import math

import pytest
from pydantic import ValidationError

from cusp_atlas.schemas import BasisDocument, FamilyParams, VerificationReport, VerificationSummary

IDENTITY_ROWS = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]


def test_rst_is_normalized():
    params = FamilyParams(rst=(-3.0, 0.0, 4.0))
    assert params.rst == pytest.approx((0.6, 0.0, -0.8))
    assert math.isclose(sum(x * x for x in params.rst), 1.0)


@pytest.mark.parametrize("field, value", [("rst", (0.0, 0.0, 0.0)), ("rst", (1.0, math.inf, 0.0)), ("s", math.nan)])
def test_params_reject_bad_values(field, value):
    with pytest.raises(ValidationError):
        FamilyParams(**{field: value})


def test_describe():
    assert FamilyParams().describe() == "-"
    assert FamilyParams(rs=(1.0, 0.25)).describe() == "(r=1, s=0.25)"


def test_basis_document():
    document = BasisDocument.model_validate({"matrices": [IDENTITY_ROWS, IDENTITY_ROWS], "label": "C"})
    assert document.version == 1
    assert len(document.matrices) == 2


@pytest.mark.parametrize(
    "payload",
    [
        {"matrices": [IDENTITY_ROWS]},
        {"matrices": [IDENTITY_ROWS, IDENTITY_ROWS[:3]]},
        {"matrices": [IDENTITY_ROWS, IDENTITY_ROWS], "version": 2},
        {"matrices": [IDENTITY_ROWS, [[math.nan] * 4] * 4]},
    ],
)
def test_basis_document_errors(payload):
    with pytest.raises(ValidationError):
        BasisDocument.model_validate(payload)


def test_report_json_reparses():
    report = VerificationReport(
        suites=["normalforms"],
        seed=7,
        records=[],
        summary=VerificationSummary(total=0, passed=0, failed=0, by_suite={}),
    )
    data = json.loads(report.model_dump_json())
    assert VerificationReport.model_validate(data) == report
    assert report.ok
