import csv
import math

import numpy as np
import pytest

from cusp_atlas.core.catalog import FamilyLabel, cusp_chart
from cusp_atlas.core.curvature import horosphere_sample, region_grid
from cusp_atlas.schemas.family import FamilyParams
from cusp_atlas.schemas.verification import VerificationRecord
from cusp_atlas.services.export_service import ExportService
from cusp_atlas.services.verification_service import (
    SUITES,
    VerificationService,
    random_conjugator,
    success_rate_record,
)


@pytest.fixture(scope="module")
def small_report():
    return VerificationService(seed=11, samples=2, workers=2).run(["normalforms", "conjugators", "horosphere"])


def test_suites_pass(small_report):
    failed = [(r.check_id, r.observed) for r in small_report.records if not r.passed]
    assert not failed
    assert small_report.ok
    assert small_report.coverage is None
    assert set(small_report.summary.by_suite) == {"normalforms", "conjugators", "horosphere"}


def test_records_are_sorted_and_labelled(small_report):
    ids = [r.check_id for r in small_report.records]
    assert ids == sorted(ids)
    assert all(r.check_id.startswith(r.suite + "/") for r in small_report.records)
    assert small_report.summary.total == len(ids)


def test_runs_are_deterministic():
    first = VerificationService(seed=3, samples=1, workers=1).run(["normalforms"])
    second = VerificationService(seed=3, samples=1, workers=4).run(["normalforms"])
    assert first.model_dump() == second.model_dump()


def test_closures_suite():
    report = VerificationService(seed=1, samples=1).run(["closures"])
    assert report.summary.failed == 0


def test_unknown_suite():
    with pytest.raises(ValueError):
        VerificationService().run(["nope"])


def test_suite_names():
    assert SUITES[0] == "detII"
    assert len(SUITES) == 7


def test_random_conjugator_condition(rng):
    m = random_conjugator(rng, max_log_condition=1.0)
    assert np.linalg.cond(m) <= 10.0 + 1e-9


def test_write_obj(tmp_path):
    chart = cusp_chart(FamilyLabel.CUSP_E, FamilyParams(s=0.25))
    mesh = horosphere_sample(chart, math.e, grid=3)
    path = ExportService().write_obj(mesh, tmp_path / "leaf.obj")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# leaf height ")
    assert sum(line.startswith("v ") for line in lines) == 9
    faces = [line for line in lines if line.startswith("f ")]
    assert len(faces) == 4
    assert faces[0] == "f 1 4 5 2"


def test_write_mesh_csv(tmp_path):
    mesh = horosphere_sample(cusp_chart(FamilyLabel.CUSP_F), 2.0, grid=2)
    path = ExportService(precision=6).write_mesh_csv(mesh, tmp_path / "out" / "leaf.csv")
    with path.open() as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["index", "x", "y", "z"]
    assert len(rows) == 5


def test_write_region(tmp_path):
    r, s, grid = region_grid(16)
    exporter = ExportService()
    csv_path = exporter.write_region_csv(r, s, grid, tmp_path / "region.csv")
    with csv_path.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 256
    assert sum(int(row["convex"]) for row in rows) == int(grid.sum())

    first = exporter.write_region_svg(r, s, grid, tmp_path / "a.svg").read_text()
    second = exporter.write_region_svg(r, s, grid, tmp_path / "b.svg").read_text()
    assert first.startswith("<?xml")
    assert first == second


def _conjugate_record(i, outcome):
    return VerificationRecord(
        check_id=f"classifier/conjugate/{i:04d}",
        suite="classifier",
        family="N4",
        expected="N4",
        observed=outcome,
        passed=outcome != "mislabel",
        outcome=outcome,
    )


def test_success_rate_record():
    records = [_conjugate_record(i, "ok") for i in range(99)] + [_conjugate_record(99, "IllConditioned")]
    aggregate = success_rate_record(records)
    assert aggregate.check_id == "classifier/success_rate"
    assert aggregate.residual == pytest.approx(0.99)
    assert aggregate.passed
    assert aggregate.observed == "IllConditioned: 1, ok: 99"


def test_success_rate_fails_on_a_single_mislabel():
    records = [_conjugate_record(i, "ok") for i in range(499)] + [_conjugate_record(499, "mislabel")]
    aggregate = success_rate_record(records)
    assert aggregate.residual > 0.99
    assert not aggregate.passed
    assert aggregate.outcome == "mislabel"


def test_success_rate_fails_below_threshold():
    records = [_conjugate_record(i, "ok") for i in range(98)]
    records += [_conjugate_record(98, "IllConditioned"), _conjugate_record(99, "Unrecognized")]
    assert not success_rate_record(records).passed


def test_success_rate_ignores_other_checks():
    record = _conjugate_record(0, "ok").model_copy(update={"check_id": "classifier/N4/00"})
    assert success_rate_record([record]) is None


def test_coverage_is_built_per_run():
    service = VerificationService(seed=11, samples=1, workers=2)
    first = service.run(["conjugators"])
    assert any(item.startswith("cert:") for r in first.records for item in r.covers)
    assert service._coverage(first.records).certificates

    second = service.run(["normalforms"])
    coverage = service._coverage(second.records)
    assert coverage.labels == []
    assert coverage.certificates == []
    assert not coverage.complete


def test_classifier_suite_reports_conjugate_outcomes():
    report = VerificationService(seed=5, samples=1, workers=2, conjugates=15).run(["classifier"])
    conjugates = [r for r in report.records if r.check_id.startswith("classifier/conjugate/")]
    assert len(conjugates) == 15
    assert {r.outcome for r in conjugates} <= {"ok", "IllConditioned"}
    assert not [r.check_id for r in report.records if r.outcome == "mislabel"]
    aggregate = next(r for r in report.records if r.check_id == "classifier/success_rate")
    assert aggregate.params == "15 conjugates"


def test_random_conjugator_default_bound(rng):
    for _ in range(50):
        assert np.linalg.cond(random_conjugator(rng)) < 1e3
