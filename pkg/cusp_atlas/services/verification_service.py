"""
Verification harness

Each suite expands into a list of independent checks. A check gets its own
numpy Generator derived from (seed, check id), so the records do not depend on
how the worker pool schedules them, and records are sorted by check id.
"""

import logging
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from cusp_atlas.core.catalog import (
    CUSP_LABELS,
    FAMILY_LABELS,
    FamilyLabel,
    Type2Variant,
    abelian_type_constructor,
    algebra_basis,
    cusp_chart,
    family_chart,
    plane_subalgebra,
    rs_chart,
    type_family,
)
from cusp_atlas.core.classify import NOT_CUSP, classify15, classify_cusp
from cusp_atlas.core.config import settings
from cusp_atlas.core.curvature import (
    OrbitSurface,
    Verdict,
    closed_form_detII,
    convex_domain_contains,
    expected_leaf_height,
    horosphere_sample,
    is_convex_orbit,
    leaf_height,
    patch_curvatures,
    second_form_det,
)
from cusp_atlas.core.errors import CuspAtlasError, DegenerateTangent, IllConditioned
from cusp_atlas.core.mat4core import AlgebraBasis
from cusp_atlas.core.normalform import (
    ConjugacyCertificate,
    brute_force_C,
    e_origin_certificate,
    normalize_C,
    normalize_E,
    normalize_F,
    type9_elementary_certificate,
    type_certificate,
    verify_conjugacy,
)
from cusp_atlas.core.orbits import closure_signature, compare_closure_table
from cusp_atlas.schemas.family import FamilyParams
from cusp_atlas.schemas.verification import (
    VerificationCoverage,
    VerificationRecord,
    VerificationReport,
    VerificationSummary,
)

logger = logging.getLogger(__name__)

SUITES = ["detII", "closures", "conjugators", "convexity", "normalforms", "classifier", "horosphere"]

REQUIRED_CERTIFICATES = {"P", "Q", "R", "S", "shear", "perm"}

# parameter regimes of the ten types, one per family they reach
TYPE_REGIMES: List[Tuple[int, object]] = [
    (1, None),
    (2, Type2Variant.ALPHA.value),
    (2, Type2Variant.BETA_GAMMA.value),
    (3, (1.0, 2.0)),
    (3, (1.0, 0.0)),
    (3, (0.0, 1.0)),
    (4, None),
    (5, (2.0, -1.0)),
    (5, (1.0, 0.0)),
    (5, (0.0, 1.0)),
    (6, (1.0, 2.0, 3.0)),
    (6, (1.0, 0.0, 2.0)),
    (7, (1.0, 0.5)),
    (7, (0.0, 1.0)),
    (7, (0.0, 0.0)),
    (8, (2.0, 1.0)),
    (8, (0.0, 1.0)),
    (8, (0.0, 0.0)),
    (9, (1.0, 1.0, 1.0, 1.0)),
    (9, (0.0, 0.0, 1.0, 2.0)),
    (9, (0.0, 1.0, 0.0, -1.0)),
    (9, (1.0, 0.0, 1.0, 0.0)),
    (10, (1.0, 2.0)),
    (10, (-1.0, -3.0)),
    (10, (1.0, -2.0)),
    (10, (0.0, 0.0)),
    (10, (1.0, 0.0)),
    (10, (0.0, 1.0)),
]

Check = Tuple[str, Callable[[np.random.Generator], VerificationRecord]]


def _sign(value: float, tol: float) -> int:
    if value > tol:
        return 1
    if value < -tol:
        return -1
    return 0


def random_conjugator(rng: np.random.Generator, max_log_condition: Optional[float] = None) -> np.ndarray:
    """A random matrix with condition number below 10**max_log_condition (CONJUGATE_LOG_CONDITION by default)."""
    log_condition = settings.CONJUGATE_LOG_CONDITION if max_log_condition is None else max_log_condition
    q1, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    q2, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    sv = 10.0 ** rng.uniform(0.0, log_condition, size=4)
    return q1 @ np.diag(sv) @ q2


def _certificate_kinds(factors: Sequence[str]) -> List[str]:
    kinds = []
    for factor in factors:
        if factor.startswith("perm"):
            kinds.append("perm")
        else:
            kinds.append(factor)
    return kinds


def success_rate_record(records: Sequence[VerificationRecord]) -> Optional[VerificationRecord]:
    """
    Aggregate the conjugate round trips of a run into one pass/fail record

    The run passes when the share of correctly labelled conjugates reaches
    MIN_SUCCESS_RATE and no conjugate was mislabelled.
    """
    trials = [r for r in records if r.check_id.startswith("classifier/conjugate/")]
    if not trials:
        return None
    outcomes: Dict[str, int] = {}
    for record in trials:
        outcomes[record.outcome or "unknown"] = outcomes.get(record.outcome or "unknown", 0) + 1
    rate = outcomes.get("ok", 0) / len(trials)
    mislabels = outcomes.get("mislabel", 0)
    return VerificationRecord(
        check_id="classifier/success_rate",
        suite="classifier",
        family="all",
        params=f"{len(trials)} conjugates",
        expected=f"success >= {settings.MIN_SUCCESS_RATE:g}, no mislabels",
        observed=", ".join(f"{name}: {count}" for name, count in sorted(outcomes.items())),
        residual=rate,
        passed=rate >= settings.MIN_SUCCESS_RATE and mislabels == 0,
        outcome="ok" if mislabels == 0 else "mislabel",
    )


class VerificationService:
    """Runs verification suites and assembles a VerificationReport"""

    def __init__(
        self,
        seed: Optional[int] = None,
        samples: int = 100,
        workers: Optional[int] = None,
        conjugates: Optional[int] = None,
    ):
        self.seed = settings.SEED if seed is None else seed
        self.samples = samples
        self.workers = settings.VERIFY_WORKERS if workers is None else workers
        self.conjugates = settings.CLASSIFIER_CONJUGATES if conjugates is None else conjugates

    # ------------------------------------------------------------------
    # running
    # ------------------------------------------------------------------

    def _rng(self, check_id: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(check_id.encode())])

    def _run_check(self, check: Check) -> VerificationRecord:
        check_id, func = check
        try:
            return func(self._rng(check_id)).model_copy(update={"check_id": check_id})
        except CuspAtlasError as e:
            logger.warning(f"check {check_id} raised {type(e).__name__}: {e}")
            parts = check_id.split("/")
            suite = parts[0]
            family = parts[1] if len(parts) > 1 else ""
            return VerificationRecord(
                check_id=check_id,
                suite=suite,
                family=family,
                expected="no error",
                observed=f"{type(e).__name__}: {e}",
                passed=False,
                outcome=type(e).__name__,
            )

    def run(self, suites: Sequence[str]) -> VerificationReport:
        """
        Run the named suites ("all" expands to every suite)

        Returns:
            VerificationReport with records sorted by check id; coverage is
            filled in when every suite ran
        """
        names = list(SUITES) if "all" in suites else list(suites)
        unknown = [name for name in names if name not in SUITES]
        if unknown:
            raise ValueError(f"unknown verification suites: {unknown}")

        checks: List[Check] = []
        for name in names:
            builder = getattr(self, f"_suite_{name}")
            suite_checks = builder()
            logger.info(f"suite {name}: {len(suite_checks)} checks")
            checks.extend(suite_checks)

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            records = list(pool.map(self._run_check, checks))
        aggregate = success_rate_record(records)
        if aggregate is not None:
            logger.info(f"classifier success: {aggregate.observed}")
            records.append(aggregate)
        records.sort(key=lambda r: r.check_id)

        by_suite: Dict[str, Dict[str, int]] = {}
        for record in records:
            counts = by_suite.setdefault(record.suite, {"passed": 0, "failed": 0})
            counts["passed" if record.passed else "failed"] += 1
        passed = sum(1 for r in records if r.passed)
        summary = VerificationSummary(
            total=len(records), passed=passed, failed=len(records) - passed, by_suite=by_suite
        )

        coverage = None
        if set(names) == set(SUITES):
            coverage = self._coverage(records)

        logger.info(f"verification finished: {passed}/{len(records)} passed")
        return VerificationReport(suites=names, seed=self.seed, records=records, summary=summary, coverage=coverage)

    def _coverage(self, records: Sequence[VerificationRecord]) -> VerificationCoverage:
        labels = {item.split(":", 1)[1] for r in records for item in r.covers if item.startswith("label:")}
        certificates = {item.split(":", 1)[1] for r in records for item in r.covers if item.startswith("cert:")}
        required_labels = {str(label) for label in FamilyLabel}
        complete = required_labels <= labels and REQUIRED_CERTIFICATES <= certificates
        if not complete:
            logger.error(
                f"coverage incomplete: labels missing {sorted(required_labels - labels)}, "
                f"certificates missing {sorted(REQUIRED_CERTIFICATES - certificates)}"
            )
        return VerificationCoverage(labels=sorted(labels), certificates=sorted(certificates), complete=complete)

    # ------------------------------------------------------------------
    # detII
    # ------------------------------------------------------------------

    def _suite_detII(self) -> List[Check]:
        checks: List[Check] = []
        for label in FAMILY_LABELS:
            for i in range(self.samples):
                checks.append((f"detII/{label}/{i:04d}", self._detII_check(label)))
        return checks

    def _detII_check(self, label: FamilyLabel) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            if label == FamilyLabel.C:
                rst = tuple(rng.normal(size=3))
                chart = plane_subalgebra(label, None, rst)
                params = chart.params
            else:
                r, s = rng.uniform(-2.0, 2.0, size=2)
                chart = rs_chart(label, r, s)
                params = FamilyParams(rs=(r, s))
            point = np.append(rng.uniform(0.2, 2.0, size=3), 1.0)
            closed = closed_form_detII(label, params, point)
            expected = _sign(closed, 1e-9)
            try:
                numeric = second_form_det(OrbitSurface.from_chart(chart, point))
            except DegenerateTangent:
                numeric = 0.0
            if expected == 0:
                passed = abs(numeric) <= 1e-6
            else:
                passed = _sign(numeric, settings.TAU_SIGN) == expected
            return VerificationRecord(
                check_id="",
                suite="detII",
                family=str(label),
                params=params.describe(),
                expected=f"sign {expected:+d}",
                observed=f"{numeric:.6e}",
                residual=abs(numeric) if expected == 0 else None,
                passed=passed,
            )

        return check

    # ------------------------------------------------------------------
    # closures
    # ------------------------------------------------------------------

    def _suite_closures(self) -> List[Check]:
        checks: List[Check] = []
        for label in FAMILY_LABELS:
            checks.append((f"closures/{label}/table", self._closure_table_check(label)))
        checks.append(("closures/all/distinct", self._closure_distinct_check))
        return checks

    def _closure_table_check(self, label: FamilyLabel) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            table = compare_closure_table(label)
            failed = [f"{c.point}: {c.observed} != {c.expected}" for c in table if not c.passed]
            return VerificationRecord(
                check_id="",
                suite="closures",
                family=str(label),
                expected=f"{len(table)} representatives",
                observed="; ".join(failed) or "all match",
                passed=not failed,
            )

        return check

    def _closure_distinct_check(self, rng: np.random.Generator) -> VerificationRecord:
        signatures = {}
        for label in FAMILY_LABELS:
            sig = closure_signature(family_chart(label), seed=self.seed)
            signatures[label] = tuple(sorted(sig.battery_dims.items()))
        same_n4 = signatures[FamilyLabel.N4] == signatures[FamilyLabel.N4P]
        others = [label for label in FAMILY_LABELS if label != FamilyLabel.N4P]
        distinct = len({signatures[label] for label in others}) == len(others)
        return VerificationRecord(
            check_id="",
            suite="closures",
            family="all",
            expected="N4 = N4', other signatures pairwise distinct",
            observed=f"N4 = N4': {same_n4}, distinct: {distinct}",
            passed=same_n4 and distinct,
        )

    # ------------------------------------------------------------------
    # conjugators
    # ------------------------------------------------------------------

    def _suite_conjugators(self) -> List[Check]:
        checks: List[Check] = []
        count = max(5, self.samples // 10)
        for i in range(count):
            checks.append((f"conjugators/Cusp:E/{i:03d}", self._cert_check(_random_e_certificate)))
            checks.append((f"conjugators/Cusp:F/{i:03d}", self._cert_check(_random_f_certificate)))
            checks.append((f"conjugators/Cusp:C/{i:03d}", self._cert_check(_random_c_certificate)))
            checks.append((f"conjugators/N6/shear{i:03d}", self._cert_check(_random_shear_certificate)))
        checks.append(("conjugators/Cusp:E/fixed", self._cert_check(lambda rng: normalize_E(-2.0, 0.6)[1])))
        checks.append(("conjugators/Cusp:F/fixed", self._cert_check(lambda rng: normalize_F(4.0, 1.5))))
        checks.append(("conjugators/E1/origin", self._cert_check(lambda rng: e_origin_certificate())))
        for n, (type_id, params) in enumerate(TYPE_REGIMES):
            if _has_type_certificate(type_id, params):
                checks.append(
                    (
                        f"conjugators/type{type_id:02d}/{n:02d}",
                        self._cert_check(lambda rng, t=type_id, p=params: type_certificate(t, p)),
                    )
                )
        return checks

    def _cert_check(
        self, make: Callable[[np.random.Generator], ConjugacyCertificate]
    ) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            cert = make(rng)
            ok, residual = verify_conjugacy(cert, n_samples=50, seed=int(rng.integers(2**31)))
            return VerificationRecord(
                check_id="",
                suite="conjugators",
                family=cert.target.name,
                params=cert.source.name,
                expected=f"residual <= {settings.CERT_TOL:g}",
                observed=f"{'*'.join(cert.factors)}: {residual:.3e}",
                residual=residual,
                passed=ok,
                covers=[f"cert:{kind}" for kind in _certificate_kinds(cert.factors)],
            )

        return check

    # ------------------------------------------------------------------
    # convexity
    # ------------------------------------------------------------------

    def _suite_convexity(self) -> List[Check]:
        checks: List[Check] = []
        resolution = 2 * self.samples
        for row in range(resolution):
            checks.append((f"convexity/C/row{row:04d}", self._c_row_check(row, resolution)))
        for i in range(5 * self.samples):
            checks.append((f"convexity/E1/{i:04d}", self._e_check))
        for i in range(20):
            checks.append((f"convexity/E1/boundary{i:02d}", self._e_boundary_check))
        for i in range(2 * self.samples):
            checks.append((f"convexity/F1/{i:04d}", self._f_check))
        return checks

    def _c_row_check(self, row: int, resolution: int) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            values = np.linspace(-3.0, 3.0, resolution)
            s = values[row]
            mismatches = []
            for r in values:
                margin = r * s * (1.0 + r + s)
                if abs(margin) < 1e-6 or r == 0.0 or s == 0.0:
                    continue
                points = [np.append(rng.uniform(0.2, 2.0, size=3), 1.0) for _ in range(2)]
                verdict = is_convex_orbit(plane_subalgebra(FamilyLabel.C, None, (r, s, 1.0)), points).verdict
                if (verdict == Verdict.CONVEX) != (margin > 0.0):
                    mismatches.append(f"r={r:.4g}")
            return VerificationRecord(
                check_id="",
                suite="convexity",
                family="C",
                params=f"s={s:.4g}, t=1",
                expected="convex iff rs(1+r+s) > 0",
                observed="; ".join(mismatches) or "all match",
                passed=not mismatches,
            )

        return check

    def _e_check(self, rng: np.random.Generator) -> VerificationRecord:
        while True:
            r, s = rng.uniform(-2.0, 2.0, size=2)
            if abs(abs(s) - abs(r) / 2.0) > 1e-3 and abs(r) > 1e-3:
                break
        expected = abs(s) < abs(r) / 2.0
        verdict = is_convex_orbit(rs_chart(FamilyLabel.E1, r, s), _points(rng)).verdict
        return VerificationRecord(
            check_id="",
            suite="convexity",
            family="E1",
            params=f"r={r:.6g}, s={s:.6g}",
            expected="Convex" if expected else "not convex",
            observed=verdict.value,
            passed=(verdict == Verdict.CONVEX) == expected,
        )

    def _e_boundary_check(self, rng: np.random.Generator) -> VerificationRecord:
        r = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0))
        point = np.append(rng.uniform(0.2, 2.0, size=3), 1.0)
        value = second_form_det(OrbitSurface.from_chart(rs_chart(FamilyLabel.E1, r, r / 2.0), point))
        return VerificationRecord(
            check_id="",
            suite="convexity",
            family="E1",
            params=f"r={r:.6g}, s=r/2",
            expected="|curvature| <= 1e-8",
            observed=f"{value:.3e}",
            residual=abs(value),
            passed=abs(value) <= 1e-8,
        )

    def _f_check(self, rng: np.random.Generator) -> VerificationRecord:
        while True:
            r, s = rng.uniform(-2.0, 2.0, size=2)
            if abs(r) > 1e-3:
                break
        verdict = is_convex_orbit(rs_chart(FamilyLabel.F1, r, s), _points(rng)).verdict
        return VerificationRecord(
            check_id="",
            suite="convexity",
            family="F1",
            params=f"r={r:.6g}, s={s:.6g}",
            expected="Convex" if r > 0 else "not convex",
            observed=verdict.value,
            passed=(verdict == Verdict.CONVEX) == (r > 0),
        )

    # ------------------------------------------------------------------
    # normalforms
    # ------------------------------------------------------------------

    def _suite_normalforms(self) -> List[Check]:
        checks: List[Check] = []
        for i in range(10 * self.samples):
            checks.append((f"normalforms/Cusp:C/{i:05d}", self._c_normal_check))
        for i in range(self.samples):
            checks.append((f"normalforms/Cusp:E/{i:04d}", self._e_normal_check))
        return checks

    def _c_normal_check(self, rng: np.random.Generator) -> VerificationRecord:
        while True:
            rst = rng.normal(size=3)
            r, s, t = rst / np.linalg.norm(rst)
            if r * s * t * (r + s + t) > 1e-6:
                break
        canonical, _ = normalize_C(rst)
        oracle = brute_force_C(rst)
        again, _ = normalize_C(canonical)
        agree = np.allclose(canonical, oracle, atol=1e-12)
        idempotent = np.allclose(canonical, again, atol=1e-12)
        in_domain = canonical[0] >= canonical[1] >= canonical[2] > 0.0
        return VerificationRecord(
            check_id="",
            suite="normalforms",
            family="Cusp:C",
            params="[" + ":".join(f"{x:.6g}" for x in rst) + "]",
            expected="[" + ":".join(f"{x:.6g}" for x in oracle) + "]",
            observed="[" + ":".join(f"{x:.6g}" for x in canonical) + "]",
            residual=float(np.max(np.abs(np.subtract(canonical, oracle)))),
            passed=bool(agree and idempotent and in_domain),
        )

    def _e_normal_check(self, rng: np.random.Generator) -> VerificationRecord:
        r = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 3.0))
        s = float(rng.uniform(-0.49, 0.49) * abs(r))
        canonical, _ = normalize_E(r, s)
        again, _ = normalize_E(1.0, canonical)
        expected = abs(s / r)
        passed = abs(canonical - expected) <= 1e-12 and abs(again - canonical) <= 1e-12 and 0.0 <= canonical < 0.5
        return VerificationRecord(
            check_id="",
            suite="normalforms",
            family="Cusp:E",
            params=f"r={r:.6g}, s={s:.6g}",
            expected=f"s'={expected:.6g}",
            observed=f"s'={canonical:.6g}",
            residual=abs(canonical - expected),
            passed=passed,
        )

    # ------------------------------------------------------------------
    # classifier
    # ------------------------------------------------------------------

    def _suite_classifier(self) -> List[Check]:
        checks: List[Check] = []
        for label in FAMILY_LABELS:
            for i in range(20):
                checks.append((f"classifier/{label}/{i:02d}", self._family_round_trip(label)))
        for i in range(self.conjugates):
            label = FAMILY_LABELS[i % len(FAMILY_LABELS)]
            checks.append((f"classifier/conjugate/{i:04d}", self._conjugate_round_trip(label)))
        for n, (type_id, params) in enumerate(TYPE_REGIMES):
            checks.append((f"classifier/type{type_id:02d}/{n:02d}", self._type_regime_check(type_id, params)))
        for label in CUSP_LABELS:
            checks.append((f"classifier/{label}/canonical", self._cusp_check(label)))
        checks.append(("classifier/NotCusp/E1", self._not_cusp_check))
        return checks

    def _family_round_trip(self, label: FamilyLabel) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            mix = np.diag(rng.uniform(0.5, 2.0, size=3) * rng.choice([-1.0, 1.0], size=3))
            mix += np.triu(rng.uniform(-1.0, 1.0, size=(3, 3)), 1)
            gens = list(algebra_basis(label))
            basis = AlgebraBasis([sum(mix[i, j] * gens[j] for j in range(3)) for i in range(3)])
            observed = classify15(basis, rng).label
            passed = observed == str(label)
            return VerificationRecord(
                check_id="",
                suite="classifier",
                family=str(label),
                params="generators " + ", ".join(f"{x:.3g}" for x in mix.ravel()),
                expected=str(label),
                observed=observed,
                passed=passed,
                outcome="ok" if passed else "mislabel",
                covers=[f"label:{observed}"] if passed else [],
            )

        return check

    def _conjugate_round_trip(self, label: FamilyLabel) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            m = random_conjugator(rng)
            basis = algebra_basis(label).conjugated(m)
            record = dict(
                check_id="",
                suite="classifier",
                family=str(label),
                params=f"cond(M)={np.linalg.cond(m):.3g}",
                expected=str(label),
            )
            try:
                observed = classify15(basis, rng).label
            except IllConditioned as e:
                return VerificationRecord(
                    **record, observed=f"IllConditioned: {e}", passed=True, outcome="IllConditioned"
                )
            passed = observed == str(label)
            return VerificationRecord(
                **record,
                observed=observed,
                passed=passed,
                outcome="ok" if passed else "mislabel",
                covers=[f"label:{observed}"] if passed else [],
            )

        return check

    def _type_regime_check(self, type_id: int, params: object) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            expected = str(type_family(type_id, params))
            observed = classify15(abelian_type_constructor(type_id, params), rng).label
            return VerificationRecord(
                check_id="",
                suite="classifier",
                family=f"type {type_id}",
                params=str(params),
                expected=expected,
                observed=observed,
                passed=observed == expected,
                outcome="ok" if observed == expected else "mislabel",
                covers=[f"label:{observed}"] if observed == expected else [],
            )

        return check

    def _cusp_check(self, label: FamilyLabel) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            params = None
            if label == FamilyLabel.CUSP_C:
                params = FamilyParams(rst=(3.0, 2.0, 1.0))
            elif label == FamilyLabel.CUSP_E:
                params = FamilyParams(s=0.3)
            report = classify_cusp(cusp_chart(label, params).basis, rng)
            return VerificationRecord(
                check_id="",
                suite="classifier",
                family=str(label),
                params=None if params is None else params.describe(),
                expected=str(label),
                observed=f"{report.label} {report.params.describe() if report.params else ''}".strip(),
                passed=report.label == str(label),
                covers=[f"label:{report.label}"] if report.label == str(label) else [],
            )

        return check

    def _not_cusp_check(self, rng: np.random.Generator) -> VerificationRecord:
        report = classify_cusp(rs_chart(FamilyLabel.E1, 1.0, 0.8).basis, rng)
        return VerificationRecord(
            check_id="",
            suite="classifier",
            family="E1",
            params="r=1, s=0.8",
            expected=NOT_CUSP,
            observed=report.label,
            passed=report.label == NOT_CUSP,
        )

    # ------------------------------------------------------------------
    # horosphere
    # ------------------------------------------------------------------

    def _suite_horosphere(self) -> List[Check]:
        checks: List[Check] = []
        for s in (0.0, 0.2, 0.4):
            for name, k in (("1", 1.0), ("e", math.e), ("e2", math.e**2)):
                checks.append((f"horosphere/Cusp:E/s{s:.1f}_k{name}", self._leaf_check(s, k)))
        return checks

    def _leaf_check(self, s: float, k: float) -> Callable[[np.random.Generator], VerificationRecord]:
        def check(rng: np.random.Generator) -> VerificationRecord:
            chart = cusp_chart(FamilyLabel.CUSP_E, FamilyParams(s=s))
            height = leaf_height(chart, k)
            expected = expected_leaf_height(1.0, s, k)
            mesh = horosphere_sample(chart, k)
            curvatures = patch_curvatures(chart, mesh)
            positive = all(c > settings.TAU_SIGN for c in curvatures)
            inside = k <= 1.0 or all(convex_domain_contains(v, 1.0, s) for v in mesh.vertices)
            gap = abs(height - expected)
            return VerificationRecord(
                check_id="",
                suite="horosphere",
                family="Cusp:E",
                params=f"s={s:.6g}, k={k:.6g}",
                expected=f"height {expected:.9g}, positive curvature",
                observed=f"height {height:.9g}, min curvature {min(curvatures):.3e}, inside domain {inside}",
                residual=gap,
                passed=gap <= 1e-9 and positive and inside,
            )

        return check


def _points(rng: np.random.Generator, count: int = 4) -> List[np.ndarray]:
    return [np.append(rng.uniform(0.2, 2.0, size=3), 1.0) for _ in range(count)]


def _has_type_certificate(type_id: int, params: object) -> bool:
    if type_id == 9:
        x, y, z, t = params  # type: ignore[misc]
        return np.linalg.matrix_rank(np.array([[y, z], [x, t]])) == 1
    if type_id == 10:
        x, y = params  # type: ignore[misc]
        return x * y != 0.0
    return True


def _random_e_certificate(rng: np.random.Generator) -> ConjugacyCertificate:
    r = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 3.0))
    s = float(rng.uniform(-0.45, 0.45) * abs(r))
    return normalize_E(r, s)[1]


def _random_f_certificate(rng: np.random.Generator) -> ConjugacyCertificate:
    r = float(rng.uniform(0.2, 3.0))
    s = float(rng.uniform(-2.0, 2.0))
    return normalize_F(r, s)


def _random_c_certificate(rng: np.random.Generator) -> ConjugacyCertificate:
    while True:
        rst = rng.normal(size=3)
        r, s, t = rst / np.linalg.norm(rst)
        if r * s * t * (r + s + t) > 1e-3:
            return normalize_C(rst)[1]


def _random_shear_certificate(rng: np.random.Generator) -> ConjugacyCertificate:
    return type9_elementary_certificate(float(rng.uniform(-2.0, 2.0)))

