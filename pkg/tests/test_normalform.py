import numpy as np
import pytest
from hypothesis import assume, given, seed, settings as hypothesis_settings
from hypothesis import strategies as st

from cusp_atlas.core.catalog import FamilyLabel, cusp_chart, rs_chart
from cusp_atlas.core.errors import BadParams, NotConvex, Singular
from cusp_atlas.core.normalform import (
    ConjugacyCertificate,
    SignedPermutation,
    brute_force_C,
    e_origin_certificate,
    normalize_C,
    normalize_E,
    normalize_F,
    type9_elementary_certificate,
    type_certificate,
    verify_conjugacy,
)

coordinate = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


def _direction(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize(
    "rst, expected",
    [
        ((1.0, 2.0, 3.0), (3.0, 2.0, 1.0)),
        ((1.0, 1.0, -3.0), (1.0, 1.0, 1.0)),
        ((-1.0, -2.0, -3.0), (3.0, 2.0, 1.0)),
        ((2.0, 1.0, 1.0), (2.0, 1.0, 1.0)),
    ],
)
def test_normalize_c(rst, expected):
    canonical, certificate = normalize_C(rst)
    np.testing.assert_allclose(canonical, _direction(expected), atol=1e-12)
    assert certificate.to_report().passed


@pytest.mark.parametrize("rst", [(1.0, -1.0, 1.0), (1.0, 0.0, 2.0), (1.0, 1.0, -2.0)])
def test_normalize_c_rejects_non_convex(rst):
    with pytest.raises(NotConvex):
        normalize_C(rst)


def test_normalize_c_rejects_bad_input():
    with pytest.raises(BadParams):
        normalize_C((0.0, 0.0, 0.0))
    with pytest.raises(BadParams):
        normalize_C((1.0, 2.0))


@seed(1)
@hypothesis_settings(max_examples=200, deadline=None)
@given(coordinate, coordinate, coordinate)
def test_normalize_c_matches_brute_force(r, s, t):
    unit = _direction([r, s, t]) if (r, s, t) != (0.0, 0.0, 0.0) else None
    assume(unit is not None)
    assume(unit[0] * unit[1] * unit[2] * unit.sum() > 1e-6)
    canonical, _ = normalize_C((r, s, t))
    np.testing.assert_allclose(canonical, brute_force_C((r, s, t)), atol=1e-12)
    again, _ = normalize_C(canonical)
    np.testing.assert_allclose(again, canonical, atol=1e-12)
    assert canonical[0] >= canonical[1] >= canonical[2] > 0.0


def test_normalize_e():
    canonical, certificate = normalize_E(-2.0, 0.6)
    assert canonical == pytest.approx(0.3)
    assert certificate.factors == ["P", "Q"]
    report = certificate.to_report()
    assert report.passed
    assert report.residual <= 1e-10


def test_normalize_e_identity():
    canonical, certificate = normalize_E(1.0, 0.2)
    assert canonical == 0.2
    assert certificate.factors == ["I"]
    assert certificate.is_identity


@pytest.mark.parametrize("r, s", [(1.0, 0.5), (1.0, -0.7), (0.0, 0.1), (-2.0, 1.0)])
def test_normalize_e_rejects_non_convex(r, s):
    with pytest.raises(NotConvex):
        normalize_E(r, s)


@seed(1)
@hypothesis_settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.1, max_value=4.0), st.floats(min_value=-0.49, max_value=0.49), st.booleans())
def test_normalize_e_certificates(magnitude, ratio, flip):
    r = -magnitude if flip else magnitude
    canonical, certificate = normalize_E(r, ratio * r)
    assert 0.0 <= canonical < 0.5
    assert canonical == pytest.approx(abs(ratio), abs=1e-12)
    assert certificate.to_report().passed


def test_normalize_f():
    certificate = normalize_F(1.0, 0.0)
    assert certificate.factors == ["I"]
    assert normalize_F(4.0, 1.5).factors == ["R", "S"]
    assert normalize_F(4.0, 1.5).to_report().passed
    assert normalize_F(1.0, -2.0).factors == ["S"]
    with pytest.raises(NotConvex):
        normalize_F(-1.0, 0.0)


def test_e_origin_is_a_c_plane():
    certificate = e_origin_certificate()
    assert certificate.target.label == FamilyLabel.C
    assert certificate.to_report().passed


def test_singular_conjugator():
    certificate = ConjugacyCertificate(
        np.zeros((4, 4)), rs_chart(FamilyLabel.E1, 1.0, 0.2), cusp_chart(FamilyLabel.CUSP_F), ["bad"]
    )
    with pytest.raises(Singular):
        verify_conjugacy(certificate)


def test_wrong_target_fails():
    _, good = normalize_E(1.0, 0.2)
    wrong = ConjugacyCertificate(good.conjugator, good.source, cusp_chart(FamilyLabel.CUSP_F), ["I"])
    ok, residual = verify_conjugacy(wrong)
    assert not ok
    assert residual > 1e-6


@pytest.mark.parametrize(
    "type_id, params",
    [
        (1, None),
        (2, "alpha"),
        (2, "alpha+beta+gamma"),
        (3, (1.0, 2.0)),
        (3, (0.0, 1.0)),
        (4, None),
        (5, (2.0, -1.0)),
        (6, (1.0, 2.0, 3.0)),
        (6, (1.0, 0.0, 3.0)),
        (7, (2.0, 1.0)),
        (7, (0.0, 1.0)),
        (8, (2.0, 1.0)),
        (8, (0.0, 1.0)),
        (9, (1.0, 1.0, 1.0, 1.0)),
        (10, (1.0, 2.0)),
        (10, (1.0, -2.0)),
    ],
)
def test_type_certificates(type_id, params):
    report = type_certificate(type_id, params).to_report()
    assert report.passed, report.residual


def test_type_certificate_gaps():
    with pytest.raises(BadParams):
        type_certificate(9, (0.0, 1.0, 0.0, -1.0))
    with pytest.raises(BadParams):
        type_certificate(10, (1.0, 0.0))


def test_type9_elementary_certificate():
    certificate = type9_elementary_certificate(0.5)
    assert certificate.target.label == FamilyLabel.N6
    assert certificate.to_report().passed


def test_signed_permutation():
    sigma = SignedPermutation([1, 0, 2, 3])
    np.testing.assert_array_equal(sigma.apply([1.0, 2.0, 3.0, 4.0]), [2.0, 1.0, 3.0, 4.0])
    assert SignedPermutation([0, 1, 2, 3], -1).apply([1.0, 0.0, 0.0, 0.0])[0] == -1.0
    with pytest.raises(BadParams):
        SignedPermutation([0, 0, 1, 2])
    with pytest.raises(BadParams):
        SignedPermutation([0, 1, 2, 3], 2)
