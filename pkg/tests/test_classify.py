import numpy as np
import pytest

from cusp_atlas.core.catalog import (
    FAMILY_LABELS,
    FamilyLabel,
    abelian_type_constructor,
    algebra_basis,
    cusp_chart,
    rs_chart,
    type_family,
)
from cusp_atlas.core.classify import (
    NOT_CUSP,
    ambient_algebra,
    check_abelian_subalgebra,
    classify15,
    classify_cusp,
    eigen_profile,
    pairing_rank,
    triangularize,
)
from cusp_atlas.core.errors import BadParams, ComplexSpectrum, IllConditioned
from cusp_atlas.core.mat4core import AlgebraBasis, elementary
from cusp_atlas.schemas.family import FamilyParams
from cusp_atlas.services.verification_service import random_conjugator


@pytest.mark.parametrize("label", FAMILY_LABELS, ids=str)
def test_catalog_bases_classify_to_themselves(label):
    report = classify15(algebra_basis(label))
    assert report.label == str(label)


def test_conjugates_up_to_condition_1e3():
    rng = np.random.default_rng(17)
    trials = 500
    correct, ill_conditioned, mislabels = 0, 0, []
    for i in range(trials):
        label = FAMILY_LABELS[i % len(FAMILY_LABELS)]
        m = random_conjugator(rng)
        assert np.linalg.cond(m) < 1e3
        try:
            observed = classify15(algebra_basis(label).conjugated(m), rng).label
        except IllConditioned:
            ill_conditioned += 1
            continue
        if observed == str(label):
            correct += 1
        else:
            mislabels.append((i, str(label), observed))
    assert not mislabels
    assert correct + ill_conditioned == trials
    assert correct / trials >= 0.99


@pytest.mark.parametrize("label", [FamilyLabel.C, FamilyLabel.E1, FamilyLabel.F1, FamilyLabel.N1])
def test_badly_scaled_conjugate(label):
    m = np.diag([1.0, 3.0, 10.0, 30.0]) @ (np.eye(4) + 0.3 * np.triu(np.ones((4, 4)), 1).T)
    report = classify15(algebra_basis(label).conjugated(m), np.random.default_rng(5))
    assert report.label == str(label)


@pytest.mark.parametrize(
    "type_id, params",
    [
        (1, None),
        (2, "gamma"),
        (3, (1.0, 0.0)),
        (4, None),
        (5, (0.0, 1.0)),
        (6, (1.0, 1.0, 1.0)),
        (7, (1.0, 0.5)),
        (8, (0.0, 0.0)),
        (9, (1.0, 2.0, 2.0, 4.0)),
        (9, (0.0, 1.0, 0.0, -1.0)),
        (10, (1.0, 1.0)),
        (10, (2.0, -1.0)),
    ],
)
def test_types_classify_to_their_family(type_id, params):
    report = classify15(abelian_type_constructor(type_id, params))
    assert report.label == str(type_family(type_id, params))


def test_triangularize(rng):
    m = random_conjugator(rng, max_log_condition=0.5)
    basis = algebra_basis(FamilyLabel.F0).conjugated(m)
    q, upper = triangularize(basis, rng)
    np.testing.assert_allclose(q @ q.T, np.eye(4), atol=1e-12)
    assert upper.is_upper(0.0)
    for g, t in zip(basis, upper):
        np.testing.assert_allclose(q @ g @ q.T, t, atol=1e-8)


def test_triangularize_keeps_upper_input():
    q, upper = triangularize(algebra_basis(FamilyLabel.N2))
    np.testing.assert_array_equal(q, np.eye(4))
    assert upper.spans_same(algebra_basis(FamilyLabel.N2))


def test_complex_spectrum():
    rotation = np.zeros((4, 4))
    rotation[0, 1], rotation[1, 0] = -1.0, 1.0
    gens = [rotation, np.diag([1.0, 1.0, -1.0, -1.0]), elementary(3, 4)]
    with pytest.raises(ComplexSpectrum):
        classify15(gens)


def test_classify15_needs_three_generators():
    with pytest.raises(BadParams):
        classify15(list(algebra_basis(FamilyLabel.CUSP_F)))


def test_evidence():
    report = classify15(algebra_basis(FamilyLabel.N6))
    assert report.evidence.pairing_rank == 1
    assert report.evidence.eigen_profile.multiplicities == [4]
    report = classify15(algebra_basis(FamilyLabel.N4P))
    assert report.evidence.detII_sign == 1


def test_pairing_rank():
    assert pairing_rank(algebra_basis(FamilyLabel.N6)) == 1
    assert pairing_rank(algebra_basis(FamilyLabel.N5)) == 2


def test_eigen_profile_of_f1():
    profile = eigen_profile(algebra_basis(FamilyLabel.F1))
    assert profile.multiplicities == [3, 1]
    assert profile.blocks[0].jordan_blocks == [3]
    assert profile.blocks[0].fixed_dim == 1


def test_check_abelian_subalgebra():
    assert check_abelian_subalgebra(list(algebra_basis(FamilyLabel.N8))) == {
        "dim": 3,
        "abelian": True,
        "traceless": True,
    }
    report = check_abelian_subalgebra([elementary(1, 2), elementary(2, 1)])
    assert not report["abelian"]


def test_ambient_of_e_plane():
    ambient = ambient_algebra(rs_chart(FamilyLabel.E1, 1.0, 0.3).basis)
    assert ambient is not None
    assert ambient.spans_same(algebra_basis(FamilyLabel.E1))


def test_cusp_c():
    chart = cusp_chart(FamilyLabel.CUSP_C, FamilyParams(rst=(3.0, 2.0, 1.0)))
    report = classify_cusp(chart.basis)
    assert report.label == "Cusp:C"
    assert report.ambient_label == "C"
    expected = np.array([3.0, 2.0, 1.0]) / np.sqrt(14.0)
    np.testing.assert_allclose(report.params.rst, expected, atol=1e-8)
    assert report.certificate.passed


def test_cusp_e_from_unnormalized_plane():
    report = classify_cusp(rs_chart(FamilyLabel.E1, -2.0, 0.6).basis)
    assert report.label == "Cusp:E"
    assert report.params.s == pytest.approx(0.3, abs=1e-8)
    assert report.witness is not None


@pytest.mark.parametrize("label", [FamilyLabel.CUSP_F, FamilyLabel.CUSP_N])
def test_parameterless_cusps(label):
    report = classify_cusp(cusp_chart(label).basis)
    assert report.label == str(label)
    assert report.certificate is None


def test_not_a_cusp():
    report = classify_cusp(rs_chart(FamilyLabel.E1, 1.0, 0.8).basis)
    assert report.label == NOT_CUSP
    assert report.verdict == "Indefinite"
    assert report.counter_witness.det < 0.0


def test_classify_cusp_needs_two_generators():
    with pytest.raises(BadParams):
        classify_cusp(algebra_basis(FamilyLabel.C))


def test_flat_plane_is_not_a_cusp():
    report = classify_cusp(AlgebraBasis([elementary(1, 3), elementary(1, 4)]))
    assert report.label == NOT_CUSP
