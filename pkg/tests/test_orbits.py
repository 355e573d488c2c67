import numpy as np
import pytest

from cusp_atlas.core.catalog import FAMILY_LABELS, FamilyLabel, algebra_basis, family_chart
from cusp_atlas.core.errors import BadParams, Singular
from cusp_atlas.core.mat4core import AlgebraBasis, ProjPoint, elementary
from cusp_atlas.core.orbits import (
    CLOSURE_TABLE,
    act,
    battery_points,
    closure_signature,
    cluster_values,
    compare_closure_table,
    cyclic_span_dim,
    fixed_set_dim,
    joint_weight_spaces,
    lattice,
    orbit_closure_dim,
    parse_point_name,
    sample_orbit,
)


@pytest.mark.parametrize("label", FAMILY_LABELS, ids=str)
def test_closure_table_matches(label):
    checks = compare_closure_table(label)
    failed = [(c.point, c.expected, c.observed) for c in checks if not c.passed]
    assert not failed
    assert len(checks) == sum(len(names) for names in CLOSURE_TABLE[label].values())


def test_closure_table_rejects_cusps():
    with pytest.raises(BadParams):
        compare_closure_table(FamilyLabel.CUSP_F)


@pytest.mark.parametrize(
    "label, expected",
    [
        (FamilyLabel.C, 0),
        (FamilyLabel.F2, 0),
        (FamilyLabel.F3, 1),
        (FamilyLabel.N7, 2),
        (FamilyLabel.N8, 0),
    ],
)
def test_fixed_set_dim(label, expected):
    assert fixed_set_dim(algebra_basis(label)) == expected


def test_fixed_set_dim_of_conjugated_basis(rng):
    pattern = np.array([[0.0, 1.0, 0.0, 1.0], [1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0], [1.0, 0.0, 1.0, 0.0]])
    m = np.eye(4) + 0.25 * pattern
    basis = algebra_basis(FamilyLabel.F3).conjugated(m)
    assert fixed_set_dim(basis, rng) == 1


def test_weight_spaces_of_cartan():
    spaces = joint_weight_spaces(algebra_basis(FamilyLabel.C))
    assert len(spaces) == 4
    assert all(space.multiplicity == 1 and space.joint_dim == 1 for space in spaces)


def test_n4_and_n4_prime_share_a_signature():
    ours = closure_signature(family_chart(FamilyLabel.N4))
    theirs = closure_signature(family_chart(FamilyLabel.N4P))
    assert ours.dim_histogram == theirs.dim_histogram
    assert ours.fixed_set_dim == theirs.fixed_set_dim
    assert ours.generic_dim == theirs.generic_dim == 3


def test_signatures_separate_c_and_n8():
    c = closure_signature(family_chart(FamilyLabel.C))
    n8 = closure_signature(family_chart(FamilyLabel.N8))
    assert c.dim_histogram != n8.dim_histogram


def test_battery_is_seeded():
    first = battery_points(seed=7)
    second = battery_points(seed=7)
    assert [name for name, _ in first][:4] == ["e1", "e2", "e3", "e4"]
    assert len(first) == 4 + 6 + 4 + 1 + 3
    for (_, u), (_, v) in zip(first, second):
        np.testing.assert_array_equal(u, v)


def test_cyclic_span():
    basis = algebra_basis(FamilyLabel.N1)
    assert cyclic_span_dim(basis, np.array([0.0, 0.0, 0.0, 1.0])) == 3
    assert cyclic_span_dim(basis, np.array([1.0, 0.0, 0.0, 0.0])) == 0
    assert cyclic_span_dim(basis, ProjPoint([0.0, 1.0, 0.0, 0.0])) == 1


def test_orbit_closure_dim():
    assert orbit_closure_dim(family_chart(FamilyLabel.C), np.ones(4)) == 3
    assert orbit_closure_dim(family_chart(FamilyLabel.C), [1.0, 1.0, 0.0, 0.0]) == 1
    assert orbit_closure_dim(family_chart(FamilyLabel.N6), [0.0, 0.0, 0.0, 1.0]) == 2


def test_sample_orbit_shape():
    sample = sample_orbit(family_chart(FamilyLabel.N6), np.ones(4), points=3)
    assert sample.grid.shape == (27, 3)
    assert sample.images.shape == (27, 4)
    assert len(sample.points()) == 27


def test_lattice():
    grid = lattice(2, points=3, radius=2.0)
    assert grid.shape == (9, 2)
    assert grid.min() == -2.0 and grid.max() == 2.0


def test_act():
    g = np.diag([2.0, 1.0, 1.0, 1.0])
    assert act(g, [1.0, 0.0, 0.0, 1.0]) == ProjPoint([2.0, 0.0, 0.0, 1.0])
    with pytest.raises(Singular):
        act(np.diag([1.0, 1.0, 1.0, 0.0]), [1.0, 0.0, 0.0, 1.0])


def test_parse_point_name():
    np.testing.assert_array_equal(parse_point_name("e1+e3"), [1.0, 0.0, 1.0, 0.0])
    for bad in ("e5", "x", "e1+"):
        with pytest.raises(BadParams):
            parse_point_name(bad)


def test_cluster_values():
    clusters = cluster_values([0.0, 1.0, 1e-4, 1.00005], 1e-3)
    assert sorted(sorted(c) for c in clusters) == [[0, 2], [1, 3]]


def test_weight_spaces_of_jordan_pair():
    basis = AlgebraBasis([np.diag([1.0, 1.0, -1.0, -1.0]), elementary(1, 2)])
    spaces = joint_weight_spaces(basis)
    assert sorted(space.multiplicity for space in spaces) == [2, 2]
    assert sorted(space.joint_dim for space in spaces) == [1, 2]
