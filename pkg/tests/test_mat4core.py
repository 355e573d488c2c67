import itertools

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, seed, settings as hsettings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from cusp_atlas.core.errors import BadParams, NotAbelian, NotNilpotent, NotUnipotent
from cusp_atlas.core.mat4core import (
    AlgebraBasis,
    ProjPoint,
    dehomogenize,
    elementary,
    exp_nilpotent,
    exp_triangular,
    log_unipotent,
    null_space,
    numerical_rank,
    permutation_matrix,
    projective_rank,
)

ENTRIES = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("sigma", [(2, 3, 1, 4), (4, 1, 2, 3), (3, 1, 4, 2), (1, 2, 3, 4)])
def test_permutation_relabels_elementary_matrices(sigma):
    p = permutation_matrix(sigma)
    for i, j in itertools.product(range(1, 5), repeat=2):
        assert_allclose(p @ elementary(i, j) @ np.linalg.inv(p), elementary(sigma[i - 1], sigma[j - 1]))


def test_permutation_rejects_non_permutations():
    with pytest.raises(BadParams):
        permutation_matrix([1, 1, 2, 3])


@seed(1)
@hsettings(max_examples=50, deadline=None)
@given(arrays(np.float64, (4, 4), elements=ENTRIES))
def test_log_inverts_exp_on_nilpotents(a):
    x = np.triu(a, 1)
    assert_allclose(log_unipotent(exp_nilpotent(x)), x, atol=1e-12)


@seed(1)
@hsettings(max_examples=50, deadline=None)
@given(arrays(np.float64, (4, 4), elements=st.floats(min_value=-1.0, max_value=1.0)))
def test_exp_triangular_matches_expm(a):
    x = np.triu(a)
    assert_allclose(exp_triangular(x), scipy.linalg.expm(x), rtol=1e-10, atol=1e-12)


def test_exp_nilpotent_rejects_diagonal():
    with pytest.raises(NotNilpotent):
        exp_nilpotent(np.diag([1.0, 0.0, 0.0, -1.0]))


def test_log_unipotent_rejects_non_unipotent():
    with pytest.raises(NotUnipotent):
        log_unipotent(2.0 * np.eye(4))


def test_exp_triangular_rejects_lower_entries():
    with pytest.raises(BadParams):
        exp_triangular(elementary(2, 1))


def test_numerical_rank_and_null_space():
    a = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0]])
    assert numerical_rank(a) == 2
    kernel = null_space(a)
    assert kernel.shape == (4, 2)
    assert_allclose(a @ kernel, 0.0, atol=1e-14)
    assert numerical_rank(np.zeros((4, 4))) == 0


def test_proj_point_is_scale_invariant():
    p = ProjPoint([0.0, -2.0, 1.0, 0.0])
    assert_allclose(p.coords, [0.0, 1.0, -0.5, 0.0])
    assert p == ProjPoint([0.0, 4.0, -2.0, 0.0])
    assert hash(p) == hash(ProjPoint([0.0, 4.0, -2.0, 0.0]))


def test_proj_point_rejects_zero():
    with pytest.raises(BadParams):
        ProjPoint([0.0, 0.0, 0.0, 0.0])


def test_projective_rank_of_a_line():
    points = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0]]
    assert projective_rank(points) == 2


def test_dehomogenize():
    assert_allclose(dehomogenize(np.array([2.0, 4.0, 6.0, 2.0])), [1.0, 2.0, 3.0])
    with pytest.raises(BadParams):
        dehomogenize(np.array([1.0, 0.0, 0.0, 0.0]))


def test_algebra_basis_validation():
    with pytest.raises(NotAbelian):
        AlgebraBasis([elementary(1, 2), elementary(2, 3)])
    with pytest.raises(BadParams):
        AlgebraBasis([np.eye(4), elementary(1, 2)])
    with pytest.raises(BadParams):
        AlgebraBasis([elementary(1, 2), 2.0 * elementary(1, 2)])
    with pytest.raises(BadParams):
        AlgebraBasis([elementary(1, 2)])


def test_algebra_basis_span_and_conjugation():
    basis = AlgebraBasis([elementary(1, 2), elementary(1, 3), elementary(1, 4)])
    rescaled = AlgebraBasis([3.0 * elementary(1, 3), elementary(1, 2) + elementary(1, 4), elementary(1, 4)])
    assert basis.spans_same(rescaled)
    assert basis.is_upper()
    m = permutation_matrix([2, 1, 3, 4])
    assert not basis.conjugated(m).is_upper()
    assert_allclose(basis.element([1.0, 2.0, 3.0])[0], [0.0, 1.0, 2.0, 3.0])
