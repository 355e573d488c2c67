"""
4x4 real linear algebra kernel

Matrices are float64 numpy arrays of shape (4, 4). Projective points are
homogeneous 4-vectors kept in a canonical scaling. Abelian algebra bases are
validated once at construction so the rest of the package can rely on them.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

from cusp_atlas.core.config import settings
from cusp_atlas.core.errors import (
    BadParams,
    EmptyInput,
    NotAbelian,
    NotNilpotent,
    NotUnipotent,
)

logger = logging.getLogger(__name__)

Mat4 = npt.NDArray[np.float64]
Vec4 = npt.NDArray[np.float64]

IDENTITY = np.eye(4)


def as_mat4(x: Union[Sequence[Sequence[float]], np.ndarray]) -> Mat4:
    """Coerce to a finite float64 (4, 4) array, raising BadParams otherwise."""
    m = np.asarray(x, dtype=np.float64)
    if m.shape != (4, 4):
        raise BadParams(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise BadParams("matrix has non-finite entries")
    return m


def elementary(i: int, j: int) -> Mat4:
    """E_ij with 1-based indices."""
    m = np.zeros((4, 4))
    m[i - 1, j - 1] = 1.0
    return m


def permutation_matrix(sigma: Sequence[int]) -> Mat4:
    """P with P e_j = e_sigma(j); sigma is 1-based, sigma[j-1] = sigma(j).

    Conjugation then relabels elementary matrices: P E_ij P^-1 = E_sigma(i)sigma(j).
    """
    if sorted(sigma) != [1, 2, 3, 4]:
        raise BadParams(f"not a permutation of 1..4: {list(sigma)}")
    p = np.zeros((4, 4))
    for j, image in enumerate(sigma):
        p[image - 1, j] = 1.0
    return p


def is_upper_triangular(x: Mat4, tol: Optional[float] = None) -> bool:
    tol = settings.TAU_MAT if tol is None else tol
    return bool(np.all(np.abs(np.tril(x, -1)) <= tol))


def is_strictly_upper(x: Mat4, tol: Optional[float] = None) -> bool:
    tol = settings.TAU_MAT if tol is None else tol
    return bool(np.all(np.abs(np.tril(x)) <= tol))


def is_traceless(x: Mat4, tol: Optional[float] = None) -> bool:
    tol = settings.TAU_MAT if tol is None else tol
    return abs(float(np.trace(x))) <= tol


def commutator(x: Mat4, y: Mat4) -> Mat4:
    return x @ y - y @ x


def exp_nilpotent(x: Mat4) -> Mat4:
    """Exact exponential of a strictly upper triangular matrix (X^4 = 0)."""
    if not is_strictly_upper(x):
        raise NotNilpotent(
            f"entries on or below the diagonal exceed {settings.TAU_MAT}: "
            f"max={np.max(np.abs(np.tril(x))):.3e}"
        )
    n = np.triu(x, 1)
    n2 = n @ n
    return IDENTITY + n + n2 / 2.0 + (n2 @ n) / 6.0


def exp_triangular(x: Mat4) -> Mat4:
    """
    Exponential of an upper triangular matrix

    Scaling and squaring around a Taylor core. The series stops once the next
    term is below 1e-15 of the partial sum, so the diagonal of the result
    matches exp(diag X) to about 1e-13 relative.

    Args:
        x: upper triangular matrix (entries below the diagonal within TAU_MAT)

    Returns:
        exp(X), upper triangular
    """
    if not is_upper_triangular(x):
        raise BadParams(
            f"exp_triangular needs an upper triangular matrix, lower part max="
            f"{np.max(np.abs(np.tril(x, -1))):.3e}"
        )
    x = np.triu(x)
    if is_strictly_upper(x):
        return exp_nilpotent(x)

    norm = float(np.max(np.sum(np.abs(x), axis=1)))
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    y = x / (2.0**squarings)

    result = IDENTITY.copy()
    term = IDENTITY.copy()
    for k in range(1, 40):
        term = term @ y / k
        result = result + term
        if np.max(np.abs(term)) <= 1e-15 * np.max(np.abs(result)):
            break

    for _ in range(squarings):
        result = result @ result
    return np.triu(result)


def log_unipotent(u: Mat4) -> Mat4:
    """Inverse of exp_nilpotent on unipotent upper triangular matrices."""
    n = u - IDENTITY
    if not is_strictly_upper(n):
        raise NotUnipotent(
            f"U - I is not strictly upper triangular: max lower/diagonal entry="
            f"{np.max(np.abs(np.tril(n))):.3e}"
        )
    n = np.triu(n, 1)
    n2 = n @ n
    return n - n2 / 2.0 + (n2 @ n) / 3.0


def numerical_rank(a: np.ndarray, tol: Optional[float] = None, scale: Optional[float] = None) -> int:
    """
    Rank from the singular values of a

    A singular value counts when it is at least tol times the reference scale,
    which is the largest singular value unless scale is given.
    """
    tol = settings.TAU_RANK if tol is None else tol
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    reference = float(sv[0]) if scale is None else float(scale)
    if reference == 0.0:
        return 0
    return int(np.sum(sv >= tol * reference))


def null_space(a: np.ndarray, tol: Optional[float] = None, scale: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of a."""
    tol = settings.TAU_RANK if tol is None else tol
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    n = a.shape[1]
    _, sv, vh = np.linalg.svd(a)
    reference = (float(sv[0]) if sv.size else 0.0) if scale is None else float(scale)
    if reference == 0.0:
        return np.eye(n)
    rank = int(np.sum(sv >= tol * reference))
    return vh[rank:].T.copy()


def dehomogenize(v: Vec4) -> np.ndarray:
    """Affine coordinates (x1/x4, x2/x4, x3/x4)."""
    if abs(v[3]) <= settings.TAU_MAT * max(1.0, float(np.max(np.abs(v)))):
        raise BadParams(f"point {v.tolist()} lies on the hyperplane at infinity")
    return np.asarray(v[:3] / v[3], dtype=np.float64)


class ProjPoint:
    """A point of RP^3, scaled so the largest-magnitude entry is +1 (ties: lowest index)"""

    __slots__ = ("coords",)

    def __init__(self, v: Iterable[float]):
        vec = np.asarray(list(v), dtype=np.float64)
        if vec.shape != (4,) or not np.all(np.isfinite(vec)):
            raise BadParams(f"expected 4 finite homogeneous coordinates, got {vec.tolist()}")
        self.coords = self.canonicalize(vec)

    @staticmethod
    def canonicalize(vec: Vec4) -> Vec4:
        magnitudes = np.abs(vec)
        top = float(np.max(magnitudes))
        if top == 0.0:
            raise BadParams("the zero vector is not a projective point")
        index = int(np.argmax(magnitudes >= top * (1.0 - 1e-15)))
        return vec / vec[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return bool(np.all(np.abs(self.coords - other.coords) <= settings.TAU_MAT))

    def __hash__(self) -> int:
        return hash(tuple(np.round(self.coords, 9)))

    def __repr__(self) -> str:
        return "ProjPoint([" + ":".join(f"{c:.6g}" for c in self.coords) + "])"


def projective_rank(points: Sequence[Union[ProjPoint, Vec4]], tol: Optional[float] = None) -> int:
    """Dimension of the linear span of the points (the projective span plus one)."""
    if len(points) == 0:
        raise EmptyInput("projective_rank needs at least one point")
    rows = [p.coords if isinstance(p, ProjPoint) else ProjPoint.canonicalize(np.asarray(p, dtype=np.float64)) for p in points]
    return numerical_rank(np.vstack(rows), tol)


class AlgebraBasis:
    """
    Basis of an abelian subalgebra of sl4(R)

    Generators are linearly independent, traceless and pairwise commuting.
    Tracelessness and commutation are checked relative to the generator norms.
    """

    def __init__(self, generators: Sequence[Union[Mat4, Sequence[Sequence[float]]]]):
        gens = [as_mat4(g) for g in generators]
        if len(gens) not in (2, 3):
            raise BadParams(f"an algebra basis has 2 or 3 generators, got {len(gens)}")

        for i, g in enumerate(gens):
            scale = max(1.0, float(np.linalg.norm(g)))
            if not is_traceless(g, settings.TAU_RANK * scale):
                raise BadParams(f"generator {i + 1} is not traceless (trace={np.trace(g):.3e})")

        stacked = np.vstack([g.reshape(1, 16) for g in gens])
        if numerical_rank(stacked) < len(gens):
            raise BadParams("generators are linearly dependent")

        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                bracket = float(np.linalg.norm(commutator(gens[i], gens[j])))
                scale = float(np.linalg.norm(gens[i]) * np.linalg.norm(gens[j]))
                if bracket > settings.TAU_RANK * max(1.0, scale):
                    raise NotAbelian(
                        f"generators {i + 1} and {j + 1} do not commute (|[X,Y]|={bracket:.3e})"
                    )

        self.generators: Tuple[Mat4, ...] = tuple(gens)

    @property
    def dim(self) -> int:
        return len(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, index: int) -> Mat4:
        return self.generators[index]

    def element(self, coeffs: Sequence[float]) -> Mat4:
        if len(coeffs) != self.dim:
            raise BadParams(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return sum((c * g for c, g in zip(coeffs, self.generators)), np.zeros((4, 4)))

    def stacked(self) -> np.ndarray:
        """(dim, 16) matrix of flattened generators."""
        return np.vstack([g.reshape(1, 16) for g in self.generators])

    def normalized(self) -> "AlgebraBasis":
        return AlgebraBasis([g / np.linalg.norm(g) for g in self.generators])

    def conjugated(self, m: Mat4) -> "AlgebraBasis":
        m_inv = np.linalg.inv(m)
        return AlgebraBasis([m @ g @ m_inv for g in self.generators])

    def is_upper(self, tol: Optional[float] = None) -> bool:
        return all(is_upper_triangular(g, tol) for g in self.generators)

    def spans_same(self, other: "AlgebraBasis") -> bool:
        """True when both bases span the same subspace of gl4."""
        if self.dim != other.dim:
            return False
        joint = np.vstack([self.stacked(), other.stacked()])
        return numerical_rank(joint) == self.dim

    def tolist(self) -> List[List[List[float]]]:
        return [g.tolist() for g in self.generators]


def logm_real(g: Mat4) -> Mat4:
    """Principal real logarithm, for group elements with positive spectrum."""
    log = scipy.linalg.logm(g)
    if np.iscomplexobj(log):
        log = np.real(log)
    return np.asarray(log, dtype=np.float64)
