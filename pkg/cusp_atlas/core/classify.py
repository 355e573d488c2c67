"""
Classification of abelian subalgebras

classify15 labels a 3-dim abelian subalgebra of sl4(R) with real spectrum by
conjugation invariants only: the joint weights, the Jordan partition of a
generic element on each weight space, the dimension of the largest fixed
subspace, the generic orbit-closure dimension, the rank of the annihilating
pairing (nilpotent (2,2) class) and, for N4 against N4', the sign of the
curvature of a generic 2-dim orbit.

classify_cusp labels a 2-dim abelian subalgebra as one of the four cusp
families, or as not a cusp.
"""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from cusp_atlas.core.catalog import FamilyLabel, GroupChart
from cusp_atlas.core.config import settings
from cusp_atlas.core.curvature import (
    OrbitSurface,
    Verdict,
    default_base_points,
    is_convex_orbit,
    second_form_det,
)
from cusp_atlas.core.errors import (
    BadParams,
    DegenerateTangent,
    IllConditioned,
    NotAbelian,
    Unrecognized,
)
from cusp_atlas.core.mat4core import (
    AlgebraBasis,
    Mat4,
    commutator,
    is_traceless,
    null_space,
    numerical_rank,
)
from cusp_atlas.core.normalform import ConjugacyCertificate, normalize_C, normalize_E
from cusp_atlas.core.orbits import (
    WeightSpace,
    closure_signature,
    generic_element,
    joint_weight_spaces,
    spectral_clusters,
)
from cusp_atlas.schemas.family import FamilyParams
from cusp_atlas.schemas.report import (
    ClassificationEvidence,
    ClassificationReport,
    ConvexityWitness,
    CuspReport,
    EigenProfile,
    WeightBlock,
)

logger = logging.getLogger(__name__)

NOT_CUSP = "NotCusp"

GenList = Union[AlgebraBasis, Sequence[Mat4]]

CUSP_AMBIENT = {
    FamilyLabel.C: FamilyLabel.CUSP_C,
    FamilyLabel.E1: FamilyLabel.CUSP_E,
    FamilyLabel.F1: FamilyLabel.CUSP_F,
    FamilyLabel.N4P: FamilyLabel.CUSP_N,
}


def check_abelian_subalgebra(gens: Sequence[Mat4]) -> dict:
    """Report dimension, commutation and tracelessness without raising."""
    mats = [np.asarray(g, dtype=np.float64) for g in gens]
    dim = numerical_rank(np.vstack([g.reshape(1, 16) for g in mats])) if mats else 0
    abelian = all(
        np.linalg.norm(commutator(x, y)) <= settings.TAU_RANK * max(1.0, np.linalg.norm(x) * np.linalg.norm(y))
        for i, x in enumerate(mats)
        for y in mats[i + 1 :]
    )
    traceless = all(is_traceless(g, settings.TAU_RANK * max(1.0, np.linalg.norm(g))) for g in mats)
    return {"dim": dim, "abelian": abelian, "traceless": traceless}


def _as_basis(gens: GenList) -> AlgebraBasis:
    return gens if isinstance(gens, AlgebraBasis) else AlgebraBasis(list(gens))


# ---------------------------------------------------------------------------
# Triangularization
# ---------------------------------------------------------------------------


def _complete_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis with v first, completed by Gram-Schmidt over e1, e2, ... in order."""
    n = v.shape[0]
    columns = [v / np.linalg.norm(v)]
    for i in range(n):
        w = np.zeros(n)
        w[i] = 1.0
        for c in columns:
            w = w - (c @ w) * c
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            columns.append(w / norm)
        if len(columns) == n:
            break
    return np.column_stack(columns)


def _common_eigenvector(blocks: List[np.ndarray], rng: np.random.Generator) -> np.ndarray:
    n = blocks[0].shape[0]
    if n == 1:
        return np.ones(1)
    scale = max(1.0, max(float(np.linalg.norm(b, 2)) for b in blocks))
    for attempt in range(settings.MAX_REDRAWS):
        coeffs = rng.uniform(0.5, 1.5, size=len(blocks)) * rng.choice([-1.0, 1.0], size=len(blocks))
        x = sum(c * b for c, b in zip(coeffs, blocks))
        x_scale = max(1e-300, float(np.linalg.norm(x, 2)))
        found = spectral_clusters(x)
        if found is None:
            logger.debug(f"eigenvalue clusters too close, redrawing ({attempt + 1})")
            continue
        _, _, means = found
        lam = min(means)
        eigenspace = null_space(x - lam * np.eye(n), settings.TAU_STRUCT, scale=x_scale)
        if eigenspace.shape[1] == 0:
            raise IllConditioned(f"empty eigenspace for the cluster at {lam:.6g}")
        d = eigenspace.shape[1]
        restricted = [eigenspace.T @ b @ eigenspace for b in blocks]
        shifted = [r - (np.trace(r) / d) * np.eye(d) for r in restricted]
        kernel = null_space(np.vstack(shifted), settings.TAU_STRUCT, scale=scale)
        if kernel.shape[1] == 0:
            raise IllConditioned("generators have no common eigenvector in the eigenspace")
        return eigenspace @ kernel[:, 0]
    raise IllConditioned(f"could not separate eigenvalues after {settings.MAX_REDRAWS} draws")


def triangularize(gens: GenList, rng: Optional[np.random.Generator] = None) -> Tuple[Mat4, AlgebraBasis]:
    """
    Simultaneously triangularize a commuting family by an orthogonal common flag

    Returns:
        (M, basis') with M X M^-1 upper triangular for every generator X; the
        lower parts of basis' are exactly zero
    """
    basis = _as_basis(gens)
    if basis.is_upper():
        return np.eye(4), AlgebraBasis([np.triu(g) for g in basis])

    rng = rng if rng is not None else np.random.default_rng(settings.SEED)
    q = np.eye(4)
    for level in range(3):
        blocks = [(q.T @ g @ q)[level:, level:] for g in basis]
        v = _common_eigenvector(blocks, rng)
        q[:, level:] = q[:, level:] @ _complete_basis(v)

    result = []
    for g in basis:
        t = q.T @ g @ q
        lower = float(np.max(np.abs(np.tril(t, -1))))
        if lower > 1e-8 * max(1.0, float(np.linalg.norm(g))):
            raise IllConditioned(f"triangularization left a lower part of size {lower:.3e}")
        result.append(np.triu(t))
    logger.debug("triangularized basis by an orthogonal flag")
    return q.T, AlgebraBasis(result)


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------


def _jordan_blocks(x: np.ndarray, space: WeightSpace, weight: float) -> List[int]:
    q = space.generalized
    m = q.shape[1]
    n = q.T @ x @ q - weight * np.eye(m)
    ranks = [m]
    power = np.eye(m)
    for _ in range(m):
        power = power @ n
        ranks.append(numerical_rank(power, 1e-8, scale=1.0))
    # number of blocks of size >= j is ranks[j-1] - ranks[j]
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, m + 1)] + [0]
    blocks: List[int] = []
    for size in range(m, 0, -1):
        blocks.extend([size] * (at_least[size - 1] - at_least[size]))
    return blocks


def eigen_profile(basis: AlgebraBasis, rng: Optional[np.random.Generator] = None) -> EigenProfile:
    """Weights of a seeded generic element with multiplicities, Jordan blocks and joint eigenspace dims."""
    rng = rng if rng is not None else np.random.default_rng(settings.SEED)
    spaces = joint_weight_spaces(basis, rng)
    coeffs, x = generic_element(basis, rng)
    blocks = []
    for space in spaces:
        weight = float(coeffs @ space.weights)
        blocks.append(
            WeightBlock(
                weight=weight,
                multiplicity=space.multiplicity,
                jordan_blocks=_jordan_blocks(x, space, weight),
                fixed_dim=space.joint_dim,
            )
        )
    blocks.sort(key=lambda b: (-b.multiplicity, b.weight))
    return EigenProfile(blocks=blocks, real=True, coefficients=[float(c) for c in coeffs])


def pairing_rank(basis: AlgebraBasis) -> int:
    """
    Rank of the functional annihilating a nilpotent (2,2) algebra

    The generators factor through R^4 / K -> I, with K the joint kernel and I the
    joint image, both 2-dimensional. The algebra is a hyperplane in that 4-dim
    space of maps and its annihilator, as a 2x2 matrix, has rank 1 or 2.
    """
    kernel = null_space(np.vstack(list(basis)), 1e-8)
    image_rank = numerical_rank(np.hstack(list(basis)), 1e-8)
    if kernel.shape[1] != 2 or image_rank != 2:
        raise Unrecognized(f"pairing needs 2-dim kernel and image, got {kernel.shape[1]} and {image_rank}")
    u, _, _ = np.linalg.svd(np.hstack(list(basis)))
    image = u[:, :2]
    complement = null_space(kernel.T)
    maps = np.vstack([(image.T @ g @ complement).reshape(1, 4) for g in basis])
    annihilator = null_space(maps, 1e-8)
    if annihilator.shape[1] != 1:
        raise Unrecognized(f"pairing annihilator has dimension {annihilator.shape[1]}")
    return numerical_rank(annihilator[:, 0].reshape(2, 2), 1e-6)


def curvature_sign(basis: AlgebraBasis, rng: np.random.Generator) -> int:
    """Sign of the curvature of a random 2-dim orbit of the algebra."""
    for _ in range(settings.MAX_REDRAWS):
        c = rng.normal(size=(2, basis.dim))
        plane = [basis.element(c[0]), basis.element(c[1])]
        p = np.append(rng.uniform(0.2, 2.0, size=3), 1.0)
        try:
            det = second_form_det(OrbitSurface(generators=plane, base=p))
        except DegenerateTangent:
            continue
        if abs(det) > settings.TAU_SIGN:
            return 1 if det > 0 else -1
    raise IllConditioned("no non-degenerate random orbit with a definite curvature sign")


def _decide(profile: EigenProfile, fixed: int, generic: int, basis: AlgebraBasis, rng) -> Tuple[FamilyLabel, dict]:
    mults = profile.multiplicities
    extra: dict = {}
    blocks = {b.multiplicity: b for b in profile.blocks}

    if mults == [1, 1, 1, 1]:
        return FamilyLabel.C, extra
    if mults == [2, 1, 1] and blocks[2].jordan_blocks == [2]:
        return FamilyLabel.E1, extra
    if mults == [2, 2] and all(b.jordan_blocks == [2] for b in profile.blocks):
        return FamilyLabel.F0, extra
    if mults == [3, 1]:
        jordan = blocks[3].jordan_blocks
        if jordan == [3]:
            return FamilyLabel.F1, extra
        if jordan == [2, 1] and fixed == 0:
            return FamilyLabel.F2, extra
        if jordan == [2, 1] and fixed == 1:
            return FamilyLabel.F3, extra
    if mults == [4]:
        jordan = profile.blocks[0].jordan_blocks
        if jordan == [4]:
            return FamilyLabel.N1, extra
        if jordan == [3, 1]:
            if fixed == 1:
                return FamilyLabel.N3, extra
            if fixed == 0 and generic == 2:
                return FamilyLabel.N2, extra
            if fixed == 0 and generic == 3:
                sign = curvature_sign(basis, rng)
                extra["detII_sign"] = sign
                return (FamilyLabel.N4 if sign < 0 else FamilyLabel.N4P), extra
        if jordan == [2, 2]:
            rank = pairing_rank(basis)
            extra["pairing_rank"] = rank
            return (FamilyLabel.N6 if rank == 1 else FamilyLabel.N5), extra
        if jordan == [2, 1, 1]:
            if fixed == 2:
                return FamilyLabel.N7, extra
            if fixed == 0:
                return FamilyLabel.N8, extra
    raise Unrecognized(
        f"no family with multiplicities {mults}, fixed dim {fixed}, generic dim {generic}",
        evidence={"eigen_profile": profile.model_dump(), "fixed_set_dim": fixed, "generic_dim": generic},
    )


def classify15(gens: GenList, rng: Optional[np.random.Generator] = None) -> ClassificationReport:
    """Label a 3-dim abelian subalgebra of sl4(R) with one of the fifteen families."""
    basis = _as_basis(gens)
    if basis.dim != 3:
        raise BadParams(f"classify15 needs 3 generators, got {basis.dim}")
    rng = rng if rng is not None else np.random.default_rng(settings.SEED)

    conjugator, upper = triangularize(basis, rng)
    normalized = upper.normalized()
    profile = eigen_profile(normalized, rng)
    signature = closure_signature(GroupChart(None, normalized, name="input"), tol=settings.TAU_STRUCT)
    label, extra = _decide(profile, signature.fixed_set_dim, signature.generic_dim, normalized, rng)

    logger.info(f"classified algebra as {label}")
    return ClassificationReport(
        label=str(label),
        evidence=ClassificationEvidence(
            eigen_profile=profile,
            closure_signature=signature,
            pairing_rank=extra.get("pairing_rank"),
            detII_sign=extra.get("detII_sign"),
        ),
        triangularizer=conjugator.tolist(),
    )


# ---------------------------------------------------------------------------
# Cusps
# ---------------------------------------------------------------------------


def centralizer(basis: AlgebraBasis) -> np.ndarray:
    """Orthonormal basis (rows are flattened matrices) of the centralizer in sl4(R)."""
    identity = np.eye(4)
    rows = [np.kron(identity, g.T) - np.kron(g, identity) for g in basis]
    rows.append(identity.reshape(1, 16))
    scale = max(1.0, max(float(np.linalg.norm(g)) for g in basis))
    return null_space(np.vstack(rows), 1e-8, scale=scale).T


def ambient_algebra(basis: AlgebraBasis) -> Optional[AlgebraBasis]:
    """The centralizer, when it is a 3-dim abelian algebra."""
    cent = centralizer(basis)
    if cent.shape[0] != 3:
        logger.debug(f"centralizer has dimension {cent.shape[0]}, no 3-dim ambient family")
        return None
    try:
        return AlgebraBasis([row.reshape(4, 4) for row in cent])
    except (NotAbelian, BadParams):
        return None


def _cartan_plane_params(upper: AlgebraBasis) -> Tuple[float, float, float]:
    diagonals = np.array([np.diag(g) for g in upper])
    constraints = np.vstack([diagonals, np.ones((1, 4))])
    alpha = null_space(constraints, 1e-8)
    if alpha.shape[1] != 1:
        raise Unrecognized(f"plane is not a generic Cartan plane (annihilator dim {alpha.shape[1]})")
    a = alpha[:, 0]
    return float(a[0]), float(a[1]), float(a[2])


def _e_plane_params(upper: AlgebraBasis) -> Tuple[float, float]:
    spaces = joint_weight_spaces(upper)
    pair = [s for s in spaces if s.multiplicity == 2]
    singles = [s for s in spaces if s.multiplicity == 1]
    if len(pair) != 1 or len(singles) != 2:
        raise Unrecognized("plane does not have the weight pattern of an E plane")
    q = pair[0].generalized
    ab = []
    nilpotent = []
    for k, g in enumerate(upper):
        a = pair[0].weights[k]
        b = (singles[0].weights[k] - singles[1].weights[k]) / 2.0
        ab.append([a, b])
        nilpotent.append(q.T @ g @ q - a * np.eye(2))
    reference = max(nilpotent, key=lambda n: float(np.linalg.norm(n)))
    c = [float(np.sum(n * reference) / np.sum(reference * reference)) for n in nilpotent]
    matrix = np.array(ab)
    if abs(np.linalg.det(matrix)) <= 1e-10:
        raise Unrecognized("E plane contains the nilpotent direction")
    r, s = np.linalg.solve(matrix, np.array(c))
    return float(r), float(s)


def _witness(entry) -> Optional[ConvexityWitness]:
    if entry is None:
        return None
    point, det = entry
    return ConvexityWitness(point=[float(x) for x in point], det=float(det))


def _fallback_cusp_label(upper: AlgebraBasis) -> FamilyLabel:
    mults = sorted((s.multiplicity for s in joint_weight_spaces(upper)), reverse=True)
    if mults == [1, 1, 1, 1]:
        return FamilyLabel.CUSP_C
    if mults == [2, 1, 1]:
        return FamilyLabel.CUSP_E
    if mults == [3, 1]:
        return FamilyLabel.CUSP_F
    if mults == [4]:
        return FamilyLabel.CUSP_N
    raise Unrecognized(f"convex plane with weight multiplicities {mults}")


def classify_cusp(gens: GenList, rng: Optional[np.random.Generator] = None) -> CuspReport:
    """
    Decide whether a 2-dim abelian algebra generates a cusp Lie group, and which

    The ambient family is the centralizer when that is a 3-dim abelian algebra.
    Convexity comes from the curvature battery; canonical parameters come from
    normalize_C and normalize_E.
    """
    basis = _as_basis(gens)
    if basis.dim != 2:
        raise BadParams(f"classify_cusp needs 2 generators, got {basis.dim}")
    rng = rng if rng is not None else np.random.default_rng(settings.SEED)

    conjugator, upper = triangularize(basis, rng)
    normalized = upper.normalized()

    ambient_label: Optional[FamilyLabel] = None
    ambient = ambient_algebra(normalized)
    if ambient is not None:
        try:
            ambient_label = FamilyLabel(classify15(ambient, rng).label)
        except (Unrecognized, IllConditioned) as e:
            logger.warning(f"ambient algebra could not be classified: {e}")

    convexity = is_convex_orbit(normalized, default_base_points(seed=int(rng.integers(2**31))))
    common = dict(
        ambient_label=None if ambient_label is None else str(ambient_label),
        verdict=convexity.verdict.value,
        witness=_witness(convexity.witness),
        counter_witness=_witness(convexity.counter_witness),
        triangularizer=conjugator.tolist(),
    )
    if convexity.verdict != Verdict.CONVEX:
        return CuspReport(label=NOT_CUSP, **common)

    if ambient_label is not None:
        if ambient_label not in CUSP_AMBIENT:
            raise Unrecognized(f"convex plane inside {ambient_label}, which has no convex planes")
        label = CUSP_AMBIENT[ambient_label]
    else:
        label = _fallback_cusp_label(normalized)

    params = FamilyParams()
    certificate: Optional[ConjugacyCertificate] = None
    if label == FamilyLabel.CUSP_C:
        canonical, certificate = normalize_C(_cartan_plane_params(normalized))
        params = FamilyParams(rst=canonical)
    elif label == FamilyLabel.CUSP_E:
        r, s = _e_plane_params(normalized)
        canonical_s, certificate = normalize_E(r, s)
        params = FamilyParams(s=canonical_s)

    logger.info(f"classified plane as {label} {params.describe()}")
    return CuspReport(
        label=str(label),
        params=params,
        certificate=None if certificate is None else certificate.to_report(),
        **common,
    )
