"""
Normal forms of cusp parameters, with conjugator certificates

A certificate is a matrix M together with a source and a target chart; it
claims that M g M^-1 lies in the target group for every g in the source
group. verify_conjugacy checks the claim on seeded samples by pulling
M g M^-1 back to target coordinates through the matrix logarithm.
"""

import itertools
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cusp_atlas.core.catalog import (
    TYPE2_PAIRS,
    FamilyLabel,
    GroupChart,
    Type2Variant,
    TypeParams,
    cusp_chart,
    family_chart,
    plane_chart,
    rs_chart,
    type9_pairing_matrix,
    type_chart,
    type_family,
)
from cusp_atlas.core.config import settings
from cusp_atlas.core.errors import BadParams, NotConvex, Singular
from cusp_atlas.core.mat4core import (
    IDENTITY,
    Mat4,
    elementary,
    log_unipotent,
    logm_real,
    numerical_rank,
    permutation_matrix,
)
from cusp_atlas.schemas.family import FamilyParams
from cusp_atlas.schemas.report import CertificateReport

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12


class SignedPermutation:
    """
    A relabelling of the four weight slots, with a projective sign on the weights

    perm is 0-based, perm[j] is the slot that slot j moves to. The matrix is the
    permutation matrix; the sign only acts on weight vectors.
    """

    def __init__(self, perm: Sequence[int], sign: int = 1):
        if sorted(perm) != [0, 1, 2, 3]:
            raise BadParams(f"not a permutation of 0..3: {list(perm)}")
        if sign not in (1, -1):
            raise BadParams(f"sign must be +1 or -1, got {sign}")
        self.perm = tuple(int(p) for p in perm)
        self.sign = sign

    def matrix(self) -> Mat4:
        return permutation_matrix([p + 1 for p in self.perm])

    def apply(self, alpha: Sequence[float]) -> np.ndarray:
        out = np.zeros(4)
        for j, p in enumerate(self.perm):
            out[p] = self.sign * alpha[j]
        return out

    def __repr__(self) -> str:
        return f"SignedPermutation({list(self.perm)}, sign={self.sign:+d})"


class ConjugacyCertificate:
    """M with M source(u) M^-1 in the target group for every u"""

    def __init__(
        self,
        conjugator: Mat4,
        source: GroupChart,
        target: GroupChart,
        factors: List[str],
        params: Optional[FamilyParams] = None,
    ):
        self.conjugator = np.asarray(conjugator, dtype=np.float64)
        self.source = source
        self.target = target
        self.factors = factors
        self.params = params

    @property
    def is_identity(self) -> bool:
        return bool(np.allclose(self.conjugator, IDENTITY, atol=0.0, rtol=0.0))

    def to_report(self, n_samples: int = 8, seed: Optional[int] = None) -> CertificateReport:
        ok, residual = verify_conjugacy(self, n_samples, seed)
        return CertificateReport(
            source=self.source.name,
            target=self.target.name,
            factors=self.factors,
            conjugator=self.conjugator.tolist(),
            residual=residual,
            passed=ok,
        )

    def __repr__(self) -> str:
        return f"ConjugacyCertificate({self.source.name} -> {self.target.name}, {'*'.join(self.factors)})"


def _log(h: Mat4) -> Mat4:
    scale = max(1.0, float(np.max(np.abs(h))))
    if float(np.max(np.abs(np.tril(h, -1)))) > 1e-12 * scale:
        return logm_real(h)
    upper = np.triu(h)
    if np.all(np.abs(np.diag(upper) - 1.0) <= 1e-12):
        return log_unipotent(upper - np.diag(np.diag(upper)) + IDENTITY)
    return logm_real(upper)


def verify_conjugacy(
    cert: ConjugacyCertificate, n_samples: int = 8, seed: Optional[int] = None
) -> Tuple[bool, float]:
    """
    Check a certificate on seeded samples

    Args:
        cert: the certificate
        n_samples: number of source coordinates drawn uniformly from [-1, 1]^k
        seed: PRNG seed, settings.SEED by default

    Returns:
        (ok, residual) where residual is the largest entrywise gap between
        M g M^-1 and the target element at the recovered coordinates,
        relative to max(1, |M g M^-1|)
    """
    m = cert.conjugator
    condition = float(np.linalg.cond(m))
    if not math.isfinite(condition) or condition > MAX_CONDITION:
        raise Singular(f"conjugator is not invertible (condition number {condition:.3e})")
    m_inv = np.linalg.inv(m)

    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    target_basis = cert.target.basis.stacked().T
    residual = 0.0
    for _ in range(n_samples):
        u = rng.uniform(-1.0, 1.0, size=cert.source.coord_dim)
        h = m @ cert.source.element(u) @ m_inv
        log = _log(h).reshape(16)
        u_target, *_ = np.linalg.lstsq(target_basis, log, rcond=None)
        gap = float(np.max(np.abs(h - cert.target.element(u_target))))
        residual = max(residual, gap / max(1.0, float(np.max(np.abs(h)))))
    ok = residual <= settings.CERT_TOL
    logger.debug(f"{cert!r}: residual {residual:.3e} over {n_samples} samples")
    return ok, residual


# ---------------------------------------------------------------------------
# Cusp:C
# ---------------------------------------------------------------------------


def _unit(values: Sequence[float]) -> Tuple[float, float, float]:
    v = np.asarray(values, dtype=np.float64)
    v = v / np.linalg.norm(v)
    return float(v[0]), float(v[1]), float(v[2])


def _check_c_convex(rst: Sequence[float]) -> Tuple[float, float, float]:
    if len(rst) != 3 or not all(math.isfinite(x) for x in rst):
        raise BadParams(f"expected a finite triple [r:s:t], got {list(rst)}")
    if all(x == 0.0 for x in rst):
        raise BadParams("[0:0:0] is not a projective point")
    r, s, t = _unit(rst)
    if r * s * t * (r + s + t) <= settings.BOUNDARY_MARGIN:
        raise NotConvex(f"C plane [{r:.6g}:{s:.6g}:{t:.6g}] has rst(r+s+t) <= 0")
    return r, s, t


def _c_permutation(alpha: np.ndarray) -> SignedPermutation:
    sign = -1 if np.sum(alpha < 0) == 3 else 1
    weights = sign * alpha
    negative = int(np.argmin(weights))
    positives = sorted((j for j in range(4) if j != negative), key=lambda j: (-weights[j], j))
    perm = [0, 0, 0, 0]
    for slot, j in enumerate(positives):
        perm[j] = slot
    perm[negative] = 3
    return SignedPermutation(perm, sign)


def normalize_C(rst: Sequence[float]) -> Tuple[Tuple[float, float, float], ConjugacyCertificate]:
    """
    Canonical form [r':s':t'] with r' >= s' >= t' > 0 of a convex C plane

    The plane r a + s b + t c = 0 is the kernel of the weight vector
    alpha = (r, s, t, -(r+s+t)) on the log-diagonal. Permuting coordinates
    permutes alpha, so the canonical form puts the one negative weight last and
    sorts the rest. The triple is returned with unit norm.
    """
    r, s, t = _check_c_convex(rst)
    alpha = np.array([r, s, t, -(r + s + t)])
    sigma = _c_permutation(alpha)
    canonical = _unit(sigma.apply(alpha)[:3])
    certificate = ConjugacyCertificate(
        sigma.matrix(),
        plane_chart(FamilyLabel.C, (r, s, t)),
        cusp_chart(FamilyLabel.CUSP_C, FamilyParams(rst=canonical)),
        [f"perm{[p + 1 for p in sigma.perm]}"],
        FamilyParams(rst=(r, s, t)),
    )
    logger.debug(f"normalize_C [{r:.6g}:{s:.6g}:{t:.6g}] -> {canonical} via {sigma!r}")
    return canonical, certificate


def brute_force_C(rst: Sequence[float]) -> Tuple[float, float, float]:
    """Canonical C triple by search over the 24 permutations and both projective signs."""
    r, s, t = _check_c_convex(rst)
    alpha = np.array([r, s, t, -(r + s + t)])
    for perm in itertools.permutations(range(4)):
        for sign in (1, -1):
            w = SignedPermutation(perm, sign).apply(alpha)
            if w[3] < 0 and w[0] >= w[1] >= w[2] > 0:
                return _unit(w[:3])
    raise NotConvex(f"no permutation of {alpha.tolist()} is in canonical position")


# ---------------------------------------------------------------------------
# Cusp:E and Cusp:F
# ---------------------------------------------------------------------------


def swap_p() -> Mat4:
    """The swap of slots 1 and 4."""
    return permutation_matrix([4, 2, 3, 1])


def scale_q(r: float) -> Mat4:
    return np.diag([1.0, 1.0, r, 1.0])


def shear_s(s: float) -> Mat4:
    return IDENTITY + s * elementary(2, 3)


def rescale_r(r: float) -> Mat4:
    q = math.sqrt(r)
    return np.array(
        [
            [1.0 / q, 1.0, 1.0, 0.0],
            [0.0, 1.0, q, 0.0],
            [0.0, 0.0, q, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def normalize_E(r: float, s: float) -> Tuple[float, ConjugacyCertificate]:
    """
    Canonical s' = |s/r| in [0, 1/2) for the E plane c = r a + s b

    Q = diag(1, 1, r, 1) rescales the nilpotent coordinate and takes the plane
    to E(1, s/r); P then flips the sign of s when it is negative.
    """
    if not (math.isfinite(r) and math.isfinite(s)):
        raise BadParams(f"E parameters must be finite, got r={r}, s={s}")
    if r == 0.0:
        raise NotConvex("E plane with r = 0 lies in the Cartan subalgebra")
    if abs(s) >= abs(r) / 2.0 - settings.BOUNDARY_MARGIN * max(1.0, abs(r)):
        raise NotConvex(f"E(r={r:.6g}, s={s:.6g}) has |s| >= |r|/2")

    ratio = s / r
    m = IDENTITY.copy()
    factors: List[str] = []
    if r != 1.0:
        m = scale_q(r)
        factors.append("Q")
    if ratio < 0.0:
        m = swap_p() @ m
        factors.insert(0, "P")
    canonical = abs(ratio)
    certificate = ConjugacyCertificate(
        m,
        rs_chart(FamilyLabel.E1, r, s),
        cusp_chart(FamilyLabel.CUSP_E, FamilyParams(s=canonical)),
        factors or ["I"],
        FamilyParams(rs=(r, s)),
    )
    return canonical, certificate


def normalize_F(r: float, s: float) -> ConjugacyCertificate:
    """
    Certificate taking the F plane c = r a + s b to the canonical Cusp:F chart

    Raises:
        NotConvex: unless r > 0
    """
    if not (math.isfinite(r) and math.isfinite(s)):
        raise BadParams(f"F parameters must be finite, got r={r}, s={s}")
    if r <= settings.BOUNDARY_MARGIN:
        raise NotConvex(f"F(r={r:.6g}, s={s:.6g}) needs r > 0")

    m = IDENTITY.copy()
    factors: List[str] = []
    if s != 0.0:
        m = shear_s(s)
        factors.append("S")
    if r != 1.0:
        m = rescale_r(r) @ m
        factors.insert(0, "R")
    return ConjugacyCertificate(
        m,
        rs_chart(FamilyLabel.F1, r, s),
        cusp_chart(FamilyLabel.CUSP_F),
        factors or ["I"],
        FamilyParams(rs=(r, s)),
    )


def e_origin_certificate() -> ConjugacyCertificate:
    """E(0,0) is the C plane [0:1:-1], which is not convex."""
    return ConjugacyCertificate(
        IDENTITY.copy(),
        rs_chart(FamilyLabel.E1, 0.0, 0.0),
        plane_chart(FamilyLabel.C, (0.0, 1.0, -1.0)),
        ["I"],
        FamilyParams(rs=(0.0, 0.0)),
    )


# ---------------------------------------------------------------------------
# The ten types
# ---------------------------------------------------------------------------


def _floats(type_params: TypeParams) -> List[float]:
    return [float(x) for x in type_params]  # type: ignore[union-attr]


def _block_diag(a: np.ndarray, c: np.ndarray) -> Mat4:
    m = np.zeros((4, 4))
    m[:2, :2] = a
    m[2:, 2:] = c
    return m


def _type2_conjugator(type_params: TypeParams) -> Tuple[Mat4, List[str]]:
    variant = Type2Variant(type_params if type_params is not None else "beta")
    i, j = TYPE2_PAIRS[variant]
    k, l = [m for m in (1, 2, 3, 4) if m not in (i, j)]
    sigma = [0, 0, 0, 0]
    sigma[i - 1], sigma[j - 1], sigma[k - 1], sigma[l - 1] = 2, 3, 1, 4
    return permutation_matrix(sigma), [f"perm{sigma}"]


def _type9_rank1(type_params: TypeParams) -> Tuple[Mat4, List[str]]:
    w = type9_pairing_matrix(type_params)
    left, sv, right = np.linalg.svd(w)
    u = left[:, 0] * sv[0]
    v = right[0]
    a = np.array([[u[1], -u[0]], [u[0], u[1]]])
    c_inv = np.array([[v[0], -v[1]], [v[1], v[0]]])
    m = permutation_matrix([1, 3, 2, 4]) @ _block_diag(a, np.linalg.inv(c_inv))
    return m, ["blockdiag(A,C)", "perm[1, 3, 2, 4]"]


def type_certificate(type_id: int, type_params: TypeParams = None) -> ConjugacyCertificate:
    """
    Explicit conjugator from a type's algebra onto its family's catalog algebra

    Covers every regime except rank-2 type 9 and type 10 with x y = 0, which
    raise BadParams.
    """
    source = type_chart(type_id, type_params)
    label = type_family(type_id, type_params)
    m = IDENTITY.copy()
    factors: List[str] = ["I"]

    if type_id == 2:
        m, factors = _type2_conjugator(type_params)
    elif type_id in (3, 5):
        x, y = _floats(type_params)
        if type_id == 5:
            m = permutation_matrix([4, 1, 2, 3])
            factors = ["perm[4, 1, 2, 3]"]
        if x != 0.0 and y != 0.0:
            m = np.diag([1.0, x, x * y, 1.0]) @ m
            factors = ["diag"] + ([] if type_id == 3 else factors)
    elif type_id == 6:
        x, y, z = _floats(type_params)
        if y != 0.0:
            m = np.diag([1.0, x, x * y, x * y * z])
        else:
            m = np.diag([1.0, x, 1.0 / z, 1.0])
        factors = ["diag"]
    elif type_id == 7:
        y, t = _floats(type_params)
        if y != 0.0:
            m = np.diag([1.0, 1.0, y, 1.0]) @ (IDENTITY + (t / y) * elementary(3, 4))
            factors = ["diag", "shear"]
        elif t != 0.0:
            m = np.diag([1.0, 1.0, t, 1.0]) @ permutation_matrix([1, 2, 4, 3])
            factors = ["diag", "perm[1, 2, 4, 3]"]
    elif type_id == 8:
        y, t = _floats(type_params)
        if y != 0.0:
            m = np.diag([1.0, 1.0 / y, 1.0, 1.0]) @ (IDENTITY - (t / y) * elementary(1, 2))
            factors = ["diag", "shear"]
        elif t != 0.0:
            m = np.diag([1.0, 1.0 / t, 1.0, 1.0]) @ permutation_matrix([2, 1, 3, 4])
            factors = ["diag", "perm[2, 1, 3, 4]"]
    elif type_id == 9:
        if numerical_rank(type9_pairing_matrix(type_params)) != 1:
            raise BadParams(f"type 9 {type_params} has a rank 2 pairing, no explicit conjugator")
        m, factors = _type9_rank1(type_params)
    elif type_id == 10:
        x, y = _floats(type_params)
        if x * y == 0.0:
            raise BadParams(f"type 10 ({x}, {y}) has no explicit conjugator when x y = 0")
        d = np.diag([1.0 / x, 1.0 / x, math.sqrt(abs(y / x)), 1.0])
        if x * y > 0.0:
            m, factors = d, ["diag"]
        else:
            g = IDENTITY.copy()
            g[1:3, 1:3] = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
            m, factors = g @ d, ["rotation", "diag"]

    return ConjugacyCertificate(m, source, family_chart(label), factors)


def type9_elementary_certificate(t: float) -> ConjugacyCertificate:
    """[0:0:1:t] onto N6: the shear I + t E12 then the relabelling (1,2,3,4) -> (3,1,4,2)."""
    if not math.isfinite(t):
        raise BadParams(f"t must be finite, got {t}")
    m = permutation_matrix([3, 1, 4, 2]) @ (IDENTITY + t * elementary(1, 2))
    return ConjugacyCertificate(
        m,
        type_chart(9, (0.0, 0.0, 1.0, t)),
        family_chart(FamilyLabel.N6),
        ["perm[3, 1, 4, 2]", "shear"],
    )
