"""
Orbits and orbit closures in RP^3

The Zariski closure of an orbit of a unipotent-by-diagonal abelian group is the
projective span of the orbit, so its dimension is read off from the rank of a
cloud of sampled orbit points. Joint weight spaces give the largest pointwise
fixed subspace.
"""

import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from cusp_atlas.core.catalog import FamilyLabel, GroupChart, family_chart
from cusp_atlas.core.config import settings
from cusp_atlas.core.errors import BadParams, ComplexSpectrum, IllConditioned, Singular
from cusp_atlas.core.mat4core import (
    AlgebraBasis,
    Mat4,
    ProjPoint,
    Vec4,
    null_space,
    numerical_rank,
    projective_rank,
)
from cusp_atlas.schemas.report import ClosureCheck, ClosureSignature

logger = logging.getLogger(__name__)


class OrbitSample:
    """Sampled orbit: the base point, the coordinate lattice and the canonical images"""

    def __init__(self, base: ProjPoint, grid: np.ndarray, images: np.ndarray):
        self.base = base
        self.grid = grid
        self.images = images

    def points(self) -> List[ProjPoint]:
        return [ProjPoint(v) for v in self.images]


def act(g: Mat4, p: Union[ProjPoint, Vec4]) -> ProjPoint:
    if abs(np.linalg.det(g)) <= settings.TAU_MAT or np.linalg.cond(g) > 1e14:
        raise Singular(f"group element is not invertible (det={np.linalg.det(g):.3e})")
    v = p.coords if isinstance(p, ProjPoint) else np.asarray(p, dtype=np.float64)
    return ProjPoint(g @ v)


def lattice(dim: int, points: Optional[int] = None, radius: Optional[float] = None) -> np.ndarray:
    """The coordinate lattice linspace(-R, R, n)^dim as an (n^dim, dim) array."""
    points = settings.GRID_POINTS if points is None else points
    radius = settings.GRID_RADIUS if radius is None else radius
    axis = np.linspace(-radius, radius, points)
    return np.array(list(itertools.product(axis, repeat=dim)))


def _canonical_rows(vectors: np.ndarray) -> np.ndarray:
    return np.vstack([ProjPoint.canonicalize(v) for v in vectors])


def sample_orbit(
    chart: GroupChart,
    p: Union[ProjPoint, Vec4],
    points: Optional[int] = None,
    radius: Optional[float] = None,
) -> OrbitSample:
    base = p if isinstance(p, ProjPoint) else ProjPoint(p)
    grid = lattice(chart.coord_dim, points, radius)
    elements = chart.elements(grid)
    images = _canonical_rows(elements @ base.coords)
    return OrbitSample(base, grid, images)


def orbit_closure_dim(
    chart: GroupChart,
    p: Union[ProjPoint, Vec4],
    points: Optional[int] = None,
    radius: Optional[float] = None,
) -> int:
    sample = sample_orbit(chart, p, points, radius)
    return projective_rank(sample.images, settings.TAU_RANK) - 1


def cyclic_span_dim(basis: AlgebraBasis, p: Union[ProjPoint, Vec4]) -> int:
    """Projective dimension of the smallest invariant subspace containing p."""
    v = p.coords if isinstance(p, ProjPoint) else np.asarray(p, dtype=np.float64)
    span = [v / np.linalg.norm(v)]
    frontier = list(span)
    for _ in range(3):
        frontier = [g @ w for g in basis for w in frontier]
        span.extend(frontier)
    return numerical_rank(np.vstack(span), 1e-9) - 1


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


def cluster_values(values: Sequence[complex], threshold: float) -> List[List[int]]:
    """Single-linkage clusters (as index lists) of values closer than threshold."""
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    clusters: List[List[int]] = []
    for i in order:
        for cluster in clusters:
            if any(abs(values[i] - values[j]) <= threshold for j in cluster):
                cluster.append(i)
                break
        else:
            clusters.append([i])
    return clusters


class WeightSpace:
    """A generalized joint weight space: the weight on each generator and the subspaces"""

    def __init__(self, weights: np.ndarray, generalized: np.ndarray, joint: np.ndarray):
        self.weights = weights
        self.generalized = generalized
        self.joint = joint

    @property
    def multiplicity(self) -> int:
        return self.generalized.shape[1]

    @property
    def joint_dim(self) -> int:
        return self.joint.shape[1]


def generic_element(basis: AlgebraBasis, rng: np.random.Generator) -> Tuple[np.ndarray, Mat4]:
    coeffs = rng.uniform(0.5, 1.5, size=basis.dim) * rng.choice([-1.0, 1.0], size=basis.dim)
    return coeffs, basis.element(coeffs)


def spectral_clusters(x: np.ndarray) -> Optional[Tuple[np.ndarray, List[List[int]], List[float]]]:
    """
    Cluster the eigenvalues of x into weights

    Tolerances are relative to the spread of the spectrum, taken from the traces
    of powers of the centred element, so they do not grow with the condition
    number of the frame x is written in. When the centred element has vanishing
    power traces the spectrum is a single real eigenvalue.

    Returns:
        (eigenvalues, clusters as index lists, cluster means), or None when two
        clusters are too close to trust
    """
    n = x.shape[0]
    centre = float(np.trace(x)) / n
    y = x - centre * np.eye(n)
    frob = float(np.sum(y * y))
    eig = np.linalg.eigvals(x)
    powers = [y @ y]
    powers.append(powers[0] @ y)
    powers.append(powers[0] @ powers[0])
    traces = [float(np.trace(p)) for p in powers]
    if frob == 0.0 or all(abs(t) <= settings.TAU_RANK * frob ** (k / 2.0) for k, t in zip((2, 3, 4), traces)):
        return eig, [list(range(n))], [centre]

    spread = math.sqrt(max(traces[0], 0.0) / n)
    tol = 10 * settings.WEIGHT_CLUSTER_TOL * spread
    if np.max(np.abs(eig.imag)) > tol:
        raise ComplexSpectrum(f"generic element has eigenvalues {np.round(eig, 6).tolist()}")
    clusters = cluster_values(list(eig), tol)
    means = [float(np.mean(eig[c].real)) for c in clusters]
    gaps = [abs(a - b) for a, b in itertools.combinations(means, 2)]
    if gaps and min(gaps) < 50 * settings.WEIGHT_CLUSTER_TOL * spread:
        logger.debug(f"weight clusters too close (gap={min(gaps):.3e}, spread={spread:.3e})")
        return None
    return eig, clusters, means


def _triangular_generalized(basis: AlgebraBasis, groups: List[List[int]]) -> List[np.ndarray]:
    """Leading Schur vectors of a generic element, reordered with each weight group on top in turn."""
    if len(groups) == 1:
        return [np.eye(4)]
    rng = np.random.default_rng(settings.SEED)
    for attempt in range(settings.MAX_REDRAWS):
        _, x = generic_element(basis, rng)
        values = np.diag(x)
        centres = [float(np.mean(values[group])) for group in groups]
        spread = max(float(np.max(np.abs(values - np.mean(values)))), 1e-300)
        gap = min(abs(a - b) for a, b in itertools.combinations(centres, 2))
        if gap >= 50 * settings.WEIGHT_CLUSTER_TOL * spread:
            break
        logger.debug(f"weight groups collide in the generic element, redrawing ({attempt + 1})")
    else:
        raise IllConditioned(f"could not separate weight groups after {settings.MAX_REDRAWS} draws")

    spaces = []
    for centre, group in zip(centres, groups):
        try:
            _, z, sdim = scipy.linalg.schur(
                x, output="real", sort=lambda re, im, c=centre: abs(re - c) < gap / 2.0
            )
        except np.linalg.LinAlgError as e:
            raise IllConditioned(f"could not reorder the weight at {centre:.6g}: {e}")
        if sdim != len(group):
            raise IllConditioned(f"reordering kept {sdim} eigenvalues for a weight of multiplicity {len(group)}")
        spaces.append(z[:, :sdim])
    return spaces


def joint_weight_spaces(basis: AlgebraBasis, rng: Optional[np.random.Generator] = None) -> List[WeightSpace]:
    """
    Decompose R^4 into generalized joint weight spaces of the algebra

    Upper triangular bases read their weights off the diagonal. Other bases go
    through the eigenvalues of a seeded generic element, which are clustered
    because defective eigenvalues split numerically.
    """
    scale = max(float(np.linalg.norm(g, 2)) for g in basis)
    if basis.is_upper(settings.TAU_MAT * max(1.0, scale)):
        diag = np.array([np.diag(g) for g in basis]).T
        groups: List[List[int]] = []
        for i in range(4):
            for group in groups:
                if np.max(np.abs(diag[i] - diag[group[0]])) <= settings.TAU_WEIGHT * max(1.0, scale):
                    group.append(i)
                    break
            else:
                groups.append([i])
        generalized = _triangular_generalized(basis, groups)
        return [
            _weight_space(basis, diag[group].mean(axis=0), len(group), scale, q)
            for group, q in zip(groups, generalized)
        ]

    rng = rng if rng is not None else np.random.default_rng(settings.SEED)
    for attempt in range(settings.MAX_REDRAWS):
        coeffs, x = generic_element(basis, rng)
        found = spectral_clusters(x)
        if found is None:
            logger.debug(f"redrawing the generic element ({attempt + 1})")
            continue
        eig, clusters, means = found
        spaces = []
        for cluster, mean in zip(clusters, means):
            m = len(cluster)
            shifted = np.linalg.matrix_power(x - mean * np.eye(4), m)
            _, _, vh = np.linalg.svd(shifted)
            generalized = vh[4 - m :].T
            weights = np.array([np.trace(generalized.T @ g @ generalized) / m for g in basis])
            spaces.append(_weight_space(basis, weights, m, scale, generalized))
        return spaces
    raise IllConditioned(f"could not separate weights after {settings.MAX_REDRAWS} draws")


def _weight_space(
    basis: AlgebraBasis,
    weights: np.ndarray,
    multiplicity: int,
    scale: float,
    generalized: np.ndarray,
) -> WeightSpace:
    stacked = np.vstack([g - w * np.eye(4) for g, w in zip(basis, weights)])
    joint = null_space(stacked, settings.TAU_STRUCT, scale=max(1.0, scale))
    if generalized.shape[1] != multiplicity:
        raise IllConditioned(f"generalized weight space has dimension {generalized.shape[1]}, expected {multiplicity}")
    return WeightSpace(np.asarray(weights, dtype=np.float64), generalized, joint)


def fixed_set_dim(basis: AlgebraBasis, rng: Optional[np.random.Generator] = None) -> int:
    """Projective dimension of the largest pointwise fixed subspace."""
    return max(space.joint_dim for space in joint_weight_spaces(basis, rng)) - 1


# ---------------------------------------------------------------------------
# Closure signatures
# ---------------------------------------------------------------------------


def _unit(*indices: int) -> np.ndarray:
    v = np.zeros(4)
    for i in indices:
        v[i - 1] = 1.0
    return v


def battery_points(seed: Optional[int] = None) -> List[Tuple[str, np.ndarray]]:
    """Coordinate points, pair sums, triple sums, [1:1:1:1] and three seeded random points."""
    battery: List[Tuple[str, np.ndarray]] = []
    for size in (1, 2, 3):
        for combo in itertools.combinations((1, 2, 3, 4), size):
            battery.append(("+".join(f"e{i}" for i in combo), _unit(*combo)))
    battery.append(("generic", np.ones(4)))
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    for k in range(3):
        battery.append((f"random{k + 1}", rng.uniform(-1.0, 1.0, size=4)))
    return battery


def closure_signature(
    chart: GroupChart, frame: Optional[Mat4] = None, seed: Optional[int] = None, tol: Optional[float] = None
) -> ClosureSignature:
    """
    Orbit-closure dimensions over the battery, the fixed-set dimension and the generic dimension

    Args:
        chart: a 3-dim (or 2-dim) chart
        frame: when given, every battery point is mapped by it first; use the
            conjugator of a conjugated chart so the signature is comparable
        seed: seed for the random battery points
        tol: relative rank tolerance for the orbit clouds, TAU_RANK by default

    Returns:
        ClosureSignature
    """
    battery = battery_points(seed)
    vectors = np.array([v for _, v in battery]).T
    if frame is not None:
        vectors = frame @ vectors

    elements = chart.elements(lattice(chart.coord_dim))
    images = elements @ vectors

    dims: List[int] = []
    for j in range(vectors.shape[1]):
        dims.append(projective_rank(images[:, :, j], settings.TAU_RANK if tol is None else tol) - 1)

    histogram = [dims.count(d) for d in range(4)]
    generic = max(dims[-4:])
    fixed = fixed_set_dim(chart.basis, np.random.default_rng(settings.SEED if seed is None else seed))
    logger.debug(f"closure signature of {chart.name}: histogram={histogram} fixed={fixed} generic={generic}")
    return ClosureSignature(
        dim_histogram=histogram,
        fixed_set_dim=fixed,
        generic_dim=generic,
        battery_dims={name: d for (name, _), d in zip(battery, dims)},
    )


# Representative points and the closure dimension of their orbits, per family.
# Lines and planes of the published table are represented by generic members.
CLOSURE_TABLE: Dict[FamilyLabel, Dict[int, List[str]]] = {
    FamilyLabel.C: {
        0: ["e1", "e2", "e3", "e4"],
        1: ["e1+e2", "e1+e3", "e2+e3", "e1+e4", "e2+e4", "e3+e4"],
        2: ["e1+e2+e3", "e1+e2+e4", "e1+e3+e4", "e2+e3+e4"],
        3: ["e1+e2+e3+e4"],
    },
    FamilyLabel.E1: {
        0: ["e1", "e2", "e4"],
        1: ["e1+e2", "e2+e3", "e3", "e1+e4", "e2+e4"],
        2: ["e1+e2+e3", "e1+e2+e4", "e2+e3+e4"],
        3: ["e1+e2+e3+e4"],
    },
    FamilyLabel.F0: {
        0: ["e1", "e3"],
        1: ["e1+e3", "e2", "e4", "e1+e2"],
        2: ["e1+e2+e3", "e1+e3+e4"],
        3: ["e1+e2+e3+e4"],
    },
    FamilyLabel.F1: {
        0: ["e1", "e4"],
        1: ["e1+e4", "e2"],
        2: ["e3", "e2+e4"],
        3: ["e1+e2+e3+e4"],
    },
    FamilyLabel.F2: {
        0: ["e1", "e4"],
        1: ["e1+e4", "e2", "e3", "e2+e3"],
        2: ["e2+e4", "e3+e4", "e1+e2+e3+e4"],
        3: [],
    },
    FamilyLabel.F3: {
        0: ["e1", "e2", "e1+e2", "e4"],
        1: ["e1+e4", "e2+e4"],
        2: ["e3", "e1+e3", "e2+e3"],
        3: ["e3+e4", "e1+e2+e3+e4"],
    },
    FamilyLabel.N1: {0: ["e1"], 1: ["e2"], 2: ["e3"], 3: ["e4", "e1+e2+e3+e4"]},
    FamilyLabel.N2: {
        0: ["e1"],
        1: ["e2", "e4", "e2+e4"],
        2: ["e3", "e1+e3", "e3+e4", "e1+e2+e3+e4"],
        3: [],
    },
    FamilyLabel.N3: {
        0: ["e1", "e2", "e1+e2"],
        1: ["e3", "e1+e3"],
        2: [],
        3: ["e4", "e1+e2+e3+e4"],
    },
    FamilyLabel.N4: {0: ["e1"], 1: ["e2", "e3", "e2+e3"], 2: [], 3: ["e4", "e1+e2+e3+e4"]},
    FamilyLabel.N4P: {0: ["e1"], 1: ["e2", "e3", "e2+e3"], 2: [], 3: ["e4", "e1+e2+e3+e4"]},
    FamilyLabel.N5: {0: ["e1", "e2", "e1+e2"], 1: [], 2: ["e3", "e4", "e1+e2+e3+e4"], 3: []},
    FamilyLabel.N6: {0: ["e1", "e3", "e1+e3"], 1: ["e2", "e2+e3"], 2: ["e4", "e1+e2+e3+e4"], 3: []},
    FamilyLabel.N7: {0: ["e1", "e2", "e3", "e1+e2+e3"], 1: [], 2: [], 3: ["e4", "e1+e2+e3+e4"]},
    FamilyLabel.N8: {0: ["e1"], 1: ["e2", "e3", "e4", "e1+e2+e3+e4"], 2: [], 3: []},
}


def parse_point_name(name: str) -> np.ndarray:
    """'e1+e3' -> (1, 0, 1, 0)."""
    try:
        indices = [int(part.strip()[1:]) for part in name.split("+")]
    except ValueError:
        raise BadParams(f"cannot parse point name {name!r}")
    if not indices or any(i not in (1, 2, 3, 4) for i in indices):
        raise BadParams(f"cannot parse point name {name!r}")
    return _unit(*indices)


def compare_closure_table(label: FamilyLabel) -> List[ClosureCheck]:
    """Expected vs. observed closure dimension for each representative point of a family."""
    if label not in CLOSURE_TABLE:
        raise BadParams(f"no closure table for {label}")
    chart = family_chart(label)
    elements = chart.elements(lattice(chart.coord_dim))
    checks: List[ClosureCheck] = []
    for expected, names in sorted(CLOSURE_TABLE[label].items()):
        for name in names:
            images = elements @ parse_point_name(name)
            observed = projective_rank(images, settings.TAU_RANK) - 1
            checks.append(
                ClosureCheck(
                    family=str(label),
                    point=name,
                    expected=expected,
                    observed=observed,
                    passed=observed == expected,
                )
            )
    return checks
