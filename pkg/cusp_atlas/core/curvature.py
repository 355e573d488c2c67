"""
Second fundamental form of orbit surfaces

A 2-dimensional orbit H.p in the affine patch x4 != 0 is locally strictly
convex exactly when its Gauss curvature is positive. For orbit surfaces the
jets of the lift F(a, b) = exp(a Y1 + b Y2) p at the origin are exact:

    F_a = Y1 p,  F_b = Y2 p,  F_aa = Y1^2 p,  F_ab = Y1 Y2 p,  F_bb = Y2^2 p

and the affine surface is F[:3] / F[3], differentiated by the quotient rule.
Plain callable surfaces fall back to Richardson-extrapolated central
differences.

All curvature values returned here are Gauss curvatures det(II) / det(I); they
agree in sign with the tabulated det II closed forms, which omit positive
factors.
"""

import logging
import math
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from cusp_atlas.core.catalog import FamilyLabel, GroupChart
from cusp_atlas.core.config import settings
from cusp_atlas.core.errors import BadParams, DegenerateTangent
from cusp_atlas.core.mat4core import AlgebraBasis, Vec4, dehomogenize
from cusp_atlas.core.orbits import lattice
from cusp_atlas.schemas.family import FamilyParams

logger = logging.getLogger(__name__)

SurfaceFunc = Callable[[float, float], Sequence[float]]


class Verdict(str, Enum):
    CONVEX = "Convex"
    FLAT = "Flat"
    CONCAVE_DIRECTION = "Concave-direction"
    INDEFINITE = "Indefinite"


class OrbitSurface:
    """
    A parametrized surface in R^3 with a distinguished base point

    Either an orbit (two commuting generators acting on a homogeneous point with
    x4 != 0) or a plain callable f(a, b) evaluated at `at`.
    """

    def __init__(
        self,
        generators: Optional[Sequence[np.ndarray]] = None,
        base: Optional[Vec4] = None,
        func: Optional[SurfaceFunc] = None,
        at: Tuple[float, float] = (0.0, 0.0),
    ):
        if (generators is None) == (func is None):
            raise BadParams("an OrbitSurface needs either generators and a base point, or a callable")
        if generators is not None:
            if len(generators) != 2:
                raise BadParams(f"orbit surfaces need 2 generators, got {len(generators)}")
            if base is None:
                raise BadParams("orbit surfaces need a base point")
            base = np.asarray(base, dtype=np.float64)
            if base.shape == (3,):
                base = np.append(base, 1.0)
            dehomogenize(base)
        self.generators = None if generators is None else [np.asarray(g, dtype=np.float64) for g in generators]
        self.base = base
        self.func = func
        self.at = at

    @classmethod
    def from_chart(cls, chart: Union[GroupChart, AlgebraBasis], base: Vec4) -> "OrbitSurface":
        basis = chart.basis if isinstance(chart, GroupChart) else chart
        return cls(generators=list(basis), base=base)

    @classmethod
    def from_callable(cls, func: SurfaceFunc, at: Tuple[float, float] = (0.0, 0.0)) -> "OrbitSurface":
        return cls(func=func, at=at)

    @property
    def is_orbit(self) -> bool:
        return self.generators is not None


class SecondFormResult:
    def __init__(self, det_numeric: float, det_closed: Optional[float], error_estimate: float, verdict: Verdict):
        self.det_numeric = det_numeric
        self.det_closed = det_closed
        self.error_estimate = error_estimate
        self.verdict = verdict

    def __repr__(self) -> str:
        return (
            f"SecondFormResult(det_numeric={self.det_numeric:.6g}, det_closed={self.det_closed}, "
            f"verdict={self.verdict.value})"
        )


def _gauss_curvature(
    fa: np.ndarray, fb: np.ndarray, faa: np.ndarray, fab: np.ndarray, fbb: np.ndarray
) -> float:
    normal = np.cross(fa, fb)
    area2 = float(normal @ normal)
    if area2 <= settings.TAU_SIGN * float(fa @ fa) * float(fb @ fb):
        raise DegenerateTangent(f"tangent vectors are parallel (|fa x fb|^2={area2:.3e})")
    n = normal / math.sqrt(area2)
    second = np.array([[faa @ n, fab @ n], [fab @ n, fbb @ n]])
    first = np.array([[fa @ fa, fa @ fb], [fa @ fb, fb @ fb]])
    return float(np.linalg.det(second) / np.linalg.det(first))


def _orbit_jets(surface: OrbitSurface) -> Tuple[np.ndarray, ...]:
    y1, y2 = surface.generators
    p = surface.base
    lift = [p, y1 @ p, y2 @ p, y1 @ y1 @ p, y1 @ y2 @ p, y2 @ y2 @ p]
    f, f_a, f_b, f_aa, f_ab, f_bb = lift
    u, w = f[:3], f[3]
    ua, wa = f_a[:3], f_a[3]
    ub, wb = f_b[:3], f_b[3]

    def first(ui: np.ndarray, wi: float) -> np.ndarray:
        return ui / w - u * wi / w**2

    def second(uij: np.ndarray, wij: float, ui: np.ndarray, wi: float, uj: np.ndarray, wj: float) -> np.ndarray:
        return uij / w - (ui * wj + uj * wi) / w**2 - u * wij / w**2 + 2.0 * u * wi * wj / w**3

    return (
        first(ua, wa),
        first(ub, wb),
        second(f_aa[:3], f_aa[3], ua, wa, ua, wa),
        second(f_ab[:3], f_ab[3], ua, wa, ub, wb),
        second(f_bb[:3], f_bb[3], ub, wb, ub, wb),
    )


def _fd_curvature(func: SurfaceFunc, at: Tuple[float, float], h: float) -> float:
    a, b = at

    def f(x: float, y: float) -> np.ndarray:
        return np.asarray(func(x, y), dtype=np.float64)

    f0 = f(a, b)
    fa = (f(a + h, b) - f(a - h, b)) / (2 * h)
    fb = (f(a, b + h) - f(a, b - h)) / (2 * h)
    faa = (f(a + h, b) - 2 * f0 + f(a - h, b)) / h**2
    fbb = (f(a, b + h) - 2 * f0 + f(a, b - h)) / h**2
    fab = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4 * h**2)
    return _gauss_curvature(fa, fb, faa, fab, fbb)


def second_form_with_error(surface: OrbitSurface) -> Tuple[float, float]:
    """Curvature at the base point and an error estimate (0 for exact orbit jets)."""
    if surface.is_orbit:
        return _gauss_curvature(*_orbit_jets(surface)), 0.0
    h = settings.FD_STEP
    coarse = _fd_curvature(surface.func, surface.at, h)
    fine = _fd_curvature(surface.func, surface.at, h / 2.0)
    extrapolated = (4.0 * fine - coarse) / 3.0
    return extrapolated, abs(extrapolated - fine)


def second_form_det(surface: OrbitSurface) -> float:
    return second_form_with_error(surface)[0]


def closed_form_detII(label: FamilyLabel, params: Optional[FamilyParams], p: Sequence[float]) -> float:
    """
    Tabulated det II of plane subgroup orbits at the affine base point p = (x0, y0, z0)

    C takes the plane triple rst; E1, F0 and F1 take rs for the plane [r:s:-1].
    The nilpotent rows are constants and ignore params.
    """
    x0, y0, z0 = (float(v) for v in p[:3])
    if label == FamilyLabel.C:
        if params is None or params.rst is None:
            raise BadParams("the C row needs rst")
        r, s, t = params.rst
        return r * s * t * (r + s + t) * x0**2 * y0**2 * z0**2
    if label in (FamilyLabel.E1, FamilyLabel.F0, FamilyLabel.F1):
        if params is None or params.rs is None:
            raise BadParams(f"the {label} row needs rs")
        r, s = params.rs
        if label == FamilyLabel.E1:
            return 16.0 * (r - 2 * s) * (r + 2 * s) * x0**2 * z0**4
        if label == FamilyLabel.F0:
            return -16.0 * r**2 * y0**4
        return 64.0 * r * z0**6
    constants = {
        FamilyLabel.N1: -1.0,
        FamilyLabel.N4: -1.0,
        FamilyLabel.N4P: 1.0,
    }
    if label in constants:
        return constants[label]
    if label.is_cusp:
        raise BadParams(f"no tabulated row for {label}")
    return 0.0


def classify_sign(value: float) -> Verdict:
    if value > settings.TAU_SIGN:
        return Verdict.CONVEX
    if value < -settings.TAU_SIGN:
        return Verdict.CONCAVE_DIRECTION
    return Verdict.FLAT


def second_form(
    surface: OrbitSurface,
    label: Optional[FamilyLabel] = None,
    params: Optional[FamilyParams] = None,
) -> SecondFormResult:
    det, error = second_form_with_error(surface)
    closed = None
    if label is not None and surface.is_orbit:
        closed = closed_form_detII(label, params, dehomogenize(surface.base))
    return SecondFormResult(det, closed, error, classify_sign(det))


class ConvexityReport:
    def __init__(
        self,
        verdict: Verdict,
        witness: Optional[Tuple[np.ndarray, float]] = None,
        counter_witness: Optional[Tuple[np.ndarray, float]] = None,
        values: Optional[List[Tuple[np.ndarray, float]]] = None,
    ):
        self.verdict = verdict
        self.witness = witness
        self.counter_witness = counter_witness
        self.values = values or []


def default_base_points(count: int = 8, seed: Optional[int] = None) -> List[np.ndarray]:
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    return [np.append(rng.uniform(0.2, 2.0, size=3), 1.0) for _ in range(count)]


def is_convex_orbit(
    basis2d: Union[AlgebraBasis, GroupChart], points: Optional[Sequence[Vec4]] = None
) -> ConvexityReport:
    """
    Decide convexity of the 2-dim orbits over a battery of base points

    Degenerate points are skipped. Convex when some value exceeds TAU_SIGN and
    none falls below -TAU_SIGN; Indefinite when one falls below; Flat otherwise.
    """
    basis = basis2d.basis if isinstance(basis2d, GroupChart) else basis2d
    if basis.dim != 2:
        raise BadParams(f"convexity is decided for 2-dim algebras, got dim {basis.dim}")
    points = default_base_points() if points is None else points

    values: List[Tuple[np.ndarray, float]] = []
    for p in points:
        try:
            det = second_form_det(OrbitSurface.from_chart(basis, p))
        except DegenerateTangent:
            logger.warning(f"skipping degenerate base point {np.round(p, 6).tolist()}")
            continue
        values.append((np.asarray(p, dtype=np.float64), det))

    positive = next(((p, d) for p, d in values if d > settings.TAU_SIGN), None)
    negative = next(((p, d) for p, d in values if d < -settings.TAU_SIGN), None)
    if negative is not None:
        return ConvexityReport(Verdict.INDEFINITE, positive, negative, values)
    if positive is not None:
        return ConvexityReport(Verdict.CONVEX, positive, None, values)
    return ConvexityReport(Verdict.FLAT, None, None, values)


# ---------------------------------------------------------------------------
# Horospheres and meshes
# ---------------------------------------------------------------------------


class Mesh:
    def __init__(self, vertices: np.ndarray, quads: List[Tuple[int, int, int, int]], height: Optional[float] = None):
        self.vertices = vertices
        self.quads = quads
        self.height = height


def _leaf_base(k: float) -> np.ndarray:
    if not k > 0.0:
        raise BadParams(f"leaf parameter k must be positive, got {k}")
    return np.array([k, k, k, 1.0])


def _e_plane_rs(chart: GroupChart) -> Tuple[float, float]:
    params = chart.params
    if chart.label == FamilyLabel.CUSP_E and params is not None and params.s is not None:
        return 1.0, params.s
    if chart.label == FamilyLabel.E1 and params is not None and params.rs is not None:
        return params.rs
    raise BadParams(f"leaf heights are defined for Cusp:E and E(r,s) charts, not {chart.name}")


def leaf_height(chart: GroupChart, k: float) -> float:
    """
    Vertical gap between the leaf through k(1,1,1) and the base leaf through (1,1,1)

    Measured along e2 at the (x, z) position of k(1,1,1), in units of z. The
    group element reaching that position from (1,1,1) is found from the
    diagonal part of the chart, which is linear in the coordinates.
    """
    _e_plane_rs(chart)
    q = _leaf_base(k)
    # affine multipliers of x and z are exp of linear forms in (a, b)
    rows = []
    for slot in (0, 2):
        rows.append([g[slot, slot] - g[3, 3] for g in chart.basis])
    coords = np.linalg.solve(np.array(rows), np.array([math.log(k), math.log(k)]))
    on_base = dehomogenize(chart.element(coords) @ np.array([1.0, 1.0, 1.0, 1.0]))
    leaf = dehomogenize(q)
    return float((on_base[1] - leaf[1]) / leaf[2])


def expected_leaf_height(r: float, s: float, k: float) -> float:
    return (r + 2.0 * s) * math.log(k) / 4.0


def convex_domain_contains(x: Sequence[float], r: float, s: float) -> bool:
    """
    Membership of the E(r,s)-invariant convex domain bounded by the base leaf

    The base leaf is the graph x2 = g(x1, x3); g is convex in the patch when
    r > 0, so the domain lies above the graph there and below it otherwise.
    """
    x1, x2, x3 = (float(v) for v in x[:3])
    if x1 <= 0.0 or x3 <= 0.0:
        return False
    g = x3 * (1.0 + (2.0 * s - r) * math.log(x1) / 4.0 + r * math.log(x3) / 2.0)
    return x2 > g if r > 0.0 else x2 < g


def horosphere_sample(chart: GroupChart, k: float, grid: Optional[int] = None, radius: float = 1.0) -> Mesh:
    """Mesh of the leaf H_k: the orbit of k(1,1,1) over a coordinate lattice."""
    if chart.coord_dim != 2:
        raise BadParams(f"horospheres are orbits of 2-dim groups, got {chart.coord_dim}")
    n = settings.GRID_POINTS if grid is None else grid
    if n < 2:
        raise BadParams(f"mesh grid needs at least 2 points per axis, got {n}")
    q = _leaf_base(k)
    coords = lattice(2, n, radius)
    vertices = np.array([dehomogenize(chart.element(u) @ q) for u in coords])
    quads = [
        (i * n + j, (i + 1) * n + j, (i + 1) * n + j + 1, i * n + j + 1)
        for i in range(n - 1)
        for j in range(n - 1)
    ]
    height = None
    if chart.label in (FamilyLabel.CUSP_E, FamilyLabel.E1):
        height = leaf_height(chart, k)
    logger.info(f"sampled leaf k={k} of {chart.name}: {len(vertices)} vertices, {len(quads)} quads")
    return Mesh(vertices, quads, height)


def patch_curvatures(chart: GroupChart, mesh: Mesh) -> List[float]:
    """Curvature of the leaf at the first vertex of every quad."""
    values = []
    for quad in mesh.quads:
        vertex = np.append(mesh.vertices[quad[0]], 1.0)
        values.append(second_form_det(OrbitSurface.from_chart(chart, vertex)))
    return values


def region_grid(resolution: int, bound: float = 3.0) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Convex C planes in the t = 1 chart of the parameter plane

    Returns:
        (r values, s values, boolean grid indexed [i_s, i_r]) with
        convex iff r s (1 + r + s) > 0
    """
    if resolution < 2:
        raise BadParams(f"region resolution must be at least 2, got {resolution}")
    r = np.linspace(-bound, bound, resolution)
    s = np.linspace(-bound, bound, resolution)
    rr, ss = np.meshgrid(r, s)
    return r, s, rr * ss * (1.0 + rr + ss) > 0.0
