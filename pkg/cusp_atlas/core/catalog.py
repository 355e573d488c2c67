"""
Family catalog

The fifteen conjugacy classes of subgroups of PGL4(R) isomorphic to (R^3, +),
the four families of cusp Lie groups, and the ten parametric types of
3-dimensional abelian subalgebras of the upper triangular Borel algebra.

Every chart is a homomorphism from (R^k, +): element(u) equals the exponential
of sum(u_i B_i) for the chart's algebra basis B. The closed forms below are
those exponentials written out, and they are checked against the generic
exponential in the test-suite.
"""

import logging
import math
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from cusp_atlas.core.errors import BadParams, ParseError
from cusp_atlas.core.mat4core import (
    IDENTITY,
    AlgebraBasis,
    Mat4,
    elementary,
    exp_triangular,
    null_space,
    numerical_rank,
)
from cusp_atlas.schemas.family import FamilyParams

logger = logging.getLogger(__name__)


class FamilyLabel(str, Enum):
    C = "C"
    E1 = "E1"
    F0 = "F0"
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    N1 = "N1"
    N2 = "N2"
    N3 = "N3"
    N4 = "N4"
    N4P = "N4'"
    N5 = "N5"
    N6 = "N6"
    N7 = "N7"
    N8 = "N8"
    CUSP_C = "Cusp:C"
    CUSP_E = "Cusp:E"
    CUSP_F = "Cusp:F"
    CUSP_N = "Cusp:N"

    def __str__(self) -> str:
        return self.value

    @property
    def is_cusp(self) -> bool:
        return self.value.startswith("Cusp:")

    @classmethod
    def parse(cls, text: str) -> "FamilyLabel":
        """Parse a label, also accepting N4p / N4prime and CuspE style spellings."""
        key = text.strip()
        aliases = {"N4p": "N4'", "N4prime": "N4'", "N4P": "N4'"}
        key = aliases.get(key, key)
        if key.lower().startswith("cusp") and ":" not in key:
            key = "Cusp:" + key[4:].lstrip("-_").upper()
        for label in cls:
            if label.value == key:
                return label
        raise ParseError(f"unknown family label: {text!r}")


FAMILY_LABELS: List[FamilyLabel] = [label for label in FamilyLabel if not label.is_cusp]
CUSP_LABELS: List[FamilyLabel] = [label for label in FamilyLabel if label.is_cusp]

# families whose non-Cartan coordinates use the rs plane convention c = r a + s b
RS_FAMILIES = {FamilyLabel.E1, FamilyLabel.F0, FamilyLabel.F1}


class Type2Variant(str, Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    ALPHA_BETA = "alpha+beta"
    BETA_GAMMA = "beta+gamma"
    ALPHA_BETA_GAMMA = "alpha+beta+gamma"


# Jordan pair (1-based slots) of each type 2 variant
TYPE2_PAIRS = {
    Type2Variant.ALPHA: (1, 2),
    Type2Variant.BETA: (2, 3),
    Type2Variant.GAMMA: (3, 4),
    Type2Variant.ALPHA_BETA: (1, 3),
    Type2Variant.BETA_GAMMA: (2, 4),
    Type2Variant.ALPHA_BETA_GAMMA: (1, 4),
}


class GroupChart:
    """
    A k-parameter subgroup given by an algebra basis and, optionally, a closed form

    element() uses the closed form when there is one; exp_element() always goes
    through the matrix exponential of the algebra element.
    """

    def __init__(
        self,
        label: Optional[FamilyLabel],
        basis: AlgebraBasis,
        closed_form: Optional[Callable[[Sequence[float]], Mat4]] = None,
        params: Optional[FamilyParams] = None,
        name: Optional[str] = None,
    ):
        self.label = label
        self.basis = basis
        self.closed_form = closed_form
        self.params = params
        self.name = name or (str(label) if label is not None else "chart")

    @property
    def coord_dim(self) -> int:
        return self.basis.dim

    def _coords(self, coords: Sequence[float]) -> np.ndarray:
        u = np.asarray(coords, dtype=np.float64).reshape(-1)
        if u.shape != (self.coord_dim,):
            raise BadParams(f"{self.name} takes {self.coord_dim} coordinates, got {u.shape[0]}")
        if not np.all(np.isfinite(u)):
            raise BadParams(f"non-finite coordinates {u.tolist()}")
        return u

    def element(self, coords: Sequence[float]) -> Mat4:
        u = self._coords(coords)
        if self.closed_form is not None:
            return self.closed_form(u)
        return self.exp_element(u)

    def exp_element(self, coords: Sequence[float]) -> Mat4:
        x = self.basis.element(self._coords(coords))
        if self.basis.is_upper():
            return exp_triangular(x)
        return scipy.linalg.expm(x)

    def elements(self, coords: np.ndarray) -> np.ndarray:
        """Stack of group elements, shape (n, 4, 4), for an (n, k) array of coordinates."""
        return np.stack([self.element(u) for u in np.atleast_2d(coords)])

    def conjugated(self, m: Mat4) -> "GroupChart":
        """The chart u -> M element(u) M^-1."""
        m_inv = np.linalg.inv(m)
        parent = self

        def closed(u: Sequence[float]) -> Mat4:
            return m @ parent.element(u) @ m_inv

        return GroupChart(self.label, self.basis.conjugated(m), closed, self.params, f"{self.name}^M")

    def restricted(
        self,
        coefficients: np.ndarray,
        label: Optional[FamilyLabel] = None,
        params: Optional[FamilyParams] = None,
        name: Optional[str] = None,
    ) -> "GroupChart":
        """Sub-chart u -> element(K u) for a (k, j) coefficient matrix K of full column rank."""
        k = np.asarray(coefficients, dtype=np.float64)
        if k.shape[0] != self.coord_dim:
            raise BadParams(f"coefficient matrix needs {self.coord_dim} rows, got {k.shape[0]}")
        gens = [sum(k[i, j] * self.basis[i] for i in range(self.coord_dim)) for j in range(k.shape[1])]
        parent = self

        def closed(u: Sequence[float]) -> Mat4:
            return parent.element(k @ np.asarray(u, dtype=np.float64))

        return GroupChart(
            label if label is not None else self.label,
            AlgebraBasis(gens),
            closed,
            params,
            name,
        )

    def __repr__(self) -> str:
        return f"GroupChart({self.name}, dim={self.coord_dim})"


# ---------------------------------------------------------------------------
# Algebra bases
# ---------------------------------------------------------------------------

S = elementary(1, 2) + elementary(2, 3) + elementary(3, 4)


def _diag(*entries: float) -> Mat4:
    return np.diag(np.asarray(entries, dtype=np.float64))


def _e(*pairs: tuple) -> Mat4:
    return sum((elementary(i, j) for i, j in pairs), np.zeros((4, 4)))


_FAMILY_GENERATORS: Dict[FamilyLabel, List[Mat4]] = {
    FamilyLabel.C: [_diag(3, -1, -1, -1) / 4, _diag(-1, 3, -1, -1) / 4, _diag(-1, -1, 3, -1) / 4],
    FamilyLabel.E1: [_diag(-1, 1, 1, -1), _diag(1, 0, 0, -1), _e((2, 3))],
    FamilyLabel.F0: [_e((1, 2)), _diag(1, 1, -1, -1), _e((3, 4))],
    FamilyLabel.F1: [_diag(1, 1, 1, -3), _e((1, 2), (2, 3)), _e((1, 3))],
    FamilyLabel.F2: [_diag(1, 1, 1, -3), _e((1, 2)), _e((1, 3))],
    FamilyLabel.F3: [_diag(1, 1, 1, -3), _e((2, 3)), _e((1, 3))],
    FamilyLabel.N1: [S, S @ S, S @ S @ S],
    FamilyLabel.N2: [_e((1, 2), (2, 3)), _e((1, 3)), _e((1, 4))],
    FamilyLabel.N3: [_e((2, 3), (3, 4)), _e((2, 4)), _e((1, 4))],
    FamilyLabel.N4: [_e((1, 2), (3, 4)), _e((1, 3), (2, 4)), _e((1, 4))],
    FamilyLabel.N4P: [_e((1, 2), (2, 4)), _e((1, 3), (3, 4)), _e((1, 4))],
    FamilyLabel.N5: [_e((2, 3)), _e((1, 3), (2, 4)), _e((1, 4))],
    FamilyLabel.N6: [_e((1, 2)), _e((3, 4)), _e((1, 4))],
    FamilyLabel.N7: [_e((3, 4)), _e((2, 4)), _e((1, 4))],
    FamilyLabel.N8: [_e((1, 2)), _e((1, 3)), _e((1, 4))],
}

# algebra_basis(C) hands out this basis; the C chart keeps the weight coordinates above
_CARTAN_BASIS: List[Mat4] = [_diag(1, 0, 0, -1), _diag(0, 1, 0, -1), _diag(0, 0, 1, -1)]


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _closed_c(u: Sequence[float]) -> Mat4:
    a, b, c = u
    w = -(a + b + c) / 4.0
    return np.diag(np.exp([a + w, b + w, c + w, w]))


def _closed_e1(u: Sequence[float]) -> Mat4:
    a, b, c = u
    g = np.diag(np.exp([b - a, a, a, -a - b]))
    g[1, 2] = math.exp(a) * c
    return g


def _closed_f0(u: Sequence[float]) -> Mat4:
    a, b, c = u
    p, q = math.exp(b), math.exp(-b)
    return np.array(
        [[p, p * a, 0.0, 0.0], [0.0, p, 0.0, 0.0], [0.0, 0.0, q, q * c], [0.0, 0.0, 0.0, q]]
    )


def _three_block(a: float, upper: Mat4) -> Mat4:
    g = np.zeros((4, 4))
    g[:3, :3] = math.exp(a) * upper[:3, :3]
    g[3, 3] = math.exp(-3.0 * a)
    return g


def _closed_f1(u: Sequence[float]) -> Mat4:
    a, b, c = u
    return _three_block(a, IDENTITY + b * _e((1, 2), (2, 3)) + (c + b * b / 2.0) * _e((1, 3)))


def _closed_f2(u: Sequence[float]) -> Mat4:
    a, b, c = u
    return _three_block(a, IDENTITY + b * _e((1, 2)) + c * _e((1, 3)))


def _closed_f3(u: Sequence[float]) -> Mat4:
    a, b, c = u
    return _three_block(a, IDENTITY + b * _e((2, 3)) + c * _e((1, 3)))


def _closed_n1(u: Sequence[float]) -> Mat4:
    a, b, c = u
    s2 = S @ S
    return IDENTITY + a * S + (b + a * a / 2.0) * s2 + (c + a * b + a**3 / 6.0) * (s2 @ S)


def _closed_n2(u: Sequence[float]) -> Mat4:
    a, b, c = u
    return IDENTITY + a * _e((1, 2), (2, 3)) + (b + a * a / 2.0) * _e((1, 3)) + c * _e((1, 4))


def _closed_n3(u: Sequence[float]) -> Mat4:
    a, b, c = u
    return IDENTITY + a * _e((2, 3), (3, 4)) + (b + a * a / 2.0) * _e((2, 4)) + c * _e((1, 4))


def _closed_n4(u: Sequence[float]) -> Mat4:
    a, b, c = u
    return IDENTITY + a * _e((1, 2), (3, 4)) + b * _e((1, 3), (2, 4)) + (c + a * b) * _e((1, 4))


def _closed_n4p(u: Sequence[float]) -> Mat4:
    a, b, c = u
    corner = c + (a * a + b * b) / 2.0
    return IDENTITY + a * _e((1, 2), (2, 4)) + b * _e((1, 3), (3, 4)) + corner * _e((1, 4))


def _closed_linear(label: FamilyLabel) -> Callable[[Sequence[float]], Mat4]:
    gens = _FAMILY_GENERATORS[label]

    def closed(u: Sequence[float]) -> Mat4:
        return IDENTITY + sum((x * g for x, g in zip(u, gens)), np.zeros((4, 4)))

    return closed


_CLOSED_FORMS: Dict[FamilyLabel, Callable[[Sequence[float]], Mat4]] = {
    FamilyLabel.C: _closed_c,
    FamilyLabel.E1: _closed_e1,
    FamilyLabel.F0: _closed_f0,
    FamilyLabel.F1: _closed_f1,
    FamilyLabel.F2: _closed_f2,
    FamilyLabel.F3: _closed_f3,
    FamilyLabel.N1: _closed_n1,
    FamilyLabel.N2: _closed_n2,
    FamilyLabel.N3: _closed_n3,
    FamilyLabel.N4: _closed_n4,
    FamilyLabel.N4P: _closed_n4p,
    FamilyLabel.N5: _closed_linear(FamilyLabel.N5),
    FamilyLabel.N6: _closed_linear(FamilyLabel.N6),
    FamilyLabel.N7: _closed_linear(FamilyLabel.N7),
    FamilyLabel.N8: _closed_linear(FamilyLabel.N8),
}


# ---------------------------------------------------------------------------
# Charts
# ---------------------------------------------------------------------------


def algebra_basis(label: FamilyLabel, params: Optional[FamilyParams] = None) -> AlgebraBasis:
    """Lie algebra basis of a family (3 generators) or a cusp family (2 generators)."""
    if label.is_cusp:
        return cusp_chart(label, params).basis
    if label == FamilyLabel.C:
        return AlgebraBasis(_CARTAN_BASIS)
    return AlgebraBasis(_FAMILY_GENERATORS[label])


def family_chart(label: FamilyLabel, params: Optional[FamilyParams] = None) -> GroupChart:
    if label.is_cusp:
        return cusp_chart(label, params)
    return GroupChart(label, AlgebraBasis(_FAMILY_GENERATORS[label]), _CLOSED_FORMS[label], params)


def group_element(chart: GroupChart, coords: Sequence[float]) -> Mat4:
    return chart.element(coords)


def plane_subalgebra(
    label: FamilyLabel, params: Optional[FamilyParams], plane: Sequence[float]
) -> GroupChart:
    """
    The 2-dimensional subgroup {r a + s b + t c = 0} of a family

    Args:
        label: one of the fifteen family labels
        params: carried through to the returned chart
        plane: projective triple (r, s, t)

    Returns:
        a 2-dim chart whose coordinates are taken along an orthonormal basis of
        the plane's kernel (from the SVD)
    """
    if label.is_cusp:
        raise BadParams(f"plane subgroups are taken inside a family, not {label}")
    row = np.asarray(plane, dtype=np.float64).reshape(1, 3)
    if not np.all(np.isfinite(row)) or np.linalg.norm(row) == 0.0:
        raise BadParams(f"plane must be a non-zero finite triple, got {list(plane)}")
    kernel = null_space(row)
    triple = tuple(float(x) for x in row[0])
    chart_params = params if params is not None else FamilyParams(rst=triple)
    name = f"{label}[" + ":".join(f"{x:.6g}" for x in triple) + "]"
    return family_chart(label).restricted(kernel, label, chart_params, name)


def plane_chart(label: FamilyLabel, plane: Sequence[float]) -> GroupChart:
    return plane_subalgebra(label, None, plane)


def rs_chart(label: FamilyLabel, r: float, s: float) -> GroupChart:
    """The plane [r:s:-1] with coordinates (a, b), so that c = r a + s b."""
    if label.is_cusp:
        raise BadParams(f"rs planes are taken inside a family, not {label}")
    coefficients = np.array([[1.0, 0.0], [0.0, 1.0], [r, s]])
    name = f"{label}(r={r:.6g}, s={s:.6g})"
    return family_chart(label).restricted(coefficients, label, FamilyParams(rs=(r, s)), name)


def cusp_chart(label: FamilyLabel, params: Optional[FamilyParams] = None) -> GroupChart:
    """Canonical chart of a cusp family in its normal-form parameters."""
    if label == FamilyLabel.CUSP_E:
        s = 0.0 if params is None or params.s is None else params.s
        if not 0.0 <= s < 0.5:
            raise BadParams(f"Cusp:E needs 0 <= s < 1/2, got s={s}")
        chart = rs_chart(FamilyLabel.E1, 1.0, s)
        chart.label, chart.params, chart.name = label, FamilyParams(s=s), f"Cusp:E(s={s:.6g})"
        return chart
    if label == FamilyLabel.CUSP_F:
        chart = rs_chart(FamilyLabel.F1, 1.0, 0.0)
        chart.label, chart.params, chart.name = label, FamilyParams(), "Cusp:F"
        return chart
    if label == FamilyLabel.CUSP_N:
        chart = family_chart(FamilyLabel.N4P).restricted(
            np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]), label, FamilyParams(), "Cusp:N"
        )
        return chart
    if label == FamilyLabel.CUSP_C:
        if params is None or params.rst is None:
            raise BadParams("Cusp:C needs rst")
        r, s, t = params.rst
        if not (r >= s >= t > 0.0):
            raise BadParams(f"Cusp:C needs r >= s >= t > 0, got {params.describe()}")
        chart = plane_subalgebra(FamilyLabel.C, params, params.rst)
        chart.label, chart.name = label, f"Cusp:C{params.describe()}"
        return chart
    raise BadParams(f"{label} is not a cusp family")


# ---------------------------------------------------------------------------
# The ten algebra types
# ---------------------------------------------------------------------------

TypeParams = Union[None, str, Sequence[float]]


def _floats(type_id: int, type_params: TypeParams, count: int) -> List[float]:
    if type_params is None or isinstance(type_params, str) or len(type_params) != count:
        raise BadParams(f"type {type_id} takes {count} numeric parameters, got {type_params!r}")
    values = [float(x) for x in type_params]
    if not all(math.isfinite(x) for x in values):
        raise BadParams(f"type {type_id} parameters must be finite, got {values}")
    return values


def _projective(type_id: int, values: List[float]) -> List[float]:
    if all(x == 0.0 for x in values):
        raise BadParams(f"type {type_id} needs a projective point, got the zero vector")
    return values


def _type2_generators(variant: Type2Variant) -> List[Mat4]:
    i, j = TYPE2_PAIRS[variant]
    k, l = [m for m in (1, 2, 3, 4) if m not in (i, j)]
    # coordinates: x on the first single slot, w on the pair, nilpotent coupling
    first = np.zeros(4)
    first[k - 1], first[l - 1] = 1.0, -1.0
    pair = np.zeros(4)
    pair[i - 1] = pair[j - 1] = 1.0
    pair[l - 1] = -2.0
    return [np.diag(first), np.diag(pair), elementary(i, j)]


def abelian_type_constructor(type_id: int, type_params: TypeParams = None) -> AlgebraBasis:
    """
    Algebra basis of one of the ten types of 3-dim abelian subalgebras of the Borel algebra

    Args:
        type_id: 1..10
        type_params: the variant name for type 2, [x:y] for types 3 and 5,
            [x:y:z] for type 6, (y, t) for types 7 and 8, [x:y:z:t] for type 9,
            (x, y) for type 10; nothing for types 1 and 4

    Returns:
        basis whose generators are the derivatives of the displayed matrices in
        their coordinates a, b, c (for type 9, an orthonormal basis of the hyperplane)
    """
    if type_id == 1:
        return AlgebraBasis([_diag(1, 0, 0, -1), _diag(0, 1, 0, -1), _diag(0, 0, 1, -1)])

    if type_id == 2:
        try:
            variant = Type2Variant(type_params if type_params is not None else "beta")
        except ValueError:
            raise BadParams(f"unknown type 2 variant {type_params!r}")
        return AlgebraBasis(_type2_generators(variant))

    if type_id == 3:
        x, y = _projective(3, _floats(3, type_params, 2))
        return AlgebraBasis([x * _e((1, 2)) + y * _e((2, 3)), _e((1, 3)), _diag(1, 1, 1, -3)])

    if type_id == 4:
        return AlgebraBasis([_diag(1, 1, -1, -1), _e((1, 2)), _e((3, 4))])

    if type_id == 5:
        x, y = _projective(5, _floats(5, type_params, 2))
        return AlgebraBasis([x * _e((2, 3)) + y * _e((3, 4)), _e((2, 4)), _diag(-3, 1, 1, 1)])

    if type_id == 6:
        x, y, z = _floats(6, type_params, 3)
        if x == 0.0 or z == 0.0:
            raise BadParams(f"type 6 needs x and z non-zero, got [{x}:{y}:{z}]")
        return AlgebraBasis(
            [
                x * _e((1, 2)) + y * _e((2, 3)) + z * _e((3, 4)),
                x * _e((1, 3)) + z * _e((2, 4)),
                _e((1, 4)),
            ]
        )

    if type_id == 7:
        y, t = _floats(7, type_params, 2)
        return AlgebraBasis([_e((1, 2)) + y * _e((2, 3)) + t * _e((2, 4)), _e((1, 3)), _e((1, 4))])

    if type_id == 8:
        y, t = _floats(8, type_params, 2)
        return AlgebraBasis([t * _e((1, 3)) + y * _e((2, 3)) + _e((3, 4)), _e((2, 4)), _e((1, 4))])

    if type_id == 9:
        x, y, z, t = _projective(9, _floats(9, type_params, 4))
        # coordinates (a, b, c, d) sit at (2,3), (1,3), (1,4), (2,4)
        slots = [_e((2, 3)), _e((1, 3)), _e((1, 4)), _e((2, 4))]
        kernel = null_space(np.array([[x, y, z, t]]))
        return AlgebraBasis([sum(kernel[i, j] * slots[i] for i in range(4)) for j in range(3)])

    if type_id == 10:
        x, y = _floats(10, type_params, 2)
        return AlgebraBasis([_e((1, 2)) + x * _e((2, 4)), y * _e((1, 3)) + _e((3, 4)), _e((1, 4))])

    raise BadParams(f"type id must be 1..10, got {type_id}")


def type_chart(type_id: int, type_params: TypeParams = None) -> GroupChart:
    basis = abelian_type_constructor(type_id, type_params)
    suffix = "" if type_params is None else f" {type_params}"
    return GroupChart(None, basis, None, None, f"type {type_id}{suffix}")


def type9_pairing_matrix(type_params: Sequence[float]) -> np.ndarray:
    """W = [[y, z], [x, t]]: the type 9 constraint as a pairing on the 2x2 block."""
    x, y, z, t = _floats(9, type_params, 4)
    return np.array([[y, z], [x, t]])


def type_family(type_id: int, type_params: TypeParams = None) -> FamilyLabel:
    """The family a type exponentiates into, decided by its parameter regime."""
    abelian_type_constructor(type_id, type_params)

    if type_id == 1:
        return FamilyLabel.C
    if type_id == 2:
        return FamilyLabel.E1
    if type_id in (3, 5):
        x, y = _floats(type_id, type_params, 2)
        if x == 0.0:
            return FamilyLabel.F3
        if y == 0.0:
            return FamilyLabel.F2
        return FamilyLabel.F1
    if type_id == 4:
        return FamilyLabel.F0
    if type_id == 6:
        _, y, _ = _floats(6, type_params, 3)
        return FamilyLabel.N1 if y != 0.0 else FamilyLabel.N4
    if type_id == 7:
        y, t = _floats(7, type_params, 2)
        return FamilyLabel.N8 if y == 0.0 and t == 0.0 else FamilyLabel.N2
    if type_id == 8:
        y, t = _floats(8, type_params, 2)
        return FamilyLabel.N7 if y == 0.0 and t == 0.0 else FamilyLabel.N3
    if type_id == 9:
        return FamilyLabel.N6 if numerical_rank(type9_pairing_matrix(type_params)) == 1 else FamilyLabel.N5
    x, y = _floats(10, type_params, 2)
    if x * y > 0.0:
        return FamilyLabel.N4P
    if x * y < 0.0:
        return FamilyLabel.N4
    if x == 0.0 and y == 0.0:
        return FamilyLabel.N6
    return FamilyLabel.N3 if y == 0.0 else FamilyLabel.N2
