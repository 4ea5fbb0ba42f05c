# app/newton.py - Newton polyhedra in the plane and their cone decomposition
"""
Geometry of Γ(f) = conv(⋃ (supp f + R₊²)) for bivariate f:
- vertices, facets with primitive normals α and values m(α)
- first-meet loci F(a) and m(a)
- one cone per proper face, with fundamental lattice points for the
  two-generator cones
- candidate poles −|α|/m(α) and −1
"""
import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from app.errors import DomainError
from app.local_ring import LocalNum
from app.zeta_algebra import PoleReport

Point = Tuple[int, int]


class FacetKind(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    COMPACT = "compact"


class FaceKind(enum.Enum):
    FACET = "facet"
    VERTEX = "vertex"


@dataclass(frozen=True)
class Facet:
    normal: Point
    m: int
    kind: FacetKind
    vertices: Tuple[Point, ...]

    @property
    def weight(self) -> int:
        """|α| = α₁ + α₂."""
        return self.normal[0] + self.normal[1]


@dataclass(frozen=True)
class Face:
    kind: FaceKind
    vertices: Tuple[Point, ...]
    facet_indices: Tuple[int, ...]
    label: str


@dataclass(frozen=True)
class Polyhedron:
    support: frozenset
    vertices: Tuple[Point, ...]
    facets: Tuple[Facet, ...]
    faces: Tuple[Face, ...]

    def to_json(self) -> dict:
        return {
            "support": sorted(list(p) for p in self.support),
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "m": f.m, "kind": f.kind.value,
                        "vertices": [list(v) for v in f.vertices]} for f in self.facets],
            "faces": [{"label": g.label, "kind": g.kind.value,
                       "vertices": [list(v) for v in g.vertices]} for g in self.faces],
        }


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _primitive(v: Point) -> Point:
    g = gcd(v[0], v[1])
    return v[0] // g, v[1] // g


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[0] + a[1] * b[1]


def newton_polyhedron(support: Iterable[Point]) -> Polyhedron:
    """
    Build Γ(f) from a support set.

    Facets come in the order horizontal ray, vertical ray, then the compact
    edges by increasing x; faces list the facets and then the vertices by
    decreasing x.

    Examples:
        {(3,0),(0,2)} -> five faces, compact normal (2,3) with m = 6
        {(1,0)}       -> normals (0,1) (m = 0) and (1,0) (m = 1)
    """
    points = sorted({(int(i), int(j)) for i, j in support})
    if not points:
        raise DomainError("the Newton polyhedron of the zero polynomial is empty")
    if any(i < 0 or j < 0 for i, j in points):
        raise DomainError("support points must be componentwise nonnegative")

    staircase: List[Point] = []
    for pt in points:
        if not staircase or pt[1] < staircase[-1][1]:
            staircase.append(pt)

    hull: List[Point] = []
    for pt in staircase:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    vertices = tuple(hull)

    first, last = vertices[0], vertices[-1]
    facets = [
        Facet((0, 1), last[1], FacetKind.HORIZONTAL, (last,)),
        Facet((1, 0), first[0], FacetKind.VERTICAL, (first,)),
    ]
    for v1, v2 in zip(vertices, vertices[1:]):
        normal = _primitive((v1[1] - v2[1], v2[0] - v1[0]))
        facets.append(Facet(normal, _dot(normal, v1), FacetKind.COMPACT, (v1, v2)))

    faces: List[Face] = []
    for index, facet in enumerate(facets):
        faces.append(Face(FaceKind.FACET, facet.vertices, (index,), f"gamma{index + 1}"))
    last_index = len(vertices) - 1
    for pos in range(last_index, -1, -1):
        vertex = vertices[pos]
        left = 1 if pos == 0 else 2 + pos - 1
        right = 0 if pos == last_index else 2 + pos
        faces.append(Face(FaceKind.VERTEX, (vertex,), tuple(sorted((left, right))),
                          f"gamma{len(faces) + 1}"))
    return Polyhedron(frozenset(points), vertices, tuple(facets), tuple(faces))


def m_and_face(poly: Polyhedron, a: Point) -> Tuple[int, Face]:
    """
    m(a) = min⟨a, Γ⟩ and the first meet locus F(a).

    Examples:
        {(3,0),(0,2)}, a = (1,1) -> (2, vertex (0,2))
        a = (2,3)                -> (6, compact facet)
        a = (0,1)                -> (0, horizontal ray)
    """
    a = (int(a[0]), int(a[1]))
    if a == (0, 0):
        raise DomainError("m(a) needs a nonzero weight vector")
    if a[0] < 0 or a[1] < 0:
        raise DomainError(f"weight vector {a} has a negative entry")
    values = [_dot(a, v) for v in poly.vertices]
    m = min(values)
    argmin = [v for v, val in zip(poly.vertices, values) if val == m]
    if len(argmin) == 2:
        for face in poly.faces:
            if face.kind is FaceKind.FACET and set(face.vertices) == set(argmin):
                return m, face
    vertex = argmin[0]
    if a[0] == 0 and vertex == poly.vertices[-1]:
        return m, poly.faces[0]
    if a[1] == 0 and vertex == poly.vertices[0]:
        return m, poly.faces[1]
    for face in poly.faces:
        if face.kind is FaceKind.VERTEX and face.vertices == (vertex,):
            return m, face
    raise DomainError(f"no face found for weight {a}")  # pragma: no cover


# ============================================================================
# CONES
# ============================================================================

def fundamental_points(alpha: Point, beta: Point) -> frozenset:
    """Lattice points of {λ₁α + λ₂β : 0 ≤ λᵢ < 1}."""
    det = alpha[0] * beta[1] - alpha[1] * beta[0]
    if det == 0:
        raise DomainError(f"generators {alpha} and {beta} are parallel")
    found = set()
    for x in range(alpha[0] + beta[0] + 1):
        for y in range(alpha[1] + beta[1] + 1):
            lam1 = Fraction(x * beta[1] - y * beta[0], det)
            lam2 = Fraction(alpha[0] * y - alpha[1] * x, det)
            if 0 <= lam1 < 1 and 0 <= lam2 < 1:
                found.add((x, y))
    return frozenset(found)


@dataclass(frozen=True)
class Cone:
    """
    Δ_γ for one face γ.

    One generator: the lattice points are a·α, a ≥ 1. Two generators: the
    points c + aα + bβ with c in the fundamental set, where an index starts
    at 0 when c has a nonzero coordinate on that generator and at 1 otherwise.
    """

    face: Face
    generators: Tuple[Point, ...]
    fundamental: frozenset = field(default_factory=frozenset)

    @property
    def determinant(self) -> int:
        if len(self.generators) == 1:
            return 1
        (a1, a2), (b1, b2) = self.generators
        return abs(a1 * b2 - a2 * b1)

    def coordinates(self, v: Point) -> Tuple[Fraction, ...]:
        """Coordinates of v on the generators (two-generator cones)."""
        (a1, a2), (b1, b2) = self.generators
        det = a1 * b2 - a2 * b1
        return (Fraction(v[0] * b2 - v[1] * b1, det), Fraction(a1 * v[1] - a2 * v[0], det))

    def start_indices(self, c: Point) -> Tuple[int, int]:
        lam1, lam2 = self.coordinates(c)
        return (0 if lam1 else 1), (0 if lam2 else 1)

    def decompose(self, v: Point) -> Optional[Tuple[Point, ...]]:
        """
        Write v in the cone's parametrisation.

        Returns:
            (a,) for one generator, (c, (a, b)) for two, or None when v
            lies outside the relative interior
        """
        if len(self.generators) == 1:
            alpha = self.generators[0]
            if alpha[0]:
                if v[0] % alpha[0]:
                    return None
                a = v[0] // alpha[0]
            else:
                if v[1] % alpha[1]:
                    return None
                a = v[1] // alpha[1]
            if a >= 1 and (a * alpha[0], a * alpha[1]) == tuple(v):
                return (a,)
            return None
        lam1, lam2 = self.coordinates(v)
        if lam1 <= 0 or lam2 <= 0:
            return None
        a, b = floor(lam1), floor(lam2)
        alpha, beta = self.generators
        c = (v[0] - a * alpha[0] - b * beta[0], v[1] - a * alpha[1] - b * beta[1])
        start_a, start_b = self.start_indices(c)
        if c not in self.fundamental or a < start_a or b < start_b:
            return None
        return c, (a, b)

    def lattice_points(self, bound: int) -> List[Point]:
        """Parametrised points with both coordinates ≤ bound."""
        found = []
        if len(self.generators) == 1:
            alpha = self.generators[0]
            a = 1
            while a * alpha[0] <= bound and a * alpha[1] <= bound:
                found.append((a * alpha[0], a * alpha[1]))
                a += 1
            return found
        alpha, beta = self.generators
        for c in sorted(self.fundamental):
            start_a, start_b = self.start_indices(c)
            a = start_a
            while c[0] + a * alpha[0] <= bound and c[1] + a * alpha[1] <= bound:
                b = start_b
                while True:
                    v = (c[0] + a * alpha[0] + b * beta[0], c[1] + a * alpha[1] + b * beta[1])
                    if v[0] > bound or v[1] > bound:
                        break
                    found.append(v)
                    b += 1
                a += 1
        return found


def cones_and_lattice(poly: Polyhedron) -> List[Cone]:
    """
    One cone per proper face, in face order.

    Examples:
        generators (1,0),(2,3) -> fundamental points {(0,0),(1,1),(2,2)}
        generators (0,1),(2,3) -> two fundamental points
    """
    cones = []
    for face in poly.faces:
        normals = tuple(poly.facets[i].normal for i in face.facet_indices)
        if len(normals) == 1:
            cones.append(Cone(face, normals, frozenset({(0, 0)})))
        else:
            cones.append(Cone(face, normals, fundamental_points(*normals)))
    return cones


def candidate_poles(poly: Polyhedron) -> PoleReport:
    """(|α|, m(α)) for every facet with m(α) ≠ 0, and (1, 1)."""
    factors = [(1, 1)]
    for facet in poly.facets:
        if facet.m != 0:
            factors.append((facet.weight, facet.m))
    return PoleReport.from_factors(factors)


def binomial_nondegenerate(mu1: Union[LocalNum, int], d: int, mu2: Union[LocalNum, int], m: int, p: int) -> bool:
    """
    Global non-degeneracy of μ₁x^d + μ₂y^m with respect to Γ.

    Examples:
        (1, 3, 1, 2, p = 5) -> True
        (1, 2, 1, 3, p = 3) -> False
    """
    unit1 = mu1 % p != 0 if isinstance(mu1, int) else mu1.is_unit()
    nonzero2 = mu2 % p != 0 if isinstance(mu2, int) else not mu2.is_zero()
    return unit1 and nonzero2 and m % p != 0
