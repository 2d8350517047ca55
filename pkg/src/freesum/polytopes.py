"""Rational polytopes: exact facet descriptions, polar duals, lattice points.

A polytope is stored by its irredundant vertex list in Q^n.  All facet and
membership computations go through a homogenized cone description with
integer data, so the hot enumeration loops run on plain ints.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InconclusiveError, InputError, PreconditionError
from .linalg import (
    LatticeBasis,
    QVector,
    Vector,
    clear_denominators,
    in_convex_hull,
    in_convex_plus_cone,
    in_pos_hull,
    invert_rational,
    lattice_basis_of_span,
    primitive_vector,
    qvec,
    rational_nullspace,
    rational_rank,
)


@dataclass(frozen=True)
class RationalPolytope:
    """Convex hull of finitely many rational points, stored by its vertices."""

    dim: int
    vertices: tuple[QVector, ...]

    def __post_init__(self):
        if not self.vertices:
            raise InputError("a polytope needs at least one vertex")
        for v in self.vertices:
            if len(v) != self.dim:
                raise InputError("vertex dimension mismatch")
        for i, v in enumerate(self.vertices):
            others = [w for j, w in enumerate(self.vertices) if j != i]
            if others and in_convex_hull(v, others):
                raise InputError(f"vertex list is redundant at {v}")

    @classmethod
    def from_points(cls, dim: int, points) -> RationalPolytope:
        """Polytope spanned by arbitrary rational points; redundancy is pruned."""
        pts = sorted({qvec(p) for p in points})
        if not pts:
            raise InputError("a polytope needs at least one point")
        verts = [
            p
            for i, p in enumerate(pts)
            if not in_convex_hull(p, [q for j, q in enumerate(pts) if j != i])
        ]
        return cls(dim, tuple(verts))

    @property
    def affine_dim(self) -> int:
        v0 = self.vertices[0]
        return rational_rank([tuple(a - b for a, b in zip(v, v0)) for v in self.vertices[1:]])

    def translate(self, shift) -> RationalPolytope:
        shift = qvec(shift)
        return RationalPolytope(
            self.dim, tuple(tuple(a + s for a, s in zip(v, shift)) for v in self.vertices)
        )

    def dilate(self, factor) -> RationalPolytope:
        factor = Fraction(factor)
        if factor <= 0:
            raise InputError("dilation factor must be positive")
        return RationalPolytope(
            self.dim, tuple(tuple(factor * a for a in v) for v in self.vertices)
        )

    def contains(self, point) -> bool:
        point = qvec(point)
        if len(point) != self.dim:
            raise InputError("point dimension mismatch")
        return _cone_member(cone_hrep(self), point + (Fraction(1),))


@dataclass(frozen=True)
class HalfspaceRep:
    """Facet description of P inside lin(P): phi(a) <= 1 and psi(a) <= 0.

    Functionals are coordinate vectors with respect to the dual basis of
    ``span_basis``, the canonical basis of the saturated lattice of lin(P).
    """

    span_basis: LatticeBasis
    one_facets: tuple[QVector, ...]
    zero_facets: tuple[Vector, ...]


@dataclass(frozen=True)
class DualPolyhedron:
    """Vertices and recession-cone generators of the polar dual of P."""

    vertex_functionals: tuple[QVector, ...]
    ray_functionals: tuple[Vector, ...]


@dataclass(frozen=True)
class GorensteinData:
    index: int
    interior_point: Vector
    center: QVector


@dataclass(frozen=True)
class ConeHRep:
    """Integer description of the homogenization cone of P in R^(n+1).

    The cone over P is ``{x : span_rows @ x = 0, facet_rows @ x <= 0}``.
    """

    dim: int
    span_rows: tuple[Vector, ...]
    facet_rows: tuple[Vector, ...]


def denominator(p: RationalPolytope) -> int:
    """Smallest k >= 1 such that k*P has integer vertices."""
    dens = [x.denominator for v in p.vertices for x in v]
    return math.lcm(*dens) if dens else 1


def _facets_full_dim(points: list[QVector], d: int) -> list[tuple[Vector, int]]:
    """Irredundant facets of a full-dimensional hull in R^d.

    Returns primitive integer pairs (c, c0) with the polytope contained in
    ``c . x <= c0`` and each hyperplane spanned by d affinely independent
    input points.
    """
    if d == 0:
        return []
    seen: dict[tuple, tuple[Vector, int]] = {}
    for subset in itertools.combinations(points, d):
        rows = [list(x) + [Fraction(-1)] for x in subset]
        null = rational_nullspace(rows, d + 1)
        if len(null) != 1:
            continue
        normal = null[0]
        sides = [sum(c * x for c, x in zip(normal[:d], p)) - normal[d] for p in points]
        if all(s <= 0 for s in sides):
            pass
        elif all(s >= 0 for s in sides):
            normal = tuple(-x for x in normal)
        else:
            continue
        key = primitive_vector(normal)
        seen[key] = (key[:d], key[d])
    return sorted(seen.values())


@functools.cache
def _affine_data(p: RationalPolytope):
    """Affine-hull coordinates shared by the facet computations.

    Returns (v0, direction_basis_rows, vertex_coords, ambient_facets) where
    ambient facets are rational pairs (c, c0) with P = {x in aff P : c.x <= c0}.
    """
    v0 = p.vertices[0]
    dirs = [tuple(a - b for a, b in zip(v, v0)) for v in p.vertices[1:]]
    dirs = [dv for dv in dirs if any(dv)]
    if not dirs:
        return v0, (), ((),) * len(p.vertices), ()
    # Row-reduce the directions to a rational basis of the direction space.
    basis: list[QVector] = []
    for dv in dirs:
        if rational_rank(basis + [dv]) > len(basis):
            basis.append(qvec(dv))
    d = len(basis)
    gram = [[sum(x * y for x, y in zip(u, w)) for w in basis] for u in basis]
    ginv = invert_rational(gram)
    coord_map = [
        tuple(sum(ginv[i][k] * basis[k][j] for k in range(d)) for j in range(p.dim))
        for i in range(d)
    ]

    def coords(point: QVector) -> QVector:
        delta = tuple(a - b for a, b in zip(point, v0))
        return tuple(sum(m * x for m, x in zip(row, delta)) for row in coord_map)

    vertex_coords = tuple(coords(v) for v in p.vertices)
    ambient = []
    for c, c0 in _facets_full_dim(list(vertex_coords), d):
        c_amb = tuple(sum(Fraction(c[i]) * coord_map[i][j] for i in range(d)) for j in range(p.dim))
        offset = Fraction(c0) + sum(a * b for a, b in zip(c_amb, v0))
        ambient.append((c_amb, offset))
    return v0, tuple(basis), vertex_coords, tuple(ambient)


def direction_basis(p: RationalPolytope) -> tuple[QVector, ...]:
    """Rational basis of the direction space of the affine hull of P."""
    return _affine_data(p)[1]


@functools.cache
def cone_hrep(p: RationalPolytope) -> ConeHRep:
    """Integer halfspace description of the cone over P at height one."""
    n = p.dim
    gens = [v + (Fraction(1),) for v in p.vertices]
    span_rows = tuple(primitive_vector(z) for z in rational_nullspace(gens, n + 1))
    _, _, _, ambient = _affine_data(p)
    if not ambient:
        # A single point: one halfspace cutting the ray out of its line.
        facet_rows: tuple[Vector, ...] = (tuple(-x for x in primitive_vector(gens[0])),)
    else:
        facet_rows = tuple(primitive_vector(c + (-c0,)) for c, c0 in ambient)
    return ConeHRep(n + 1, span_rows, facet_rows)


def _cone_member(hrep: ConeHRep, point: QVector) -> bool:
    w = clear_denominators(point)
    if any(sum(a * b for a, b in zip(row, w)) != 0 for row in hrep.span_rows):
        return False
    return all(sum(a * b for a, b in zip(row, w)) <= 0 for row in hrep.facet_rows)


def _cone_member_strict(hrep: ConeHRep, point: QVector) -> bool:
    """Relative-interior membership in the homogenization cone."""
    w = clear_denominators(point)
    if any(sum(a * b for a, b in zip(row, w)) != 0 for row in hrep.span_rows):
        return False
    return all(sum(a * b for a, b in zip(row, w)) < 0 for row in hrep.facet_rows)


def lattice_points_in_scaled(p: RationalPolytope, factor) -> tuple[Vector, ...]:
    """Integer points of ``factor * P`` for a rational factor >= 0, in lex order."""
    lam = Fraction(factor)
    if lam < 0:
        raise InputError("dilation factor must be nonnegative")
    return _lattice_points_in_scaled(p, lam)


@functools.lru_cache(maxsize=4096)
def _lattice_points_in_scaled(p: RationalPolytope, lam: Fraction) -> tuple[Vector, ...]:
    hrep = cone_hrep(p)
    n = p.dim
    q = lam.denominator
    height = lam.numerator
    lo = [min(lam * v[j] for v in p.vertices) for j in range(n)]
    hi = [max(lam * v[j] for v in p.vertices) for j in range(n)]
    ranges = [range(math.ceil(a), math.floor(b) + 1) for a, b in zip(lo, hi)]
    if any(len(r) == 0 for r in ranges):
        return ()
    # Candidate (y, lam) is tested scaled by q: (q*y, height), all integers.
    span = [(tuple(q * z for z in row[:n]), row[n] * height) for row in hrep.span_rows]
    facets = [(tuple(q * h for h in row[:n]), row[n] * height) for row in hrep.facet_rows]
    out = []
    for y in itertools.product(*ranges):
        ok = True
        for row, const in span:
            if sum(a * b for a, b in zip(row, y)) + const != 0:
                ok = False
                break
        if not ok:
            continue
        for row, const in facets:
            if sum(a * b for a, b in zip(row, y)) + const > 0:
                ok = False
                break
        if ok:
            out.append(y)
    return tuple(out)


def lattice_points_in_dilate(p: RationalPolytope, k: int) -> list[Vector]:
    """All integer points of k*P, k a nonnegative integer, in lex order."""
    if k < 0:
        raise InputError("dilation parameter must be nonnegative")
    return list(lattice_points_in_scaled(p, Fraction(k)))


def interior_lattice_points_in_dilate(p: RationalPolytope, k: int) -> list[Vector]:
    """Integer points in the relative interior of k*P."""
    hrep = cone_hrep(p)
    pts = lattice_points_in_scaled(p, Fraction(k))
    return [y for y in pts if _cone_member_strict(hrep, qvec(y) + (Fraction(k),))]


@functools.cache
def halfspace_rep(p: RationalPolytope) -> HalfspaceRep:
    """Facet functionals of P relative to lin(P); requires the origin in P."""
    origin = (Fraction(0),) * p.dim
    if not p.contains(origin):
        raise PreconditionError("the origin must lie in the polytope", "origin-not-in-polytope")
    span_basis = lattice_basis_of_span(p.vertices, p.dim)
    d = span_basis.rank
    coords = [span_basis.coordinates(v) for v in p.vertices]
    one: list[QVector] = []
    zero: list[Vector] = []
    for c, c0 in _facets_full_dim(coords, d):
        if c0 > 0:
            one.append(tuple(Fraction(ci, c0) for ci in c))
        else:
            zero.append(primitive_vector(c))
    return HalfspaceRep(span_basis, tuple(sorted(one)), tuple(sorted(zero)))


@functools.cache
def polar_dual(p: RationalPolytope) -> DualPolyhedron:
    """Polar dual of P relative to lin(P), as vertices plus recession rays."""
    rep = halfspace_rep(p)
    if rep.span_basis.rank == 0:
        # The dual of the origin polytope is the single zero functional.
        return DualPolyhedron(((),), ())
    rays = sorted(set(rep.zero_facets))
    extreme = [
        r for i, r in enumerate(rays) if not in_pos_hull(r, [s for j, s in enumerate(rays) if j != i])
    ]
    verts = [
        phi
        for i, phi in enumerate(rep.one_facets)
        if not in_convex_plus_cone(
            phi, [other for j, other in enumerate(rep.one_facets) if j != i], extreme
        )
    ]
    return DualPolyhedron(tuple(sorted(verts)), tuple(extreme))


def is_lattice_polyhedron(dual: DualPolyhedron) -> bool:
    """Whether every dual vertex is integral on the saturated lattice of lin(P)."""
    return all(x.denominator == 1 for phi in dual.vertex_functionals for x in phi)


def dual_denominator(p: RationalPolytope) -> int:
    """Denominator of the polar dual: lcm of dual vertex coordinate denominators."""
    dual = polar_dual(p)
    dens = [x.denominator for phi in dual.vertex_functionals for x in phi]
    return math.lcm(*dens) if dens else 1


def is_reflexive(p: RationalPolytope) -> bool:
    """Lattice polytope with the origin interior and a lattice polytope dual."""
    if denominator(p) != 1:
        return False
    origin = (Fraction(0),) * p.dim
    if not p.contains(origin):
        return False
    rep = halfspace_rep(p)
    if rep.zero_facets:
        return False
    dual = polar_dual(p)
    return not dual.ray_functionals and is_lattice_polyhedron(dual)


def gorenstein_data(p: RationalPolytope, index_bound: int = 64) -> GorensteinData | None:
    """Gorenstein index data of a lattice polytope, or None if not Gorenstein.

    Scans dilation factors upward for the first dilate with an interior
    lattice point; the polytope is Gorenstein iff that point is unique and
    recentering the dilate there gives a reflexive polytope.
    """
    if denominator(p) != 1:
        raise PreconditionError("Gorenstein data requires a lattice polytope", "not-lattice-polytope")
    for k in range(1, index_bound + 1):
        interior = interior_lattice_points_in_dilate(p, k)
        if not interior:
            continue
        if len(interior) > 1:
            return None
        m = interior[0]
        shifted = p.dilate(k).translate([-x for x in m])
        if is_reflexive(shifted):
            center = tuple(Fraction(x, k) for x in m)
            return GorensteinData(k, m, center)
        return None
    raise InconclusiveError(f"no interior lattice point in dilates up to {index_bound}")


def min_dilation(p: RationalPolytope, point) -> Fraction | None:
    """inf of lambda >= 0 with the point in lambda*P; None when outside pos(P).

    The value is the clamped maximum of the facet functionals, which for a
    bounded P is attained except at nonzero points where it would be zero
    (impossible for bounded P), so the infimum is an exact minimum.
    """
    rep = halfspace_rep(p)
    coords = rep.span_basis.coordinates(qvec(point))
    if coords is None:
        return None
    for psi in rep.zero_facets:
        if sum(a * b for a, b in zip(psi, coords)) > 0:
            return None
    values = [sum(a * b for a, b in zip(phi, coords)) for phi in rep.one_facets]
    return max([Fraction(0)] + values)
