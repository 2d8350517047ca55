"""Shared builders and independent oracles for the test suite.

Oracles deliberately avoid the production code paths they check: membership
goes through convex-combination solvability on vertices, counts through raw
box scans, and lattice splittings through explicit pair enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from freesum import RationalPolytope
from freesum.linalg import LatticeBasis, in_convex_hull, qvec


def F(a, b=1):
    return Fraction(a, b)


def poly(dim, *points) -> RationalPolytope:
    return RationalPolytope.from_points(dim, points)


def segment(lo, hi) -> RationalPolytope:
    return poly(1, (lo,), (hi,))


def axis_seg(dim, axis, lo, hi) -> RationalPolytope:
    a = [0] * dim
    b = [0] * dim
    a[axis], b[axis] = lo, hi
    return poly(dim, tuple(a), tuple(b))


def diamond(dim=2, axes=(0, 1)) -> RationalPolytope:
    pts = []
    for axis in axes:
        for sign in (1, -1):
            v = [0] * dim
            v[axis] = sign
            pts.append(tuple(v))
    return poly(dim, *pts)


def oracle_count_dilate(p: RationalPolytope, k: int) -> int:
    """Count lattice points of k*P by box scan + convex-combination membership."""
    scaled = [tuple(k * x for x in v) for v in p.vertices]
    lo = [math.ceil(min(v[j] for v in scaled)) for j in range(p.dim)]
    hi = [math.floor(max(v[j] for v in scaled)) for j in range(p.dim)]
    if k == 0:
        return 1
    count = 0
    for pt in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if in_convex_hull(pt, scaled):
            count += 1
    return count


def oracle_lattice_members(basis: LatticeBasis, bound: int):
    """All basis-lattice points with coefficients in [-bound, bound]."""
    if basis.rank == 0:
        return {(0,) * basis.ambient_dim}
    coeff_space = itertools.product(*(range(-bound, bound + 1) for _ in range(basis.rank)))
    out = set()
    for coeffs in coeff_space:
        pt = tuple(
            sum(c * v[j] for c, v in zip(coeffs, basis.vectors))
            for j in range(basis.ambient_dim)
        )
        out.add(pt)
    return out


def oracle_complementary(
    target: LatticeBasis, a: LatticeBasis, b: LatticeBasis, box: int = 3, coeff: int = 24
) -> bool:
    """Brute-force complementarity: unique splitting of every target point of
    the joint span inside a small box."""
    span_rows = list(a.vectors) + list(b.vectors)
    pts_a = oracle_lattice_members(a, coeff)
    pts_b = oracle_lattice_members(b, coeff)
    n = target.ambient_dim
    for raw in itertools.product(range(-box, box + 1), repeat=n):
        if not target.contains(raw):
            continue
        coords = qvec(raw)
        # Restrict to points of the joint span.
        from freesum.linalg import rational_rank

        if span_rows:
            if rational_rank(span_rows + [coords]) != rational_rank(span_rows):
                continue
        elif any(coords):
            continue
        splits = 0
        for u in pts_a:
            v = tuple(x - y for x, y in zip(raw, u))
            if v in pts_b:
                splits += 1
                if splits > 1:
                    return False
        if splits != 1:
            return False
    return True
