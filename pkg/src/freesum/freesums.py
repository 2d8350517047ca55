"""Free sums and affine free sums of rational polytopes.

Classification runs the lattice-complementarity criterion: the two summands
must meet in a single rational point p, and the direction-space lattices of
the recentered summands must be complementary inside the refined lattice
generated by the standard basis and p.  The product-formula checks compare
truncated generating functions coefficient by coefficient.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cones import (
    ConeOverPolytope,
    ShiftedCone,
    cone_over,
    embed_at_height_one,
    lambda_p,
    llenv_points,
    shifted_envelope_lattice_points,
)
from .errors import (
    ClassificationError,
    InputError,
    InternalCheckError,
    PreconditionError,
)
from .linalg import (
    LatticeBasis,
    QVector,
    canonical_basis,
    complementary_in,
    invert_rational,
    lattice_basis_of_span,
    qvec,
    rational_rank,
    solve_linear,
)
from .polytopes import (
    RationalPolytope,
    denominator,
    direction_basis,
    dual_denominator,
    gorenstein_data,
    is_lattice_polyhedron,
    polar_dual,
)
from .series import (
    TruncatedSeries,
    apply_one_minus_monomial,
    delta_polynomial,
    ehrhart_series,
    poly_divmod,
    poly_mul,
    poly_pow,
    series_mul,
    sigma_cone,
)

FREE_SUM = "free_sum"
AFFINE_FREE_SUM = "affine_free_sum"


@dataclass(frozen=True)
class FreeSumWitness:
    """Evidence that conv(J u K) is a (possibly affine) free sum.

    The two sublattice bases live inside ``target``; for affine sums all
    three are scaled by r = den(p) so they are honest integer lattices.
    """

    j: RationalPolytope
    k: RationalPolytope
    kind: str
    intersection_point: QVector
    r: int
    sublattice_j: LatticeBasis
    sublattice_k: LatticeBasis
    target: LatticeBasis

    @property
    def factor_exponent(self) -> tuple[int, ...]:
        """Exponent r*alpha(p) of the monomial in the product formula."""
        return tuple(int(self.r * x) for x in self.intersection_point) + (self.r,)


@dataclass(frozen=True)
class BraunVerdict:
    holds_up_to_bound: bool
    height_bound: int
    factor_exponent: tuple[int, ...]
    counterexample: tuple[tuple[int, ...], int, int] | None
    residual: TruncatedSeries


@dataclass(frozen=True)
class EnvelopeCondition:
    holds: bool
    witness: QVector | None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class DecompositionReport:
    points_checked: int
    violations: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class ConverseReport:
    dual_p_lattice: bool
    dual_q_lattice: bool
    braun_holds_up_to_bound: bool
    height_bound: int
    counterexample: tuple[tuple[int, ...], int, int] | None


@dataclass(frozen=True)
class UnivariateBraunVerdict:
    series_holds: bool
    first_mismatch: tuple[int, int, int] | None
    delta_holds: bool
    delta_lhs: tuple[int, ...]
    delta_rhs: tuple[Fraction, ...] | None


@functools.cache
def hull_union(j: RationalPolytope, k: RationalPolytope) -> RationalPolytope:
    """Convex hull of the union, with redundant generators pruned."""
    if j.dim != k.dim:
        raise InputError("summands must share an ambient dimension")
    return RationalPolytope.from_points(j.dim, j.vertices + k.vertices)


def _span_cap_lattice(directions, lattice: LatticeBasis) -> LatticeBasis:
    """Canonical basis of span(directions) intersected with the given lattice."""
    coords = [lattice.coordinates(v) for v in directions]
    saturated = lattice_basis_of_span(coords, lattice.rank)
    rows = [lattice.point_from_coordinates(c) for c in saturated.vectors]
    return canonical_basis([tuple(int(x) for x in r) for r in rows], lattice.ambient_dim)


@functools.lru_cache(maxsize=512)
def classify_sum(j: RationalPolytope, k: RationalPolytope) -> FreeSumWitness:
    """Classify conv(J u K) as a free sum or affine free sum.

    Raises ClassificationError when the affine spans fail to meet in a single
    rational point of both summands, or when the recentered span lattices are
    not complementary.
    """
    if j.dim != k.dim:
        raise InputError("summands must share an ambient dimension")
    n = j.dim
    dirs_j = direction_basis(j)
    dirs_k = direction_basis(k)
    v0, w0 = j.vertices[0], k.vertices[0]
    columns = list(dirs_j) + [tuple(-x for x in d) for d in dirs_k]
    rows = [[col[i] for col in columns] for i in range(n)]
    rhs = [a - b for a, b in zip(w0, v0)]
    sol = solve_linear(rows, rhs) if columns else (None if any(rhs) else ())
    if sol is None:
        raise ClassificationError("affine spans do not intersect", "spans-disjoint")
    if rational_rank(list(dirs_j) + list(dirs_k)) != len(dirs_j) + len(dirs_k):
        raise ClassificationError(
            "affine spans intersect in more than a point", "spans-intersect-in-flat"
        )
    p = tuple(
        v + sum(sol[i] * dirs_j[i][t] for i in range(len(dirs_j)))
        for t, v in enumerate(v0)
    )
    if not (j.contains(p) and k.contains(p)):
        raise ClassificationError(
            "intersection point of the affine spans is not in both summands",
            "intersection-point-outside",
        )
    refinement = lambda_p(p)
    target = refinement.scaled_basis
    sub_j = _span_cap_lattice(dirs_j, target) if dirs_j else LatticeBasis(n, ())
    sub_k = _span_cap_lattice(dirs_k, target) if dirs_k else LatticeBasis(n, ())
    if not complementary_in(target, sub_j, sub_k):
        raise ClassificationError(
            "recentered span lattices are not complementary", "not-complementary"
        )
    kind = FREE_SUM if all(x == 0 for x in p) else AFFINE_FREE_SUM
    return FreeSumWitness(j, k, kind, p, refinement.r, sub_j, sub_k, target)


def envelope_condition_check(j: RationalPolytope, p, height_bound: int) -> EnvelopeCondition:
    """Whether every projected lattice point of cone(J) along alpha(p) is integral.

    This is the hypothesis of the product formula; the witness, when the
    check fails, is the lex-smallest non-lattice projection found.
    """
    p = qvec(p)
    if not j.contains(p):
        raise PreconditionError("projection point must lie in the summand", "point-not-in-summand")
    points = llenv_points(cone_over(j), p, height_bound)
    for point, is_lattice in points:
        if not is_lattice:
            return EnvelopeCondition(False, point)
    return EnvelopeCondition(True, None)


def check_braun_multivariate(witness: FreeSumWitness, height_bound: int) -> BraunVerdict:
    """Compare sigma of the hull cone with the one-minus-monomial product."""
    hull = hull_union(witness.j, witness.k)
    lhs = sigma_cone(cone_over(hull), height_bound)
    product = series_mul(
        sigma_cone(cone_over(witness.j), height_bound),
        sigma_cone(cone_over(witness.k), height_bound),
    )
    rhs = apply_one_minus_monomial(product, witness.factor_exponent)
    residual = lhs - rhs
    difference = lhs.first_difference(rhs)
    counterexample = None
    if difference is not None:
        counterexample = (difference[0], difference[1], difference[2])
    return BraunVerdict(
        difference is None, height_bound, witness.factor_exponent, counterexample, residual
    )


def check_braun_univariate(
    p: RationalPolytope, q: RationalPolytope, height_bound: int
) -> UnivariateBraunVerdict:
    """Check the counting-series product formula and its numerator identity."""
    witness = classify_sum(p, q)
    if witness.kind != FREE_SUM:
        raise PreconditionError(
            "univariate product formula applies to free sums at the origin",
            "not-a-free-sum-at-origin",
        )
    hull = hull_union(p, q)
    lhs = ehrhart_series(hull, height_bound).coefficients
    ep = ehrhart_series(p, height_bound).coefficients
    eq = ehrhart_series(q, height_bound).coefficients
    product = poly_mul(list(ep), list(eq))[: height_bound + 1]
    rhs = tuple(
        product[t] - (product[t - 1] if t >= 1 else 0) for t in range(height_bound + 1)
    )
    mismatch = next(
        ((t, lhs[t], rhs[t]) for t in range(height_bound + 1) if lhs[t] != rhs[t]), None
    )

    dim_p, dim_q = p.affine_dim, q.affine_dim
    den_p, den_q = denominator(p), denominator(q)
    lcm = math.lcm(den_p, den_q)
    delta_p = delta_polynomial(p, den_p * (dim_p + 2))
    delta_q = delta_polynomial(q, den_q * (dim_q + 2))
    dim_sum = dim_p + dim_q
    delta_hull = delta_polynomial(hull, lcm * (dim_sum + 2))

    def one_minus_t_power(e: int) -> list[int]:
        poly = [0] * (e + 1)
        poly[0], poly[e] = 1, -1
        return poly

    numerator = poly_mul([1, -1], poly_pow(one_minus_t_power(lcm), dim_sum + 1))
    numerator = poly_mul(numerator, poly_mul(list(delta_p.coefficients), list(delta_q.coefficients)))
    quotient, remainder = poly_divmod(numerator, poly_pow(one_minus_t_power(den_p), dim_p + 1))
    delta_rhs: tuple[Fraction, ...] | None = None
    delta_holds = False
    if not remainder:
        quotient, remainder = poly_divmod(quotient, poly_pow(one_minus_t_power(den_q), dim_q + 1))
        if not remainder:
            while len(quotient) > 1 and quotient[-1] == 0:
                quotient.pop()
            delta_rhs = tuple(quotient)
            delta_holds = delta_rhs == tuple(Fraction(c) for c in delta_hull.coefficients)
    return UnivariateBraunVerdict(
        mismatch is None, mismatch, delta_holds, delta_hull.coefficients, delta_rhs
    )


def decompose_sigma(
    p: RationalPolytope, k: RationalPolytope, height_bound: int, verify: bool = True
) -> TruncatedSeries:
    """Assemble sigma of the hull cone from shifted envelopes of P and shifted
    copies of cone(K), one term per shift index below the dual denominator.

    With ``verify`` the result is compared against direct enumeration of the
    hull cone and a mismatch raises, since equality is unconditional for
    free sums.
    """
    witness = classify_sum(p, k)
    if witness.kind != FREE_SUM:
        raise PreconditionError(
            "the shifted-envelope decomposition applies to free sums at the origin",
            "not-a-free-sum-at-origin",
        )
    d = dual_denominator(p)
    cone_k = cone_over(k)
    n1 = p.dim + 1
    total = TruncatedSeries.zero(n1, height_bound)
    for i in range(d):
        envelope = TruncatedSeries.indicator(
            n1, height_bound, shifted_envelope_lattice_points(p, i, height_bound)
        )
        shifted = ShiftedCone(cone_k, i, d, -1)
        total = total + series_mul(envelope, sigma_cone(shifted, height_bound))
    if verify:
        direct = sigma_cone(cone_over(hull_union(p, k)), height_bound)
        if total != direct:
            raise InternalCheckError("shifted-envelope decomposition disagrees with enumeration")
    return total


def converse_search(
    p: RationalPolytope, q: RationalPolytope, height_bound: int
) -> ConverseReport:
    """Tabulate dual-lattice status of both summands against the product check.

    A lattice-polyhedron dual on either side upgrades a bounded ``holds``
    verdict to a guarantee, so observing a counterexample in that situation
    raises instead of reporting.
    """
    witness = classify_sum(p, q)
    dual_p = is_lattice_polyhedron(polar_dual(p))
    dual_q = is_lattice_polyhedron(polar_dual(q))
    verdict = check_braun_multivariate(witness, height_bound)
    if (dual_p or dual_q) and not verdict.holds_up_to_bound:
        raise InternalCheckError(
            "product formula failed although a summand has a lattice-polyhedron dual"
        )
    return ConverseReport(
        dual_p, dual_q, verdict.holds_up_to_bound, height_bound, verdict.counterexample
    )


def gorenstein_affine_check(
    p: RationalPolytope, k: RationalPolytope, height_bound: int
) -> BraunVerdict:
    """Product formula at the canonical interior center of a Gorenstein summand.

    Also re-verifies, point by point up to the height bound, that the
    interior lattice points of cone(P) are exactly the lattice points of the
    cone translated by index * alpha(center).
    """
    data = gorenstein_data(p)
    if data is None:
        raise PreconditionError("first summand is not Gorenstein", "not-gorenstein")
    witness = classify_sum(p, k)
    if qvec(witness.intersection_point) != qvec(data.center):
        raise PreconditionError(
            "intersection point differs from the Gorenstein center",
            "gorenstein-center-mismatch",
        )
    if witness.r != data.index:
        raise InternalCheckError("Gorenstein index differs from the center denominator")
    cone_p = cone_over(p)
    shift = tuple(Fraction(x) for x in data.interior_point) + (Fraction(data.index),)
    for t in range(height_bound + 1):
        for pt in cone_p.lattice_points_at_height(t):
            interior = cone_p.contains_interior(pt)
            translated = cone_p.contains(tuple(a - b for a, b in zip(map(Fraction, pt), shift)))
            if interior != translated:
                raise InternalCheckError(
                    f"interior identity fails at {pt} for the Gorenstein summand"
                )
    return check_braun_multivariate(witness, height_bound)


def _fiber_entry(cone: ConeOverPolytope, start: QVector, direction: QVector) -> Fraction | None:
    """Least mu with start + mu*direction in the cone, or None if the fiber
    misses the cone; the direction must lie in the cone."""
    entry: Fraction | None = None
    for h in cone.halfspaces:
        hd = sum(a * b for a, b in zip(h, direction))
        hs = sum(a * b for a, b in zip(h, start))
        if hd == 0:
            if hs > 0:
                return None
        else:
            # hd < 0 because the direction lies in the pointed cone.
            bound = hs / -hd
            entry = bound if entry is None or bound > entry else entry
    if entry is None:
        raise PreconditionError("fiber direction is unbounded in the cone", "direction-unbounded")
    return entry


def decomposition_check(
    j: RationalPolytope, k: RationalPolytope, p, height_bound: int
) -> DecompositionReport:
    """Existence and uniqueness of the split z = x + y over the hull cone.

    For every lattice point z of cone(conv(J u K)) up to the height bound,
    the candidate x on the projected lattice envelope of cone(J) is pinned
    down by splitting the projection of z across the two direction spaces;
    z passes when that candidate is an envelope point with z - x in cone(K).
    Exactly-one is structural once the direction spans meet trivially.
    """
    p = qvec(p)
    n = j.dim
    if not j.contains(p):
        raise PreconditionError("projection point must lie in the first summand", "point-not-in-summand")
    dirs_j = direction_basis(j)
    dirs_k = direction_basis(k)
    if rational_rank(list(dirs_j) + list(dirs_k)) != len(dirs_j) + len(dirs_k):
        raise PreconditionError("direction spaces intersect nontrivially", "spans-intersect-in-flat")
    cone_j = cone_over(j)
    cone_k = cone_over(k)
    cone_h = cone_over(hull_union(j, k))
    refinement = lambda_p(p)
    ap = embed_at_height_one(p)
    columns = list(dirs_j) + list(dirs_k)
    n_j = len(dirs_j)
    m = len(columns)

    # The splitting solve and the refined-lattice membership run once per
    # lattice point, so both get precomputed inverses instead of fresh
    # eliminations.
    if m:
        mat_rows = [[col[i] for col in columns] for i in range(n)]
        pivot_rows: list[int] = []
        probe: list = []
        for i in range(n):
            if rational_rank(probe + [mat_rows[i]]) > len(probe):
                probe.append(mat_rows[i])
                pivot_rows.append(i)
            if len(pivot_rows) == m:
                break
        solver = invert_rational([mat_rows[i] for i in pivot_rows])
        other_rows = [i for i in range(n) if i not in pivot_rows]
    basis_inv = invert_rational(
        [[row[i] for row in refinement.scaled_basis.vectors] for i in range(n)]
    )
    r = refinement.r

    def in_refinement(c: tuple) -> bool:
        w = [r * x for x in c]
        if any(x.denominator != 1 for x in w):
            return False
        return all(
            sum(a * b for a, b in zip(row, w)).denominator == 1 for row in basis_inv
        )

    violations = []
    checked = 0
    zero = Fraction(0)
    for t in range(height_bound + 1):
        for z in cone_h.lattice_points_at_height(t):
            checked += 1
            zq = qvec(z)
            projected = [zq[i] - zq[n] * p[i] for i in range(n)]
            if m:
                sol = [
                    sum(solver[a][b] * projected[pivot_rows[b]] for b in range(m))
                    for a in range(m)
                ]
                consistent = all(
                    sum(columns[a][i] * sol[a] for a in range(m)) == projected[i]
                    for i in other_rows
                )
            else:
                sol = []
                consistent = not any(projected)
            if not consistent:
                violations.append((z, 0))
                continue
            c_j = tuple(
                sum(sol[a] * dirs_j[a][coord] for a in range(n_j)) for coord in range(n)
            )
            start = c_j + (zero,)
            mu = _fiber_entry(cone_j, start, ap)
            if mu is None:
                violations.append((z, 0))
                continue
            x = tuple(s + mu * a for s, a in zip(start, ap))
            ok = in_refinement(c_j) and cone_k.contains(
                tuple(a - b for a, b in zip(zq, x))
            )
            if not ok:
                violations.append((z, 0))
    return DecompositionReport(checked, tuple(violations))


def verify_cone_decomposition(witness: FreeSumWitness, height_bound: int) -> DecompositionReport:
    """Run the split check for a classified free or affine free sum."""
    return decomposition_check(witness.j, witness.k, witness.intersection_point, height_bound)
