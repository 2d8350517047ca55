"""Classification, product-formula checks, decompositions, converse table."""

from __future__ import annotations

import pytest

from freesum import (
    AFFINE_FREE_SUM,
    FREE_SUM,
    RationalPolytope,
    check_braun_multivariate,
    check_braun_univariate,
    classify_sum,
    cone_over,
    converse_search,
    decompose_sigma,
    decomposition_check,
    envelope_condition_check,
    gorenstein_affine_check,
    hull_union,
    lambda_p,
    lattice_basis_of_span,
    sigma_cone,
    specialize_to_univariate,
    verify_cone_decomposition,
)
from freesum.errors import ClassificationError, PreconditionError
from freesum.linalg import in_pos_hull, qvec
from freesum.series import series_mul

from conftest import F, axis_seg, diamond, poly, segment


def cross_summands():
    j = poly(2, (0, 0), (1, 0))
    k = poly(2, (F(1, 2), -1), (F(1, 2), 1))
    return j, k


def test_hull_union_octahedron():
    octa = hull_union(diamond(3, (0, 1)), axis_seg(3, 2, -1, 1))
    assert len(octa.vertices) == 6


def test_hull_union_idempotent():
    d = diamond()
    assert hull_union(d, d).vertices == d.vertices


def test_hull_union_cross():
    j, k = cross_summands()
    hull = hull_union(j, k)
    assert set(hull.vertices) == {
        (F(0), F(0)),
        (F(1), F(0)),
        (F(1, 2), F(1)),
        (F(1, 2), F(-1)),
    }


def test_classify_octahedron_pair():
    w = classify_sum(diamond(3, (0, 1)), axis_seg(3, 2, -1, 1))
    assert w.kind == FREE_SUM
    assert w.intersection_point == (F(0), F(0), F(0))
    assert w.r == 1
    assert w.factor_exponent == (0, 0, 0, 1)


def test_classify_rejects_skew_lattice_pair():
    j = poly(2, (-1, 0), (1, 0))
    k = poly(2, (-1, -2), (1, 2))
    with pytest.raises(ClassificationError) as err:
        classify_sum(j, k)
    assert err.value.code == "not-complementary"


def test_classify_cross_affine():
    j, k = cross_summands()
    w = classify_sum(j, k)
    assert w.kind == AFFINE_FREE_SUM
    assert w.intersection_point == (F(1, 2), F(0))
    assert w.r == 2
    assert w.factor_exponent == (1, 0, 2)


def test_classify_matches_cone_span_criterion():
    # Equivalent affine criterion: the hull cone's saturated span lattice is
    # the sum of the summand cones' span lattices.
    pairs = [
        cross_summands(),
        (diamond(3, (0, 1)), axis_seg(3, 2, -1, 1)),
        (segment(-2, 3), None),
    ]
    j, k = cross_summands()
    w = classify_sum(j, k)
    hull = hull_union(j, k)
    n1 = j.dim + 1
    span_sum = lattice_basis_of_span(
        [qvec(v) for v in cone_over(j).lattice_span.vectors]
        + [qvec(v) for v in cone_over(k).lattice_span.vectors],
        n1,
    )
    joint_rows = list(cone_over(j).lattice_span.vectors) + list(
        cone_over(k).lattice_span.vectors
    )
    from freesum.linalg import canonical_basis

    generated = canonical_basis(joint_rows, n1)
    assert generated.vectors == cone_over(hull).lattice_span.vectors
    assert span_sum.vectors == cone_over(hull).lattice_span.vectors
    assert w.kind == AFFINE_FREE_SUM


def test_classify_spans_must_meet_in_point():
    j = poly(2, (0, 0), (1, 0))
    k = poly(2, (0, 0), (2, 0))
    with pytest.raises(ClassificationError) as err:
        classify_sum(j, k)
    assert err.value.code == "spans-intersect-in-flat"


def test_classify_disjoint_spans():
    j = poly(2, (0, 0), (1, 0))
    k = poly(2, (0, 1), (1, 1))
    with pytest.raises(ClassificationError) as err:
        classify_sum(j, k)
    assert err.value.code == "spans-disjoint"


def test_classify_intersection_outside():
    j = poly(2, (1, 0), (2, 0))
    k = poly(2, (0, -1), (0, 1))
    with pytest.raises(ClassificationError) as err:
        classify_sum(j, k)
    assert err.value.code == "intersection-point-outside"


def test_classify_point_summands():
    origin = poly(2, (0, 0))
    w = classify_sum(origin, origin)
    assert w.kind == FREE_SUM and w.r == 1


def test_braun_multivariate_octahedron():
    w = classify_sum(diamond(3, (0, 1)), axis_seg(3, 2, -1, 1))
    verdict = check_braun_multivariate(w, 8)
    assert verdict.holds_up_to_bound
    assert verdict.residual.is_zero()


def test_braun_multivariate_cross():
    j, k = cross_summands()
    verdict = check_braun_multivariate(classify_sum(j, k), 6)
    assert verdict.holds_up_to_bound
    assert verdict.factor_exponent == (1, 0, 2)


def test_braun_fails_for_twothirds_pair():
    a = axis_seg(2, 0, 0, F(2, 3))
    b = axis_seg(2, 1, 0, F(2, 3))
    verdict = check_braun_multivariate(classify_sum(a, b), 5)
    assert not verdict.holds_up_to_bound
    assert not verdict.residual.is_zero()
    assert not verdict.residual.has_negative_coefficient()
    by_height = specialize_to_univariate(verdict.residual)
    assert by_height.coefficients[3] == 1
    assert by_height.coefficients[:3] == (0, 0, 0)


def test_braun_univariate_octahedron():
    verdict = check_braun_univariate(diamond(3, (0, 1)), axis_seg(3, 2, -1, 1), 8)
    assert verdict.series_holds and verdict.delta_holds
    assert verdict.delta_lhs == (1, 3, 3, 1)


def test_braun_univariate_twothirds_mismatch():
    a = axis_seg(2, 0, 0, F(2, 3))
    b = axis_seg(2, 1, 0, F(2, 3))
    verdict = check_braun_univariate(a, b, 8)
    assert not verdict.series_holds
    assert verdict.first_mismatch == (3, 6, 5)
    assert not verdict.delta_holds


def test_braun_univariate_rational_with_lattice_dual():
    # [-1/3, 1] has an integral dual, so both identities hold.
    a = axis_seg(2, 0, F(-1, 3), 1)
    b = axis_seg(2, 1, -1, 1)
    verdict = check_braun_univariate(a, b, 10)
    assert verdict.series_holds and verdict.delta_holds


def test_braun_univariate_top_polygon():
    # Non-reflexive lattice polygon with a lattice-polyhedron dual.
    top = poly(3, (-1, 0, 0), (1, 0, 0), (3, 1, 0), (-3, 1, 0))
    b = axis_seg(3, 2, -1, 1)
    verdict = check_braun_univariate(top, b, 8)
    assert verdict.series_holds and verdict.delta_holds


def test_decompose_sigma_matches_enumeration():
    total = decompose_sigma(axis_seg(2, 0, -2, 3), axis_seg(2, 1, -1, 1), 8)
    direct = sigma_cone(cone_over(hull_union(axis_seg(2, 0, -2, 3), axis_seg(2, 1, -1, 1))), 8)
    assert total == direct


def test_decompose_sigma_single_layer_is_braun_product():
    p = axis_seg(2, 0, -1, 1)
    k = axis_seg(2, 1, 0, F(2, 3))
    total = decompose_sigma(p, k, 6)
    w = classify_sum(p, k)
    product = series_mul(sigma_cone(cone_over(p), 6), sigma_cone(cone_over(k), 6))
    from freesum import apply_one_minus_monomial

    assert total == apply_one_minus_monomial(product, w.factor_exponent)


def test_decompose_sigma_where_braun_fails():
    a = axis_seg(2, 0, 0, F(2, 3))
    b = axis_seg(2, 1, 0, F(2, 3))
    total = decompose_sigma(a, b, 5)
    direct = sigma_cone(cone_over(hull_union(a, b)), 5)
    assert total == direct
    assert not check_braun_multivariate(classify_sum(a, b), 5).holds_up_to_bound


def test_converse_table_rows():
    rows = [
        (diamond(3, (0, 1)), axis_seg(3, 2, -1, 1), (True, True, True)),
        (axis_seg(2, 0, 0, F(2, 3)), axis_seg(2, 1, 0, F(2, 3)), (False, False, False)),
        (axis_seg(2, 0, -2, 3), axis_seg(2, 1, -1, 1), (False, True, True)),
    ]
    for a, b, expected in rows:
        report = converse_search(a, b, 10)
        assert (
            report.dual_p_lattice,
            report.dual_q_lattice,
            report.braun_holds_up_to_bound,
        ) == expected


def test_converse_failure_has_counterexample():
    report = converse_search(axis_seg(2, 0, 0, F(2, 3)), axis_seg(2, 1, 0, F(2, 3)), 10)
    assert report.counterexample is not None
    exp, lhs, rhs = report.counterexample
    assert lhs == 1 and rhs == 0


def test_envelope_condition_cross():
    j, _ = cross_summands()
    assert envelope_condition_check(j, (F(1, 2), F(0)), 6).holds


def test_envelope_condition_quarter_segment_witness():
    result = envelope_condition_check(segment(F(1, 4), F(3, 4)), (F(1, 2),), 6)
    assert not result.holds
    assert result.witness == (F(1, 2), F(2))


def test_envelope_condition_diamond():
    assert envelope_condition_check(diamond(), (F(0), F(0)), 6).holds


def test_envelope_condition_soundness_for_braun():
    # Whenever the envelope condition holds, the product formula must hold.
    pairs = [
        cross_summands(),
        (diamond(3, (0, 1)), axis_seg(3, 2, -1, 1)),
        (axis_seg(2, 0, 0, F(2, 3)), axis_seg(2, 1, 0, F(2, 3))),
        (
            poly(2, (0, 0), (1, 0)),
            poly(2, (F(1, 3), -1), (F(1, 3), 1)),
        ),
    ]
    for j, k in pairs:
        w = classify_sum(j, k)
        condition = envelope_condition_check(j, w.intersection_point, 8)
        verdict = check_braun_multivariate(w, 8)
        if condition.holds:
            assert verdict.holds_up_to_bound


def test_gorenstein_affine_cross():
    j, k = cross_summands()
    verdict = gorenstein_affine_check(j, k, 8)
    assert verdict.holds_up_to_bound
    assert verdict.factor_exponent == (1, 0, 2)


def test_gorenstein_affine_center_mismatch():
    j = poly(2, (0, 0), (1, 0))
    k = poly(2, (F(1, 3), -1), (F(1, 3), 1))
    with pytest.raises(PreconditionError) as err:
        gorenstein_affine_check(j, k, 6)
    assert err.value.code == "gorenstein-center-mismatch"
    # The raw affine check at the actual intersection point fails instead.
    w = classify_sum(j, k)
    assert not envelope_condition_check(j, w.intersection_point, 6).holds
    assert not check_braun_multivariate(w, 6).holds_up_to_bound


def test_gorenstein_affine_reduces_to_reflexive_case():
    verdict = gorenstein_affine_check(diamond(3, (0, 1)), axis_seg(3, 2, -1, 1), 6)
    assert verdict.holds_up_to_bound
    assert verdict.factor_exponent == (0, 0, 0, 1)


def test_gorenstein_affine_triangle():
    tri = poly(3, (0, 0, 0), (1, 0, 0), (0, 1, 0))
    k = RationalPolytope.from_points(
        3, [(F(1, 3), F(1, 3), -1), (F(1, 3), F(1, 3), 1)]
    )
    verdict = gorenstein_affine_check(tri, k, 7)
    assert verdict.holds_up_to_bound
    assert verdict.factor_exponent == (1, 1, 0, 3)


def test_braun_specialization_commutes():
    from freesum import ehrhart_series
    from freesum.series import poly_mul

    pairs = [
        (diamond(3, (0, 1)), axis_seg(3, 2, -1, 1)),
        (axis_seg(2, 0, 0, F(2, 3)), axis_seg(2, 1, 0, F(2, 3))),
        (axis_seg(2, 0, -2, 3), axis_seg(2, 1, -1, 1)),
    ]
    bound = 7
    for a, b in pairs:
        w = classify_sum(a, b)
        hull = hull_union(a, b)
        lhs = sigma_cone(cone_over(hull), bound)
        assert specialize_to_univariate(lhs).coefficients == ehrhart_series(hull, bound).coefficients
        from freesum import apply_one_minus_monomial

        product = series_mul(sigma_cone(cone_over(a), bound), sigma_cone(cone_over(b), bound))
        rhs = apply_one_minus_monomial(product, w.factor_exponent)
        ea = ehrhart_series(a, bound).coefficients
        eb = ehrhart_series(b, bound).coefficients
        conv = poly_mul(list(ea), list(eb))[: bound + 1]
        shift = w.factor_exponent[-1]
        expected = tuple(
            conv[t] - (conv[t - shift] if t >= shift else 0) for t in range(bound + 1)
        )
        assert specialize_to_univariate(rhs).coefficients == expected


def test_decomposition_check_octahedron():
    w = classify_sum(diamond(3, (0, 1)), axis_seg(3, 2, -1, 1))
    report = verify_cone_decomposition(w, 6)
    assert report.ok
    assert report.points_checked > 100


def test_decomposition_check_affine_cross():
    j, k = cross_summands()
    report = verify_cone_decomposition(classify_sum(j, k), 6)
    assert report.ok


def test_decomposition_check_point_summands():
    origin = poly(2, (0, 0))
    report = verify_cone_decomposition(classify_sum(origin, origin), 5)
    assert report.ok
    assert report.points_checked == 6


def test_decomposition_check_forced_counterexample():
    j = poly(2, (-1, 0), (1, 0))
    k = poly(2, (-1, -2), (1, 2))
    report = decomposition_check(j, k, (F(0), F(0)), 3)
    assert ((1, 1, 1), 0) in report.violations
    cone_hull = cone_over(hull_union(j, k))
    assert cone_hull.contains((1, 1, 1))


def test_decomposition_check_matches_bruteforce():
    """Candidate-splitting route against literal envelope enumeration.

    The brute-force side projects every lattice point of cone(J) (heights up
    to T + r - 1), deduplicates, and counts translates containing each hull
    point via the generator representation of cone(K).
    """
    from freesum.cones import epsilon_project

    cases = [
        (poly(2, (0, 0), (1, 0)), poly(2, (F(1, 2), -1), (F(1, 2), 1)), (F(1, 2), F(0))),
        (segment(-2, 3), None, None),
        (axis_seg(2, 0, 0, F(2, 3)), axis_seg(2, 1, -1, 1), (F(0), F(0))),
        (poly(2, (0, 0), (1, 0)), poly(2, (F(1, 3), -1), (F(1, 3), 1)), (F(1, 3), F(0))),
    ]
    for j, k, p in cases:
        if k is None:
            continue
        bound = 5
        cone_j = cone_over(j)
        cone_k = cone_over(k)
        hull_cone = cone_over(hull_union(j, k))
        r = lambda_p(p).r
        candidates = set()
        for t in range(bound + r):
            for pt in cone_j.lattice_points_at_height(t):
                candidates.add(epsilon_project(cone_j, pt, p))
        gens_k = cone_k.generators
        report = decomposition_check(j, k, p, bound)
        expected_violations = []
        checked = 0
        for t in range(bound + 1):
            for z in hull_cone.lattice_points_at_height(t):
                checked += 1
                zq = qvec(z)
                count = sum(
                    1
                    for x in candidates
                    if in_pos_hull(tuple(a - b for a, b in zip(zq, x)), gens_k)
                )
                if count != 1:
                    expected_violations.append((z, count))
        assert report.points_checked == checked
        assert sorted(v[0] for v in report.violations) == sorted(
            v[0] for v in expected_violations
        )
