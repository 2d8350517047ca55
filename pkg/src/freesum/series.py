"""Truncated multivariate Laurent series and Ehrhart-style univariate data.

A series is complete for every monomial whose last exponent (the height) is
between 0 and the truncation bound; the first n exponents may be negative.
Coefficients are exact integers.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .cones import ConeOverPolytope, ShiftedCone
from .errors import InputError, InternalCheckError, TruncationError
from .linalg import solve_linear
from .polytopes import RationalPolytope, denominator, lattice_points_in_dilate

Exponent = tuple[int, ...]


def _pruned(terms: dict[Exponent, int]) -> dict[Exponent, int]:
    return {e: c for e, c in terms.items() if c != 0}


@dataclass(frozen=True)
class TruncatedSeries:
    """Sparse exponent-to-coefficient map, complete up to the height bound."""

    num_vars: int
    height_bound: int
    terms: dict[Exponent, int]

    def __post_init__(self):
        for e in self.terms:
            if len(e) != self.num_vars:
                raise InputError("exponent arity mismatch")
            if not 0 <= e[-1] <= self.height_bound:
                raise InputError("exponent height outside the truncation window")

    @classmethod
    def zero(cls, num_vars: int, height_bound: int) -> TruncatedSeries:
        return cls(num_vars, height_bound, {})

    @classmethod
    def one(cls, num_vars: int, height_bound: int) -> TruncatedSeries:
        return cls(num_vars, height_bound, {(0,) * num_vars: 1})

    @classmethod
    def from_terms(cls, num_vars, height_bound, terms) -> TruncatedSeries:
        return cls(num_vars, height_bound, _pruned(dict(terms)))

    @classmethod
    def indicator(cls, num_vars, height_bound, points) -> TruncatedSeries:
        """Series with coefficient one at each given integer point."""
        return cls(num_vars, height_bound, {tuple(int(x) for x in pt): 1 for pt in points})

    def coefficient(self, exp) -> int:
        return self.terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def has_negative_coefficient(self) -> bool:
        return any(c < 0 for c in self.terms.values())

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    def _check_compatible(self, other: TruncatedSeries) -> None:
        if self.num_vars != other.num_vars:
            raise InputError("series variable counts differ")

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check_compatible(other)
        bound = min(self.height_bound, other.height_bound)
        out: dict[Exponent, int] = {}
        for e, c in list(self.terms.items()) + list(other.terms.items()):
            if e[-1] <= bound:
                out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.num_vars, bound, _pruned(out))

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.num_vars, self.height_bound, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)

    def first_difference(self, other: TruncatedSeries):
        """Lex-smallest exponent where the two series differ, or None."""
        self._check_compatible(other)
        exps = sorted(set(self.terms) | set(other.terms))
        for e in exps:
            if self.coefficient(e) != other.coefficient(e):
                return e, self.coefficient(e), other.coefficient(e)
        return None


@dataclass(frozen=True)
class UnivariateSeries:
    height_bound: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.height_bound + 1:
            raise InputError("univariate series length mismatch")

    def coefficient(self, k: int) -> int:
        return self.coefficients[k]


@dataclass(frozen=True)
class DeltaPolynomial:
    """Numerator of the Ehrhart series over (1 - t^den)^power."""

    coefficients: tuple[int, ...]
    den: int
    power: int


@dataclass(frozen=True)
class QuasiPolynomial:
    """Counting function of lattice points in dilates, one constituent per residue."""

    period: int
    constituents: tuple[tuple[Fraction, ...], ...]

    def evaluate(self, k: int) -> Fraction:
        coeffs = self.constituents[k % self.period]
        return sum((c * k**i for i, c in enumerate(coeffs)), Fraction(0))


@functools.lru_cache(maxsize=512)
def sigma_cone(cone: ConeOverPolytope | ShiftedCone, height_bound: int) -> TruncatedSeries:
    """Generating function of the cone's lattice points up to the height bound."""
    if height_bound < 0:
        raise InputError("height bound must be nonnegative")
    if isinstance(cone, ShiftedCone):
        num_vars = cone.cone.ambient_dim
    else:
        num_vars = cone.ambient_dim
    terms: dict[Exponent, int] = {}
    for t in range(height_bound + 1):
        for pt in cone.lattice_points_at_height(t):
            terms[pt] = 1
    return TruncatedSeries(num_vars, height_bound, terms)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Exact product, computed slice by slice in the height grading."""
    if a.num_vars != b.num_vars:
        raise InputError("series variable counts differ")
    bound = min(a.height_bound, b.height_bound)
    slices_a: dict[int, list[tuple[Exponent, int]]] = {}
    for e, c in a.terms.items():
        slices_a.setdefault(e[-1], []).append((e, c))
    slices_b: dict[int, list[tuple[Exponent, int]]] = {}
    for e, c in b.terms.items():
        slices_b.setdefault(e[-1], []).append((e, c))
    out: dict[Exponent, int] = {}
    for ta, items_a in slices_a.items():
        for tb, items_b in slices_b.items():
            if ta + tb > bound:
                continue
            for ea, ca in items_a:
                for eb, cb in items_b:
                    key = tuple(x + y for x, y in zip(ea, eb))
                    out[key] = out.get(key, 0) + ca * cb
    return TruncatedSeries(a.num_vars, bound, _pruned(out))


def apply_one_minus_monomial(s: TruncatedSeries, exp) -> TruncatedSeries:
    """Multiply by (1 - z^exp); the exponent must have positive height."""
    exp = tuple(int(x) for x in exp)
    if len(exp) != s.num_vars:
        raise InputError("exponent arity mismatch")
    if exp[-1] <= 0:
        raise InputError("monomial must have positive height")
    out = dict(s.terms)
    for e, c in s.terms.items():
        shifted = tuple(x + y for x, y in zip(e, exp))
        if shifted[-1] <= s.height_bound:
            out[shifted] = out.get(shifted, 0) - c
    return TruncatedSeries(s.num_vars, s.height_bound, _pruned(out))


def geometric_series(exp, num_vars: int, height_bound: int) -> TruncatedSeries:
    """Expansion of 1/(1 - z^exp) for an exponent of positive height."""
    exp = tuple(int(x) for x in exp)
    if exp[-1] <= 0:
        raise InputError("geometric series needs positive height")
    terms = {}
    j = 0
    while j * exp[-1] <= height_bound:
        terms[tuple(j * x for x in exp)] = 1
        j += 1
    return TruncatedSeries(num_vars, height_bound, terms)


def specialize_to_univariate(s: TruncatedSeries) -> UnivariateSeries:
    """Sum the coefficients of each height slice."""
    coeffs = [0] * (s.height_bound + 1)
    for e, c in s.terms.items():
        coeffs[e[-1]] += c
    return UnivariateSeries(s.height_bound, tuple(coeffs))


def ehrhart_series(p: RationalPolytope, height_bound: int) -> UnivariateSeries:
    """Counting series of lattice points in integer dilates, by direct counts."""
    coeffs = tuple(len(lattice_points_in_dilate(p, k)) for k in range(height_bound + 1))
    return UnivariateSeries(height_bound, coeffs)


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_pow(a, k: int):
    out = [1]
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def poly_divmod(a, b):
    """Exact division of coefficient lists over the rationals."""
    rem = [Fraction(x) for x in a]
    div = [Fraction(x) for x in b]
    while div and div[-1] == 0:
        div.pop()
    if not div:
        raise InputError("division by the zero polynomial")
    quot = [Fraction(0)] * max(len(rem) - len(div) + 1, 0)
    for i in range(len(rem) - len(div), -1, -1):
        factor = rem[i + len(div) - 1] / div[-1]
        quot[i] = factor
        if factor:
            for j, y in enumerate(div):
                rem[i + j] -= factor * y
    while rem and rem[-1] == 0:
        rem.pop()
    return quot, rem


def delta_polynomial(p: RationalPolytope, height_bound: int) -> DeltaPolynomial:
    """Numerator polynomial of the Ehrhart series.

    Requires the truncation to reach one full period beyond the maximal
    possible numerator degree so the vanishing of the tail is actually
    checked rather than assumed.
    """
    den = denominator(p)
    power = p.affine_dim + 1
    degree_cap = den * power
    if height_bound < degree_cap + den:
        raise TruncationError(
            f"need height bound of at least {degree_cap + den} for this polytope"
        )
    ehr = ehrhart_series(p, height_bound).coefficients
    factor = [0] * (degree_cap + 1)
    for j in range(power + 1):
        factor[den * j] = (-1) ** j * math.comb(power, j)
    prod = poly_mul(list(ehr), factor)[: height_bound + 1]
    if any(c != 0 for c in prod[degree_cap + 1 :]):
        raise InternalCheckError("nonvanishing tail in the numerator computation")
    coeffs = prod[: degree_cap + 1]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return DeltaPolynomial(tuple(coeffs), den, power)


def quasipolynomial(p: RationalPolytope, holdout: int = 2) -> QuasiPolynomial:
    """Interpolated dilate-counting quasi-polynomial, validated on holdouts."""
    den = denominator(p)
    dim = p.affine_dim
    samples_needed = den * (dim + holdout + 1) + den
    counts = [len(lattice_points_in_dilate(p, k)) for k in range(samples_needed + 1)]
    constituents = []
    for r in range(den):
        ks = [r + j * den for j in range(dim + 1)]
        rows = [[Fraction(k) ** i for i in range(dim + 1)] for k in ks]
        coeffs = solve_linear(rows, [counts[k] for k in ks])
        if coeffs is None:
            raise InternalCheckError("interpolation system was singular")
        constituents.append(tuple(coeffs))
        for j in range(dim + 1, dim + holdout + 1):
            k = r + j * den
            value = sum(c * k**i for i, c in enumerate(coeffs))
            if value != counts[k]:
                raise InternalCheckError(f"holdout count mismatch at dilation {k}")
    period = den
    for q in range(1, den + 1):
        if den % q == 0 and all(constituents[r] == constituents[r % q] for r in range(den)):
            period = q
            break
    return QuasiPolynomial(period, tuple(constituents[:period]))
