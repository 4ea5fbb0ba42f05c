# app/solver/binomial.py - Zeta functions of μ₁x^d + μ₂y^m (+ π·h₀(x))
"""
Binomial driver.

O_K² splits (up to measure zero) into the pieces π^k·(O_K^×)², k ∈ N².
On the piece k the binomial becomes π^e·r_k with

    e   = min(d·k₁, e₀ + m·k₂)
    r_k = π^{d·k₁−e}μ₁x^d + π^{e₀+m·k₂−e}ac(μ₂)y^m,

so each piece contributes q^{-|k|}T^e·Z_{r_k}((O_K^×)²), and the unit-square
value only depends on which coefficients of r_k are units. The points k ≠ 0
are summed cone by cone over the Newton polyhedron of x^d + y^m; every ray
becomes geometric past a computable index, which is checked before closing.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from app.config import load_settings
from app.errors import DomainError, HypothesisError, SeriesStabilizationError
from app.field_tower import CharacterSpec
from app.local_ring import LocalNum
from app.newton import Cone, cones_and_lattice, newton_polyhedron
from app.polynomials import BivarPoly
from app.solver.normalize import require_supported_character
from app.spf import ResidueDomain, terminal_spf, unit_square_zeta
from app.zeta_algebra import QMonomial, ZetaRat, geometric_close

Point = Tuple[int, int]
CAP = 1


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class UnitSquareTable:
    """Z_{r}((O_K^×)²) for r = π^i μ₁x^d + π^j ac(μ₂)y^m, i, j ∈ {0, 1}."""

    def __init__(self, mu1: LocalNum, d: int, mu2: LocalNum, m: int, chi: CharacterSpec):
        self.mu1 = mu1
        self.d = d
        self.unit2 = mu2.ac()
        self.m = m
        self.chi = chi
        self._values: Dict[Tuple[int, int], ZetaRat] = {}

    def __call__(self, i: int, j: int) -> ZetaRat:
        key = (i, j)
        if key not in self._values:
            x_term = BivarPoly.monomial(self.mu1.shift(i), self.d, 0)
            y_term = BivarPoly.monomial(self.unit2.shift(j), 0, self.m)
            leading = BivarPoly.zero(self.mu1.field)
            if i == 0:
                leading = leading + BivarPoly.monomial(self.mu1, self.d, 0)
            if j == 0:
                leading = leading + BivarPoly.monomial(self.unit2, 0, self.m)
            self._values[key] = unit_square_zeta(x_term + y_term, self.chi, leading=leading)
        return self._values[key]


@dataclass
class ConeSeriesSpec:
    """Exponent bookkeeping of the binomial on the lattice points of one cone."""

    cone: Optional[Cone]
    d: int
    m: int
    e0: int
    units: UnitSquareTable
    max_terms: int = 64

    def gap(self, v: Point) -> int:
        return self.d * v[0] - self.e0 - self.m * v[1]

    def exponent(self, v: Point) -> int:
        return min(self.d * v[0], self.e0 + self.m * v[1])

    def gap_step(self, step: Point) -> int:
        return self.d * step[0] - self.m * step[1]

    def term(self, v: Point) -> ZetaRat:
        e = self.exponent(v)
        k1 = self.d * v[0] - e
        k2 = self.e0 + self.m * v[1] - e
        return self.units(min(k1, CAP), min(k2, CAP)).mono_mul(QMonomial(v[0] + v[1], e))

    def threshold(self, base: Point, step: Point, start: int) -> Tuple[int, QMonomial]:
        """First index from which the branch of the minimum is fixed, and the ratio."""
        delta = self.gap_step(step)
        gap0 = self.gap(base)
        if delta > 0:
            first = max(start, _ceil_div(CAP - gap0, delta))
            slope = self.m * step[1]
        elif delta < 0:
            first = max(start, _ceil_div(gap0 + CAP, -delta))
            slope = self.d * step[0]
        else:
            first = start
            slope = self.d * step[0]
        return first, QMonomial(step[0] + step[1], slope)


def ray_series(spec: ConeSeriesSpec, base: Point, step: Point, start: int) -> ZetaRat:
    """Σ_{a ≥ start} term(base + a·step), closed after a verified constant ratio."""
    first, rho = spec.threshold(base, step, start)
    if first - start > spec.max_terms:
        raise SeriesStabilizationError(
            f"ray {base} + a*{step} needs {first - start} explicit terms (limit {spec.max_terms})")

    def point(a: int) -> Point:
        return base[0] + a * step[0], base[1] + a * step[1]

    total = ZetaRat.zero(spec.units.mu1.field.q)
    for a in range(start, first):
        total = total + spec.term(point(a))
    head = spec.term(point(first))
    if spec.term(point(first + 1)) != head.mono_mul(rho):
        raise SeriesStabilizationError(f"ray {base} + a*{step} has no constant ratio {rho!r} at a = {first}")
    logging.debug(f"Ray {base} + a*{step}: {first - start} explicit term(s), ratio {rho!r}")
    return total + geometric_close(head, rho, 0)


def cone_series_sum(spec: ConeSeriesSpec) -> ZetaRat:
    """
    Σ over the lattice points of one cone.

    One generator α: Σ_{a≥1} term(aα). Two generators: for each fundamental
    point c, the double sum over c + aα + bβ, where the generator that keeps
    the gap fixed is summed first in closed form.
    """
    cone = spec.cone
    if len(cone.generators) == 1:
        return ray_series(spec, (0, 0), cone.generators[0], 1)
    flat = [i for i, g in enumerate(cone.generators) if spec.gap_step(g) == 0]
    if not flat:
        raise DomainError(f"cone {cone.generators} has no generator along which the gap is constant")
    inner_index = flat[-1]
    outer_index = 1 - inner_index
    inner = cone.generators[inner_index]
    outer = cone.generators[outer_index]
    rho_inner = QMonomial(inner[0] + inner[1], spec.d * inner[0])
    total = ZetaRat.zero(spec.units.mu1.field.q)
    for c in sorted(cone.fundamental):
        starts = cone.start_indices(c)
        s_inner, s_outer = starts[inner_index], starts[outer_index]
        base = (c[0] + s_inner * inner[0], c[1] + s_inner * inner[1])
        for a in (s_outer, s_outer + 1):
            v = (base[0] + a * outer[0], base[1] + a * outer[1])
            w = (v[0] + inner[0], v[1] + inner[1])
            if spec.term(w) != spec.term(v).mono_mul(rho_inner):
                raise SeriesStabilizationError(f"inner series of cone {cone.generators} at {v} is not geometric")
        total = total + geometric_close(ray_series(spec, base, outer, s_outer), rho_inner, 0)
    return total


def binomial_candidate_factors(d: int, m: int) -> List[Tuple[int, int]]:
    """(1,1), plus (d̃ + m̃, d̃·m̃·gcd(d, m)) for d ≥ 2."""
    factors = [(1, 1)]
    if d >= 2:
        g = gcd(d, m)
        factors.append((d // g + m // g, (d // g) * (m // g) * g))
    return factors


def _check_shape(mu1: LocalNum, d: int, mu2: LocalNum, m: int) -> None:
    p = mu1.field.p
    if m < 2:
        raise HypothesisError(f"the y-exponent must be at least 2, got m = {m}")
    if m % p == 0:
        raise HypothesisError(f"p divides m (p = {p}, m = {m})", reason="p divides m")
    if d < 0:
        raise HypothesisError(f"negative x-exponent {d}")
    if not mu1.is_unit():
        raise HypothesisError(f"x-coefficient {mu1!r} is not a unit")
    if mu2.is_zero() or not mu2.is_integral():
        raise HypothesisError(f"y-coefficient {mu2!r} must be a nonzero element of O_K")


def binomial_zeta(mu1: LocalNum, d: int, mu2: LocalNum, m: int, chi: CharacterSpec,
                  max_terms: Optional[int] = None) -> ZetaRat:
    """
    Z of μ₁x^d + μ₂y^m over O_K².

    Examples:
        (1, 3, 1, 2), q = 5 -> denominator within {(1,1), (5,6)}
        (1, 1, 1, m)       -> denominator within {(1,1)}
    """
    _check_shape(mu1, d, mu2, m)
    require_supported_character(chi)
    if d <= 1:
        h = BivarPoly.monomial(mu1, d, 0) + BivarPoly.monomial(mu2, 0, m)
        return terminal_spf(h, ResidueDomain.full(), chi)

    limit = max_terms if max_terms is not None else load_settings().max_explicit_terms
    units = UnitSquareTable(mu1, d, mu2, m, chi)
    e0 = mu2.ord
    polyhedron = newton_polyhedron({(d, 0), (0, m)})
    origin = ConeSeriesSpec(None, d, m, e0, units, limit)
    total = origin.term((0, 0))
    for cone in cones_and_lattice(polyhedron):
        spec = ConeSeriesSpec(cone, d, m, e0, units, limit)
        total = total + cone_series_sum(spec)
    logging.debug(f"Binomial d = {d}, m = {m}, e0 = {e0}: {len(polyhedron.faces)} cone(s) summed")
    return total


def perturbed_binomial_zeta(mu1: LocalNum, d: int, mu2: LocalNum, m: int,
                            h0: Optional[BivarPoly], chi: CharacterSpec) -> ZetaRat:
    """
    Z of h = μ₁x^d + μ₂y^m + π·h₀(x) with ldeg(h₀) ≥ d + 1.

    For d ≥ 2 the perturbation does not change Z and the binomial driver
    answers; for d ≤ 1 the reduction of h is smooth and one terminal
    stationary-phase step on h itself is exact.
    """
    _check_shape(mu1, d, mu2, m)
    field_ = mu1.field
    h0 = h0 if h0 is not None else BivarPoly.zero(field_)
    if not h0.is_zero():
        if not h0.is_x_only():
            raise HypothesisError("the perturbation h0 must be a polynomial in x alone")
        if not h0.is_integral():
            raise HypothesisError("the perturbation h0 must have coefficients in O_K")
        if h0.ldeg() < d + 1:
            raise HypothesisError(f"ldeg(h0) = {h0.ldeg()} < d + 1 = {d + 1}", reason="ldeg violation")
    if d >= 2:
        return binomial_zeta(mu1, d, mu2, m, chi)
    require_supported_character(chi)
    h = BivarPoly.monomial(mu1, d, 0) + BivarPoly.monomial(mu2, 0, m) + h0.scale(LocalNum.pi_power(field_, 1))
    return terminal_spf(h, ResidueDomain.full(), chi)


@dataclass(frozen=True)
class BinomialShape:
    mu1: LocalNum
    d: int
    mu2: LocalNum
    m: int
    h0: BivarPoly


def split_binomial_shape(h: BivarPoly) -> BinomialShape:
    """
    Read μ₁x^d + μ₂y^m + π·h₀(x) off an expanded polynomial.

    The single unit coefficient of the x-part fixes (μ₁, d); every other
    x-coefficient must lie in πO_K.
    """
    if h.has_mixed_terms():
        raise HypothesisError("mixed monomials x^i*y^j are outside the perturbed-binomial class")
    y_terms = h.y_part().terms
    if len(y_terms) != 1:
        raise HypothesisError("expected exactly one pure power of y")
    ((_, m), mu2), = y_terms.items()
    x_part = h.x_part()
    units = [i for (i, _), c in x_part.terms.items() if c.is_unit()]
    if len(units) != 1:
        raise HypothesisError(f"expected exactly one unit coefficient in the x-part, found {len(units)}")
    d = units[0]
    mu1 = x_part.coefficient(d, 0)
    rest = x_part - BivarPoly.monomial(mu1, d, 0)
    if any(c.ord < 1 for c in rest.terms.values()):
        raise HypothesisError("x-coefficients other than the leading unit must lie in πO_K")
    return BinomialShape(mu1, d, mu2, m, rest.div_by_pi_pow(1))
