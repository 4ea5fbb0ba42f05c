# app/spf.py - Stationary phase formula over coset-union domains of O_K^2
"""
One step of the stationary phase formula:

    Z_f(s, χ, D) = v + σ(1 − q^{-1})T/(1 − q^{-1}T) + Σ_{P ∈ S(f, D)} Z over D_P

where v and σ are scaled counts over the reduction D̄ and the residual
integrals sit on the singular points of f̄ in D̄.
"""
import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.errors import DomainError, HypothesisError
from app.field_tower import CharacterSpec, CycloNum, FqConfig, FqElem
from app.local_ring import LocalNum, character_value, lifts_of
from app.polynomials import BivarPoly, ReducedPoly
from app.zeta_algebra import QMonomial, ZetaRat

Point = Tuple[FqElem, FqElem]
Lifting = Callable[[FqElem], LocalNum]


# ============================================================================
# DOMAINS
# ============================================================================

class CoordinateKind(enum.Enum):
    ALL = "all"
    UNITS = "units"
    RESIDUES = "residues"


@dataclass(frozen=True)
class CoordinateSet:
    """All of O_K, its units, or a union of residue classes a + πO_K."""

    kind: CoordinateKind
    residues: FrozenSet[FqElem] = frozenset()

    @classmethod
    def everything(cls) -> "CoordinateSet":
        return cls(CoordinateKind.ALL)

    @classmethod
    def units(cls) -> "CoordinateSet":
        return cls(CoordinateKind.UNITS)

    @classmethod
    def classes(cls, residues: Iterable[FqElem]) -> "CoordinateSet":
        return cls(CoordinateKind.RESIDUES, frozenset(residues))

    def members(self, field: FqConfig) -> List[FqElem]:
        if self.kind is CoordinateKind.ALL:
            return list(field.elements())
        if self.kind is CoordinateKind.UNITS:
            return list(field.units())
        return sorted(self.residues, key=lambda r: r.index)


@dataclass(frozen=True)
class ResidueDomain:
    """D = preimage of D̄ = X̄ × Ȳ under O_K² → F_q²."""

    x: CoordinateSet = field(default_factory=CoordinateSet.everything)
    y: CoordinateSet = field(default_factory=CoordinateSet.everything)

    @classmethod
    def full(cls) -> "ResidueDomain":
        return cls()

    @classmethod
    def unit_square(cls) -> "ResidueDomain":
        return cls(CoordinateSet.units(), CoordinateSet.units())

    @classmethod
    def axis_product(cls, x: CoordinateSet, y: CoordinateSet) -> "ResidueDomain":
        return cls(x, y)

    def points(self, field: FqConfig) -> List[Point]:
        return list(product(self.x.members(field), self.y.members(field)))

    def measure(self, field: FqConfig) -> Fraction:
        return Fraction(len(self.x.members(field)) * len(self.y.members(field)), field.q ** 2)


# ============================================================================
# COUNTS
# ============================================================================

def singular_points(fbar: ReducedPoly, points: Iterable[Point]) -> Set[Point]:
    """
    {P̄ : f̄(P̄) = ∂f̄/∂x(P̄) = ∂f̄/∂y(P̄) = 0} by enumeration.

    Examples:
        y² − x³ over F_3, all of F_3² -> {(0, 0)}
        x³ + y³ over F_3, units       -> {(1, 2), (2, 1)}
    """
    dx, dy = fbar.ddx(), fbar.ddy()
    found = set()
    for x, y in points:
        if fbar.evaluate(x, y).is_zero() and dx.evaluate(x, y).is_zero() and dy.evaluate(x, y).is_zero():
            found.add((x, y))
    return found


def v_sigma(f: BivarPoly, domain: ResidueDomain, chi: CharacterSpec) -> Tuple[CycloNum, CycloNum]:
    """
    The constants v and σ of one expansion step.

    Trivial χ: v = q^{-2}·#{f̄ ≠ 0}, σ = q^{-2}·#{nonsingular zeros}.
    Otherwise: v = q^{-2c}·Σ χ(ac f(P)) over P mod π^c with f̄(P̄) ≠ 0, σ = 0,
    where c = max(1, c_χ).
    """
    field_ = f.field
    q = field_.q
    fbar = f.reduce_mod_pi()
    points = domain.points(field_)
    if chi.is_trivial:
        dx, dy = fbar.ddx(), fbar.ddy()
        nonzero = smooth = 0
        for x, y in points:
            if not fbar.evaluate(x, y).is_zero():
                nonzero += 1
            elif not (dx.evaluate(x, y).is_zero() and dy.evaluate(x, y).is_zero()):
                smooth += 1
        return CycloNum.rational(Fraction(nonzero, q ** 2)), CycloNum.rational(Fraction(smooth, q ** 2))

    c = max(1, chi.conductor)
    total = CycloNum.zero(chi.order)
    for x, y in points:
        if fbar.evaluate(x, y).is_zero():
            continue
        if c == 1:
            total = total + character_value(chi, LocalNum.from_fq(fbar.evaluate(x, y)))
            continue
        for lx in lifts_of(x, c):
            for ly in lifts_of(y, c):
                total = total + character_value(chi, f.evaluate(lx, ly))
    return total / (q ** (2 * c)), CycloNum.zero(chi.order)


# ============================================================================
# EXPANSION STEP
# ============================================================================

@dataclass(frozen=True)
class Residual:
    """Z over P + (πO_K)² of f, written as measure·Z_{integrand} on O_K²."""

    point: Tuple[LocalNum, LocalNum]
    integrand: BivarPoly
    measure: QMonomial = QMonomial(2, 0)


@dataclass(frozen=True)
class SPFOutcome:
    rational_part: ZetaRat
    residuals: Tuple[Residual, ...]


def stationary_terms(q: int, v: CycloNum, sigma: CycloNum) -> ZetaRat:
    """v + σ(1 − q^{-1})T/(1 − q^{-1}T); the σ term is omitted when σ = 0."""
    rational = ZetaRat.constant(q, v)
    if sigma.is_zero():
        return rational
    return rational + ZetaRat(q, {1: sigma * Fraction(q - 1, q)}, [(1, 1)])


def spf_step(f: BivarPoly, domain: ResidueDomain, chi: CharacterSpec,
             lift: Optional[Lifting] = None) -> SPFOutcome:
    """
    Expand Z_f(s, χ, D) once.

    Args:
        f: integral polynomial
        domain: union of cosets of (πO_K)²
        chi: the character
        lift: lifting F_q -> O_K for residual centers (constant digits by default)

    Examples:
        y² − x³, q = 3 -> 2/3 + (2/9)(2/3)T/(1 − T/3), one residual at (0, 0)
    """
    q = f.field.q
    lift = lift or LocalNum.from_fq
    v, sigma = v_sigma(f, domain, chi)
    rational = stationary_terms(q, v, sigma)
    singular = singular_points(f.reduce_mod_pi(), domain.points(f.field))
    residuals = []
    pi = LocalNum.pi_power(f.field, 1)
    for x, y in sorted(singular, key=lambda pt: (pt[0].index, pt[1].index)):
        center = (lift(x), lift(y))
        integrand = f.compose_affine(center[0], pi, center[1], pi)
        residuals.append(Residual(center, integrand))
    if residuals:
        logging.debug(f"SPF step left {len(residuals)} singular class(es)")
    return SPFOutcome(rational, tuple(residuals))


def terminal_spf(f: BivarPoly, domain: ResidueDomain, chi: CharacterSpec) -> ZetaRat:
    """Z_f over D when f̄ has no singular point in D̄."""
    outcome = spf_step(f, domain, chi)
    if outcome.residuals:
        points = ", ".join(f"({p.point[0]!r}, {p.point[1]!r})" for p in outcome.residuals)
        raise HypothesisError(f"reduction has singular points {points} in the domain")
    return outcome.rational_part


# ============================================================================
# UNIT SQUARE
# ============================================================================

def index_zero_on_units(r1: BivarPoly) -> bool:
    """At every P̄ ∈ (F_q^×)² one of r̄₁, ∂r̄₁/∂x, ∂r̄₁/∂y is nonzero."""
    rbar = r1.reduce_mod_pi()
    return not singular_points(rbar, ResidueDomain.unit_square().points(r1.field))


def unit_square_zeta(r: BivarPoly, chi: CharacterSpec, leading: Optional[BivarPoly] = None) -> ZetaRat:
    """
    Z_r(s, χ, (O_K^×)²) through its leading part r₁ ≡ r mod π.

    Raises:
        HypothesisError when r₁ has singular unit points (the leading part
        does not determine the integral) or r − r₁ ∉ πO_K[x, y]
    """
    r1 = r if leading is None else leading
    if leading is not None:
        gap = r - leading
        if any(c.ord < 1 for c in gap.terms.values()):
            raise HypothesisError("r and its leading part differ by a non-multiple of π")
    if not index_zero_on_units(r1):
        raise HypothesisError("leading part has singular points on (F_q^×)^2; unit-square replacement does not apply")
    return terminal_spf(r1, ResidueDomain.unit_square(), chi)


# ============================================================================
# SCALING
# ============================================================================

def scale_rules(chi: CharacterSpec, alpha: LocalNum) -> Tuple[CycloNum, QMonomial]:
    """
    Z_{αf} = χ(ac α)·T^{ord α}·Z_f.

    Examples:
        α = π²                         -> (1, T²)
        α = 2π over F_5, quadratic χ   -> (−1, T)
    """
    if alpha.is_zero():
        raise DomainError("scaling by zero")
    if alpha.ord < 0:
        raise DomainError(f"scaling factor {alpha!r} is not integral")
    return character_value(chi, alpha), QMonomial(0, alpha.ord)


def coordinate_scaling(a1: int, a2: int) -> QMonomial:
    """Measure factor of (x, y) ↦ (π^{a1}x, π^{a2}y)."""
    if a1 < 0 or a2 < 0:
        raise DomainError("coordinate scalings must be nonnegative powers of π")
    return QMonomial(a1 + a2, 0)
