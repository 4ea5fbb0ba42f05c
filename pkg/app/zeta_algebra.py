# app/zeta_algebra.py - Rational functions in T = q^{-s} with factored denominators
"""
ZetaRat = N(T) / ∏(1 − q^{-a}T^b).

The numerator is a polynomial in T with Q(ζ_N) coefficients (q is numeric,
so q^{-a} folds into the coefficient). The denominator is a sorted
multiset of (a, b) with a ≥ 1 and b ≥ 1 and is never expanded.
"""
import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from app.errors import DivergentSeriesError, DomainError
from app.field_tower import CycloNum

Factor = Tuple[int, int]
Scalar = Union[CycloNum, int, Fraction]


@dataclass(frozen=True)
class QMonomial:
    """q^{-a}·T^b."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise DomainError(f"QMonomial exponents must be nonnegative, got ({self.a}, {self.b})")

    def __mul__(self, other: "QMonomial") -> "QMonomial":
        return QMonomial(self.a + other.a, self.b + other.b)

    def __pow__(self, n: int) -> "QMonomial":
        return QMonomial(self.a * n, self.b * n)

    def q_part(self, q: int) -> Fraction:
        return Fraction(1, q ** self.a)

    def is_one(self) -> bool:
        return self.a == 0 and self.b == 0

    def __repr__(self) -> str:
        return f"q^-{self.a}*T^{self.b}"


ONE = QMonomial(0, 0)


# ============================================================================
# NUMERATOR POLYNOMIALS
# ============================================================================

Poly = Dict[int, CycloNum]


def _clean(poly: Mapping[int, CycloNum]) -> Poly:
    return {k: v for k, v in poly.items() if not v.is_zero()}


def _poly_add(u: Poly, v: Poly) -> Poly:
    acc = dict(u)
    for k, c in v.items():
        acc[k] = acc[k] + c if k in acc else c
    return _clean(acc)


def _poly_mul(u: Poly, v: Poly) -> Poly:
    acc: Poly = {}
    for i, x in u.items():
        for j, y in v.items():
            acc[i + j] = acc[i + j] + x * y if i + j in acc else x * y
    return _clean(acc)


def _factor_poly(q: int, factor: Factor) -> Poly:
    a, b = factor
    return {0: CycloNum.one(), b: CycloNum.rational(Fraction(-1, q ** a))}


def _divide_by_factor(poly: Poly, q: int, factor: Factor) -> Optional[Poly]:
    """Exact quotient poly / (1 − q^{-a}T^b), or None if it leaves a remainder."""
    if not poly:
        return {}
    a, b = factor
    ratio = Fraction(1, q ** a)
    top = max(poly)
    if top < b:
        return None
    zero = CycloNum.zero()
    quotient: Poly = {}
    for k in range(top - b + 1):
        value = poly.get(k, zero)
        if k - b in quotient:
            value = value + quotient[k - b] * ratio
        if not value.is_zero():
            quotient[k] = value
    for k in range(top - b + 1, top + 1):
        rest = poly.get(k, zero)
        if k - b in quotient:
            rest = rest + quotient[k - b] * ratio
        if not rest.is_zero():
            return None
    return quotient


def _multiset_minus(u: Sequence[Factor], v: Sequence[Factor]) -> List[Factor]:
    return sorted((Counter(u) - Counter(v)).elements(), key=_factor_key)


def _factor_key(factor: Factor) -> Tuple[int, int]:
    return factor[1], factor[0]


# ============================================================================
# RATIONAL FUNCTIONS
# ============================================================================

class ZetaRat:
    """An exact rational function of T over Q(ζ_N) with numeric q."""

    __slots__ = ("q", "numerator", "denominator")

    def __init__(self, q: int, numerator: Optional[Mapping[int, CycloNum]] = None,
                 denominator: Iterable[Factor] = ()):
        self.q = q
        self.numerator: Poly = _clean(numerator or {})
        factors = [(int(a), int(b)) for a, b in denominator]
        for a, b in factors:
            if a < 1 or b < 1:
                raise DomainError(f"denominator factor (1 - q^-{a} T^{b}) needs a >= 1 and b >= 1")
        self.denominator: Tuple[Factor, ...] = tuple(sorted(factors, key=_factor_key))

    # --- constructors ---

    @classmethod
    def zero(cls, q: int) -> "ZetaRat":
        return cls(q)

    @classmethod
    def one(cls, q: int) -> "ZetaRat":
        return cls(q, {0: CycloNum.one()})

    @classmethod
    def constant(cls, q: int, value: Scalar) -> "ZetaRat":
        return cls(q, {0: CycloNum.coerce(value)})

    @classmethod
    def monomial(cls, q: int, value: Scalar, mono: QMonomial) -> "ZetaRat":
        return cls(q, {mono.b: CycloNum.coerce(value) * mono.q_part(q)})

    @classmethod
    def from_factor(cls, q: int, factor: Factor) -> "ZetaRat":
        """The polynomial 1 − q^{-a}T^b itself."""
        return cls(q, _factor_poly(q, factor))

    # --- predicates ---

    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def order(self) -> int:
        """Smallest N with every coefficient in Q(ζ_N)."""
        return reduce(lcm, (c.order for c in self.numerator.values()), 1)

    def _same_q(self, other: "ZetaRat") -> None:
        if other.q != self.q:
            raise DomainError(f"cannot combine zeta functions over q = {self.q} and q = {other.q}")

    # --- arithmetic ---

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            other = ZetaRat.constant(self.q, other)
        if not isinstance(other, ZetaRat):
            return NotImplemented
        self._same_q(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        common = Counter(self.denominator) | Counter(other.denominator)
        lcd = list(common.elements())
        left = self._lift_to(lcd)
        right = other._lift_to(lcd)
        return ZetaRat(self.q, _poly_add(left, right), lcd)

    __radd__ = __add__

    def _lift_to(self, lcd: Sequence[Factor]) -> Poly:
        poly = self.numerator
        for factor in _multiset_minus(lcd, self.denominator):
            poly = _poly_mul(poly, _factor_poly(self.q, factor))
        return poly

    def __neg__(self) -> "ZetaRat":
        return ZetaRat(self.q, {k: -c for k, c in self.numerator.items()}, self.denominator)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloNum)):
            other = ZetaRat.constant(self.q, other)
        if not isinstance(other, ZetaRat):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QMonomial):
            return self.mono_mul(other)
        if isinstance(other, (int, Fraction, CycloNum)):
            return self.scalar_mul(other)
        if not isinstance(other, ZetaRat):
            return NotImplemented
        self._same_q(other)
        return ZetaRat(self.q, _poly_mul(self.numerator, other.numerator),
                       self.denominator + other.denominator)

    __rmul__ = __mul__

    def scalar_mul(self, value: Scalar) -> "ZetaRat":
        value = CycloNum.coerce(value)
        return ZetaRat(self.q, {k: c * value for k, c in self.numerator.items()}, self.denominator)

    def mono_mul(self, mono: QMonomial) -> "ZetaRat":
        scale = mono.q_part(self.q)
        return ZetaRat(self.q, {k + mono.b: c * scale for k, c in self.numerator.items()},
                       self.denominator)

    def divide_by_factor(self, factor: Factor) -> "ZetaRat":
        """Append (1 − q^{-a}T^b) to the denominator."""
        return ZetaRat(self.q, self.numerator, self.denominator + (factor,))

    # --- canonical form ---

    def simplify(self) -> "ZetaRat":
        """Cancel every denominator factor that divides the numerator exactly."""
        if self.is_zero():
            return ZetaRat.zero(self.q)
        numerator = self.numerator
        kept: List[Factor] = []
        for factor in self.denominator:
            quotient = _divide_by_factor(numerator, self.q, factor)
            if quotient is None:
                kept.append(factor)
            else:
                numerator = quotient
        return ZetaRat(self.q, numerator, kept)

    def is_reduced(self) -> bool:
        """
        True when no root of the denominator is a root of the numerator.

        Whole-factor trial division can leave a common factor behind, e.g.
        (1 + q^{-1}T) / (1 − q^{-2}T²). Coefficients in Q(ζ_N) are replaced by
        the norm of the numerator (its resultant against Φ_N), which has a
        root in common with the rational denominator exactly when the
        numerator does.
        """
        if self.is_zero() or not self.denominator:
            return True
        t, z = sympy.Symbol("T"), sympy.Symbol("z")
        order = self.order
        numerator = 0
        for k, c in self.numerator.items():
            for i, r in enumerate(c.embed(order).coeffs):
                numerator += sympy.Rational(r.numerator, r.denominator) * z ** i * t ** k
        if numerator.has(z):
            numerator = sympy.resultant(numerator, sympy.cyclotomic_poly(order, z), z)
        denominator = 1
        for a, b in self.denominator:
            denominator *= 1 - sympy.Rational(1, self.q ** a) * t ** b
        return sympy.Poly(sympy.gcd(numerator, denominator), t).degree() == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CycloNum)):
            other = ZetaRat.constant(self.q, other)
        if not isinstance(other, ZetaRat):
            return NotImplemented
        if other.q != self.q:
            return False
        left = self.numerator
        for factor in _multiset_minus(other.denominator, self.denominator):
            left = _poly_mul(left, _factor_poly(self.q, factor))
        right = other.numerator
        for factor in _multiset_minus(self.denominator, other.denominator):
            right = _poly_mul(right, _factor_poly(self.q, factor))
        return not _poly_add(left, {k: -c for k, c in right.items()})

    __hash__ = None

    # --- evaluation ---

    def series(self, terms: int) -> List[CycloNum]:
        """Taylor coefficients of T^0 .. T^{terms-1} at T = 0."""
        coeffs = [CycloNum.zero() for _ in range(terms)]
        for k, c in self.numerator.items():
            if k < terms:
                coeffs[k] = coeffs[k] + c
        for a, b in self.denominator:
            ratio = Fraction(1, self.q ** a)
            for k in range(b, terms):
                if not coeffs[k - b].is_zero():
                    coeffs[k] = coeffs[k] + coeffs[k - b] * ratio
        return coeffs

    def evaluate(self, t0: Fraction) -> CycloNum:
        """Exact value at T = t0."""
        t0 = Fraction(t0)
        value = CycloNum.zero()
        for k, c in self.numerator.items():
            value = value + c * t0 ** k
        denominator = Fraction(1)
        for a, b in self.denominator:
            denominator *= 1 - Fraction(1, self.q ** a) * t0 ** b
        if denominator == 0:
            raise DomainError(f"T = {t0} is a zero of the denominator")
        return value / denominator

    def poles(self) -> "PoleReport":
        return poles(self)

    # --- serialization ---

    def to_json(self) -> dict:
        """Canonical JSON: numerator terms by T-degree, factors by (b, a)."""
        order = self.order
        return {
            "order": order,
            "numerator": [[c.to_json(order), 0, k] for k, c in sorted(self.numerator.items())],
            "denominator": [[a, b] for a, b in self.denominator],
        }

    @classmethod
    def from_json(cls, q: int, data: Mapping) -> "ZetaRat":
        order = int(data.get("order", 1))
        numerator: Poly = {}
        for coeffs, a, b in data["numerator"]:
            term = CycloNum.from_json(order, coeffs) * Fraction(1, q ** int(a))
            numerator[int(b)] = numerator[int(b)] + term if int(b) in numerator else term
        return cls(q, numerator, [tuple(f) for f in data["denominator"]])

    def __repr__(self) -> str:
        num = " + ".join(f"({c!r})*T^{k}" for k, c in sorted(self.numerator.items())) or "0"
        if not self.denominator:
            return num
        den = "*".join(f"(1 - {self.q}^-{a}*T^{b})" for a, b in self.denominator)
        return f"[{num}] / [{den}]"


# ============================================================================
# POLES
# ============================================================================

@dataclass(frozen=True)
class PoleEntry:
    """Factor (1 − q^{-a}T^b): poles at s = −a/b + (2πi/log q)·(k/b), k ∈ Z."""

    a: int
    b: int
    multiplicity: int = 1

    @property
    def real_part(self) -> Fraction:
        return Fraction(-self.a, self.b)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "multiplicity": self.multiplicity,
                "real_part": str(self.real_part),
                "imaginary_step": f"2*pi*i/(log q)/{self.b}"}


@dataclass(frozen=True)
class PoleReport:
    entries: Tuple[PoleEntry, ...] = ()

    @classmethod
    def from_factors(cls, factors: Iterable[Factor]) -> "PoleReport":
        counts = Counter((int(a), int(b)) for a, b in factors)
        ordered = sorted(counts, key=_factor_key)
        return cls(tuple(PoleEntry(a, b, counts[(a, b)]) for a, b in ordered))

    @property
    def real_parts(self) -> frozenset:
        return frozenset(e.real_part for e in self.entries)

    def factors(self) -> List[Factor]:
        return [(e.a, e.b) for e in self.entries]

    def to_json(self) -> List[dict]:
        return [e.to_json() for e in self.entries]


def poles(z: ZetaRat) -> PoleReport:
    """
    One entry per distinct denominator factor of Z.

    Examples:
        {(1,1),(5,6)} -> real parts {−1, −5/6}
        {(2,2)}       -> real part −1
    """
    return PoleReport.from_factors(z.denominator)


# ============================================================================
# OPERATIONS
# ============================================================================

def geometric_close(c: ZetaRat, rho: QMonomial, a0: int) -> ZetaRat:
    """
    Σ_{a ≥ a0} C·ρ^a = C·ρ^{a0} / (1 − ρ).

    Raises:
        DivergentSeriesError if ρ has no q-decay (a = 0); denominator factors
        1 − q^{-a}T^b need a ≥ 1

    Examples:
        C = 1, ρ = (1,1), a0 = 1 -> q^{-1}T/(1 − q^{-1}T)
    """
    if a0 < 0:
        raise DomainError(f"start index must be >= 0, got {a0}")
    if rho.a == 0:
        raise DivergentSeriesError(f"series with ratio {rho!r} has no q-decay: "
                                   "denominator factors (a, b) require a >= 1")
    head = c.mono_mul(rho ** a0)
    if rho.b == 0:
        return head.scalar_mul(Fraction(c.q ** rho.a, c.q ** rho.a - 1))
    return head.divide_by_factor((rho.a, rho.b))


def series_expand(z: ZetaRat, order: int) -> List[CycloNum]:
    """
    Coefficients of T^0 .. T^order.

    Examples:
        (1 − 1/5)/(1 − T/5), order 2 -> [4/5, 4/25, 4/125]
    """
    if order < 0:
        raise DomainError(f"expansion order must be >= 0, got {order}")
    return z.series(order + 1)


class ZetaOp(enum.Enum):
    ADD = "add"
    SCALAR_MUL = "scalar_mul"
    MONO_MUL = "mono_mul"
    SIMPLIFY = "simplify"
    EQ = "eq"


def zr_ops(u: ZetaRat, v, op: ZetaOp):
    """
    Dispatch one rational-function operation.

    v is a ZetaRat for ADD and EQ, a scalar for SCALAR_MUL, a QMonomial for
    MONO_MUL and ignored for SIMPLIFY.
    """
    if op is ZetaOp.ADD:
        return u + v
    if op is ZetaOp.SCALAR_MUL:
        return u.scalar_mul(v)
    if op is ZetaOp.MONO_MUL:
        return u.mono_mul(v)
    if op is ZetaOp.SIMPLIFY:
        return u.simplify()
    if op is ZetaOp.EQ:
        return u == v
    raise DomainError(f"unknown zeta operation {op}")
