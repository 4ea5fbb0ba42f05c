# app/polynomials.py - Bivariate polynomials over K, factored curves and tail forms
"""
Polynomial layer of the engine:
- BivarPoly: Σ c_ij x^i y^j with LocalNum coefficients
- ReducedPoly: the reduction f̄ over F_q used by every enumeration
- FactoredCurve: y^m − γ₀∏(x − γᵢ)^{nᵢ} as root data
- TailFactorForm: scalar·∏(π^u x − c)^k + δ·y^m, the state the
  superelliptic recursion rewrites without ever re-factoring
"""
import enum
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from app.errors import DomainError, HypothesisError, NonIntegralError
from app.field_tower import FqConfig, FqElem
from app.local_ring import ORD_INFINITY, LocalNum

Monomial = Tuple[int, int]


# ============================================================================
# BIVARIATE POLYNOMIALS OVER K
# ============================================================================

class BivarPoly:
    """Σ c_ij x^i y^j; zero coefficients are never stored."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FqConfig, terms: Optional[Mapping[Monomial, LocalNum]] = None):
        self.field = field
        self.terms: Dict[Monomial, LocalNum] = {}
        if terms:
            for mono, c in terms.items():
                if not c.is_zero():
                    self.terms[mono] = c

    @classmethod
    def zero(cls, field: FqConfig) -> "BivarPoly":
        return cls(field)

    @classmethod
    def constant(cls, c: LocalNum) -> "BivarPoly":
        return cls(c.field, {(0, 0): c})

    @classmethod
    def monomial(cls, coeff: LocalNum, i: int, j: int) -> "BivarPoly":
        return cls(coeff.field, {(i, j): coeff})

    @classmethod
    def x(cls, field: FqConfig) -> "BivarPoly":
        return cls(field, {(1, 0): LocalNum.one(field)})

    @classmethod
    def y(cls, field: FqConfig) -> "BivarPoly":
        return cls(field, {(0, 1): LocalNum.one(field)})

    # --- structure ---

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def coefficient(self, i: int, j: int) -> LocalNum:
        return self.terms.get((i, j), LocalNum.zero(self.field))

    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.terms.values())

    def is_x_only(self) -> bool:
        return all(j == 0 for _, j in self.terms)

    def ldeg(self) -> int:
        """Lowest x-degree of a univariate polynomial in x."""
        if not self.is_x_only():
            raise DomainError("ldeg is defined for polynomials in x alone")
        if not self.terms:
            raise DomainError("ldeg of the zero polynomial")
        return min(i for i, _ in self.terms)

    def has_mixed_terms(self) -> bool:
        return any(i and j for i, j in self.terms)

    def x_part(self) -> "BivarPoly":
        """Terms free of y (constant included)."""
        return BivarPoly(self.field, {m: c for m, c in self.terms.items() if m[1] == 0})

    def y_part(self) -> "BivarPoly":
        """Terms that are pure powers y^j with j ≥ 1."""
        return BivarPoly(self.field, {m: c for m, c in self.terms.items() if m[0] == 0 and m[1] > 0})

    # --- arithmetic ---

    def _coerce(self, other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, LocalNum):
            return BivarPoly.constant(other)
        if isinstance(other, int):
            return BivarPoly.constant(LocalNum.from_int(self.field, other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            acc[mono] = acc[mono] + c if mono in acc else c
        return BivarPoly(self.field, acc)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (LocalNum, int)):
            return self.scale(other if isinstance(other, LocalNum) else LocalNum.from_int(self.field, other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: Dict[Monomial, LocalNum] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                mono = (i1 + i2, j1 + j2)
                acc[mono] = acc[mono] + c1 * c2 if mono in acc else c1 * c2
        return BivarPoly(self.field, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivarPoly":
        if n < 0:
            raise DomainError("negative powers of polynomials are not polynomials")
        result = BivarPoly.constant(LocalNum.one(self.field))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: LocalNum) -> "BivarPoly":
        return BivarPoly(self.field, {m: c * v for m, v in self.terms.items()})

    def div_by_pi_pow(self, e: int) -> "BivarPoly":
        return BivarPoly(self.field, {m: c.div_by_pi_pow(e) for m, c in self.terms.items()})

    # --- reductions and calculus ---

    def _require_integral(self, what: str) -> None:
        for mono, c in self.terms.items():
            if not c.is_integral():
                raise DomainError(f"{what} of a non-integral polynomial (coefficient of x^{mono[0]}y^{mono[1]} is {c})")

    def reduce_mod_pi(self) -> "ReducedPoly":
        self._require_integral("reduction mod π")
        return ReducedPoly(self.field, {m: c.residue() for m, c in self.terms.items()})

    def reduce_mod_pi_pow(self, c: int) -> "BivarPoly":
        self._require_integral(f"reduction mod π^{c}")
        return BivarPoly(self.field, {m: v.reduce_mod(c) for m, v in self.terms.items()})

    def ddx(self) -> "BivarPoly":
        acc = {}
        for (i, j), c in self.terms.items():
            if i:
                acc[(i - 1, j)] = LocalNum(self.field, {e: v * i for e, v in c.terms})
        return BivarPoly(self.field, acc)

    def ddy(self) -> "BivarPoly":
        acc = {}
        for (i, j), c in self.terms.items():
            if j:
                acc[(i, j - 1)] = LocalNum(self.field, {e: v * j for e, v in c.terms})
        return BivarPoly(self.field, acc)

    def evaluate(self, x: LocalNum, y: LocalNum) -> LocalNum:
        xpow: Dict[int, LocalNum] = {0: LocalNum.one(self.field)}
        ypow: Dict[int, LocalNum] = {0: LocalNum.one(self.field)}
        total = LocalNum.zero(self.field)
        for (i, j), c in self.terms.items():
            for powers, base, n in ((xpow, x, i), (ypow, y, j)):
                if n not in powers:
                    powers[n] = base ** n
            total = total + c * xpow[i] * ypow[j]
        return total

    def compose_affine(self, x_shift: LocalNum, x_scale: LocalNum,
                       y_shift: LocalNum, y_scale: LocalNum) -> "BivarPoly":
        """Substitute x ↦ x_shift + x_scale·x and y ↦ y_shift + y_scale·y."""
        big_x = BivarPoly.constant(x_shift) + BivarPoly.monomial(x_scale, 1, 0)
        big_y = BivarPoly.constant(y_shift) + BivarPoly.monomial(y_scale, 0, 1)
        xpow: Dict[int, BivarPoly] = {}
        ypow: Dict[int, BivarPoly] = {}
        total = BivarPoly.zero(self.field)
        for (i, j), c in self.terms.items():
            if i not in xpow:
                xpow[i] = big_x ** i
            if j not in ypow:
                ypow[j] = big_y ** j
            total = total + (xpow[i] * ypow[j]).scale(c)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda m: (m[1], m[0])):
            mono = "*".join(s for s in (_power("x", i), _power("y", j)) if s)
            coeff = self.terms[(i, j)]
            if not mono:
                parts.append(f"({coeff!r})")
            elif coeff == LocalNum.one(self.field):
                parts.append(mono)
            else:
                parts.append(f"({coeff!r})*{mono}")
        return " + ".join(parts)


def _power(symbol: str, n: int) -> str:
    if n == 0:
        return ""
    return symbol if n == 1 else f"{symbol}^{n}"


class ReducedPoly:
    """A polynomial over F_q in x, y."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FqConfig, terms: Optional[Mapping[Monomial, FqElem]] = None):
        self.field = field
        self.terms: Dict[Monomial, FqElem] = {}
        if terms:
            for mono, c in terms.items():
                if not c.is_zero():
                    self.terms[mono] = c

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def evaluate(self, x: FqElem, y: FqElem) -> FqElem:
        total = self.field.zero()
        for (i, j), c in self.terms.items():
            total = total + c * (x ** i) * (y ** j)
        return total

    def ddx(self) -> "ReducedPoly":
        return ReducedPoly(self.field, {(i - 1, j): c * i for (i, j), c in self.terms.items() if i})

    def ddy(self) -> "ReducedPoly":
        return ReducedPoly(self.field, {(i, j - 1): c * j for (i, j), c in self.terms.items() if j})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReducedPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda m: (m[1], m[0])):
            mono = "*".join(s for s in (_power("x", i), _power("y", j)) if s)
            c = self.terms[(i, j)]
            parts.append(f"{c!r}*{mono}" if mono else f"{c!r}")
        return " + ".join(parts)


class ReduceOp(enum.Enum):
    MOD_PI = "mod_pi"
    MOD_PI_POW = "mod_pi_pow"
    DDX = "ddx"
    DDY = "ddy"
    EVAL = "eval"


def reduce_and_diff(f: BivarPoly, what: ReduceOp, c: Optional[int] = None,
                    point: Optional[Tuple[LocalNum, LocalNum]] = None):
    """
    Reductions, formal derivatives and exact evaluation.

    Args:
        f: polynomial over K
        what: which operation
        c: precision for MOD_PI_POW
        point: (x, y) for EVAL

    Examples:
        y² − x³ over F_3: DDX -> 0, DDY -> 2y
        eval(y² − x³ at (π, π)) -> π² − π³
    """
    if what is ReduceOp.MOD_PI:
        return f.reduce_mod_pi()
    if what is ReduceOp.MOD_PI_POW:
        return f.reduce_mod_pi_pow(int(c))
    if what is ReduceOp.DDX:
        return f.ddx()
    if what is ReduceOp.DDY:
        return f.ddy()
    if what is ReduceOp.EVAL:
        return f.evaluate(*point)
    raise DomainError(f"unknown reduction {what}")


# ============================================================================
# FACTORED CURVES
# ============================================================================

@dataclass(frozen=True)
class FactoredCurve:
    """g(x, y) = y^m − γ₀·∏(x − γᵢ)^{nᵢ} with γᵢ ∈ K pairwise distinct."""

    gamma0: LocalNum
    roots: Tuple[Tuple[LocalNum, int], ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple((g, int(n)) for g, n in self.roots))
        p = self.gamma0.field.p
        if self.gamma0.is_zero():
            raise HypothesisError("gamma0 must be nonzero")
        if self.m < 2:
            raise HypothesisError(f"the y-exponent must be at least 2, got m = {self.m}")
        if self.m % p == 0:
            raise HypothesisError(f"p divides m (p = {p}, m = {self.m})", reason="p divides m")
        for gamma, n in self.roots:
            if n < 1:
                raise HypothesisError(f"root {gamma!r} has multiplicity {n} < 1")
        seen = set()
        for gamma, _ in self.roots:
            if gamma in seen:
                raise HypothesisError(f"repeated root {gamma!r}", reason="repeated roots")
            seen.add(gamma)

    @property
    def field(self) -> FqConfig:
        return self.gamma0.field

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.roots)

    def integral_roots(self) -> List[Tuple[LocalNum, int]]:
        return [(g, n) for g, n in self.roots if g.is_integral()]

    def outer_roots(self) -> List[Tuple[LocalNum, int]]:
        return [(g, n) for g, n in self.roots if not g.is_integral()]

    def root_valuation_sum(self) -> int:
        """ord(γ₀) + Σ nᵢ·ord(γᵢ) over the roots outside O_K."""
        return self.gamma0.ord + sum(n * g.ord for g, n in self.outer_roots())

    def x_polynomial(self) -> BivarPoly:
        field = self.field
        poly = BivarPoly.constant(self.gamma0)
        for gamma, n in self.roots:
            poly = poly * (BivarPoly.x(field) - BivarPoly.constant(gamma)) ** n
        return poly

    def expand(self) -> BivarPoly:
        return BivarPoly.monomial(LocalNum.one(self.field), 0, self.m) - self.x_polynomial()

    def __repr__(self) -> str:
        roots = ", ".join(f"({g!r},{n})" for g, n in self.roots)
        return f"curve{{gamma0={self.gamma0!r}; roots=[{roots}]; m={self.m}}}"


def check_root_valuation(curve: FactoredCurve) -> Tuple[bool, str]:
    """
    Necessary integrality condition on the roots outside O_K.

    Returns:
        (ok, message) with the computed valuation sum in the message
    """
    total = curve.root_valuation_sum()
    if total < 0:
        return False, f"ord(gamma0) + sum of n_i*ord(gamma_i) over non-integral roots = {total} < 0"
    return True, f"root valuation sum = {total}"


def check_integrality(poly: BivarPoly) -> Tuple[bool, str]:
    """Every coefficient of an expanded polynomial lies in O_K."""
    for (i, j) in sorted(poly.terms):
        c = poly.terms[(i, j)]
        if not c.is_integral():
            return False, f"coefficient of x^{i}*y^{j} is {c!r} with ord {c.ord} < 0"
    return True, "all coefficients integral"


def expand_validate(curve: FactoredCurve) -> BivarPoly:
    """
    Expand y^m − γ₀∏(x − γᵢ)^{nᵢ} and require it to lie in O_K[x, y].

    Raises:
        NonIntegralError naming the failed check

    Examples:
        γ₀ = 1, roots {(0,1),(1,1),(2,1)}, m = 2, q = 5 -> y² − x³ + 3x² − 2x
        γ₀ = 1, root (π^{-1}, 1)                   -> rejected, valuation sum −1
    """
    ok, message = check_root_valuation(curve)
    if not ok:
        raise NonIntegralError(f"curve is not integral: {message}", check="root valuation")
    poly = curve.expand()
    ok, message = check_integrality(poly)
    if not ok:
        raise NonIntegralError(f"curve is not integral: {message}", check="coefficient integrality")
    return poly


# ============================================================================
# TAIL FACTOR FORMS
# ============================================================================

@dataclass(frozen=True)
class LinearFactor:
    """(π^scale·x − center)^multiplicity; scale 0 marks a root factor."""

    scale: int
    center: LocalNum
    multiplicity: int

    @property
    def is_root(self) -> bool:
        return self.scale == 0

    def value_at(self, alpha: LocalNum) -> LocalNum:
        return (alpha.shift(self.scale) - self.center) ** self.multiplicity

    def polynomial(self) -> BivarPoly:
        field = self.center.field
        base = BivarPoly.monomial(LocalNum.pi_power(field, self.scale), 1, 0) - BivarPoly.constant(self.center)
        return base ** self.multiplicity


@dataclass(frozen=True)
class TailFactorForm:
    """
    scalar·∏(π^u x − c)^k + ycoef·y^yexp.

    Factors with u = 0 carry the integral roots; factors with u ≥ 1 and a
    unit center form the tail, whose value at every α ∈ O_K is a unit.
    """

    scalar: LocalNum
    factors: Tuple[LinearFactor, ...]
    ycoef: LocalNum
    yexp: int

    @classmethod
    def from_curve(cls, curve: FactoredCurve) -> "TailFactorForm":
        field = curve.field
        scalar = -curve.gamma0
        factors = []
        for gamma, n in curve.roots:
            if gamma.is_integral():
                factors.append(LinearFactor(0, gamma, n))
            else:
                e = gamma.ord
                scalar = scalar.shift(e * n)
                factors.append(LinearFactor(-e, gamma.ac(), n))
        return cls(scalar, tuple(factors), LocalNum.one(field), curve.m)

    @property
    def field(self) -> FqConfig:
        return self.scalar.field

    def roots(self) -> List[Tuple[LocalNum, int]]:
        return [(f.center, f.multiplicity) for f in self.factors if f.is_root]

    def tail(self) -> List[LinearFactor]:
        return [f for f in self.factors if not f.is_root]

    def tail_value(self, alpha: LocalNum) -> LocalNum:
        value = LocalNum.one(self.field)
        for f in self.tail():
            value = value * f.value_at(alpha)
        return value

    def x_polynomial(self) -> BivarPoly:
        poly = BivarPoly.constant(self.scalar)
        for f in self.factors:
            poly = poly * f.polynomial()
        return poly

    def expand(self) -> BivarPoly:
        return self.x_polynomial() + BivarPoly.monomial(self.ycoef, 0, self.yexp)

    # --- coordinate changes ---

    def translate(self, a: LocalNum) -> "TailFactorForm":
        """x ↦ a + x."""
        moved = tuple(LinearFactor(f.scale, f.center - a.shift(f.scale), f.multiplicity)
                      for f in self.factors)
        return TailFactorForm(self.scalar, moved, self.ycoef, self.yexp)

    def recenter(self, a: LocalNum) -> "TailFactorForm":
        """
        x ↦ a + πx.

        Roots congruent to a stay roots (divided by π, the scalar absorbing
        π^n); the others join the tail with scale 1.
        """
        scalar = self.scalar
        moved = []
        for f in self.factors:
            if f.is_root:
                diff = f.center - a
                if diff.ord >= 1:
                    moved.append(LinearFactor(0, diff.div_by_pi_pow(1), f.multiplicity))
                    scalar = scalar.shift(f.multiplicity)
                else:
                    moved.append(LinearFactor(1, diff, f.multiplicity))
            else:
                moved.append(LinearFactor(f.scale + 1, f.center - a.shift(f.scale), f.multiplicity))
        return TailFactorForm(scalar, tuple(moved), self.ycoef, self.yexp)

    def scaled(self, alpha: LocalNum) -> "TailFactorForm":
        """alpha·(form)."""
        return TailFactorForm(self.scalar * alpha, self.factors, self.ycoef * alpha, self.yexp)

    def with_coefficients(self, scalar: LocalNum, ycoef: LocalNum) -> "TailFactorForm":
        return TailFactorForm(scalar, self.factors, ycoef, self.yexp)

    def pull_y(self) -> "TailFactorForm":
        """y ↦ πy."""
        return TailFactorForm(self.scalar, self.factors, self.ycoef.shift(self.yexp), self.yexp)

    # --- bookkeeping ---

    def measure(self) -> Tuple[int, int]:
        """(number of integral roots, largest ord of a root difference)."""
        roots = [g for g, _ in self.roots()]
        spread = -1
        for a, b in combinations(roots, 2):
            spread = max(spread, (a - b).ord)
        return len(roots), spread


def check_tail_shape(form: TailFactorForm) -> Tuple[bool, str]:
    """Root centers are integral and every tail factor has a unit center."""
    for f in form.factors:
        if f.is_root and not f.center.is_integral():
            return False, f"root {f.center!r} is not integral"
        if not f.is_root and (f.scale < 1 or not f.center.is_unit()):
            return False, f"tail factor (π^{f.scale}x − {f.center!r}) does not take unit values"
    return True, "ok"
