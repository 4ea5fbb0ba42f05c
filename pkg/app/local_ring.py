# app/local_ring.py - Exact arithmetic in K = F_q((π)) on finite Laurent expansions
"""
LocalNum holds a finite Laurent expansion Σ c_e π^e with nonzero
coefficients c_e in F_q. Every transformation the solver applies
(recentering, π-scaling, exact π-division) keeps expansions finite, so no
precision is tracked anywhere.
"""
import enum
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from app.errors import DomainError
from app.field_tower import CharacterSpec, CycloNum, FqConfig, FqElem, char_eval


class _OrdInfinity:
    """ord(0): compares above every integer, supports no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ord-infinity")

    def __repr__(self):
        return "+oo"


ORD_INFINITY = _OrdInfinity()


class LocalNum:
    """An element of K given by finitely many π-adic digits."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FqConfig, terms: Mapping[int, FqElem] = None):
        self.field = field
        items = [] if terms is None else [(e, c) for e, c in terms.items() if not c.is_zero()]
        items.sort(key=lambda item: item[0])
        self.terms: Tuple[Tuple[int, FqElem], ...] = tuple(items)

    # --- constructors ---

    @classmethod
    def zero(cls, field: FqConfig) -> "LocalNum":
        return cls(field)

    @classmethod
    def one(cls, field: FqConfig) -> "LocalNum":
        return cls(field, {0: field.one()})

    @classmethod
    def from_fq(cls, c: FqElem, exponent: int = 0) -> "LocalNum":
        return cls(c.field, {exponent: c})

    @classmethod
    def from_int(cls, field: FqConfig, n: int) -> "LocalNum":
        return cls(field, {0: field.from_int(n)})

    @classmethod
    def pi_power(cls, field: FqConfig, e: int) -> "LocalNum":
        return cls(field, {e: field.one()})

    @classmethod
    def from_digits(cls, digits: Iterable[FqElem], start: int = 0) -> "LocalNum":
        digits = list(digits)
        if not digits:
            raise DomainError("from_digits needs at least one digit")
        return cls(digits[0].field, {start + i: d for i, d in enumerate(digits)})

    @classmethod
    def parse(cls, text: str, field: FqConfig) -> "LocalNum":
        from app.parsing import parse_local
        return parse_local(text, field)

    # --- valuation data ---

    @property
    def ord(self):
        return self.terms[0][0] if self.terms else ORD_INFINITY

    def ac(self) -> "LocalNum":
        if not self.terms:
            raise DomainError("angular component of zero")
        return self.shift(-self.terms[0][0])

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_integral(self) -> bool:
        return not self.terms or self.terms[0][0] >= 0

    def is_unit(self) -> bool:
        return bool(self.terms) and self.terms[0][0] == 0

    def coefficient(self, e: int) -> FqElem:
        for exp, c in self.terms:
            if exp == e:
                return c
        return self.field.zero()

    def residue(self) -> FqElem:
        """Reduction mod π of an integral element."""
        if not self.is_integral():
            raise DomainError(f"residue of non-integral element {self}")
        return self.coefficient(0)

    def digits(self, c: int) -> Tuple[FqElem, ...]:
        """π-digits 0..c-1 of an integral element."""
        if not self.is_integral():
            raise DomainError(f"digits of non-integral element {self}")
        return tuple(self.coefficient(i) for i in range(c))

    def abs_value(self) -> Fraction:
        """|x| = q^{-ord(x)}, and |0| = 0."""
        if not self.terms:
            return Fraction(0)
        return Fraction(1, self.field.q) ** self.terms[0][0]

    def degree(self) -> int:
        if not self.terms:
            raise DomainError("degree of zero")
        return self.terms[-1][0]

    # --- ring operations ---

    def _coerce(self, other) -> "LocalNum":
        if isinstance(other, LocalNum):
            return other
        if isinstance(other, FqElem):
            return LocalNum.from_fq(other)
        if isinstance(other, int):
            return LocalNum.from_int(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: Dict[int, FqElem] = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc[e] + c if e in acc else c
        return LocalNum(self.field, acc)

    __radd__ = __add__

    def __neg__(self) -> "LocalNum":
        return LocalNum(self.field, {e: -c for e, c in self.terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: Dict[int, FqElem] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return LocalNum(self.field, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LocalNum":
        if n < 0:
            if len(self.terms) != 1:
                raise DomainError("only monomials c·π^e have finite inverses")
            (e, c), = self.terms
            return LocalNum(self.field, {e * n: c ** n})
        result = LocalNum.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, e: int) -> "LocalNum":
        """Multiply by π^e."""
        return LocalNum(self.field, {exp + e: c for exp, c in self.terms})

    def div_by_pi_pow(self, e: int) -> "LocalNum":
        """Exact division by π^e; requires ord ≥ e."""
        if self.terms and self.terms[0][0] < e:
            raise DomainError(f"{self} is not divisible by π^{e}")
        return self.shift(-e)

    def reduce_mod(self, c: int) -> "LocalNum":
        """Representative mod π^c with exponents in [0, c)."""
        if c < 1:
            raise DomainError(f"reduce_mod needs c >= 1, got {c}")
        if not self.is_integral():
            raise DomainError(f"reduce_mod of non-integral element {self}")
        return LocalNum(self.field, {e: x for e, x in self.terms if e < c})

    # --- comparison and display ---

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(f"{c!r}")
            elif c == self.field.one():
                parts.append(f"t^{e}" if e != 1 else "t")
            else:
                parts.append(f"{c!r}*t^{e}" if e != 1 else f"{c!r}*t")
        return " + ".join(parts)


def ord_ac(x: LocalNum):
    """
    Valuation and angular component.

    Returns:
        (ord, ac) with x = ac·π^ord

    Raises:
        DomainError for x = 0; the error's `ord` attribute is ORD_INFINITY

    Examples:
        2π² + π³ over F_5 -> (2, 2 + π)
        π^{-1} + 1        -> (-1, 1 + π)
    """
    if x.is_zero():
        error = DomainError("angular component of zero")
        error.ord = ORD_INFINITY
        raise error
    return x.ord, x.ac()


class LocalOp(enum.Enum):
    ADD = "add"
    MUL = "mul"
    DIV_BY_PI_POW = "div_by_pi_pow"
    REDUCE_MOD = "reduce_mod"


def local_ops(x: LocalNum, y: Union[LocalNum, int], op: LocalOp) -> LocalNum:
    """Dispatch one local-ring operation; y is an integer for the π-operations."""
    if op is LocalOp.ADD:
        return x + y
    if op is LocalOp.MUL:
        return x * y
    if op is LocalOp.DIV_BY_PI_POW:
        return x.div_by_pi_pow(int(y))
    if op is LocalOp.REDUCE_MOD:
        return x.reduce_mod(int(y))
    raise DomainError(f"unknown local operation {op}")


def residues_mod(field: FqConfig, c: int) -> List[LocalNum]:
    """All representatives of O_K / π^c with digits in the canonical lifting."""
    elements = field.elements()
    return [LocalNum(field, dict(enumerate(digits))) for digits in product(elements, repeat=c)]


def lifts_of(residue: FqElem, c: int) -> List[LocalNum]:
    """Representatives mod π^c reducing to `residue` mod π."""
    field = residue.field
    tails = product(field.elements(), repeat=c - 1)
    return [LocalNum(field, dict(enumerate((residue,) + tail))) for tail in tails]


def character_value(chi: CharacterSpec, x: LocalNum) -> CycloNum:
    """χ(ac x) for x in K; zero maps to zero."""
    if x.is_zero():
        return CycloNum.zero(chi.order)
    unit = x.ac()
    return char_eval(chi, unit.digits(max(1, chi.conductor)))
