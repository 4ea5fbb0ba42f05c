# app/field_tower.py - Residue field F_q, cyclotomic scalars and characters
"""
Exact scalar arithmetic underneath the local field:
- F_q = F_p[z]/(modulus) with a verified generator of F_q^×
- Q(ζ_N) scalars reduced modulo the N-th cyclotomic polynomial
- multiplicative characters of O_K^× (trivial, conductor one, or table-driven)
"""
import cmath
import enum
import json
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy import Poly, Symbol, cyclotomic_poly, isprime, primefactors, primitive_root, totient

from app.errors import DomainError, HypothesisError

Rational = Union[int, Fraction]


# ============================================================================
# RESIDUE FIELD
# ============================================================================

class FqConfig:
    """
    The residue field F_q with q = p^k.

    Elements are indexed 0..q-1 by reading their coefficient vector as
    base-p digits (constant coefficient first). For k = 1 the index is the
    residue itself.
    """

    __slots__ = ("p", "k", "q", "modulus", "generator", "_elements", "_dlog")

    def __init__(self, p: int, k: int = 1, modulus: Optional[Sequence[int]] = None,
                 generator: Optional[int] = None):
        if not isprime(p):
            raise DomainError(f"p = {p} is not prime")
        if k < 1:
            raise DomainError(f"extension degree must be >= 1, got {k}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = self._check_modulus(modulus)
        self._elements: Optional[List["FqElem"]] = None
        self._dlog: Optional[Dict["FqElem", int]] = None
        self.generator = self._pick_generator(generator)

    # --- construction helpers ---

    def _check_modulus(self, modulus: Optional[Sequence[int]]) -> Optional[Tuple[int, ...]]:
        if self.k == 1:
            if modulus is not None and len(modulus) != 2:
                raise DomainError("a modulus for k = 1 must be linear (or omitted)")
            return None
        if modulus is None:
            raise DomainError(f"k = {self.k} requires an irreducible modulus of degree {self.k}")
        coeffs = [c % self.p for c in modulus]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) != self.k + 1:
            raise DomainError(f"modulus must have degree {self.k}")
        lead_inv = pow(coeffs[-1], self.p - 2, self.p)
        coeffs = [(c * lead_inv) % self.p for c in coeffs]
        z = Symbol("z")
        if not Poly(list(reversed(coeffs)), z, modulus=self.p).is_irreducible:
            raise DomainError(f"modulus {coeffs} is reducible over F_{self.p}")
        return tuple(coeffs)

    def _pick_generator(self, generator: Optional[int]) -> "FqElem":
        if generator is not None:
            g = self.elem(generator)
            if not self.is_generator(g):
                raise DomainError(f"{generator} does not generate F_{self.q}^×")
            return g
        if self.k == 1:
            g = self.elem(int(primitive_root(self.p)))
            if self.is_generator(g):
                return g
        for candidate in self.units():
            if self.is_generator(candidate):
                return candidate
        raise DomainError(f"no generator found for F_{self.q}^×")  # pragma: no cover

    @classmethod
    def parse_modulus(cls, text: str, p: int) -> Tuple[int, ...]:
        """
        Parse a modulus polynomial written in the variable z.

        Examples:
            "z^2 + 1" with p = 3 -> (1, 0, 1)
        """
        z = Symbol("z")
        try:
            expr = sympy.sympify(text, locals={"z": z}, convert_xor=True)
            poly = Poly(expr, z, modulus=p)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise DomainError(f"cannot read modulus {text!r}: {exc}") from exc
        return tuple(int(c) % p for c in reversed(poly.all_coeffs()))

    # --- element factories ---

    def elem(self, n: int) -> "FqElem":
        """
        Element with index n.

        For k = 1 any integer is accepted and reduced mod p; for k > 1 the
        index must lie in [0, q).
        """
        if self.k == 1:
            return FqElem(self, (n % self.p,))
        if not 0 <= n < self.q:
            raise DomainError(f"residue index {n} outside [0, {self.q})")
        digits = []
        for _ in range(self.k):
            n, r = divmod(n, self.p)
            digits.append(r)
        return FqElem(self, tuple(digits))

    def from_coeffs(self, coeffs: Sequence[int]) -> "FqElem":
        if len(coeffs) > self.k:
            raise DomainError(f"coefficient vector longer than k = {self.k}")
        padded = [c % self.p for c in coeffs] + [0] * (self.k - len(coeffs))
        return FqElem(self, tuple(padded))

    def from_int(self, n: int) -> "FqElem":
        """Image of the integer n under Z -> F_p ⊆ F_q."""
        return FqElem(self, (n % self.p,) + (0,) * (self.k - 1))

    def zero(self) -> "FqElem":
        return FqElem(self, (0,) * self.k)

    def one(self) -> "FqElem":
        return self.from_int(1)

    def elements(self) -> List["FqElem"]:
        if self._elements is None:
            self._elements = [self.elem(n) for n in range(self.q)]
        return self._elements

    def units(self) -> List["FqElem"]:
        return self.elements()[1:]

    # --- multiplicative structure ---

    def is_generator(self, g: "FqElem") -> bool:
        if g.is_zero():
            return False
        if self.q == 2:
            return g == self.one()
        return all(g ** ((self.q - 1) // ell) != self.one() for ell in primefactors(self.q - 1))

    def dlog(self, u: "FqElem") -> int:
        """Discrete logarithm of u to the base of the fixed generator."""
        if u.is_zero():
            raise DomainError("discrete logarithm of zero")
        if self._dlog is None:
            table = {}
            power = self.one()
            for i in range(self.q - 1):
                table[power] = i
                power = power * self.generator
            self._dlog = table
        return self._dlog[u]

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FqConfig):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.q}[mod {self.modulus}]"


class FqElem:
    """An element of F_q; coefficient vector of length k, canonical residues."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqConfig, coeffs: Tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "FqElem":
        if isinstance(other, FqElem):
            if other.field is not self.field and other.field != self.field:
                raise DomainError("mixing elements of different residue fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FqElem":
        p = self.field.p
        return FqElem(self.field, tuple((-a) % p for a in self.coeffs))

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
        field = self.field
        p = field.p
        if field.k == 1:
            return FqElem(field, ((self.coeffs[0] * other.coeffs[0]) % p,))
        raw = [0] * (2 * field.k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    raw[i + j] += a * b
        mod = field.modulus
        for top in range(len(raw) - 1, field.k - 1, -1):
            c = raw[top] % p
            if c:
                for j in range(field.k + 1):
                    raw[top - field.k + j] -= c * mod[j]
        return FqElem(field, tuple(c % p for c in raw[:field.k]))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "FqElem":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise DomainError("inversion of zero in the residue field")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    @property
    def index(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def __eq__(self, other) -> bool:
        if isinstance(other, FqElem):
            return self.coeffs == other.coeffs and self.field.p == other.field.p
        if isinstance(other, int):
            return self == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return str(self.index)


class FieldOp(enum.Enum):
    ADD = "add"
    MUL = "mul"
    INV = "inv"
    POW = "pow"


def ff_ops(a: FqElem, b: Union[FqElem, int, None], op: FieldOp) -> FqElem:
    """
    Dispatch one residue-field operation.

    Examples:
        F_5: ff_ops(3, 4, MUL) -> 2
        F_7: ff_ops(2, None, INV) -> 4
    """
    if op is FieldOp.ADD:
        return a + b
    if op is FieldOp.MUL:
        return a * b
    if op is FieldOp.INV:
        return a.inverse()
    if op is FieldOp.POW:
        return a ** int(b)
    raise DomainError(f"unknown field operation {op}")


# ============================================================================
# CYCLOTOMIC SCALARS
# ============================================================================

@lru_cache(maxsize=None)
def cyclotomic_coeffs(order: int) -> Tuple[int, ...]:
    """Coefficients of Φ_order, constant term first."""
    poly = cyclotomic_poly(order, Symbol("z"), polys=True)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce_cyclotomic(raw: List[Fraction], order: int) -> Tuple[Fraction, ...]:
    phi = cyclotomic_coeffs(order)
    deg = len(phi) - 1
    raw = list(raw) + [Fraction(0)] * max(0, deg - len(raw))
    for top in range(len(raw) - 1, deg - 1, -1):
        c = raw[top]
        if c:
            for j in range(deg + 1):
                raw[top - deg + j] -= c * phi[j]
    return tuple(Fraction(c) for c in raw[:deg])


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CycloNum:
    """
    Element of Q(ζ_N) as a rational vector of length φ(N).

    The representative is the remainder modulo Φ_N, so equal numbers in the
    same field have equal coefficient vectors.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[Rational] = ()):
        if order < 1:
            raise DomainError(f"root-of-unity order must be >= 1, got {order}")
        self.order = order
        self.coeffs = _reduce_cyclotomic([Fraction(c) for c in coeffs], order)

    @classmethod
    def zero(cls, order: int = 1) -> "CycloNum":
        return cls(order)

    @classmethod
    def one(cls, order: int = 1) -> "CycloNum":
        return cls(order, [1])

    @classmethod
    def rational(cls, value: Rational, order: int = 1) -> "CycloNum":
        return cls(order, [value])

    @classmethod
    def root_of_unity(cls, order: int, exponent: int) -> "CycloNum":
        raw = [0] * order
        raw[exponent % order] = 1
        return cls(order, raw)

    @classmethod
    def coerce(cls, value) -> "CycloNum":
        if isinstance(value, CycloNum):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"cannot use {type(value).__name__} as a cyclotomic number")

    # --- field embedding ---

    def embed(self, order: int) -> "CycloNum":
        """The same number viewed in Q(ζ_order); order must be a multiple."""
        if order == self.order:
            return self
        if order % self.order:
            raise DomainError(f"Q(ζ_{self.order}) does not embed in Q(ζ_{order})")
        step = order // self.order
        raw = [Fraction(0)] * max(1, step * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            raw[i * step] = c
        return CycloNum(order, raw)

    def _pair(self, other) -> Tuple["CycloNum", "CycloNum"]:
        other = CycloNum.coerce(other)
        if other.order == self.order:
            return self, other
        common = _lcm(self.order, other.order)
        return self.embed(common), other.embed(common)

    # --- ring operations ---

    def __add__(self, other) -> "CycloNum":
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return CycloNum(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.order, [-c for c in self.coeffs])

    def __sub__(self, other) -> "CycloNum":
        try:
            return self + (-CycloNum.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other) -> "CycloNum":
        return (-self) + other

    def __mul__(self, other) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            return CycloNum(self.order, [c * other for c in self.coeffs])
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        raw = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[i + j] += x * y
        return CycloNum(a.order, raw)

    __rmul__ = __mul__

    def __truediv__(self, other: Rational) -> "CycloNum":
        if isinstance(other, CycloNum):
            if not other.is_rational():
                raise DomainError("division by an irrational cyclotomic number is not supported")
            other = other.to_fraction()
        if other == 0:
            raise DomainError("division by zero")
        return CycloNum(self.order, [c / other for c in self.coeffs])

    def __pow__(self, n: int) -> "CycloNum":
        if n < 0:
            raise DomainError("negative powers of cyclotomic numbers are not supported")
        result = CycloNum.one(self.order)
        for _ in range(n):
            result = result * self
        return result

    def conjugate(self) -> "CycloNum":
        """Complex conjugate, ζ -> ζ^{-1}."""
        raw = [Fraction(0)] * self.order
        for i, c in enumerate(self.coeffs):
            raw[(-i) % self.order] += c
        return CycloNum(self.order, raw)

    # --- predicates and conversions ---

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def to_complex(self) -> complex:
        zeta = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * zeta ** i for i, c in enumerate(self.coeffs))

    def to_json(self, order: Optional[int] = None) -> List[str]:
        value = self.embed(order) if order is not None else self
        return [str(c) for c in value.coeffs]

    @classmethod
    def from_json(cls, order: int, coeffs: Sequence[str]) -> "CycloNum":
        return cls(order, [Fraction(c) for c in coeffs])

    def __eq__(self, other) -> bool:
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(str(c) if i == 0 else f"{c}*z{self.order}^{i}")
        return " + ".join(parts)


class CycloOp(enum.Enum):
    ADD = "add"
    MUL = "mul"
    EQ = "eq"


def cyclo_ops(a: CycloNum, b: CycloNum, op: CycloOp) -> Union[CycloNum, bool]:
    """
    Dispatch one cyclotomic operation; mixed orders meet in Q(ζ_lcm).

    Examples:
        ζ_2 + 1 -> 0
        1 + ζ_3 + ζ_3^2 -> 0
    """
    if op is CycloOp.ADD:
        return a + b
    if op is CycloOp.MUL:
        return a * b
    if op is CycloOp.EQ:
        return a == b
    raise DomainError(f"unknown cyclotomic operation {op}")


# ============================================================================
# CHARACTERS
# ============================================================================

class CharacterKind(enum.Enum):
    TRIVIAL = "trivial"
    CONDUCTOR_ONE = "conductor-1"
    TABLE = "table"


ResidueKey = Tuple[FqElem, ...]


def truncated_product(a: ResidueKey, b: ResidueKey) -> ResidueKey:
    """Product of two residues mod π^c given by their π-digits."""
    c = len(a)
    field = a[0].field
    out = [field.zero() for _ in range(c)]
    for i in range(c):
        if a[i].is_zero():
            continue
        for j in range(c - i):
            out[i + j] = out[i + j] + a[i] * b[j]
    return tuple(out)


def unit_residues(field: FqConfig, conductor: int) -> List[ResidueKey]:
    """All units of O_K / π^conductor as digit tuples."""
    heads = field.units()
    tails = [field.elements()] * (conductor - 1)
    return [(h,) + tuple(t) for h in heads for t in product(*tails)]


class CharacterSpec:
    """
    A multiplicative character χ of O_K^×, χ(0) = 0.

    - trivial: χ = 1 on units
    - conductor-1: χ(u) = ζ_N^{e·ind_g(ū)}, needs N | q - 1
    - table: explicit exponents on (O_K/π^c)^×, values ζ_N^{table[u]}
    """

    def __init__(self, field: FqConfig, kind: CharacterKind, order: int = 1,
                 exponent: int = 0, conductor: int = 0,
                 table: Optional[Mapping[ResidueKey, int]] = None):
        self.field = field
        self.kind = kind
        self.order = order
        self.exponent = exponent % order if order else 0
        self.conductor = conductor
        self.table = dict(table) if table is not None else None

    @classmethod
    def trivial(cls, field: FqConfig) -> "CharacterSpec":
        return cls(field, CharacterKind.TRIVIAL)

    @classmethod
    def conductor_one(cls, field: FqConfig, order: int, exponent: int = 1) -> "CharacterSpec":
        if order < 1 or (field.q - 1) % order:
            raise HypothesisError(f"character order {order} must divide q - 1 = {field.q - 1}")
        if exponent % order == 0:
            return cls.trivial(field)
        return cls(field, CharacterKind.CONDUCTOR_ONE, order=order, exponent=exponent, conductor=1)

    @classmethod
    def from_table(cls, field: FqConfig, order: int, conductor: int,
                   values: Mapping[ResidueKey, int]) -> "CharacterSpec":
        if conductor < 1:
            raise HypothesisError("table characters need conductor >= 1")
        chi = cls(field, CharacterKind.TABLE, order=order, conductor=conductor,
                  table={key: value % order for key, value in values.items()})
        ok, message = validate_character_table(chi)
        if not ok:
            raise HypothesisError(message)
        return chi

    @classmethod
    def load_table(cls, field: FqConfig, path: str) -> "CharacterSpec":
        """
        Load a table character from JSON.

        Format:
            {"order": N, "conductor": c,
             "values": [{"residue": [a0, a1, ...], "exponent": j}, ...]}
        Digits are residue indices; for k > 1 a digit may also be a
        coefficient list.
        """
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        try:
            order = int(data["order"])
            conductor = int(data["conductor"])
            values = {}
            for entry in data["values"]:
                digits = []
                for d in entry["residue"]:
                    digits.append(field.from_coeffs(d) if isinstance(d, list) else field.elem(int(d)))
                if len(digits) != conductor:
                    raise HypothesisError(f"residue {entry['residue']} has the wrong length")
                values[tuple(digits)] = int(entry["exponent"])
        except (KeyError, TypeError, ValueError) as exc:
            raise HypothesisError(f"malformed character table {path}: {exc}") from exc
        return cls.from_table(field, order, conductor, values)

    @classmethod
    def parse(cls, text: str, field: FqConfig) -> "CharacterSpec":
        """
        Parse the CLI character syntax.

        Examples:
            "trivial"      -> trivial character
            "mult:2:1"     -> quadratic character
            "table:chi.json"
        """
        text = text.strip()
        if text == "trivial":
            return cls.trivial(field)
        if text.startswith("mult:"):
            parts = text.split(":")
            if len(parts) != 3:
                raise HypothesisError(f"expected mult:N:e, got {text!r}")
            try:
                return cls.conductor_one(field, int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise HypothesisError(f"expected integers in {text!r}") from exc
        if text.startswith("table:"):
            return cls.load_table(field, text[len("table:"):])
        raise HypothesisError(f"unknown character spec {text!r}")

    @property
    def is_trivial(self) -> bool:
        return self.kind is CharacterKind.TRIVIAL

    @property
    def effective_conductor(self) -> int:
        return 0 if self.is_trivial else self.conductor

    def describe(self) -> str:
        if self.kind is CharacterKind.TRIVIAL:
            return "trivial"
        if self.kind is CharacterKind.CONDUCTOR_ONE:
            return f"mult:{self.order}:{self.exponent}"
        return f"table:order={self.order}:conductor={self.conductor}"


def validate_character_table(chi: CharacterSpec) -> Tuple[bool, str]:
    """
    Check that a table character is a complete homomorphism.

    Returns:
        (ok, message)
    """
    units = unit_residues(chi.field, chi.conductor)
    missing = [u for u in units if u not in chi.table]
    if missing:
        return False, f"character table misses {len(missing)} unit residue(s), e.g. {missing[0]}"
    if len(chi.table) != len(units):
        return False, "character table has entries that are not unit residues"
    for u in units:
        for v in units:
            if (chi.table[u] + chi.table[v] - chi.table[truncated_product(u, v)]) % chi.order:
                return False, f"table is not multiplicative at {u} * {v}"
    return True, "ok"


def char_eval(chi: CharacterSpec, u: Union[FqElem, ResidueKey]) -> CycloNum:
    """
    Evaluate χ on a residue.

    Args:
        chi: the character
        u: a residue-field element, or the π-digits of a residue mod π^c

    Returns:
        ζ_N^j, or the zero scalar when u = 0

    Examples:
        trivial χ, u = 3 in F_5 -> 1
        quadratic χ on F_5 with g = 2, u = 4 -> 1
    """
    digits = (u,) if isinstance(u, FqElem) else tuple(u)
    if not digits or digits[0].is_zero():
        return CycloNum.zero(chi.order)
    if chi.kind is CharacterKind.TRIVIAL:
        return CycloNum.one(chi.order)
    if chi.kind is CharacterKind.CONDUCTOR_ONE:
        j = chi.exponent * chi.field.dlog(digits[0])
        return CycloNum.root_of_unity(chi.order, j)
    if len(digits) < chi.conductor:
        raise DomainError(f"table character needs the residue mod π^{chi.conductor}")
    return CycloNum.root_of_unity(chi.order, chi.table[digits[:chi.conductor]])
