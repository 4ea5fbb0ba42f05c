# app/parsing.py - Text input: polynomial expressions, K-literals and curve blocks
"""
Grammar (whitespace insignificant):

    poly    := term (('+' | '-') term)*
    term    := unary (('*')? unary)*          juxtaposition multiplies
    unary   := '-' unary | power
    power   := atom ('^' exponent)?
    atom    := INT | 'x' | 'y' | 't' | 'pi' | '(' poly ')'
    block   := ['curve'] ['{'] item (';' item)* ['}']
    item    := 'gamma0' '=' poly | 'roots' '=' '[' root (',' root)* ']' | 'm' '=' INT
    root    := '(' poly ',' INT ')'

`t` (or `pi`) is the uniformizer π. Negative exponents are allowed on
constants of the shape c·π^e only.
"""
import logging
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from app.errors import DomainError, ParseError
from app.field_tower import FqConfig
from app.local_ring import LocalNum
from app.polynomials import BivarPoly, FactoredCurve

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^(){}\[\];,=]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# ============================================================================
# SYNTAX TREE
# ============================================================================

@dataclass(frozen=True)
class Node:
    offset: int


@dataclass(frozen=True)
class Num(Node):
    value: int


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def accept(self, text: str) -> Optional[Token]:
        if self.current.text == text and self.current.kind in ("op", "name"):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        token = self.accept(text)
        if token is None:
            raise ParseError(f"expected {text!r}", self.current.offset)
        return token

    def expect_end(self) -> None:
        if self.current.kind != "end":
            raise ParseError(f"unexpected {self.current.text!r}", self.current.offset)

    # --- expressions ---

    def poly(self) -> Node:
        node = self.term()
        while self.current.text in ("+", "-") and self.current.kind == "op":
            op = self.advance()
            node = BinOp(op.offset, op.text, node, self.term())
        return node

    def _starts_atom(self) -> bool:
        token = self.current
        return token.kind in ("int", "name") or token.text == "("

    def term(self) -> Node:
        node = self.unary()
        while True:
            if self.current.text == "*" and self.current.kind == "op":
                op = self.advance()
                node = BinOp(op.offset, "*", node, self.unary())
            elif self._starts_atom() and self.current.text not in _BLOCK_KEYS:
                node = BinOp(self.current.offset, "*", node, self.power())
            else:
                return node

    def unary(self) -> Node:
        if self.current.text == "-" and self.current.kind == "op":
            op = self.advance()
            return Neg(op.offset, self.unary())
        if self.current.text == "+" and self.current.kind == "op":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.accept("^"):
            return Pow(base.offset, base, self.exponent())
        return base

    def exponent(self) -> int:
        if self.accept("("):
            value = self.exponent()
            self.expect(")")
            return value
        sign = -1 if self.accept("-") else 1
        token = self.current
        if token.kind != "int":
            raise ParseError("expected an integer exponent", token.offset)
        self.advance()
        return sign * int(token.text)

    def atom(self) -> Node:
        token = self.current
        if token.kind == "int":
            self.advance()
            return Num(token.offset, int(token.text))
        if token.kind == "name":
            name = "t" if token.text == "pi" else token.text
            if name not in ("x", "y", "t"):
                raise ParseError(f"unknown symbol {token.text!r}", token.offset)
            self.advance()
            return Var(token.offset, name)
        if token.text == "(":
            self.advance()
            node = self.poly()
            self.expect(")")
            return node
        if token.kind == "end":
            raise ParseError("expected a term", token.offset)
        raise ParseError(f"unexpected {token.text!r}", token.offset)

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        token = self.current
        if token.kind != "int":
            raise ParseError("expected an integer", token.offset)
        self.advance()
        return sign * int(token.text)


_BLOCK_KEYS = ("gamma0", "roots", "m", "curve")


# ============================================================================
# EVALUATION
# ============================================================================

def _literal(field: FqConfig, n: int, offset: int) -> LocalNum:
    if field.k == 1:
        return LocalNum.from_int(field, n)
    try:
        return LocalNum.from_fq(field.elem(n))
    except DomainError as exc:
        raise ParseError(f"literal {n} is not a residue index below q = {field.q}", offset) from exc


def evaluate(node: Node, field: FqConfig) -> BivarPoly:
    if isinstance(node, Num):
        return BivarPoly.constant(_literal(field, node.value, node.offset))
    if isinstance(node, Var):
        if node.name == "t":
            return BivarPoly.constant(LocalNum.pi_power(field, 1))
        return BivarPoly.x(field) if node.name == "x" else BivarPoly.y(field)
    if isinstance(node, Neg):
        return -evaluate(node.operand, field)
    if isinstance(node, BinOp):
        left = evaluate(node.left, field)
        right = evaluate(node.right, field)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        return left * right
    if isinstance(node, Pow):
        base = evaluate(node.base, field)
        if node.exponent >= 0:
            return base ** node.exponent
        if set(base.terms) != {(0, 0)}:
            raise ParseError("negative exponents apply to constants only", node.offset)
        try:
            return BivarPoly.constant(base.terms[(0, 0)] ** node.exponent)
        except DomainError as exc:
            raise ParseError(str(exc), node.offset) from exc
    raise ParseError(f"cannot evaluate {node!r}", node.offset)  # pragma: no cover


def _constant(node: Node, field: FqConfig, what: str) -> LocalNum:
    poly = evaluate(node, field)
    if any(mono != (0, 0) for mono in poly.terms):
        raise ParseError(f"{what} must be an element of K (a literal in t)", node.offset)
    return poly.coefficient(0, 0)


def parse_local(text: str, field: FqConfig) -> LocalNum:
    """
    Parse a K-literal such as "3 + t^2" or "-t^-2".

    Raises:
        ParseError with the offending offset
    """
    parser = _Parser(text)
    node = parser.poly()
    parser.expect_end()
    return _constant(node, field, "literal")


# ============================================================================
# CURVE RECOGNITION
# ============================================================================

def _signed_terms(node: Node, sign: int = 1) -> List[Tuple[int, Node]]:
    if isinstance(node, BinOp) and node.op in ("+", "-"):
        right_sign = sign if node.op == "+" else -sign
        return _signed_terms(node.left, sign) + _signed_terms(node.right, right_sign)
    if isinstance(node, Neg):
        return _signed_terms(node.operand, -sign)
    return [(sign, node)]


def _factors(node: Node) -> List[Node]:
    if isinstance(node, BinOp) and node.op == "*":
        return _factors(node.left) + _factors(node.right)
    return [node]


def _is_pure_y_power(node: Node) -> Optional[int]:
    if isinstance(node, Var) and node.name == "y":
        return 1
    if isinstance(node, Pow) and isinstance(node.base, Var) and node.base.name == "y" and node.exponent > 0:
        return node.exponent
    return None


def _as_product(sign: int, node: Node, field: FqConfig):
    """Read ±const·∏(x − c)^n; None when the term has another shape."""
    scalar = LocalNum.from_int(field, sign)
    roots: List[Tuple[LocalNum, int]] = []
    for factor in _factors(node):
        while isinstance(factor, Neg):
            scalar = -scalar
            factor = factor.operand
        base, n = (factor.base, factor.exponent) if isinstance(factor, Pow) else (factor, 1)
        poly = evaluate(base, field)
        if poly.is_x_only() and set(poly.terms) <= {(0, 0)}:
            if n < 0 and poly.is_zero():
                return None
            scalar = scalar * evaluate(factor, field).coefficient(0, 0)
            continue
        if n < 1 or not poly.is_x_only() or set(poly.terms) - {(0, 0), (1, 0)}:
            return None
        lead = poly.coefficient(1, 0)
        if len(lead.terms) != 1:
            return None
        center = -poly.coefficient(0, 0) * lead ** -1
        scalar = scalar * lead ** n
        roots.append((center, n))
    merged = {}
    for center, n in roots:
        merged[center] = merged.get(center, 0) + n
    return scalar, list(merged.items())


def recognize_curve(node: Node, field: FqConfig, m: Optional[int] = None) -> Optional[FactoredCurve]:
    """
    Match y^m − γ₀∏(x − γᵢ)^{nᵢ} (either sign of the x-part) on a syntax tree.

    Returns None when the expression has another shape.
    """
    terms = _signed_terms(node)
    if len(terms) != 2:
        return None
    y_terms = [(s, t) for s, t in terms if _is_pure_y_power(t) is not None]
    if len(y_terms) != 1 or y_terms[0][0] != 1:
        return None
    exponent = _is_pure_y_power(y_terms[0][1])
    if m is not None and m != exponent:
        return None
    (sign, other), = [(s, t) for s, t in terms if _is_pure_y_power(t) is None]
    product = _as_product(-sign, other, field)
    if product is None or not product[1] or product[0].is_zero():
        return None
    gamma0, roots = product
    return FactoredCurve(gamma0, tuple(roots), exponent)


# ============================================================================
# ENTRY POINTS
# ============================================================================

def _looks_like_block(text: str) -> bool:
    head = text.lstrip()
    return head.startswith("curve") or head.startswith("gamma0") or head.startswith("roots")


def parse_curve_block(text: str, field: FqConfig, m: Optional[int] = None) -> FactoredCurve:
    """
    Parse `curve{gamma0=...; roots=[(g1,n1),...]; m=...}`.

    The braces and the `curve` keyword are optional; `m` may come from the
    caller instead of the block.
    """
    parser = _Parser(text)
    parser.accept("curve")
    braced = parser.accept("{") is not None
    gamma0 = None
    roots: Optional[List[Tuple[LocalNum, int]]] = None
    block_m = None
    while True:
        key = parser.current
        if key.kind != "name" or key.text not in ("gamma0", "roots", "m"):
            raise ParseError("expected gamma0, roots or m", key.offset)
        parser.advance()
        parser.expect("=")
        if key.text == "gamma0":
            node = parser.poly()
            gamma0 = _constant(node, field, "gamma0")
        elif key.text == "m":
            block_m = parser.integer()
        else:
            parser.expect("[")
            roots = []
            if not parser.accept("]"):
                while True:
                    parser.expect("(")
                    node = parser.poly()
                    gamma = _constant(node, field, "root")
                    parser.expect(",")
                    roots.append((gamma, parser.integer()))
                    parser.expect(")")
                    if parser.accept("]"):
                        break
                    parser.expect(",")
        if not parser.accept(";"):
            break
        if parser.current.kind == "end" or parser.current.text == "}":
            break
    if braced:
        parser.expect("}")
    parser.expect_end()
    if gamma0 is None or roots is None:
        raise ParseError("curve block needs both gamma0 and roots", len(text))
    if block_m is not None and m is not None and block_m != m:
        raise ParseError(f"block gives m = {block_m} but m = {m} was requested", len(text))
    final_m = block_m if block_m is not None else m
    if final_m is None:
        raise ParseError("curve block needs m (in the block or as --m)", len(text))
    logging.debug(f"Parsed curve block with {len(roots)} root(s), m = {final_m}")
    return FactoredCurve(gamma0, tuple(roots), final_m)


def parse_poly(text: str, field: FqConfig, m: Optional[int] = None) -> Union[BivarPoly, FactoredCurve]:
    """
    Parse an expression or a curve block.

    Returns:
        FactoredCurve for curve blocks and for expressions of the shape
        y^m − γ₀∏(x − γᵢ)^{nᵢ}; BivarPoly otherwise

    Examples:
        "y^2 - x*(x-1)*(x-2)", q = 5 -> FactoredCurve(γ₀ = 1, roots 0, 1, 2, m = 2)
        "x^2 + y^3 + t*x^4", q = 7   -> BivarPoly with support {(2,0),(0,3),(4,0)}
        "y^2 -"                       -> ParseError at offset 5
    """
    if _looks_like_block(text):
        return parse_curve_block(text, field, m)
    parser = _Parser(text)
    node = parser.poly()
    parser.expect_end()
    curve = recognize_curve(node, field, m)
    if curve is not None:
        return curve
    return evaluate(node, field)


def parse_expression(text: str, field: FqConfig) -> BivarPoly:
    """Parse an expression and always expand it to a BivarPoly."""
    parser = _Parser(text)
    node = parser.poly()
    parser.expect_end()
    return evaluate(node, field)
