# app/oracle.py - Point counting and truncated integrals, independent of the solver
"""
Verification by brute force over residues mod π^e:
- N_e = #{(x, y) mod π^e : g ≡ 0 mod π^e}
- Poincaré check for trivial χ: with P_e = N_e·q^{-2e}, the Taylor
  coefficients of Z satisfy z_k = P_k − P_{k+1}
- truncated integral with an explicit bound on the undetermined mass

Polynomials without mixed monomials, g = A(x) + B(y), are counted from
value histograms of A and B; the result is the same as full enumeration.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from app.config import load_settings
from app.errors import BudgetExceededError, DomainError
from app.field_tower import CharacterSpec, CycloNum, FqConfig
from app.local_ring import LocalNum, character_value, residues_mod
from app.polynomials import BivarPoly
from app.zeta_algebra import ZetaRat, series_expand


@dataclass(frozen=True)
class CountProfile:
    """N_0 .. N_{e_max}, with N_0 = 1."""

    q: int
    counts: Tuple[int, ...]

    @property
    def e_max(self) -> int:
        return len(self.counts) - 1

    def normalized(self) -> List[Fraction]:
        return [Fraction(n, self.q ** (2 * e)) for e, n in enumerate(self.counts)]

    def lifting_bound_holds(self) -> bool:
        if any(n > self.q ** (2 * e) for e, n in enumerate(self.counts)):
            return False
        return all(nxt <= self.q ** 2 * cur for cur, nxt in zip(self.counts, self.counts[1:]))

    def to_json(self) -> dict:
        return {"q": self.q, "e_max": self.e_max, "counts": list(self.counts)}


def _guard(field_: FqConfig, e: int, budget: Optional[int]) -> None:
    limit = budget if budget is not None else load_settings().budget
    size = field_.q ** (2 * e)
    if size > limit:
        logging.info(f"❌ Refusing enumeration of {size} points (budget {limit})")
        raise BudgetExceededError(f"enumerating q^(2e) = {size} points exceeds the budget {limit}")
    logging.info(f"✅ Enumerating q^(2e) = {size} points at depth {e}")


def _univariate_mod(coeffs: Dict[int, LocalNum], value: LocalNum, e: int) -> LocalNum:
    """Σ c_i value^i mod π^e by Horner's rule."""
    field_ = value.field
    acc = LocalNum.zero(field_)
    top = max(coeffs) if coeffs else 0
    for i in range(top, -1, -1):
        acc = acc * value
        if i in coeffs:
            acc = acc + coeffs[i]
        acc = acc.reduce_mod(e)
    return acc


def _split(g: BivarPoly) -> Optional[Tuple[Dict[int, LocalNum], Dict[int, LocalNum]]]:
    if g.has_mixed_terms():
        return None
    a = {i: c for (i, j), c in g.terms.items() if j == 0}
    b = {j: c for (i, j), c in g.terms.items() if i == 0 and j > 0}
    return a, b


def _histogram(coeffs: Dict[int, LocalNum], field_: FqConfig, e: int) -> Counter:
    return Counter(_univariate_mod(coeffs, r, e) for r in residues_mod(field_, e))


def _value_classes(g: BivarPoly, e: int) -> Counter:
    """Multiplicity of each value g(P) mod π^e over P ∈ (O_K/π^e)²."""
    field_ = g.field
    parts = _split(g)
    if parts is not None:
        hist_a = _histogram(parts[0], field_, e)
        hist_b = _histogram(parts[1], field_, e)
        classes: Counter = Counter()
        for va, ca in hist_a.items():
            for vb, cb in hist_b.items():
                classes[(va + vb).reduce_mod(e)] += ca * cb
        return classes
    reps = residues_mod(field_, e)
    return Counter(g.evaluate(x, y).reduce_mod(e) for x in reps for y in reps)


def count_mod(g: BivarPoly, e: int, budget: Optional[int] = None) -> int:
    """
    N_e for integral g.

    Examples:
        y² − x(x−1)(x−2), q = 5, e = 1 -> 7
        e = 0                          -> 1
        g = x                          -> q^e
    """
    if e < 0:
        raise DomainError(f"depth must be >= 0, got {e}")
    if e == 0:
        return 1
    if not g.is_integral():
        raise DomainError("counting needs a polynomial over O_K")
    field_ = g.field
    _guard(field_, e, budget)
    parts = _split(g)
    if parts is None:
        reps = residues_mod(field_, e)
        return sum(1 for x in reps for y in reps if g.evaluate(x, y).ord >= e)
    hist_a = _histogram(parts[0], field_, e)
    neg_b = Counter({(-v).reduce_mod(e): c for v, c in _histogram(parts[1], field_, e).items()})
    return sum(c * neg_b.get(v, 0) for v, c in hist_a.items())


def count_profile(g: BivarPoly, e_max: int, budget: Optional[int] = None) -> CountProfile:
    _guard(g.field, e_max, budget)
    counts = tuple(count_mod(g, e, budget) for e in range(e_max + 1))
    return CountProfile(g.field.q, counts)


@dataclass(frozen=True)
class PoincareReport:
    passed: bool
    first_mismatch: Optional[int]
    expected: Tuple[Fraction, ...]
    observed: Tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "first_mismatch": self.first_mismatch,
            "expected": [str(v) for v in self.expected],
            "observed": [str(v) for v in self.observed],
        }


def poincare_check(z: ZetaRat, profile: CountProfile) -> PoincareReport:
    """
    Compare Z with the counts through z_k = P_k − P_{k+1}, k < e_max.

    A numerator corrupted by +q^{-1}T fails at index 1.
    """
    if profile.e_max < 1:
        raise DomainError("the Poincaré check needs counts up to depth >= 1")
    coeffs = series_expand(z, profile.e_max - 1)
    if not all(c.is_rational() for c in coeffs):
        raise DomainError("the Poincaré check applies to trivial characters only")
    observed = tuple(c.to_fraction() for c in coeffs)
    normalized = profile.normalized()
    expected = tuple(normalized[k] - normalized[k + 1] for k in range(profile.e_max))
    mismatch = next((k for k, (a, b) in enumerate(zip(observed, expected)) if a != b), None)
    if mismatch is None:
        logging.info(f"✅ Poincaré check passed to depth {profile.e_max}")
    else:
        logging.warning(f"⚠️  Poincaré check failed at coefficient {mismatch}")
    return PoincareReport(mismatch is None, mismatch, expected, observed)


# ============================================================================
# TRUNCATED INTEGRAL
# ============================================================================

@dataclass(frozen=True)
class TruncatedIntegral:
    value: CycloNum
    tail_bound: Fraction
    depth: int
    t0: Fraction

    def to_json(self) -> dict:
        return {"depth": self.depth, "t0": str(self.t0), "value": self.value.to_json(),
                "order": self.value.order, "tail_bound": str(self.tail_bound)}


def truncated_integral(g: BivarPoly, chi: CharacterSpec, e: int, t0: Fraction,
                       budget: Optional[int] = None) -> TruncatedIntegral:
    """
    Σ over classes mod π^e whose ord g ≤ e − 1 − c_χ of χ(ac g)·t0^{ord g}·q^{-2e}.

    The remaining classes have total mass tail_bound, and |Z(t0) − value| ≤
    tail_bound for real t0 in (0, 1).

    Examples:
        g = x, trivial χ, e = 3, t0 = 1/2, q = 5 -> Σ_{k≤2} (4/5)·10^{-k}, bound 5^{-3}
    """
    t0 = Fraction(t0)
    if not 0 < t0 < 1:
        raise DomainError(f"t0 must lie in (0, 1), got {t0}")
    c = chi.effective_conductor
    if e < c + 1:
        raise DomainError(f"depth {e} must be at least conductor + 1 = {c + 1}")
    if not g.is_integral():
        raise DomainError("the truncated integral needs a polynomial over O_K")
    field_ = g.field
    _guard(field_, e, budget)
    mass = Fraction(1, field_.q ** (2 * e))
    value = CycloNum.zero(chi.order)
    undetermined = 0
    for residue, count in _value_classes(g, e).items():
        k = residue.ord
        if residue.is_zero() or k > e - 1 - c:
            undetermined += count
            continue
        value = value + character_value(chi, residue) * (t0 ** k * mass * count)
    return TruncatedIntegral(value, mass * undetermined, e, t0)


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    exact: bool

    def to_json(self) -> dict:
        return {"passed": self.passed, "exact": self.exact}


def within_bound(z_value: CycloNum, truncated: TruncatedIntegral) -> BoundCheck:
    """|Z(t0) − value| ≤ tail_bound, exactly when |·|² is rational."""
    diff = z_value - truncated.value
    squared = diff * diff.conjugate()
    bound_sq = truncated.tail_bound ** 2
    if squared.is_rational():
        return BoundCheck(squared.to_fraction() <= bound_sq, True)
    return BoundCheck(abs(diff.to_complex()) ** 2 <= float(bound_sq) * (1 + 1e-12), False)
