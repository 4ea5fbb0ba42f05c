# app/solver/superelliptic.py - Root-clustering recursion for y^m − γ₀∏(x − γᵢ)^{nᵢ}
import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from app.errors import HypothesisError, RecursionMeasureError
from app.field_tower import CharacterSpec, FqElem
from app.local_ring import LocalNum
from app.polynomials import (BivarPoly, FactoredCurve, TailFactorForm, check_tail_shape,
                             expand_validate)
from app.solver.binomial import perturbed_binomial_zeta
from app.solver.normalize import (NormalizationState, normalize_binomial_tail, pull_up_roots,
                                  require_supported_character)
from app.spf import CoordinateSet, ResidueDomain, terminal_spf
from app.zeta_algebra import QMonomial, ZetaRat

Measure = Tuple[int, int]


@dataclass
class SolverTrace:
    """Counters for one solve."""

    calls: int = 0
    measure_checks: int = 0
    violations: int = 0
    max_depth: int = 0

    def enter(self, depth: int) -> None:
        self.calls += 1
        self.max_depth = max(self.max_depth, depth)

    def check(self, parent: Measure, child: Measure) -> None:
        self.measure_checks += 1
        if not child < parent:
            self.violations += 1
            raise RecursionMeasureError(f"recursion measure went from {parent} to {child}")

    def to_json(self) -> dict:
        return {"calls": self.calls, "measure_checks": self.measure_checks,
                "violations": self.violations, "max_depth": self.max_depth}


def _clusters(form: TailFactorForm) -> Dict[FqElem, List[Tuple[LocalNum, int]]]:
    clusters: Dict[FqElem, List[Tuple[LocalNum, int]]] = {}
    for gamma, n in form.roots():
        clusters.setdefault(gamma.residue(), []).append((gamma, n))
    return dict(sorted(clusters.items(), key=lambda item: item[0].index))


def _single_root_zeta(form: TailFactorForm, chi: CharacterSpec) -> ZetaRat:
    (gamma, n), = form.roots()
    moved = form.translate(gamma)
    field_ = form.field
    epsilon = moved.scalar * moved.tail_value(LocalNum.zero(field_))
    leading = BivarPoly.monomial(epsilon, n, 0)
    h0 = (moved.x_polynomial() - leading).div_by_pi_pow(1)
    return perturbed_binomial_zeta(epsilon, n, moved.ycoef, moved.yexp, h0, chi)


def _normalized_zeta(form: TailFactorForm, chi: CharacterSpec, trace: SolverTrace, depth: int) -> ZetaRat:
    """Z of a form whose x-coefficient is a unit."""
    trace.enter(depth)
    roots = form.roots()
    if not roots:
        return terminal_spf(form.expand(), ResidueDomain.full(), chi)
    if len(roots) == 1:
        return _single_root_zeta(form, chi)

    field_ = form.field
    clusters = _clusters(form)
    others = [r for r in field_.elements() if r not in clusters]
    logging.debug(f"Depth {depth}: {len(roots)} roots in {len(clusters)} residue class(es), "
                  f"{len(others)} class(es) without roots")
    total = ZetaRat.zero(field_.q)
    if others:
        domain = ResidueDomain.axis_product(CoordinateSet.classes(others), CoordinateSet.everything())
        total = total + terminal_spf(form.expand(), domain, chi)
    parent = form.measure()
    for residue, members in clusters.items():
        anchor = members[-1][0]
        state = normalize_binomial_tail(form.recenter(anchor), chi)
        if len(clusters) == 1:
            state = pull_up_roots(state, chi)
        trace.check(parent, state.form.measure())
        inner = _normalized_zeta(state.form, chi, trace, depth + 1)
        total = total + state.combine(inner).mono_mul(QMonomial(1, 0))
    return total


def form_zeta(form: TailFactorForm, chi: CharacterSpec, trace: Optional[SolverTrace] = None) -> ZetaRat:
    """
    Z of scalar·∏(π^u x − c)^k + ycoef·y^m over O_K².

    Raises:
        HypothesisError if the tail factors are not unit-valued or the
        character is outside the solver
    """
    require_supported_character(chi)
    ok, message = check_tail_shape(form)
    if not ok:
        raise HypothesisError(message)
    trace = trace if trace is not None else SolverTrace()
    state: NormalizationState = normalize_binomial_tail(form, chi)
    return state.combine(_normalized_zeta(state.form, chi, trace, 0))


def superelliptic_zeta(curve: FactoredCurve, chi: CharacterSpec,
                       trace: Optional[SolverTrace] = None) -> ZetaRat:
    """
    Z of y^m − γ₀∏(x − γᵢ)^{nᵢ}.

    Roots outside O_K go into the unit tail; the integral roots drive the
    recursion, which strictly decreases (number of roots, largest ord of a
    root difference) at every level.

    Examples:
        q = 5, x(x−1)(x−2), m = 2  -> poles {−1}
        q = 3, γ₀ = −π², roots (π^{-1}, 2), (0, 2) -> denominator within (1,1)(2,2)
    """
    expand_validate(curve)
    form = TailFactorForm.from_curve(curve)
    logging.debug(f"Solving {curve!r} with {len(form.roots())} integral root(s)")
    return form_zeta(form, chi, trace)


def superelliptic_candidate_factors(curve: FactoredCurve) -> List[Tuple[int, int]]:
    """(1,1), plus (ñᵢ + mᵢ, ñᵢ·mᵢ·gcd(nᵢ, m)) for integral roots with nᵢ ≥ 2."""
    factors = [(1, 1)]
    m = curve.m
    for _, n in curve.integral_roots():
        if n >= 2:
            g = gcd(n, m)
            factors.append((n // g + m // g, (n // g) * (m // g) * g))
    return factors
