# app/solver/normalize.py - Bringing b·X(x) + c·y^m to a unit x-coefficient
import logging
from dataclasses import dataclass

from app.errors import DomainError, HypothesisError
from app.field_tower import CharacterKind, CharacterSpec
from app.local_ring import LocalNum
from app.polynomials import TailFactorForm
from app.spf import (CoordinateSet, ResidueDomain, singular_points, stationary_terms,
                     terminal_spf, v_sigma)
from app.zeta_algebra import ONE, QMonomial, ZetaRat


@dataclass(frozen=True)
class NormalizationState:
    """Z(original) = prefix + multiplier·Z(form) over O_K²."""

    form: TailFactorForm
    prefix: ZetaRat
    multiplier: QMonomial

    def combine(self, inner: ZetaRat) -> ZetaRat:
        return self.prefix + inner.mono_mul(self.multiplier)

    def then(self, later: "NormalizationState") -> "NormalizationState":
        """Compose with a state describing Z(self.form)."""
        return NormalizationState(
            later.form,
            self.prefix + later.prefix.mono_mul(self.multiplier),
            self.multiplier * later.multiplier,
        )


def require_supported_character(chi: CharacterSpec) -> None:
    if chi.kind is CharacterKind.TABLE and chi.conductor >= 2:
        raise HypothesisError(
            f"characters of conductor {chi.conductor} are outside the solver; "
            "use the oracle for them",
            reason="unsupported character",
        )


def _peel_y(form: TailFactorForm, chi: CharacterSpec) -> ZetaRat:
    """
    Rational part of Z over O_K × O_K^× for b ∈ πO_K, c ∈ O_K^×.

    The reduction is c̄y^m, singular exactly on ȳ = 0.
    """
    g = form.expand()
    domain = ResidueDomain.full()
    field = form.field
    expected = {(x, field.zero()) for x in field.elements()}
    found = singular_points(g.reduce_mod_pi(), domain.points(field))
    if found != expected:
        raise HypothesisError("y-peeling needs a reduction of the shape c·y^m")
    v, sigma = v_sigma(g, domain, chi)
    return stationary_terms(field.q, v, sigma)


def normalize_binomial_tail(form: TailFactorForm, chi: CharacterSpec) -> NormalizationState:
    """
    Extract powers of π until the x-coefficient is a unit.

    With e_b = ord(scalar) and e_c = ord(ycoef):
    - e_b ≤ e_c: Z = T^{e_b}·Z(b/π^{e_b}, c/π^{e_b}) and the loop stops
    - e_b > e_c: Z = T^{e_c}·(v + q^{-1}·Z(b/π^{e_c}, c·π^{m-e_c})) after
      one stationary-phase step on the coset ȳ = 0

    Examples:
        b = π³u, c = u', m = 2 -> multiplier q^{-2}T³
        b unit               -> multiplier 1, form unchanged
    """
    if form.scalar.is_zero() or form.ycoef.is_zero():
        raise DomainError("normalization needs nonzero x- and y-coefficients")
    q = form.field.q
    prefix = ZetaRat.zero(q)
    multiplier = ONE
    peels = 0
    while True:
        e_b, e_c = form.scalar.ord, form.ycoef.ord
        if e_b <= e_c:
            multiplier = multiplier * QMonomial(0, e_b)
            form = form.with_coefficients(form.scalar.div_by_pi_pow(e_b), form.ycoef.div_by_pi_pow(e_b))
            break
        multiplier = multiplier * QMonomial(0, e_c)
        form = form.with_coefficients(form.scalar.div_by_pi_pow(e_c), form.ycoef.div_by_pi_pow(e_c))
        prefix = prefix + _peel_y(form, chi).mono_mul(multiplier)
        multiplier = multiplier * QMonomial(1, 0)
        form = form.pull_y()
        peels += 1
    if peels:
        logging.debug(f"Normalization peeled y {peels} time(s), multiplier {multiplier!r}")
    return NormalizationState(form, prefix, multiplier)


def pull_up_roots(state: NormalizationState, chi: CharacterSpec) -> NormalizationState:
    """
    While every root lies in πO_K (and one is nonzero), split off x ∈ O_K^×
    and rescale x ↦ πx, renormalizing after each step.
    """
    q = state.form.field.q
    zero = LocalNum.zero(state.form.field)
    while True:
        roots = [gamma for gamma, _ in state.form.roots()]
        if not roots or any(g.ord < 1 for g in roots) or all(g.is_zero() for g in roots):
            return state
        units_part = terminal_spf(
            state.form.expand(),
            ResidueDomain.axis_product(CoordinateSet.units(), CoordinateSet.everything()),
            chi,
        )
        step = NormalizationState(state.form.recenter(zero), units_part, QMonomial(1, 0))
        state = state.then(step).then(normalize_binomial_tail(step.form, chi))
        logging.debug(f"Pulled roots up one level, multiplier {state.multiplier!r}")
