# app/main.py - Command-line entry point and job runner

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from sympy import factorint

from app.config import load_settings
from app.emit import dump_json, render_latex, render_series, render_tikz
from app.errors import DomainError, HypothesisError, IgusaError
from app.field_tower import CharacterSpec, FqConfig
from app.newton import binomial_nondegenerate, newton_polyhedron
from app.oracle import count_profile, poincare_check, truncated_integral, within_bound
from app.parsing import parse_curve_block, parse_expression, parse_poly
from app.polynomials import BivarPoly, FactoredCurve, expand_validate
from app.solver import (SolverTrace, binomial_candidate_factors, perturbed_binomial_zeta,
                        split_binomial_shape, superelliptic_candidate_factors, superelliptic_zeta)
from app.zeta_algebra import ZetaRat

MODES = ("binomial", "superelliptic", "count", "auto")
MODE_ALIASES = {"theorem11": "binomial", "theorem12": "superelliptic"}
EMITS = ("json", "latex", "series:E", "tikz", "newton")
DEFAULT_T0 = Fraction(1, 2)

Parsed = Union[BivarPoly, FactoredCurve]


@dataclass(frozen=True)
class JobSpec:
    """One invocation of the engine."""

    q: Optional[int] = None
    p: Optional[int] = None
    k: Optional[int] = None
    modulus: Optional[str] = None
    character: str = "trivial"
    m: Optional[int] = None
    poly: Optional[str] = None
    curve: Optional[str] = None
    input_path: Optional[str] = None
    mode: str = "auto"
    emit: str = "json"
    oracle_depth: Optional[int] = None
    t0: Optional[Fraction] = None
    budget: Optional[int] = None


# ============================================================================
# JOB PREPARATION
# ============================================================================

def build_field(job: JobSpec) -> FqConfig:
    """Residue field from --q, or from --p/--k, checking that they agree."""
    p, k = job.p, job.k
    if job.q is None and p is None:
        raise DomainError("one of --q or --p is required", reason="missing field")
    if job.q is not None:
        factors = factorint(job.q)
        if len(factors) != 1:
            raise DomainError(f"q = {job.q} is not a prime power", reason="bad field")
        (qp, qk), = factors.items()
        if (p is not None and p != qp) or (k is not None and k != qk):
            raise DomainError(f"q = {job.q} does not match p = {p}, k = {k}", reason="bad field")
        p, k = int(qp), int(qk)
    k = k or 1
    modulus = FqConfig.parse_modulus(job.modulus, p) if job.modulus else None
    return FqConfig(p, k, modulus)


def read_source(job: JobSpec) -> Tuple[str, bool]:
    """The input text and whether it was given as a curve block."""
    given = [s for s in (job.poly, job.curve, job.input_path) if s is not None]
    if len(given) != 1:
        raise DomainError("exactly one of --poly, --curve or --input is required", reason="missing input")
    if job.curve is not None:
        return job.curve, True
    if job.poly is not None:
        return job.poly, False
    try:
        with open(job.input_path, "r", encoding="utf-8") as handle:
            return handle.read().strip(), False
    except OSError as exc:
        raise DomainError(f"cannot read {job.input_path}: {exc}", reason="unreadable input") from exc


def parse_emit(text: str) -> Tuple[str, Optional[int]]:
    if text.startswith("series:"):
        try:
            order = int(text[len("series:"):])
        except ValueError:
            order = -1
        if order < 0:
            raise DomainError(f"expected series:E with E >= 0, got {text!r}", reason="bad emit")
        return "series", order
    if text not in ("json", "latex", "tikz", "newton"):
        raise DomainError(f"unknown emit format {text!r}", reason="bad emit")
    return text, None


def as_polynomial(parsed: Parsed) -> BivarPoly:
    return expand_validate(parsed) if isinstance(parsed, FactoredCurve) else parsed


# ============================================================================
# SOLVING
# ============================================================================

def solve(parsed: Parsed, mode: str, chi: CharacterSpec) -> Tuple[ZetaRat, dict]:
    """Dispatch to a driver; returns the raw Z and the driver-specific report fields."""
    if mode == "auto":
        mode = "superelliptic" if isinstance(parsed, FactoredCurve) else "binomial"
        try:
            return solve(parsed, mode, chi)
        except HypothesisError as exc:
            if exc.reason != HypothesisError.reason:
                raise
            raise HypothesisError(exc.message, reason="out of theorem scope") from exc

    if mode == "superelliptic":
        if not isinstance(parsed, FactoredCurve):
            raise HypothesisError("input is not of the form y^m - gamma0*prod(x - gamma_i)^n_i")
        trace = SolverTrace()
        z = superelliptic_zeta(parsed, chi, trace)
        return z, {"mode": mode, "candidates": superelliptic_candidate_factors(parsed),
                   "trace": trace.to_json()}

    shape = split_binomial_shape(as_polynomial(parsed))
    z = perturbed_binomial_zeta(shape.mu1, shape.d, shape.mu2, shape.m, shape.h0, chi)
    p = chi.field.p
    return z, {"mode": "binomial", "candidates": binomial_candidate_factors(shape.d, shape.m),
               "nondegenerate": binomial_nondegenerate(shape.mu1, shape.d, shape.mu2, shape.m, p)}


def oracle_report(g: BivarPoly, z: ZetaRat, chi: CharacterSpec, depth: int,
                  t0: Optional[Fraction], budget: Optional[int]) -> dict:
    report: dict = {"depth": depth}
    passed = True
    if chi.is_trivial:
        profile = count_profile(g, depth, budget)
        check = poincare_check(z, profile)
        report["counts"] = profile.to_json()
        report["poincare"] = check.to_json()
        passed = check.passed
    if t0 is not None or not chi.is_trivial:
        t0 = t0 if t0 is not None else DEFAULT_T0
        truncated = truncated_integral(g, chi, depth, t0, budget)
        bound = within_bound(z.evaluate(t0), truncated)
        report["truncated"] = truncated.to_json()
        report["bound"] = bound.to_json()
        passed = passed and bound.passed
    report["passed"] = passed
    return report


def run(job: JobSpec) -> Tuple[int, str]:
    """
    Execute a job.

    Returns:
        (exit code, text for stdout); failures become a JSON error object
        with the error's exit code
    """
    try:
        return 0, _run(job)
    except IgusaError as exc:
        logging.error(f"❌ {exc.reason}: {exc.message}")
        return exc.exit_code, dump_json(exc.to_dict()) + "\n"


def _run(job: JobSpec) -> str:
    mode = MODE_ALIASES.get(job.mode, job.mode)
    if mode not in MODES:
        raise DomainError(f"unknown mode {job.mode!r}", reason="bad mode")
    emit, order = parse_emit(job.emit)
    field_ = build_field(job)
    chi = CharacterSpec.parse(job.character, field_)
    text, is_block = read_source(job)
    if is_block:
        parsed = parse_curve_block(text, field_, job.m)
    elif mode == "count":
        parsed = parse_expression(text, field_)
    else:
        parsed = parse_poly(text, field_, job.m)
    budget = job.budget if job.budget is not None else load_settings().budget

    if emit in ("tikz", "newton"):
        polyhedron = newton_polyhedron(as_polynomial(parsed).support)
        return render_tikz(polyhedron) if emit == "tikz" else dump_json(polyhedron.to_json()) + "\n"

    if mode == "count":
        if job.oracle_depth is None:
            raise DomainError("count mode needs --oracle-depth", reason="missing depth")
        profile = count_profile(as_polynomial(parsed), job.oracle_depth, budget)
        return dump_json({"q": field_.q, "input_echo": text, "counts": profile.to_json(),
                          "lifting_bound": profile.lifting_bound_holds()}) + "\n"

    raw, details = solve(parsed, mode, chi)
    z = raw.simplify()
    logging.info(f"✅ Solved in {details['mode']} mode: {len(raw.denominator)} raw factor(s), "
                 f"{len(z.denominator)} after simplification")
    if emit == "latex":
        return render_latex(z, chi.describe())
    if emit == "series":
        return render_series(z, order)

    report = {
        "q": field_.q,
        "character": chi.describe(),
        "input_echo": text,
        "mode": details["mode"],
        "zeta": z.to_json(),
        "raw_denominator": [[a, b] for a, b in raw.denominator],
        "poles": z.poles().to_json(),
        "simplified": z.is_reduced(),
        "candidates": [[a, b] for a, b in details["candidates"]],
    }
    if "nondegenerate" in details:
        report["nondegenerate"] = details["nondegenerate"]
    if "trace" in details:
        report["trace"] = details["trace"]
    if job.oracle_depth is not None:
        report["oracle"] = oracle_report(as_polynomial(parsed), z, chi, job.oracle_depth, job.t0, budget)
    return dump_json(report) + "\n"


# ============================================================================
# COMMAND LINE
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m app.main",
        description="Exact Igusa zeta functions of superelliptic curves and perturbed binomials over F_q((t)).",
    )
    field_group = parser.add_argument_group("residue field")
    field_group.add_argument("--q", type=int, help="field size q = p^k")
    field_group.add_argument("--p", type=int, help="characteristic")
    field_group.add_argument("--k", type=int, help="extension degree")
    field_group.add_argument("--modulus", help='irreducible modulus in z, e.g. "z^2 + 1"')

    input_group = parser.add_argument_group("input")
    input_group.add_argument("--char", dest="character", default="trivial",
                             help="trivial | mult:N:e | table:<path>")
    input_group.add_argument("--m", type=int, help="y-exponent of a curve block")
    input_group.add_argument("--poly", help='expression, e.g. "x^2 + y^3 + t*x^4"')
    input_group.add_argument("--curve", help='block, e.g. "gamma0=1; roots=[(0,1),(1,1)]"')
    input_group.add_argument("--input", dest="input_path", help="file holding an expression or block")

    run_group = parser.add_argument_group("run")
    run_group.add_argument("--mode", choices=MODES + tuple(MODE_ALIASES), default="auto")
    run_group.add_argument("--emit", default="json", help=" | ".join(EMITS))
    run_group.add_argument("--oracle-depth", type=int, help="verify against counts mod t^E")
    run_group.add_argument("--t0", type=Fraction, help="real point in (0, 1) for the truncated integral")
    run_group.add_argument("--budget", type=int, help="enumeration budget (overrides IGUSA_BUDGET)")
    return parser


def job_from_args(args: argparse.Namespace) -> JobSpec:
    return JobSpec(
        q=args.q, p=args.p, k=args.k, modulus=args.modulus, character=args.character,
        m=args.m, poly=args.poly, curve=args.curve, input_path=args.input_path,
        mode=args.mode, emit=args.emit, oracle_depth=args.oracle_depth, t0=args.t0,
        budget=args.budget,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=getattr(logging, load_settings().log_level, logging.WARNING),
    )
    code, output = run(job_from_args(args))
    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
