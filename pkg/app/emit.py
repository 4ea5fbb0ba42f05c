# app/emit.py - Rendering results as JSON, LaTeX, series listings and TikZ
import json
from fractions import Fraction
from pathlib import Path
from typing import List

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from app.field_tower import CycloNum
from app.newton import FacetKind, Polyhedron
from app.zeta_algebra import ZetaRat, series_expand

TEMPLATES_DIR = Path(__file__).parent / "templates"

env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


# --- LaTeX ---

def latex_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    sign = "-" if value < 0 else ""
    return f"{sign}\\frac{{{abs(value.numerator)}}}{{{value.denominator}}}"


def latex_cyclo(value: CycloNum) -> str:
    if value.is_rational():
        return latex_rational(value.to_fraction())
    parts = []
    for i, c in enumerate(value.coeffs):
        if not c:
            continue
        root = "" if i == 0 else (f"\\zeta_{{{value.order}}}" if i == 1 else f"\\zeta_{{{value.order}}}^{{{i}}}")
        if not root:
            parts.append(latex_rational(c))
        elif c == 1:
            parts.append(root)
        elif c == -1:
            parts.append(f"-{root}")
        else:
            parts.append(f"{latex_rational(c)}{root}")
    return "(" + " + ".join(parts).replace("+ -", "- ") + ")"


def _latex_power(k: int) -> str:
    if k == 0:
        return ""
    return "T" if k == 1 else f"T^{{{k}}}"


def latex_numerator(z: ZetaRat) -> str:
    if z.is_zero():
        return "0"
    parts = []
    for k, c in sorted(z.numerator.items()):
        coeff = latex_cyclo(c)
        power = _latex_power(k)
        if power and coeff == "1":
            parts.append(power)
        elif power and coeff == "-1":
            parts.append(f"-{power}")
        else:
            parts.append(f"{coeff}{power}")
    return " + ".join(parts).replace("+ -", "- ")


def latex_factors(z: ZetaRat) -> List[str]:
    return [f"\\left(1 - {z.q}^{{-{a}}}{_latex_power(b)}\\right)" for a, b in z.denominator]


def render_latex(z: ZetaRat, character: str) -> str:
    template = env.get_template("zeta.tex.j2")
    return template.render(
        q=z.q,
        character=character,
        numerator=latex_numerator(z),
        factors=latex_factors(z),
    )


# --- series ---

def render_series(z: ZetaRat, order: int) -> str:
    coeffs = series_expand(z, order)
    lines = [f"T^{k}: {c!r}" for k, c in enumerate(coeffs)]
    return "\n".join(lines) + "\n"


# --- Newton polyhedra ---

def render_tikz(polyhedron: Polyhedron) -> str:
    xs = [v[0] for v in polyhedron.vertices]
    ys = [v[1] for v in polyhedron.vertices]
    reach_x = max(xs) + 2
    reach_y = max(ys) + 2
    compact = [f for f in polyhedron.facets if f.kind is FacetKind.COMPACT]
    template = env.get_template("newton.tikz.j2")
    return template.render(
        vertices=polyhedron.vertices,
        support=sorted(polyhedron.support),
        compact=compact,
        first=polyhedron.vertices[0],
        last=polyhedron.vertices[-1],
        reach_x=reach_x,
        reach_y=reach_y,
    )
