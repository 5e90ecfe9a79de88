"""JSON/text helpers shared by the reports."""

from __future__ import annotations

from fractions import Fraction

from .covering import Ray
from .graph import Graph


def rational(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def ray_json(g: Graph, r: Ray) -> dict:
    return {"prefix": g.format_path(r.prefix), "period": g.format_path(r.period)}


def grid(rows) -> str:
    """Right-aligned text grid."""
    cells = [[str(c) for c in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)
