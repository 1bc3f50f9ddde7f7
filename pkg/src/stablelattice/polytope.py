"""Order polytope of the rotation poset and the extended formulation of the matching polytope."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algorithms import rotation_poset
from .represent import AffineMap, RotationPoset, affine_map
from .ringsets import exact_rank


@dataclass(frozen=True)
class LinearInequality:
    """sum(coeffs[v] * v) >= rhs"""

    coeffs: tuple  # ((variable, coefficient), ...)
    rhs: int
    tag: str  # nonneg | upper | precedence

    def holds(self, point) -> bool:
        return sum(c * point[v] for v, c in self.coeffs) >= self.rhs

    def is_tight(self, point) -> bool:
        return sum(c * point[v] for v, c in self.coeffs) == self.rhs


def order_polytope_facets(poset: RotationPoset) -> list[LinearInequality]:
    """y >= 0 on minimal rotations, y <= 1 on maximal ones, y_a >= y_b on covers."""
    order = poset.order
    rows = [LinearInequality(((i, 1),), 0, "nonneg") for i in sorted(order.minimal())]
    rows += [LinearInequality(((i, -1),), -1, "upper") for i in sorted(order.maximal())]
    rows += [LinearInequality(((a, 1), (b, -1)), 0, "precedence") for a, b in sorted(order.covers())]
    return rows


@dataclass(frozen=True)
class ExtendedFormulation:
    affine: AffineMap
    facets: tuple

    @property
    def x_names(self) -> list[str]:
        return [f"x_{f}_{w}" for f, w in self.affine.pairs]

    @property
    def y_names(self) -> dict:
        return {i: f"y_r{i}" for i in self.affine.rotations}

    def contains(self, x, y) -> bool:
        x = np.asarray(x)
        point = dict(zip(self.affine.rotations, y))
        return np.array_equal(x, self.affine.apply(y)) and all(r.holds(point) for r in self.facets)


def extended_formulation(instance=None, poset: RotationPoset | None = None) -> ExtendedFormulation:
    if poset is None:
        poset = rotation_poset(instance)
    return ExtendedFormulation(affine_map(poset), tuple(order_polytope_facets(poset)))


def _term(coef: int, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else ("" if first else "+")
    mag = abs(coef)
    body = name if mag == 1 else f"{mag} {name}"
    return f"{sign} {body}".strip() if first else f"{sign} {body}"


def _expr(terms) -> str:
    parts = [_term(c, n, i == 0) for i, (n, c) in enumerate(terms)]
    return " ".join(parts) if parts else "0"


def format_lp(form: ExtendedFormulation) -> str:
    aff = form.affine
    ynames = form.y_names
    lines = ["max 0", "subject to"]
    for row, (xname, x0) in enumerate(zip(form.x_names, aff.x0.tolist())):
        terms = [(xname, 1)]
        terms += [(ynames[j], -int(c)) for j, c in zip(aff.rotations, aff.A[row].tolist()) if c]
        lines.append(f" e{row + 1}: {_expr(terms)} = {int(x0)}")
    for k, ineq in enumerate(form.facets, 1):
        terms = [(ynames[v], c) for v, c in ineq.coeffs]
        lines.append(f" {ineq.tag[0]}{k}: {_expr(terms)} >= {ineq.rhs}")
    lines.append("bounds")
    lines += [f" {n} free" for n in form.x_names]
    lines += [f" {ynames[j]} free" for j in aff.rotations]
    lines.append("end")
    return "".join(line + "\n" for line in lines)


def affine_hull_dimension(points) -> int:
    points = [np.asarray(p, dtype=np.int64) for p in points]
    if len(points) <= 1:
        return 0
    return exact_rank(np.stack([p - points[0] for p in points[1:]]))
