"""Rotation posets: realizing, enumerating and embedding stable matchings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .matching import Matching, dominance_sorted
from .ringsets import NotUpperSet, PartialOrder, characteristic, exact_rank

ENUMERATION_LIMIT = 1_000_000


@dataclass(frozen=True)
class Rotation:
    index: int
    plus: frozenset
    minus: frozenset

    def __post_init__(self):
        if self.plus & self.minus:
            raise ValueError("rotation adds and removes the same pair")

    @property
    def key(self) -> tuple:
        """Content of the rotation, independent of its chain position."""
        return self.plus, self.minus


@dataclass(frozen=True)
class RotationPoset:
    instance: object = field(repr=False, compare=False)
    mu_F: Matching
    mu_W: Matching
    rotations: tuple
    lambdas: dict = field(hash=False)
    order: PartialOrder = field(hash=False)
    chain: tuple = field(default=(), compare=False, repr=False)
    oracle_calls: int = field(default=0, compare=False)

    def rotation(self, index: int) -> Rotation:
        return self.rotations[index - 1]

    @property
    def indices(self) -> tuple:
        return tuple(r.index for r in self.rotations)

    def precedes(self, i: int, j: int) -> bool:
        """True when rotation i is above rotation j (i >=* j)."""
        return self.order.geq(i, j)


@dataclass(frozen=True)
class AffineMap:
    pairs: tuple  # row labels
    rotations: tuple  # column labels (rotation indices)
    A: np.ndarray = field(compare=False)
    x0: np.ndarray = field(compare=False)

    def apply(self, y) -> np.ndarray:
        return self.x0 + self.A @ np.asarray(y, dtype=np.int64)

    def indicator(self, upper: Iterable[int]) -> np.ndarray:
        return characteristic(upper, self.rotations)


def _indices(upper) -> frozenset:
    return frozenset(r.index if isinstance(r, Rotation) else r for r in upper)


def is_upper_set(poset: RotationPoset, subset) -> bool:
    return poset.order.is_upper_set(_indices(subset))


def realize(poset: RotationPoset, upper) -> Matching:
    """mu_F plus every added pair minus every removed pair of the upper set."""
    upper = _indices(upper)
    if not poset.order.is_upper_set(upper):
        raise NotUpperSet(f"{sorted(upper)} is not an upper set")
    chosen = [poset.rotation(i) for i in sorted(upper)]
    plus = frozenset().union(*(r.plus for r in chosen))
    minus = frozenset().union(*(r.minus for r in chosen))
    return Matching((poset.mu_F | plus) - minus)


def upper_sets(poset: RotationPoset, limit: Optional[int] = ENUMERATION_LIMIT):
    return poset.order.upper_sets(limit=limit)


def enumerate_stable(poset: RotationPoset, limit: Optional[int] = ENUMERATION_LIMIT) -> list[Matching]:
    found = [realize(poset, U) for U in upper_sets(poset, limit)]
    return dominance_sorted(poset.instance, found)


def stable_pairs(poset: RotationPoset) -> frozenset:
    return frozenset(poset.mu_F).union(*(r.plus for r in poset.rotations))


def affine_map(poset: RotationPoset) -> AffineMap:
    inst = poset.instance
    pairs = tuple(inst.sorted_pairs(inst.acceptable))
    row = {p: i for i, p in enumerate(pairs)}
    A = np.zeros((len(pairs), len(poset.rotations)), dtype=np.int64)
    for j, rot in enumerate(poset.rotations):
        for p in rot.plus:
            A[row[p], j] += 1
        for p in rot.minus:
            A[row[p], j] -= 1
    if exact_rank(A) != len(poset.rotations):
        raise ArithmeticError("rotation matrix is rank deficient")
    return AffineMap(pairs, poset.indices, A, characteristic(poset.mu_F, pairs))


def _format_pairs(instance, pairs) -> str:
    return ",".join(f"{f}:{w}" for f, w in instance.sorted_pairs(pairs)) or "-"


def format_poset(poset: RotationPoset) -> str:
    inst = poset.instance
    lines = [
        f"ROTATION {r.index} PLUS {_format_pairs(inst, r.plus)} MINUS {_format_pairs(inst, r.minus)}"
        for r in poset.rotations
    ]
    lines += [f"ORDER {a} {b}" for a, b in sorted(poset.order.covers())]
    return "".join(line + "\n" for line in lines)
