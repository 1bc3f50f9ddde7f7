"""Rings of sets presented by a maximal chain and a membership test.

The ring itself is never materialized.  From a chain C_0 < C_1 < ... < C_k
we read off the minimal differences K_i = C_i - C_{i-1}, recover the index
sets Lambda(K_i) by peeling differences off C_i while membership holds, and
order the differences by inclusion of those index sets.  Upper sets of that
order correspond one-to-one to ring members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Optional, Sequence

import numpy as np


class NotUpperSet(ValueError):
    pass


class ChainError(ValueError):
    pass


@dataclass
class ChainPresentation:
    base: Sequence[Hashable]
    chain: Sequence[frozenset]
    membership: Callable[[frozenset], bool]
    calls: int = 0

    def __post_init__(self):
        self.chain = [frozenset(c) for c in self.chain]
        for prev, cur in zip(self.chain, self.chain[1:]):
            if not prev < cur:
                raise ChainError("chain is not strictly increasing")

    def is_member(self, H: frozenset) -> bool:
        self.calls += 1
        return bool(self.membership(frozenset(H)))


@dataclass(frozen=True)
class MinimalDifference:
    index: int  # 1-based position along the chain
    elements: frozenset


def minimal_differences(chain: ChainPresentation) -> list[MinimalDifference]:
    C = chain.chain
    return [MinimalDifference(i, C[i] - C[i - 1]) for i in range(1, len(C))]


def irreducibles_via_chain(chain: ChainPresentation) -> dict[int, frozenset]:
    """Lambda(K_i) for every minimal difference, keyed by chain index."""
    K = {d.index: d.elements for d in minimal_differences(chain)}
    lambdas = {}
    for i in sorted(K):
        H = chain.chain[i]
        lam = set(range(1, i + 1))
        for j in range(i - 1, 0, -1):
            candidate = H - K[j]
            if chain.is_member(candidate):
                H = candidate
                lam.discard(j)
        lambdas[i] = frozenset(lam)
    return lambdas


# ---------------------------------------------------------------------------
# finite partial orders


@dataclass(frozen=True)
class PartialOrder:
    """A finite partial order; ``above[b]`` holds every a != b with a >= b."""

    elements: tuple
    above: dict = field(hash=False)

    @classmethod
    def from_relation(cls, elements: Iterable, geq: Callable[[Hashable, Hashable], bool]) -> "PartialOrder":
        elements = tuple(elements)
        above = {b: frozenset(a for a in elements if a != b and geq(a, b)) for b in elements}
        order = cls(elements, above)
        order._check()
        return order

    def _check(self):
        for b in self.elements:
            for a in self.above[b]:
                if b in self.above[a]:
                    raise ValueError(f"relation is not antisymmetric on {a!r}, {b!r}")
                if not self.above[a] <= self.above[b]:
                    raise ValueError("relation is not transitive")

    def geq(self, a, b) -> bool:
        return a == b or a in self.above[b]

    def strict_pairs(self) -> list[tuple]:
        """All (a, b) with a > b, in element order."""
        pos = {x: i for i, x in enumerate(self.elements)}
        return sorted(((a, b) for b in self.elements for a in self.above[b]), key=lambda ab: (pos[ab[0]], pos[ab[1]]))

    def covers(self) -> list[tuple]:
        """Pairs (a, b) with a > b and nothing strictly between them."""
        return [
            (a, b)
            for a, b in self.strict_pairs()
            if not any(a in self.above[c] for c in self.above[b])
        ]

    def minimal(self) -> list:
        below = {a for b in self.elements for a in self.above[b]}
        return [x for x in self.elements if x not in below]

    def maximal(self) -> list:
        return [x for x in self.elements if not self.above[x]]

    def is_upper_set(self, subset: Iterable) -> bool:
        subset = set(subset)
        if not subset <= set(self.elements):
            return False
        return all(self.above[b] <= subset for b in subset)

    def linear_extension(self) -> list:
        """Elements with every element after all elements above it; ties keep the given order."""
        placed, out = set(), []
        while len(out) < len(self.elements):
            x = next(x for x in self.elements if x not in placed and self.above[x] <= placed)
            placed.add(x)
            out.append(x)
        return out

    def upper_sets(self, limit: Optional[int] = None) -> Iterator[frozenset]:
        """Depth-first over a linear extension: each element is in or out once its superiors are decided."""
        elems = self.linear_extension()
        count = 0

        def rec(i, chosen):
            nonlocal count
            if i == len(elems):
                count += 1
                if limit is not None and count > limit:
                    raise OverflowError(f"more than {limit} upper sets")
                yield frozenset(chosen)
                return
            x = elems[i]
            yield from rec(i + 1, chosen)
            if self.above[x] <= chosen:
                chosen.add(x)
                yield from rec(i + 1, chosen)
                chosen.discard(x)

        yield from rec(0, set())


def order_from_lambdas(lambdas: dict) -> PartialOrder:
    """K_a >= K_b exactly when Lambda(K_a) is a subset of Lambda(K_b)."""
    return PartialOrder.from_relation(sorted(lambdas), lambda a, b: lambdas[a] <= lambdas[b])


def reconstruct(upper_set: Iterable[MinimalDifference], C_0: Iterable, order: Optional[PartialOrder] = None) -> frozenset:
    upper_set = list(upper_set)
    if order is not None and not order.is_upper_set(d.index for d in upper_set):
        raise NotUpperSet("not an upper set")
    return frozenset(C_0).union(*(d.elements for d in upper_set))


# ---------------------------------------------------------------------------
# matrices


def exact_rank(matrix) -> int:
    """Rank over the rationals by Gaussian elimination on Fractions."""
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(matrix).tolist()]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][col] / rows[rank][col]
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def characteristic(subset: Iterable, base: Sequence) -> np.ndarray:
    subset = set(subset)
    return np.array([1 if b in subset else 0 for b in base], dtype=np.int64)


def birkhoff_matrix(differences: Sequence[MinimalDifference], C_0: Iterable, base: Sequence):
    """Columns are characteristic vectors of the differences; x0 is that of C_0."""
    for d1, d2 in combinations(differences, 2):
        if d1.elements & d2.elements:
            raise ValueError(f"differences {d1.index} and {d2.index} overlap")
    A = np.zeros((len(base), len(differences)), dtype=np.int64)
    for j, d in enumerate(differences):
        A[:, j] = characteristic(d.elements, base)
    if exact_rank(A) != len(differences):
        raise ValueError("matrix does not have full column rank")
    return A, characteristic(C_0, base)


def brute_force_chains(family: Iterable[Iterable]) -> list[list[frozenset]]:
    """All maximal chains of a small ring of sets, bottom to top."""
    family = {frozenset(s) for s in family}
    bottom = min(family, key=len)
    top = max(family, key=len)

    def step(cur):
        if cur == top:
            yield [cur]
            return
        above = [s for s in family if cur < s]
        for s in above:
            if not any(cur < t < s for t in above):
                for rest in step(s):
                    yield [cur] + rest

    return list(step(bottom))
