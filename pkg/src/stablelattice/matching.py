"""Matchings as pair sets, stability, the firm-side order and lattice operations."""

from __future__ import annotations

from typing import Iterable, Mapping

from .core import InstanceError


class Matching(frozenset):
    """A set of (firm, worker) pairs with per-agent lookup.

    Equality and hashing are those of the underlying pair set.
    """

    def _build(self):
        index: dict[str, set] = {}
        for f, w in self:
            index.setdefault(f, set()).add(w)
            index.setdefault(w, set()).add(f)
        self._index = {a: frozenset(s) for a, s in index.items()}
        return self._index

    def of(self, agent: str) -> frozenset:
        """Partners of ``agent`` (works for firms and workers alike)."""
        try:
            index = self._index
        except AttributeError:
            index = self._build()
        return index.get(agent, frozenset())

    @classmethod
    def from_assignment(cls, assignment: Mapping[str, Iterable[str]]) -> "Matching":
        return cls((f, w) for f, ws in assignment.items() for w in ws)

    def __repr__(self):
        return f"Matching({sorted(self)})"


EMPTY = Matching()


def as_matching(pairs) -> Matching:
    return pairs if isinstance(pairs, Matching) else Matching(pairs)


def is_well_formed(instance, mu) -> bool:
    return all(p in instance.acceptable for p in mu)


def is_individually_rational(instance, mu) -> bool:
    mu = as_matching(mu)
    for agent in instance.firms + instance.workers:
        S = mu.of(agent)
        if instance.choose(agent, S) != S:
            return False
    return True


def blocking_pairs(instance, mu) -> list:
    mu = as_matching(mu)
    out = []
    for f, w in instance.sorted_pairs(instance.acceptable - mu):
        if w in instance.choose(f, mu.of(f) | {w}) and f in instance.choose(w, mu.of(w) | {f}):
            out.append((f, w))
    return out


def is_stable(instance, mu) -> bool:
    """Individually rational with no blocking pair; malformed pair sets are unstable."""
    mu = as_matching(mu)
    if not is_well_formed(instance, mu) or not is_individually_rational(instance, mu):
        return False
    for f, w in instance.sorted_pairs(instance.acceptable - mu):
        if w in instance.choose(f, mu.of(f) | {w}) and f in instance.choose(w, mu.of(w) | {f}):
            return False
    return True


def dominates(instance, mu1, mu2) -> bool:
    """True when every firm weakly prefers ``mu1``: C_f(mu1(f) | mu2(f)) == mu1(f)."""
    mu1, mu2 = as_matching(mu1), as_matching(mu2)
    return all(instance.choose(f, mu1.of(f) | mu2.of(f)) == mu1.of(f) for f in instance.firms)


def worker_dominated(instance, mu1, mu2) -> bool:
    """Worker-side view of ``dominates(mu1, mu2)``: every worker weakly prefers ``mu2``."""
    mu1, mu2 = as_matching(mu1), as_matching(mu2)
    return all(instance.choose(w, mu1.of(w) | mu2.of(w)) == mu2.of(w) for w in instance.workers)


def join(instance, mu1, mu2) -> Matching:
    mu1, mu2 = as_matching(mu1), as_matching(mu2)
    return Matching(
        (f, w) for f in instance.firms for w in instance.choose(f, mu1.of(f) | mu2.of(f))
    )


def meet(instance, mu1, mu2) -> Matching:
    mu1, mu2 = as_matching(mu1), as_matching(mu2)
    pairs = []
    for f in instance.firms:
        a, b = mu1.of(f), mu2.of(f)
        best = instance.choose(f, a | b)
        pairs.extend((f, w) for w in ((a | b) - best) | (a & b))
    return Matching(pairs)


def closure(instance, mu) -> dict[str, frozenset]:
    """Per firm, the workers whose addition leaves the firm's choice unchanged."""
    mu = as_matching(mu)
    out = {}
    for f in instance.firms:
        held = mu.of(f)
        out[f] = frozenset(
            w for w in instance.partners(f) if w in held or instance.choose(f, held | {w}) == held
        )
    return out


def p_set(instance, mu, stable_pairs) -> frozenset:
    """Stable pairs (f, w) with w chosen by f from mu(f) plus w."""
    mu = as_matching(mu)
    out = []
    for f, w in stable_pairs:
        if (f, w) not in instance.acceptable:
            raise InstanceError(f"stable pair ({f},{w}) is not acceptable")
        if w in mu.of(f) or w in instance.choose(f, mu.of(f) | {w}):
            out.append((f, w))
    return frozenset(out)


def dominance_sorted(instance, matchings) -> list:
    """Sort stable matchings so that every matching precedes those it dominates.

    P-sets grow strictly as one moves down the lattice, so ordering by P-set
    size (then by canonical pair list) is a linear extension of dominance that
    depends only on the set of matchings, not on how it was produced.
    """
    matchings = [as_matching(m) for m in matchings]
    stable = frozenset().union(*matchings) if matchings else frozenset()

    def key(mu):
        return len(p_set(instance, mu, stable)), [instance.pair_key(p) for p in instance.sorted_pairs(mu)]

    return sorted(matchings, key=key)


def format_matching(instance, mu) -> str:
    return "".join(f"{f} {w}\n" for f, w in instance.sorted_pairs(mu))


def parse_matching(instance, text: str) -> Matching:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ValueError(f"line {lineno}: expected '<firm> <worker>'")
        if tuple(tok) not in instance.acceptable:
            raise InstanceError(f"line {lineno}: pair {tok[0]} {tok[1]} is not acceptable")
        pairs.append(tuple(tok))
    return Matching(pairs)


def assignment(instance, mu) -> dict[str, frozenset]:
    mu = as_matching(mu)
    return {f: mu.of(f) for f in instance.firms}
