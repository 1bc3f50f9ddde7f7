"""Brute-force ground truth for small markets."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .core import CapExceeded, Property, verify_property
from .matching import (
    Matching,
    dominance_sorted,
    dominates,
    join,
    meet,
    worker_dominated,
)

NODE_LIMIT = 10**7


class SearchLimitExceeded(RuntimeError):
    pass


def _ir_subsets(instance, f):
    """Subsets S of f's partners with C_f(S) == S, up to the declared quota."""
    partners = instance.sorted_agents(instance.partners(f))
    q = instance.declared_quota.get(f)
    top = len(partners) if q is None else min(q, len(partners))
    out = []
    for k in range(top + 1):
        for combo in combinations(partners, k):
            S = frozenset(combo)
            if instance.choose(f, S) == S:
                out.append(S)
    return out


def _substitutable(instance, w) -> bool:
    try:
        return verify_property(instance, w, Property.SUBSTITUTABLE)
    except CapExceeded:
        return False


def enumerate_stable_bruteforce(instance, limit: int = NODE_LIMIT) -> list[Matching]:
    """Every stable matching, by assigning each firm an individually rational worker set in turn.

    A worker whose partial set is already not individually rational is pruned
    when its choice function is substitutable: no superset can fix that.
    """
    firms = instance.firms
    options = [_ir_subsets(instance, f) for f in firms]
    prunable = {w for w in instance.workers if _substitutable(instance, w)}
    unchecked = [w for w in instance.workers if w not in prunable]
    held = {w: set() for w in instance.workers}
    assigned = {}
    pairs: list = []

    def outside():
        return ((f, w) for f, w in instance.acceptable if w not in assigned[f])

    found = []
    nodes = 0

    def rec(i):
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise SearchLimitExceeded(f"brute-force search exceeded {limit} nodes")
        if i == len(firms):
            # firms, and prunable workers, are individually rational by construction
            if all(instance.choose(w, held[w]) == held[w] for w in unchecked) and not any(
                w in instance.choose(f, assigned[f] | {w}) and f in instance.choose(w, held[w] | {f})
                for f, w in outside()
            ):
                found.append(Matching(pairs))
            return
        f = firms[i]
        for S in options[i]:
            ok = True
            for w in S:
                held[w].add(f)
            for w in S:
                if w in prunable and instance.choose(w, held[w]) != held[w]:
                    ok = False
                    break
            if ok:
                assigned[f] = S
                pairs.extend((f, w) for w in S)
                rec(i + 1)
                del pairs[len(pairs) - len(S):]
            for w in S:
                held[w].discard(f)

    rec(0)
    return dominance_sorted(instance, found)


@dataclass
class LatticeReport:
    join_closed: bool = True
    meet_closed: bool = True
    distributive: bool = True
    polarity: bool = True
    equal_quota: bool = True
    concordance: bool = True
    full_quota: bool = True
    q_bar: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    size: int = 0

    AXIOMS = ("join_closed", "meet_closed", "distributive", "polarity", "equal_quota", "concordance", "full_quota")

    @property
    def ok(self) -> bool:
        return all(getattr(self, a) for a in self.AXIOMS)

    def fail(self, axiom: str, witness) -> None:
        if getattr(self, axiom):
            setattr(self, axiom, False)
            self.witnesses[axiom] = witness


def verify_lattice(instance, limit: int = NODE_LIMIT, matchings: Optional[list] = None) -> LatticeReport:
    S = matchings if matchings is not None else enumerate_stable_bruteforce(instance, limit)
    members = set(S)
    report = LatticeReport(size=len(S))
    agents = instance.firms + instance.workers

    for a in agents:
        sizes = {len(mu.of(a)) for mu in S}
        if len(sizes) > 1:
            report.fail("equal_quota", (a, sorted(sizes)))
        report.q_bar[a] = min(sizes) if sizes else 0

    for w in instance.workers:
        q = instance.quota(w)
        if q is not None and S and report.q_bar[w] < q:
            partners = {mu.of(w) for mu in S}
            if len(partners) > 1:
                report.fail("full_quota", (w, [sorted(p) for p in partners]))

    joins = {}
    meets = {}
    for i, m1 in enumerate(S):
        for m2 in S[i:]:
            j, m = join(instance, m1, m2), meet(instance, m1, m2)
            joins[m1, m2] = joins[m2, m1] = j
            meets[m1, m2] = meets[m2, m1] = m
            if j not in members:
                report.fail("join_closed", (m1, m2, j))
            if m not in members:
                report.fail("meet_closed", (m1, m2, m))
            for a in agents:
                if not (m1.of(a) & m2.of(a)) <= j.of(a):
                    report.fail("concordance", (a, m1, m2))
                    break
        for m2 in S:
            if dominates(instance, m1, m2) != worker_dominated(instance, m1, m2):
                report.fail("polarity", (m1, m2))

    if report.join_closed and report.meet_closed:
        for m1 in S:
            for m2 in S:
                for m3 in S:
                    lhs = joins[m1, meets[m2, m3]]
                    rhs = meets[joins[m1, m2], joins[m1, m3]]
                    if lhs != rhs:
                        report.fail("distributive", (m1, m2, m3))
                        break
                if not report.distributive:
                    break
            if not report.distributive:
                break
    else:
        report.distributive = False
        report.witnesses.setdefault("distributive", "lattice operations are not closed")
    return report


def weight_of(weights, mu) -> int:
    return sum(weights.get(p, 0) for p in mu)


def max_weight_bruteforce(instance, weights, limit: int = NODE_LIMIT):
    """Best stable matching by enumeration.

    Ties go to the first optimum in enumeration order, which is the most
    firm-preferred one: optimal matchings are closed under join.
    """
    found = enumerate_stable_bruteforce(instance, limit)
    best = max(found, key=lambda mu: weight_of(weights, mu))
    return best, weight_of(weights, best)
