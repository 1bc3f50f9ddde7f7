"""Deferred acceptance, break-marriage and construction of the rotation poset."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Optional

from .matching import Matching, as_matching, closure, dominates, is_stable
from .represent import Rotation, RotationPoset
from .ringsets import ChainPresentation, irreducibles_via_chain, order_from_lambdas


@dataclass(frozen=True)
class TraceStep:
    """One round of the proposal process.

    ``X_f`` are the live sets at the start of the round, ``X_w`` the offers
    each worker holds after proposals, ``Y_w`` what each worker keeps.
    """

    s: int
    X_f: Mapping[str, frozenset]
    X_w: Mapping[str, frozenset]
    Y_w: Mapping[str, frozenset]


@dataclass(frozen=True)
class BreakMarriageResult:
    matching: Matching
    successful: bool
    steps: int
    trace: tuple = ()


@dataclass(frozen=True)
class ProposalOutcome:
    matching: Matching
    steps: int
    trace: tuple
    final_offers: Mapping[str, frozenset]


def _propose(
    instance,
    proposers,
    receivers,
    live: dict,
    orient,
    special: Optional[tuple] = None,
    record: bool = False,
) -> ProposalOutcome:
    """Generic proposal loop with an incremental frontier.

    Only proposers rejected in the previous round recompute their choice and
    only receivers whose offer set changed choose again.  ``special`` is a
    pair (proposer, receiver): the receiver chooses as if that proposer were
    also on offer, then drops it.
    """
    live = {p: set(live[p]) for p in proposers}
    proposing = {p: frozenset() for p in proposers}
    offers = {r: set() for r in receivers}
    kept = {r: frozenset() for r in receivers}
    active_p = list(proposers)
    trace = []
    s = 0
    while True:
        snapshot = {p: frozenset(live[p]) for p in proposers} if record else None
        changed = set()
        for p in active_p:
            new = instance.choose(p, live[p])
            for r in new - proposing[p]:
                offers[r].add(p)
                changed.add(r)
            for r in proposing[p] - new:
                offers[r].discard(p)
                changed.add(r)
            proposing[p] = new
        rejected = {}
        for r in receivers:
            if r not in changed:
                continue
            if special is not None and r == special[1]:
                kept[r] = instance.choose(r, offers[r] | {special[0]}) - {special[0]}
            else:
                kept[r] = instance.choose(r, offers[r])
            for p in offers[r] - kept[r]:
                rejected.setdefault(p, []).append(r)
        if record:
            trace.append(
                TraceStep(
                    s,
                    snapshot,
                    {r: frozenset(offers[r]) for r in receivers},
                    dict(kept),
                )
            )
        s += 1
        if not rejected:
            break
        for p, rs in rejected.items():
            live[p].difference_update(rs)
        active_p = [p for p in proposers if p in rejected]
    pairs = Matching(orient(p, r) for p in proposers for r in proposing[p])
    return ProposalOutcome(pairs, s, tuple(trace), {r: frozenset(offers[r]) for r in receivers})


def deferred_acceptance(instance, proposing_side: str = "firms", record: bool = False):
    """Firm-proposing DA returns the firm-optimal matching, worker-proposing the worker-optimal one.

    With ``record`` the trace is returned alongside the matching.
    """
    if proposing_side not in ("firms", "workers"):
        raise ValueError("proposing_side must be 'firms' or 'workers'")
    if proposing_side == "firms":
        P, R, orient = instance.firms, instance.workers, lambda p, r: (p, r)
    else:
        P, R, orient = instance.workers, instance.firms, lambda p, r: (r, p)
    out = _propose(instance, P, R, {p: instance.partners(p) for p in P}, orient, record=record)
    return (out.matching, out.trace) if record else out.matching


def break_marriage(instance, mu_prime, f_prime: str, w_prime: str, mu_W=None, record: bool = False) -> BreakMarriageResult:
    """Sever (f', w') and restart proposals from the closure of mu'.

    The run is successful when w' would still reject f' against its final
    offers; then the output is stable and strictly below mu'.
    """
    mu_prime = as_matching(mu_prime)
    if (f_prime, w_prime) not in mu_prime:
        raise ValueError(f"({f_prime},{w_prime}) is not in the matching")
    if mu_W is not None and (f_prime, w_prime) in mu_W:
        raise ValueError(f"({f_prime},{w_prime}) belongs to the worker-optimal matching")
    live = closure(instance, mu_prime)
    live[f_prime] = live[f_prime] - {w_prime}
    out = _propose(
        instance,
        instance.firms,
        instance.workers,
        live,
        lambda p, r: (p, r),
        special=(f_prime, w_prime),
        record=record,
    )
    final = out.final_offers[w_prime]
    successful = f_prime not in instance.choose(w_prime, final | {f_prime})
    return BreakMarriageResult(out.matching, successful, out.steps, out.trace)


def immediate_descendant(instance, mu_prime, mu_W, reverse: bool = False) -> Matching:
    mu_prime, mu_W = as_matching(mu_prime), as_matching(mu_W)
    if mu_prime == mu_W:
        raise ValueError("the worker-optimal matching has no descendant")
    order = instance.sorted_pairs(mu_prime - mu_W)
    if reverse:
        order.reverse()
    found = []
    for f, w in order:
        res = break_marriage(instance, mu_prime, f, w)
        if res.successful:
            found.append(res.matching)
    if not found:
        raise RuntimeError("no break-marriage run succeeded; is the instance in the CM-QF model?")
    best = found[0]
    for mu in found[1:]:
        if dominates(instance, mu, best):
            best = mu
    return best


def maximal_chain(instance, reverse: bool = False, mu_F=None, mu_W=None):
    """Walk from the firm-optimal to the worker-optimal matching by immediate descendants."""
    if mu_F is None:
        mu_F = deferred_acceptance(instance, "firms")
    if mu_W is None:
        mu_W = deferred_acceptance(instance, "workers")
    chain = [as_matching(mu_F)]
    rotations = []
    bound = len(instance.acceptable)
    while chain[-1] != mu_W:
        if len(rotations) >= bound:
            raise RuntimeError("chain longer than the number of acceptable pairs")
        nxt = immediate_descendant(instance, chain[-1], mu_W, reverse=reverse)
        rotations.append(Rotation(len(rotations) + 1, frozenset(nxt - chain[-1]), frozenset(chain[-1] - nxt)))
        chain.append(nxt)
    return chain, rotations


def rotation_lambdas(instance, chain, rotations, with_calls: bool = False):
    """Lambda sets of the rotations, via a stability test on re-applied rotations."""
    mu_F = chain[0]
    delta = {r.index: r.plus | r.minus for r in rotations}

    def member(J):
        return is_stable(instance, Matching(reduce(frozenset.symmetric_difference, (delta[j] for j in J), frozenset(mu_F))))

    k = len(rotations)
    presentation = ChainPresentation(
        base=tuple(range(1, k + 1)),
        chain=[frozenset(range(1, i + 1)) for i in range(k + 1)],
        membership=member,
    )
    lambdas = irreducibles_via_chain(presentation)
    return (lambdas, presentation.calls) if with_calls else lambdas


def rotation_poset(instance, reverse: bool = False) -> RotationPoset:
    counter = instance.counting()
    start = counter.calls
    mu_F = deferred_acceptance(counter, "firms")
    mu_W = deferred_acceptance(counter, "workers")
    chain, rotations = maximal_chain(counter, reverse=reverse, mu_F=mu_F, mu_W=mu_W)
    lambdas = rotation_lambdas(counter, chain, rotations)
    order = order_from_lambdas(lambdas)
    base = getattr(instance, "inner", instance)
    return RotationPoset(
        instance=base,
        mu_F=mu_F,
        mu_W=mu_W,
        rotations=tuple(rotations),
        lambdas=lambdas,
        order=order,
        chain=tuple(chain),
        oracle_calls=counter.calls - start,
    )


def format_trace(instance, steps) -> str:
    """One line per round: live sets of proposers, then offers and kept sets of receivers."""

    def fmt(agents):
        return "{" + ",".join(instance.sorted_agents(agents)) + "}"

    lines = []
    for st in steps:
        parts = [f"s={st.s}"]
        parts += [f"X_{a}={fmt(v)}" for a, v in st.X_f.items()]
        parts += [f"X_{a}={fmt(v)}" for a, v in st.X_w.items()]
        parts += [f"Y_{a}={fmt(v)}" for a, v in st.Y_w.items()]
        lines.append(" ".join(parts))
    return "".join(line + "\n" for line in lines)
