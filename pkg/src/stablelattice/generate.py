"""Random small markets in the CM-QF model: cardinal-monotone firms, quota-filling workers.

Fully independent random preferences almost always give a single stable
matching on markets this small.  By default the generator draws a hidden
score per pair; firms prefer high scores and workers low ones, with noise.
That conflict is what produces lattices with several rotations.
"""

from __future__ import annotations

import random
from typing import Optional

from .core import Instance, MCChoice, Property, ResponsiveChoice, verify_property


def _ranked(rng: random.Random, items, score=None, noise: float = 0.0) -> tuple:
    """Order by descending score plus uniform noise; a plain shuffle without a score."""
    items = list(items)
    if score is None:
        rng.shuffle(items)
        return tuple(items)
    return tuple(sorted(items, key=lambda x: -(score(x) + rng.uniform(-noise, noise))))


def _passes(partners, spec, prop, q=None) -> bool:
    probe = Instance.build(["_a"], list(partners), {"_a": spec, **{p: MCChoice((("_a",),)) for p in partners}})
    return verify_property(probe, "_a", prop, q=q)


def _firm_spec(rng, partners, q, score, noise):
    roll = rng.random()
    if q == 1 or roll < 0.5:
        return ResponsiveChoice(_ranked(rng, partners, score, noise), q), q
    base = _ranked(rng, partners, score, noise)
    if roll < 0.75:
        return MCChoice((base, base[::-1])), q
    for _ in range(20):
        spec = MCChoice((base, _ranked(rng, partners, score, 4 * noise + 0.5)))
        if _passes(partners, spec, Property.CARDINAL_MONOTONE):
            return spec, None
    return MCChoice((base,)), None


def _worker_spec(rng, partners, q, score, noise):
    if q == 1 or rng.random() < 0.4:
        return ResponsiveChoice(_ranked(rng, partners, score, noise), q), q
    # a relation and its reverse always pick two distinct maxima
    base = _ranked(rng, partners, score, noise)
    orders = [base, base[::-1]]
    if rng.random() < 0.5:
        for _ in range(10):
            extra = MCChoice((*orders, _ranked(rng, partners, score, 4 * noise + 0.5)))
            if _passes(partners, extra, Property.QUOTA_FILLING, q=2):
                return extra, 2
    return MCChoice(tuple(orders)), 2


def random_instance(
    rng: random.Random,
    n_firms: Optional[int] = None,
    n_workers: Optional[int] = None,
    max_quota: int = 2,
    density: float = 0.95,
    conflict: bool = True,
    noise: float = 0.1,
    components: int = 1,
    cross: float = 0.0,
) -> Instance:
    """A market with at most four agents per side; sizes are usually balanced.

    With ``components > 1`` agents are dealt round-robin into blocks that
    each carry their own conflict scores.  Pairs across blocks are acceptable
    with probability ``cross`` and sit at the bottom of both lists.  Separate
    blocks are what give rotations that are not comparable.
    """
    n_firms = n_firms or rng.randint(1, 4)
    if not n_workers:
        n_workers = n_firms if rng.random() < 0.6 else rng.randint(1, 4)
    firms = [f"f{i + 1}" for i in range(n_firms)]
    workers = [f"w{j + 1}" for j in range(n_workers)]
    block = {a: i % components for side in (firms, workers) for i, a in enumerate(side)}
    acceptable = [
        (f, w)
        for f in firms
        for w in workers
        if rng.random() < (density if block[f] == block[w] else cross)
    ]
    # cyclic scores per block: each firm's favourite workers rank it last
    firm_score, worker_score = {}, {}
    for b in range(components):
        fs = [f for f in firms if block[f] == b]
        ws = [w for w in workers if block[w] == b]
        n = max(len(fs), len(ws))
        row = dict(zip(fs, rng.sample(range(n), len(fs))))
        col = dict(zip(ws, rng.sample(range(n), len(ws))))
        for f in fs:
            for w in ws:
                firm_score[f, w] = -((col[w] - row[f]) % n) / n
                worker_score[f, w] = -firm_score[f, w]
    for f, w in acceptable:
        if block[f] != block[w]:
            firm_score[f, w] = -2 - rng.random()
            worker_score[f, w] = -2 - rng.random()
    # a shared quota keeps the sides balanced; a few agents deviate
    market_q = rng.randint(1, max_quota)

    def quota_for():
        return rng.randint(1, max_quota) if rng.random() < 0.15 else market_q

    choice, quota = {}, {}
    for f in firms:
        partners = [w for g, w in acceptable if g == f]
        if partners:
            score = (lambda w, f=f: firm_score[f, w]) if conflict else None
            choice[f], quota[f] = _firm_spec(rng, partners, quota_for(), score, noise)
    for w in workers:
        partners = [f for f, v in acceptable if v == w]
        if partners:
            score = (lambda f, w=w: worker_score[f, w]) if conflict else None
            choice[w], quota[w] = _worker_spec(rng, partners, quota_for(), score, noise)
    return Instance.build(firms, workers, choice, quota)


def random_corpus(seed: int, count: int, **kwargs) -> list[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kwargs) for _ in range(count)]
