"""Maximum-weight stable matchings through a closure problem on the rotation poset."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .algorithms import rotation_poset
from .core import InstanceError
from .represent import RotationPoset, realize

INT64_MAX = 2**63 - 1
SOURCE, SINK = "_source", "_sink"


class WeightOverflow(OverflowError):
    pass


def _checked(total: int) -> int:
    if abs(total) > INT64_MAX:
        raise WeightOverflow("weight accumulation exceeds 63 bits")
    return total


@dataclass(frozen=True)
class ClosureResult:
    upper_set: frozenset
    value: int
    flow_value: int
    network_nodes: int


def closure_network(nodes, weights, order) -> nx.DiGraph:
    """Source feeds positive nodes, negative nodes drain to the sink, covers are uncuttable."""
    big = _checked(1 + sum(c for c in weights.values() if c > 0))
    G = nx.DiGraph()
    G.add_nodes_from([SOURCE, SINK, *nodes])
    for v in nodes:
        c = weights.get(v, 0)
        if c > 0:
            G.add_edge(SOURCE, v, capacity=c)
        elif c < 0:
            G.add_edge(v, SINK, capacity=-c)
    # choosing v forces every a above it
    for a, b in order.covers():
        G.add_edge(b, a, capacity=big)
    return G


def solve_closure(nodes, weights, order) -> ClosureResult:
    nodes = list(nodes)
    G = closure_network(nodes, weights, order)
    R = edmonds_karp(G, SOURCE, SINK)
    # source side of the residual graph: the smallest optimal closure
    residual = nx.DiGraph((u, v) for u, v, d in R.edges(data=True) if d["capacity"] - d["flow"] > 0)
    residual.add_node(SOURCE)
    upper = frozenset(nx.descendants(residual, SOURCE)) - {SINK}
    flow = R.graph["flow_value"]
    value = _checked(sum(weights.get(v, 0) for v in upper))
    return ClosureResult(upper, value, flow, G.number_of_nodes())


def max_weight_closure(nodes, weights, order):
    """Upper set of largest total weight; the smallest one among ties."""
    res = solve_closure(nodes, weights, order)
    return res.upper_set, res.value


def rotation_weights(poset: RotationPoset, weights) -> dict:
    """Weight gained by applying each rotation: added pairs minus removed pairs."""
    out = {}
    for r in poset.rotations:
        total = 0
        for p in r.plus:
            total = _checked(total + weights.get(p, 0))
        for p in r.minus:
            total = _checked(total - weights.get(p, 0))
        out[r.index] = total
    return out


def max_weight_stable_matching(instance, weights, poset: RotationPoset | None = None):
    if poset is None:
        poset = rotation_poset(instance)
    for p in weights:
        if p not in instance.acceptable:
            raise InstanceError(f"weight given for unacceptable pair {p}")
    U, _ = max_weight_closure(poset.indices, rotation_weights(poset, weights), poset.order)
    mu = realize(poset, U)
    value = 0
    for p in mu:
        value = _checked(value + weights.get(p, 0))
    return mu, value


def parse_weights(instance, text: str) -> dict:
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 3:
            raise ValueError(f"line {lineno}: expected '<firm> <worker> <integer>'")
        f, w, v = tok
        try:
            value = int(v)
        except ValueError:
            raise ValueError(f"line {lineno}: weight must be an integer, got {v!r}") from None
        if (f, w) not in instance.acceptable:
            raise InstanceError(f"line {lineno}: pair {f} {w} is not acceptable")
        if (f, w) in weights:
            raise ValueError(f"line {lineno}: duplicate weight for {f} {w}")
        weights[f, w] = _checked(value)
    return weights
