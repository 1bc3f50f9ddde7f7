import itertools
import random

import numpy as np
import pytest

from stablelattice.ringsets import (
    ChainError,
    ChainPresentation,
    MinimalDifference,
    NotUpperSet,
    PartialOrder,
    birkhoff_matrix,
    brute_force_chains,
    characteristic,
    exact_rank,
    irreducibles_via_chain,
    minimal_differences,
    order_from_lambdas,
    reconstruct,
)

BASE = tuple("abcdef")
RING = {
    "H1": frozenset("a"),
    "H2": frozenset("ab"),
    "H3": frozenset("ac"),
    "H4": frozenset("abc"),
    "H5": frozenset("acde"),
    "H6": frozenset("abcde"),
    "H7": frozenset("abcdef"),
}
CHAIN = [RING[h] for h in ("H1", "H2", "H4", "H6", "H7")]
# the upper set of differences that rebuilds each member
UPPER = {
    "H1": [],
    "H2": ["b"],
    "H3": ["c"],
    "H4": ["b", "c"],
    "H5": ["c", "de"],
    "H6": ["b", "c", "de"],
    "H7": ["b", "c", "de", "f"],
}
INDEX = {"b": 1, "c": 2, "de": 3, "f": 4}


def presentation(chain=CHAIN, family=RING.values()):
    family = set(family)
    return ChainPresentation(BASE, chain, lambda H: H in family)


def test_minimal_differences():
    K = minimal_differences(presentation())
    assert [d.elements for d in K] == [frozenset("b"), frozenset("c"), frozenset("de"), frozenset("f")]
    assert [d.index for d in K] == [1, 2, 3, 4]


def test_trivial_chain_has_no_differences():
    assert minimal_differences(presentation([RING["H1"]])) == []


def test_differences_telescope():
    K = minimal_differences(presentation())
    assert CHAIN[0].union(*(d.elements for d in K)) == CHAIN[-1]


def test_non_monotone_chain_rejected():
    with pytest.raises(ChainError):
        presentation([RING["H2"], RING["H3"]])


def test_lambdas_on_example_chain():
    chain = presentation()
    lam = irreducibles_via_chain(chain)
    assert lam[3] == {2, 3}
    assert lam[1] == {1}
    assert lam == {1: {1}, 2: {2}, 3: {2, 3}, 4: {1, 2, 3, 4}}
    assert chain.calls == 0 + 1 + 2 + 3
    for i, L in lam.items():
        assert i in L and L <= set(range(1, i + 1))


def test_order_on_example_chain():
    order = order_from_lambdas(irreducibles_via_chain(presentation()))
    assert sorted(order.covers()) == [(1, 4), (2, 3), (3, 4)]
    assert order.geq(2, 4) and not order.geq(1, 2) and not order.geq(2, 1)


def test_order_from_path_lambdas():
    order = order_from_lambdas({1: frozenset({1}), 2: frozenset({1, 2})})
    assert order.geq(1, 2) and not order.geq(2, 1)


def test_single_difference_order_is_trivial():
    order = order_from_lambdas({1: frozenset({1})})
    assert order.covers() == [] and list(order.upper_sets()) == [frozenset(), frozenset({1})]


def test_reconstruct_every_member():
    K = {frozenset(d.elements): d for d in minimal_differences(presentation())}
    by_name = {"b": K[frozenset("b")], "c": K[frozenset("c")], "de": K[frozenset("de")], "f": K[frozenset("f")]}
    order = order_from_lambdas(irreducibles_via_chain(presentation()))
    for name, upper in UPPER.items():
        assert reconstruct([by_name[u] for u in upper], RING["H1"], order) == RING[name]


def test_reconstruct_rejects_non_upper_sets():
    order = order_from_lambdas(irreducibles_via_chain(presentation()))
    with pytest.raises(NotUpperSet):
        reconstruct([MinimalDifference(4, frozenset("f"))], RING["H1"], order)


def test_birkhoff_matrix_and_identities():
    K = minimal_differences(presentation())
    A, x0 = birkhoff_matrix(K, CHAIN[0], BASE)
    expected = np.array(
        [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    )
    assert (A == expected).all()
    assert x0.tolist() == [1, 0, 0, 0, 0, 0]
    for name, upper in UPPER.items():
        y = characteristic([INDEX[u] for u in upper], [1, 2, 3, 4])
        assert (x0 + A @ y).tolist() == characteristic(RING[name], BASE).tolist()
    assert (x0 + A @ np.zeros(4, dtype=int)).tolist() == x0.tolist()


def test_birkhoff_matrix_rejects_overlap():
    with pytest.raises(ValueError, match="overlap"):
        birkhoff_matrix([MinimalDifference(1, frozenset("ab")), MinimalDifference(2, frozenset("bc"))], set(), BASE)


def test_signed_affine_map_of_small_lattice():
    # lattice S1..S4 over {1,2,3,4}; poset y1 || y2; columns with a -1 entry
    A = np.array([[0, 0], [-1, 0], [1, 0], [0, 1]])
    S = [{1, 2}, {1, 3}, {1, 2, 4}, {1, 3, 4}]
    x0 = characteristic(S[0], [1, 2, 3, 4])
    uppers = [[], [1], [2], [1, 2]]
    for target, U in zip(S, uppers):
        y = characteristic(U, [1, 2])
        assert (x0 + A @ y).tolist() == characteristic(target, [1, 2, 3, 4]).tolist()
    assert exact_rank(A) == 2


def test_swapped_lattice_has_no_map_from_the_same_data():
    # same poset, but S3 and S4 swapped: the identities cannot all hold
    A = np.array([[0, 0], [-1, 0], [1, 0], [0, 1]])
    S = [{1, 2}, {1, 3}, {1, 3, 4}, {1, 2, 4}]
    x0 = characteristic(S[0], [1, 2, 3, 4])
    images = [(x0 + A @ characteristic(U, [1, 2])).tolist() for U in ([], [1], [2], [1, 2])]
    assert images != [characteristic(s, [1, 2, 3, 4]).tolist() for s in S]
    # any affine map g with g(0)=S1, g(e1)=S2, g(e2)=S3 forces g(e1+e2)=S2+S3-S1
    forced = characteristic(S[1], [1, 2, 3, 4]) + characteristic(S[2], [1, 2, 3, 4]) - x0
    assert forced.tolist() != characteristic(S[3], [1, 2, 3, 4]).tolist()


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[0, 1, -1], [1, 0, 1], [1, 1, 0]]) == 2
    assert exact_rank(np.zeros((3, 0), dtype=int)) == 0


def test_partial_order_rejects_cycles():
    with pytest.raises(ValueError):
        PartialOrder.from_relation([1, 2], lambda a, b: True)


# -- tiny random rings --------------------------------------------------------


def random_ring(rng):
    """Ring generated from a random poset whose elements own disjoint blocks of the base."""
    n = rng.randint(1, 4)
    labels = list(range(1, n + 1))
    rel = {(a, b) for a in labels for b in labels if a < b and rng.random() < 0.4}
    # transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    order = PartialOrder.from_relation(labels, lambda a, b: (a, b) in rel)
    base = list(range(20))
    rng.shuffle(base)
    blocks, pos = {}, 1
    for lbl in labels:
        size = rng.randint(1, 2)
        blocks[lbl] = frozenset(base[pos : pos + size])
        pos += size
    C0 = frozenset(base[:1])
    family = {C0.union(*(blocks[x] for x in U)) for U in order.upper_sets()}
    return family, blocks, order, C0


@pytest.mark.parametrize("seed", range(25))
def test_every_maximal_chain_gives_the_same_differences_and_order(seed):
    family, blocks, order, C0 = random_ring(random.Random(seed))
    base = sorted(frozenset().union(*family))
    results = set()
    for chain in brute_force_chains(family):
        pres = ChainPresentation(base, chain, lambda H: H in family)
        K = {d.index: d.elements for d in minimal_differences(pres)}
        lam = irreducibles_via_chain(pres)
        rel = order_from_lambdas(lam)
        results.add(
            (
                frozenset(K.values()),
                frozenset((K[a], K[b]) for a, b in rel.strict_pairs()),
            )
        )
        # reconstruction is a bijection onto the ring
        rebuilt = {reconstruct([MinimalDifference(i, K[i]) for i in U], C0, rel) for U in rel.upper_sets()}
        assert rebuilt == family
    assert len(results) == 1
    (diffs, strict), = results
    assert diffs == frozenset(blocks.values())
    assert strict == frozenset((blocks[a], blocks[b]) for a, b in order.strict_pairs())
