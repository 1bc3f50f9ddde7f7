"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""

import random

import numpy as np
import pytest

from conftest import BM_MU_PRIME, BM_OUTPUT, P5, QF2, QF2_ROTATIONS
from stablelattice.algorithms import break_marriage, deferred_acceptance, rotation_poset
from stablelattice.generate import random_corpus, random_instance
from stablelattice.optimize import max_weight_stable_matching
from stablelattice.oracle import enumerate_stable_bruteforce, max_weight_bruteforce, verify_lattice
from stablelattice.polytope import affine_hull_dimension, order_polytope_facets
from stablelattice.represent import affine_map, enumerate_stable, upper_sets
from stablelattice.ringsets import (
    birkhoff_matrix,
    characteristic,
    exact_rank,
    irreducibles_via_chain,
    minimal_differences,
    order_from_lambdas,
)
from test_ringsets import BASE, INDEX, RING, UPPER, presentation

CORPUS_SEED, CORPUS_SIZE = 2024, 300
# markets split into two blocks, the source of incomparable rotations
BLOCK_SEED, BLOCK_SIZE = 2025, 100
CHAIN_SEED, CHAIN_SIZE = 5, 200
# documented constant for the oracle-call bound c * |F|^3 * |W|^3
CALL_CONSTANT = 10


@pytest.fixture
def verdict(capsys):
    def report(n, what, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {what}{' (' + detail + ')' if detail else ''}")
        assert ok, detail

    return report


@pytest.fixture(scope="module")
def corpus():
    """Each random instance with its poset and its brute-force stable set."""
    out = []
    markets = random_corpus(CORPUS_SEED, CORPUS_SIZE) + random_corpus(BLOCK_SEED, BLOCK_SIZE, components=2, cross=0.5)
    for inst in markets:
        out.append((inst, rotation_poset(inst), enumerate_stable_bruteforce(inst)))
    return out


def test_golden_deferred_acceptance(qf2, verdict):
    ok = deferred_acceptance(qf2, "firms") == QF2["mu_F"] and deferred_acceptance(qf2, "workers") == QF2["mu_W"]
    verdict(1, "firm- and worker-proposing DA on QF2", ok)


def test_golden_break_marriage(bm, verdict):
    res = break_marriage(bm, BM_MU_PRIME, "f1", "w2", record=True)
    ok = res.successful and res.matching == BM_OUTPUT and res.trace[1].Y_w["w2"] == {"f4"}
    verdict(2, "break-marriage output and second-round choice of w2", ok)


def test_golden_rotations(qf2, verdict):
    poset = rotation_poset(qf2)
    expected = [QF2_ROTATIONS[k] for k in ("rho1", "rho2", "rho3")]
    ok = [r.key for r in poset.rotations] == expected and poset.order.strict_pairs() == [(1, 2)]
    verdict(3, "three rotations of QF2 with the single relation rho1 above rho2", ok)


def test_golden_irreducibles(verdict):
    lam = irreducibles_via_chain(presentation())
    order = order_from_lambdas(lam)
    ok = lam[3] == {2, 3} and sorted(order.covers()) == [(1, 4), (2, 3), (3, 4)]
    verdict(4, "index sets along the example chain and their order", ok)


def test_golden_affine_maps(verdict):
    # signed map on the four-element lattice
    A = np.array([[0, 0], [-1, 0], [1, 0], [0, 1]])
    S = [{1, 2}, {1, 3}, {1, 2, 4}, {1, 3, 4}]
    x0 = characteristic(S[0], [1, 2, 3, 4])
    small = all(
        (x0 + A @ characteristic(U, [1, 2])).tolist() == characteristic(target, [1, 2, 3, 4]).tolist()
        for target, U in zip(S, [[], [1], [2], [1, 2]])
    )
    # characteristic-vector map on the seven-member ring
    B, c0 = birkhoff_matrix(minimal_differences(presentation()), RING["H1"], BASE)
    ring = all(
        (c0 + B @ characteristic([INDEX[u] for u in upper], [1, 2, 3, 4])).tolist()
        == characteristic(RING[name], BASE).tolist()
        for name, upper in UPPER.items()
    )
    verdict(5, "4 identities of the signed map and 7 ring members", small and ring and len(UPPER) == 7)


def test_bijection(qf2, p5, corpus, verdict):
    fixtures = (
        enumerate_stable(rotation_poset(qf2)) == [QF2[k] for k in ("mu_F", "mu1", "mu2", "mu3", "mu4", "mu_W")]
        and set(enumerate_stable(rotation_poset(p5))) == set(P5.values())
    )
    mismatched = [i for i, (_, poset, brute) in enumerate(corpus) if set(enumerate_stable(poset)) != set(brute)]
    nontrivial = sum(len(brute) > 1 for _, _, brute in corpus)
    verdict(
        6,
        "poset enumeration equals brute force",
        fixtures and not mismatched,
        f"{len(corpus)} random instances, {nontrivial} with several stable matchings, mismatches {mismatched[:5]}",
    )


def test_optimizer(qf2, corpus, verdict):
    rng = random.Random(CORPUS_SEED)
    wrong = []
    for i, (inst, poset, _) in enumerate(corpus):
        weights = {p: rng.randint(-10, 10) for p in inst.sorted_pairs(inst.acceptable)}
        _, value = max_weight_stable_matching(inst, weights, poset=poset)
        if value != max_weight_bruteforce(inst, weights)[1]:
            wrong.append(i)
    mu, value = max_weight_stable_matching(qf2, {("f1", "w2"): 5, ("f3", "w3"): 3})
    ok = not wrong and value == 8 and mu == QF2["mu3"]
    verdict(7, "min-cut optimum equals brute force", ok, f"{len(corpus)} instances, wrong {wrong[:5]}")


def test_lattice_axioms(corpus, verdict):
    failures = []
    for i, (inst, _, brute) in enumerate(corpus):
        report = verify_lattice(inst, matchings=brute)
        if not report.ok:
            failures.append((i, report.witnesses))
    verdict(8, "lattice axioms on the random corpus", not failures, f"first failure {failures[:1]}" if failures else "")


def has_incomparable_rotations(poset):
    k = len(poset.rotations)
    return len(poset.order.strict_pairs()) < k * (k - 1) // 2


def test_chain_invariance(qf2, verdict):
    markets = [qf2] + random_corpus(CHAIN_SEED, CHAIN_SIZE, n_firms=4, n_workers=4, components=2, cross=0.5)
    checked = differ = 0
    bad = []

    def relation(p):
        return {(p.rotation(a).key, p.rotation(b).key) for a, b in p.order.strict_pairs()}

    for i, inst in enumerate(markets):
        poset = rotation_poset(inst)
        if not has_incomparable_rotations(poset):
            continue
        other = rotation_poset(inst, reverse=True)
        checked += 1
        differ += other.chain != poset.chain
        same = {r.key for r in poset.rotations} == {r.key for r in other.rotations} and relation(poset) == relation(other)
        if not same:
            bad.append(i)
    verdict(
        9,
        "rotations and their order do not depend on the chain",
        differ >= 20 and not bad,
        f"{checked} instances with incomparable rotations, {differ} with a different chain, mismatches {bad[:5]}",
    )


def test_polytope(qf2, verdict):
    poset = rotation_poset(qf2)
    facets = order_polytope_facets(poset)
    ups = list(upper_sets(poset))
    valid = all(f.holds(dict(zip(poset.indices, characteristic(U, poset.indices).tolist()))) for f in facets for U in ups)
    g = affine_map(poset)
    dim = affine_hull_dimension([characteristic(mu, g.pairs) for mu in QF2.values()])
    ok = len(facets) == 5 and len(ups) == 6 and valid and dim == 3 and exact_rank(g.A) == g.A.shape[1]
    verdict(10, "QF2 order polytope, hull dimension and full column rank", ok, f"{len(facets)} facets, dimension {dim}")


def test_oracle_call_accounting(verdict):
    rng = random.Random(11)
    bound = CALL_CONSTANT * 4**3 * 4**3
    worst = 0
    for k in range(60):
        blocks = 2 if k % 2 else 1
        inst = random_instance(rng, n_firms=4, n_workers=4, components=blocks, cross=0.5)
        worst = max(worst, rotation_poset(inst).oracle_calls)
    verdict(11, "choice-function calls within c*|F|^3*|W|^3", worst < bound, f"c={CALL_CONSTANT}, worst {worst} < {bound}")
