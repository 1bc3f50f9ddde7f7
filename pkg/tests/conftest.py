from importlib.resources import files

import pytest

from stablelattice.core import parse_instance
from stablelattice.matching import Matching

DATA = files("stablelattice") / "data"


def load(name):
    return parse_instance((DATA / name).read_text())


def assign(*sets):
    """Matching from per-firm worker lists: assign("w3 w4", "w1 w2", ...) for f1, f2, ..."""
    return Matching((f"f{i}", w) for i, ws in enumerate(sets, 1) for w in ws.split())


def pairs(text):
    """Matching from "f1:w1 f1:w2 ..." notation."""
    return Matching(tuple(tok.split(":")) for tok in text.split())


# Four-by-four market with quota 2 everywhere and six stable matchings
QF2 = {
    "mu_F": assign("w3 w4", "w1 w2", "w1 w3", "w2 w4"),
    "mu1": assign("w3 w4", "w1 w2", "w1 w4", "w2 w3"),
    "mu2": assign("w3 w4", "w1 w2", "w2 w3", "w1 w4"),
    "mu3": assign("w2 w4", "w1 w3", "w2 w3", "w1 w4"),
    "mu4": assign("w3 w4", "w1 w2", "w2 w4", "w1 w3"),
    "mu_W": assign("w2 w4", "w1 w3", "w2 w4", "w1 w3"),
}
QF2_ROTATIONS = {
    "rho1": (pairs("f3:w2 f4:w1"), pairs("f3:w1 f4:w2")),
    "rho2": (pairs("f1:w2 f2:w3"), pairs("f1:w3 f2:w2")),
    "rho3": (pairs("f3:w4 f4:w3"), pairs("f3:w3 f4:w4")),
}

P5 = {
    "mu_F": pairs("f1:w1 f1:w2 f2:w4 f3:w3 f4:w5"),
    "mu1": pairs("f1:w1 f1:w4 f2:w2 f3:w3 f4:w5"),
    "mu2": pairs("f1:w2 f1:w3 f2:w4 f3:w1 f4:w5"),
    "mu_W": pairs("f1:w3 f1:w4 f2:w2 f3:w1 f4:w5"),
}
P5_PSETS = {
    "mu_F": P5["mu_F"],
    "mu1": pairs("f1:w1 f1:w2 f1:w4 f2:w2 f2:w4 f3:w3 f4:w5"),
    "mu2": pairs("f1:w1 f1:w2 f1:w3 f2:w4 f3:w1 f3:w3 f4:w5"),
    "mu_W": pairs("f1:w1 f1:w2 f1:w3 f1:w4 f2:w2 f2:w4 f3:w1 f3:w3 f4:w5"),
}

BM_MU_PRIME = assign("w2 w4", "w1 w2", "w3 w4", "w1 w3")
BM_OUTPUT = assign("w3 w4", "w1 w4", "w2 w3", "w1 w2")


@pytest.fixture(scope="session")
def qf2():
    return load("qf2.inst")


@pytest.fixture(scope="session")
def bm():
    return load("bm.inst")


@pytest.fixture(scope="session")
def p5():
    return load("p5.inst")


@pytest.fixture(scope="session")
def inconsistent():
    return load("inconsistent.inst")
