"""Markets, choice functions and the instance file format.

An :class:`Instance` is a two-sided market: firms, workers, the mutually
acceptable pairs, and one choice function per agent.  Agents are identified
by their (opaque) names; the order of declaration fixes the canonical index
used for every sorted output.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Optional, Union

Pair = tuple  # (firm, worker)

_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


class InstanceError(ValueError):
    """An instance violates a structural invariant."""


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


class TableMiss(KeyError):
    """A TABLE choice function was queried on a set it does not list."""


class AgentId(NamedTuple):
    side: str  # "firm" | "worker"
    index: int


# ---------------------------------------------------------------------------
# choice functions


@dataclass(frozen=True)
class MCChoice:
    """Maximizer-collecting choice: union over relations of the best element."""

    orders: tuple[tuple[str, ...], ...]
    kind = "MC"

    def __post_init__(self):
        for order in self.orders:
            if len(set(order)) != len(order):
                raise InstanceError("partner repeated within one preference relation")
        if self.orders:
            first = set(self.orders[0])
            if any(set(o) != first for o in self.orders[1:]):
                raise InstanceError("all relations of an MC function must rank the same partners")

    @cached_property
    def _ranks(self) -> tuple[dict[str, int], ...]:
        return tuple({x: r for r, x in enumerate(order)} for order in self.orders)

    @property
    def partners(self) -> frozenset:
        return frozenset(self.orders[0]) if self.orders else frozenset()

    def evaluate(self, S: frozenset) -> frozenset:
        if not S:
            return frozenset()
        return frozenset(min(S, key=rank.__getitem__) for rank in self._ranks)


@dataclass(frozen=True)
class ResponsiveChoice:
    """Top-``quota`` elements of the offered set under a single order."""

    order: tuple[str, ...]
    quota: int
    kind = "RESPONSIVE"

    def __post_init__(self):
        if self.quota < 1:
            raise InstanceError("responsive quota must be >= 1")
        if len(set(self.order)) != len(self.order):
            raise InstanceError("partner repeated within one preference relation")

    @cached_property
    def _rank(self) -> dict[str, int]:
        return {x: r for r, x in enumerate(self.order)}

    @property
    def partners(self) -> frozenset:
        return frozenset(self.order)

    def evaluate(self, S: frozenset) -> frozenset:
        return frozenset(sorted(S, key=self._rank.__getitem__)[: self.quota])


@dataclass(frozen=True)
class TableChoice:
    """Explicit lookup table; used for counterexample fixtures."""

    table: Mapping[frozenset, frozenset]
    kind = "TABLE"

    def __post_init__(self):
        for S, C in self.table.items():
            if not C <= S:
                raise InstanceError(f"table entry chooses outside its argument: {sorted(S)}")

    def __hash__(self):
        return hash(frozenset(self.table.items()))

    @property
    def partners(self) -> frozenset:
        return frozenset().union(*self.table) if self.table else frozenset()

    def evaluate(self, S: frozenset) -> frozenset:
        try:
            return self.table[S]
        except KeyError:
            if not S:
                return frozenset()
            raise TableMiss(f"no table entry for {{{','.join(sorted(S))}}}") from None


ChoiceSpec = Union[MCChoice, ResponsiveChoice, TableChoice]


# ---------------------------------------------------------------------------
# instance


@dataclass(frozen=True)
class Instance:
    firms: tuple[str, ...]
    workers: tuple[str, ...]
    acceptable: frozenset
    choice: Mapping[str, ChoiceSpec]
    declared_quota: Mapping[str, Optional[int]] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        firms: Iterable[str],
        workers: Iterable[str],
        choice: Mapping[str, ChoiceSpec],
        declared_quota: Optional[Mapping[str, Optional[int]]] = None,
    ) -> "Instance":
        """Derive acceptability from the choice functions and validate it."""
        firms, workers = tuple(firms), tuple(workers)
        names = firms + workers
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise InstanceError(f"duplicate agent {dup!r}")
        for name in choice:
            if name not in names:
                raise InstanceError(f"unknown agent {name!r}")
        empty = MCChoice(())
        choice = {a: choice.get(a, empty) for a in names}
        firm_set, worker_set = set(firms), set(workers)
        acceptable = set()
        for f in firms:
            for w in choice[f].partners:
                if w not in worker_set:
                    raise InstanceError(f"unknown agent {w!r} in choice function of {f}")
                acceptable.add((f, w))
        for w in workers:
            for f in choice[w].partners:
                if f not in firm_set:
                    raise InstanceError(f"unknown agent {f!r} in choice function of {w}")
                if (f, w) not in acceptable:
                    raise InstanceError(f"non-mutual acceptability: {w} lists {f} but {f} does not list {w}")
        for f, w in acceptable:
            if f not in choice[w].partners:
                raise InstanceError(f"non-mutual acceptability: {f} lists {w} but {w} does not list {f}")
        quotas = {a: None for a in names}
        for a, q in (declared_quota or {}).items():
            if a not in quotas:
                raise InstanceError(f"unknown agent {a!r}")
            if q is not None and q < 1:
                raise InstanceError(f"quota of {a} must be positive")
            quotas[a] = q
        return cls(firms, workers, frozenset(acceptable), choice, quotas)

    @cached_property
    def _index(self) -> dict[str, AgentId]:
        ids = {f: AgentId("firm", i) for i, f in enumerate(self.firms)}
        ids.update({w: AgentId("worker", i) for i, w in enumerate(self.workers)})
        return ids

    @cached_property
    def _partners(self) -> dict[str, frozenset]:
        out = {a: set() for a in self.firms + self.workers}
        for f, w in self.acceptable:
            out[f].add(w)
            out[w].add(f)
        return {a: frozenset(s) for a, s in out.items()}

    def agent_id(self, name: str) -> AgentId:
        try:
            return self._index[name]
        except KeyError:
            raise InstanceError(f"unknown agent {name!r}") from None

    def is_firm(self, name: str) -> bool:
        return self.agent_id(name).side == "firm"

    def partners(self, agent: str) -> frozenset:
        """Acceptable partners of ``agent``."""
        return self._partners[agent]

    def pair_key(self, pair: Pair) -> tuple[int, int]:
        f, w = pair
        return self._index[f].index, self._index[w].index

    def sorted_pairs(self, pairs: Iterable[Pair]) -> list:
        return sorted(pairs, key=self.pair_key)

    def sorted_agents(self, agents: Iterable[str]) -> list:
        return sorted(agents, key=self._index.__getitem__)

    def quota(self, agent: str) -> Optional[int]:
        """Declared quota, falling back to the quota of a responsive function."""
        q = self.declared_quota.get(agent)
        if q is None and isinstance(self.choice[agent], ResponsiveChoice):
            q = self.choice[agent].quota
        return q

    def choose(self, agent: str, S: Iterable[str]) -> frozenset:
        S = frozenset(S)
        if not S <= self._partners[agent]:
            bad = sorted(S - self._partners[agent])
            raise InstanceError(f"{agent} offered unacceptable partners {bad}")
        return self.choice[agent].evaluate(S)

    def counting(self) -> "CountingInstance":
        return CountingInstance(self)


class CountingInstance:
    """Proxy that counts choice-function evaluations."""

    def __init__(self, inner: Instance):
        self.inner = inner
        self.calls = 0

    def choose(self, agent, S):
        self.calls += 1
        return self.inner.choose(agent, S)

    def counting(self):
        return self

    def __getattr__(self, name):
        return getattr(self.inner, name)


def choose(instance, agent: str, S: Iterable[str]) -> frozenset:
    return instance.choose(agent, S)


# ---------------------------------------------------------------------------
# property verification


class Property(enum.Enum):
    SUBSTITUTABLE = "substitutable"
    CONSISTENT = "consistent"
    CARDINAL_MONOTONE = "cardinal-monotone"
    QUOTA_FILLING = "quota-filling"
    PATH_INDEPENDENT = "path-independent"


class CapExceeded(ValueError):
    """Too many acceptable partners for an exhaustive property check."""


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def choice_table(instance, agent: str, cap: int = 10) -> list[int]:
    """Evaluate ``agent``'s choice on every subset of its partners, as bitmasks."""
    partners = instance.sorted_agents(instance.partners(agent))
    n = len(partners)
    if n > cap:
        raise CapExceeded(f"{agent} has {n} acceptable partners (cap {cap})")
    bit = {p: 1 << i for i, p in enumerate(partners)}
    table = []
    for mask in range(1 << n):
        S = frozenset(p for p in partners if mask & bit[p])
        table.append(sum(bit[x] for x in instance.choose(agent, S)))
    return table


def verify_property(instance, agent: str, prop, cap: int = 10, q: Optional[int] = None) -> bool:
    """Exhaustively check one choice-function property for ``agent``."""
    prop = Property(prop)
    table = choice_table(instance, agent, cap)
    full = len(table) - 1
    pc = int.bit_count if hasattr(int, "bit_count") else (lambda x: bin(x).count("1"))

    if prop is Property.QUOTA_FILLING:
        if q is None:
            q = instance.quota(agent)
        if q is None:
            raise ValueError(f"no quota known for {agent}")
        return all(pc(table[S]) == min(q, pc(S)) for S in range(full + 1))

    if prop is Property.PATH_INDEPENDENT:
        return all(
            table[S | T] == table[table[S] | T]
            for S in range(full + 1)
            for T in range(full + 1)
        )

    for S in range(full + 1):
        CS = table[S]
        for T in _submasks(S):
            CT = table[T]
            if prop is Property.SUBSTITUTABLE:
                # every b in T chosen from the larger set S stays chosen from T
                if CS & T & ~CT:
                    return False
            elif prop is Property.CONSISTENT:
                if CS & ~T == 0 and CT != CS:
                    return False
            elif prop is Property.CARDINAL_MONOTONE:
                if pc(CT) > pc(CS):
                    return False
    return True


# ---------------------------------------------------------------------------
# instance file format


def _split_set(token: str, lineno: int) -> frozenset:
    if not (token.startswith("{") and token.endswith("}")):
        raise ParseError(lineno, f"expected a set like {{a,b}}, got {token!r}")
    body = token[1:-1].strip()
    if not body:
        return frozenset()
    items = [x.strip() for x in body.split(",")]
    if any(not x for x in items):
        raise ParseError(lineno, f"empty element in {token!r}")
    return frozenset(items)


def parse_instance(text: str) -> Instance:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1].split() != ["instance", "v1"]:
        raise ParseError(lines[0][0] if lines else 1, "first line must be 'instance v1'")

    firms = workers = None
    specs: dict[str, dict] = {}
    order: list[str] = []

    def check_agent(name, lineno):
        if firms is None or workers is None:
            raise ParseError(lineno, "FIRMS and WORKERS must precede choice functions")
        if name not in firms and name not in workers:
            raise ParseError(lineno, f"unknown agent {name!r}")

    for lineno, line in lines[1:]:
        tok = line.split()
        head = tok[0]
        if head in ("FIRMS", "WORKERS"):
            if (firms if head == "FIRMS" else workers) is not None:
                raise ParseError(lineno, f"{head} declared twice")
            names = tuple(tok[1:])
            for n in names:
                if not _NAME_RE.match(n):
                    raise ParseError(lineno, f"invalid agent name {n!r}")
            seen = set(names) | set(firms or ()) | set(workers or ())
            if len(seen) != len(names) + len(firms or ()) + len(workers or ()):
                raise ParseError(lineno, "duplicate agent")
            if head == "FIRMS":
                firms = names
            else:
                workers = names
        elif head == "CF":
            if len(tok) < 3:
                raise ParseError(lineno, "CF needs an agent and a kind")
            agent, kind, rest = tok[1], tok[2], tok[3:]
            check_agent(agent, lineno)
            if agent in specs:
                raise ParseError(lineno, f"choice function of {agent} declared twice")
            quota = None
            if rest:
                if len(rest) != 2 or rest[0] != "QUOTA":
                    raise ParseError(lineno, f"unexpected tokens {' '.join(rest)!r}")
                try:
                    quota = int(rest[1])
                except ValueError:
                    raise ParseError(lineno, f"quota must be an integer, got {rest[1]!r}") from None
                if quota < 1:
                    raise ParseError(lineno, "quota must be positive")
            if kind not in ("MC", "RESPONSIVE", "TABLE"):
                raise ParseError(lineno, f"unknown choice-function kind {kind!r}")
            if kind == "RESPONSIVE" and quota is None:
                raise ParseError(lineno, "RESPONSIVE requires QUOTA")
            if kind == "TABLE" and quota is not None:
                raise ParseError(lineno, "TABLE does not take a QUOTA")
            specs[agent] = {"kind": kind, "quota": quota, "prefs": [], "table": {}, "line": lineno}
            order.append(agent)
        elif head == "PREF":
            if len(tok) < 2:
                raise ParseError(lineno, "PREF needs an agent")
            agent = tok[1]
            check_agent(agent, lineno)
            spec = specs.get(agent)
            if spec is None or spec["kind"] == "TABLE":
                raise ParseError(lineno, f"PREF for {agent} without a preceding MC/RESPONSIVE CF line")
            prefs = tuple(tok[2:])
            if len(set(prefs)) != len(prefs):
                raise ParseError(lineno, "partner repeated within one preference relation")
            other = workers if agent in firms else firms
            for p in prefs:
                if p not in other:
                    raise ParseError(lineno, f"unknown agent {p!r}")
            if spec["prefs"] and set(prefs) != set(spec["prefs"][0]):
                raise ParseError(lineno, f"PREF lines of {agent} list different partner sets")
            spec["prefs"].append(prefs)
        elif head == "CHOICE":
            m = re.match(r"^CHOICE\s+(\S+)\s+(\{[^}]*\})\s*->\s*(\{[^}]*\})$", line)
            if not m:
                raise ParseError(lineno, "expected 'CHOICE <agent> {..} -> {..}'")
            agent = m.group(1)
            check_agent(agent, lineno)
            spec = specs.get(agent)
            if spec is None or spec["kind"] != "TABLE":
                raise ParseError(lineno, f"CHOICE for {agent} without a preceding TABLE CF line")
            S, C = _split_set(m.group(2), lineno), _split_set(m.group(3), lineno)
            other = workers if agent in firms else firms
            for p in S | C:
                if p not in other:
                    raise ParseError(lineno, f"unknown agent {p!r}")
            if not C <= S:
                raise ParseError(lineno, "chosen set is not a subset of its argument")
            if S in spec["table"]:
                raise ParseError(lineno, "duplicate table key")
            spec["table"][S] = C
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    if firms is None or workers is None:
        raise ParseError(lines[-1][0], "missing FIRMS or WORKERS line")

    choice = {}
    quotas = {}
    for agent in order:
        spec = specs[agent]
        lineno = spec["line"]
        if spec["kind"] == "MC":
            if not spec["prefs"]:
                raise ParseError(lineno, f"MC function of {agent} has no PREF lines")
            choice[agent] = MCChoice(tuple(spec["prefs"]))
        elif spec["kind"] == "RESPONSIVE":
            if len(spec["prefs"]) != 1:
                raise ParseError(lineno, f"RESPONSIVE function of {agent} needs exactly one PREF line")
            choice[agent] = ResponsiveChoice(spec["prefs"][0], spec["quota"])
        else:
            choice[agent] = TableChoice(dict(spec["table"]))
        quotas[agent] = spec["quota"]
    try:
        return Instance.build(firms, workers, choice, quotas)
    except InstanceError as exc:
        raise ParseError(lines[-1][0], str(exc)) from None


def format_instance(instance: Instance) -> str:
    """Serialize back to the instance file format (round-trips through parse)."""
    out = ["instance v1", "FIRMS " + " ".join(instance.firms), "WORKERS " + " ".join(instance.workers)]
    for a in instance.firms + instance.workers:
        spec = instance.choice[a]
        q = instance.declared_quota.get(a)
        if isinstance(spec, MCChoice):
            if not spec.orders:
                continue
            out.append(f"CF {a} MC" + (f" QUOTA {q}" if q else ""))
            out.extend(f"PREF {a} " + " ".join(o) for o in spec.orders)
        elif isinstance(spec, ResponsiveChoice):
            out.append(f"CF {a} RESPONSIVE QUOTA {spec.quota}")
            out.append(f"PREF {a} " + " ".join(spec.order))
        else:
            out.append(f"CF {a} TABLE")
            for S in sorted(spec.table, key=lambda s: (len(s), instance.sorted_agents(s))):
                fmt = lambda xs: "{" + ",".join(instance.sorted_agents(xs)) + "}"
                out.append(f"CHOICE {a} {fmt(S)} -> {fmt(spec.table[S])}")
    return "\n".join(out) + "\n"


def all_subsets(items: Iterable, max_size: Optional[int] = None):
    items = list(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        for combo in combinations(items, k):
            yield frozenset(combo)
