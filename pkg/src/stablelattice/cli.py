"""Command-line interface: ``stablelattice <command> FILE ...``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .algorithms import deferred_acceptance, format_trace, rotation_poset
from .core import CapExceeded, InstanceError, ParseError, Property, TableMiss, parse_instance, verify_property
from .matching import Matching, format_matching
from .optimize import WeightOverflow, max_weight_stable_matching, parse_weights
from .oracle import SearchLimitExceeded, enumerate_stable_bruteforce, verify_lattice
from .polytope import extended_formulation, format_lp
from .represent import ENUMERATION_LIMIT, enumerate_stable, format_poset

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    try:
        return parse_instance(_read(path))
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_validate(args, out) -> int:
    inst = _load(args.file)
    ok = True
    for agent in inst.firms + inst.workers:
        if not inst.partners(agent):
            out.write(f"{agent} accepts nobody\n")
            continue
        checks = {p: verify_property(inst, agent, p, cap=args.cap) for p in Property if p is not Property.QUOTA_FILLING}
        parts = [f"{p.value}={_yes(v)}" for p, v in checks.items()]
        q = inst.quota(agent)
        is_worker = not inst.is_firm(agent)
        if q is None and is_worker:
            q = len(inst.choose(agent, inst.partners(agent)))
        if q is not None:
            qf = verify_property(inst, agent, Property.QUOTA_FILLING, cap=args.cap, q=q)
            parts.append(f"quota-filling({q})={_yes(qf)}")
            if is_worker:
                ok &= qf
        ok &= checks[Property.PATH_INDEPENDENT] and checks[Property.CARDINAL_MONOTONE]
        out.write(f"{agent} " + " ".join(parts) + "\n")
    out.write("MODEL CM-QF\n" if ok else "MODEL VIOLATED\n")
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_solve(args, out) -> int:
    inst = _load(args.file)
    mu, trace = deferred_acceptance(inst, args.side, record=True)
    if args.trace:
        sys.stderr.write(format_trace(inst, trace))
    out.write(format_matching(inst, mu))
    return EXIT_OK


def cmd_poset(args, out) -> int:
    inst = _load(args.file)
    poset = rotation_poset(inst)
    if args.trace:
        for i, mu in enumerate(poset.chain):
            sys.stderr.write(f"CHAIN {i}\n" + format_matching(inst, mu))
    out.write(format_poset(poset))
    return EXIT_OK


def _write_matchings(inst, matchings, out):
    blocks = [f"MATCHING {i}\n" + format_matching(inst, mu) for i, mu in enumerate(matchings, 1)]
    out.write("\n".join(blocks))


def cmd_enumerate(args, out) -> int:
    inst = _load(args.file)
    if args.method == "poset":
        matchings = enumerate_stable(rotation_poset(inst), limit=args.limit)
    else:
        matchings = enumerate_stable_bruteforce(inst)
    _write_matchings(inst, matchings, out)
    return EXIT_OK


def cmd_optimize(args, out) -> int:
    inst = _load(args.file)
    try:
        weights = parse_weights(inst, _read(args.weights))
    except (ValueError, InstanceError) as exc:
        raise UsageError(f"{args.weights}: {exc}") from None
    mu, value = max_weight_stable_matching(inst, weights)
    out.write(f"VALUE {value}\n")
    out.write(format_matching(inst, mu))
    return EXIT_OK


def cmd_polytope(args, out) -> int:
    inst = _load(args.file)
    out.write(format_lp(extended_formulation(inst)))
    return EXIT_OK


def _describe(inst, witness) -> str:
    if isinstance(witness, Matching):
        return "{" + " ".join(f"{f}:{w}" for f, w in inst.sorted_pairs(witness)) + "}"
    if isinstance(witness, (tuple, list)):
        return "(" + ", ".join(_describe(inst, x) for x in witness) + ")"
    return str(witness)


def cmd_verify(args, out) -> int:
    inst = _load(args.file)
    poset = rotation_poset(inst)
    from_poset = enumerate_stable(poset)
    brute = enumerate_stable_bruteforce(inst)
    ok = True
    a, b = set(from_poset), set(brute)
    if a == b:
        out.write(f"PASS enumeration ({len(a)} stable matchings)\n")
    else:
        ok = False
        out.write("FAIL enumeration\n")
        for mu in sorted(a - b, key=sorted):
            out.write(f"  only from poset: {_describe(inst, mu)}\n")
        for mu in sorted(b - a, key=sorted):
            out.write(f"  only from search: {_describe(inst, mu)}\n")
    report = verify_lattice(inst, matchings=brute)
    for axiom in report.AXIOMS:
        passed = getattr(report, axiom)
        ok &= passed
        line = f"{'PASS' if passed else 'FAIL'} {axiom.replace('_', '-')}"
        if not passed:
            line += " witness: " + _describe(inst, report.witnesses.get(axiom))
        out.write(line + "\n")
    return EXIT_OK if ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablelattice", description="Stable matchings under choice functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check choice-function properties agent by agent")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=10, help="largest partner list to check exhaustively")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("solve", help="deferred acceptance")
    p.add_argument("file")
    p.add_argument("--side", choices=("firms", "workers"), default="firms")
    p.add_argument("--trace", action="store_true", help="print each round to stderr")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("poset", help="rotation poset")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true", help="print the maximal chain to stderr")
    p.set_defaults(run=cmd_poset)

    p = sub.add_parser("enumerate", help="all stable matchings")
    p.add_argument("file")
    p.add_argument("--method", choices=("poset", "brute"), default="poset")
    p.add_argument("--limit", type=int, default=ENUMERATION_LIMIT)
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("optimize", help="maximum-weight stable matching")
    p.add_argument("file")
    p.add_argument("--weights", required=True)
    p.set_defaults(run=cmd_optimize)

    p = sub.add_parser("polytope", help="extended formulation of the stable matching polytope")
    p.add_argument("file")
    p.add_argument("--format", choices=("lp",), default="lp")
    p.set_defaults(run=cmd_polytope)

    p = sub.add_parser("verify", help="cross-check against brute force")
    p.add_argument("file")
    p.set_defaults(run=cmd_verify)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.run(args, out)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (CapExceeded, SearchLimitExceeded, WeightOverflow, OverflowError, TableMiss, InstanceError, RuntimeError, ArithmeticError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
