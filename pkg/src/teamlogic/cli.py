"""Command-line interface and the text file formats it reads and writes.

Exit codes: 0 success (possibly with no solutions), 1 usage error,
2 parse error, 3 resource or capacity limit, 4 self-test mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .checker import Checker
from .core import AssignmentSpace, Structure, Team
from .errors import CapacityError, ContractError, ParseError, ResourceExceeded, UnsupportedFragment
from .formula import Formula, parse
from .maxsub import max_subteam

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_RESOURCE, EXIT_MISMATCH = 0, 1, 2, 3, 4


# -- structure files -------------------------------------------------------

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_structure_file(text: str) -> Structure:
    """Line-oriented structure format::

        universe 2
        labels a b          # optional
        vocab R/2 S/1       # optional; every listed relation needs a block
        rel R/2
        0 1
        1 0
        .
    """
    size = None
    labels = None
    declared: dict[str, int] | None = None
    relations: dict[str, tuple[int, list[tuple[int, ...]]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        col = raw.index(line[0]) + 1
        if current is not None:
            name, arity, tuples = current
            if line == ".":
                relations[name] = (arity, tuples)
                current = None
                continue
            parts = line.split()
            if len(parts) != arity:
                raise ParseError(f"relation {name} expects {arity} values per line", lineno, col)
            try:
                tup = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError("tuple entries must be integers", lineno, col) from None
            bad = [v for v in tup if not 0 <= v < size]
            if bad:
                raise ParseError(f"element {bad[0]} outside the universe 0..{size - 1}", lineno, col)
            tuples.append(tup)
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "universe":
            if size is not None:
                raise ParseError("duplicate universe line", lineno, col)
            try:
                size = int(rest)
            except ValueError:
                raise ParseError("universe size must be an integer", lineno, col) from None
            if size < 1:
                raise ParseError("the universe must be nonempty", lineno, col)
        elif size is None:
            raise ParseError("expected 'universe N' first", lineno, col)
        elif keyword == "labels":
            labels = rest.split()
            if len(labels) != size:
                raise ParseError(f"expected {size} labels, got {len(labels)}", lineno, col)
        elif keyword == "vocab":
            declared = {}
            for item in rest.split():
                name, arity = _relation_header(item, lineno, col)
                declared[name] = arity
        elif keyword == "rel":
            name, arity = _relation_header(rest, lineno, col)
            if name in relations:
                raise ParseError(f"duplicate block for relation {name}", lineno, col)
            current = (name, arity, [])
        else:
            raise ParseError(f"unexpected line {line!r}", lineno, col)
    if current is not None:
        raise ParseError(f"block for relation {current[0]} is not terminated by '.'")
    if size is None:
        raise ParseError("missing 'universe N' line")
    if declared is not None:
        for name, arity in declared.items():
            if name not in relations:
                raise ParseError(f"declared relation {name}/{arity} has no block")
            if relations[name][0] != arity:
                raise ParseError(f"relation {name} declared with arity {arity} but block says {relations[name][0]}")
    return Structure.build(
        size,
        {name: tuples for name, (_, tuples) in relations.items()},
        {name: arity for name, (arity, _) in relations.items()},
        labels,
    )


def _relation_header(item: str, lineno: int, col: int) -> tuple[str, int]:
    name, slash, arity = item.partition("/")
    if not slash or not name.isidentifier():
        raise ParseError(f"expected NAME/ARITY, got {item!r}", lineno, col)
    try:
        value = int(arity)
    except ValueError:
        raise ParseError(f"bad arity in {item!r}", lineno, col) from None
    if value < 1:
        raise ParseError("arity must be at least 1", lineno, col)
    return name, value


def format_structure_file(structure: Structure, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"universe {structure.universe_size}")
    if structure.labels is not None:
        lines.append("labels " + " ".join(structure.labels))
    for name, arity, tuples in structure.relations:
        lines.append(f"rel {name}/{arity}")
        lines.extend(" ".join(map(str, t)) for t in sorted(tuples))
        lines.append(".")
    return "\n".join(lines) + "\n"


# -- team files ------------------------------------------------------------

def parse_team_file(text: str, space: AssignmentSpace | int) -> Team:
    """``vars x y`` followed by one row of values per assignment.

    ``space`` is either the target space (the header must name exactly its
    variables, in any order) or a universe size, in which case the space
    is built from the header.
    """
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "vars":
                raise ParseError("expected 'vars ...' header", lineno, 1)
            header = parts[1:]
            if len(set(header)) != len(header):
                raise ParseError("repeated variable in header", lineno, 1)
            continue
        rows.append((lineno, parts))
    if header is None:
        raise ParseError("missing 'vars ...' header")
    if isinstance(space, int):
        space = AssignmentSpace.of(header, space)
    elif sorted(header) != list(space.variables):
        raise ParseError(f"header variables {header} differ from {list(space.variables)}")
    bits = 0
    for lineno, parts in rows:
        if len(parts) != len(header):
            raise ParseError(f"expected {len(header)} values, got {len(parts)}", lineno)
        try:
            values = dict(zip(header, (int(p) for p in parts)))
        except ValueError:
            raise ParseError("values must be integers", lineno) from None
        for var, v in values.items():
            if not 0 <= v < space.size:
                raise ParseError(f"value {v} for {var} outside the universe", lineno)
        index = space.index([values[v] for v in space.variables])
        if bits >> index & 1:
            raise ParseError("duplicate row", lineno)
        bits |= 1 << index
    return Team(space, bits)


def format_team(team: Team) -> str:
    """Canonical one-line form, members in increasing index order."""
    return str(team)


def format_team_file(team: Team) -> str:
    lines = ["vars " + " ".join(team.space.variables)]
    lines.extend(" ".join(map(str, a.values)) for a in team)
    return "\n".join(lines) + "\n"


# -- commands --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text()


def _load(args) -> tuple[Structure, Formula]:
    structure = parse_structure_file(_read(args.structure))
    formula = parse(_read(args.formula), structure.vocabulary)
    return structure, formula


def _cmd_check(args, out) -> int:
    structure, formula = _load(args)
    team = parse_team_file(_read(args.team), structure.universe_size)
    print("sat" if Checker(structure, formula).ver_team(team) else "unsat", file=out)
    return EXIT_OK


def _cmd_enumerate(args, out) -> int:
    from .enumeration import enumerate_teams

    structure, formula = _load(args)
    stream = enumerate_teams(structure, formula, args.mode, args.engine)
    for team in stream:
        print(format_team(team), file=out)
    if args.stats:
        print("--- stats", file=out)
        print(stream.stats.summary(), file=out)
    return EXIT_OK


def _cmd_maxsubteam(args, out) -> int:
    structure, formula = _load(args)
    team = parse_team_file(_read(args.team), structure.universe_size)
    print(format_team(max_subteam(structure, team, formula)), file=out)
    return EXIT_OK


def _cmd_reduce(args, out) -> int:
    from . import reductions as red

    if args.target == "is2cnf":
        graph = red.parse_graph(_read(args.graph))
        if args.k is None:
            raise ContractError("is2cnf needs -k")
        k = args.k
        if args.star:
            graph, k = red.is_to_is_star(graph, k)
        cnf, bound = red.is_star_to_mzdh(graph, k)
        out.write(red.format_dimacs(cnf, [f"bound {bound}"]))
        return EXIT_OK
    cnf = red.parse_dimacs(_read(args.cnf))
    if args.myopic:
        structure, sentence, _ = red.mzdh_to_rel(cnf, 0)
    else:
        structure, sentence = red.encode_cnf(cnf), red.chi_sentence()
    out.write(format_structure_file(structure, [f"sentence {red.format_sentence(sentence)}"]))
    return EXIT_OK


def _cmd_selftest(args, out) -> int:
    from .corpus import build_corpus
    from .enumeration import Mode, enumerate_teams
    from .maxsub import max_subteam_brute
    from .core import full_team
    from .formula import atoms_used, free_vars
    from .reference import brute_enum

    corpus = build_corpus(args.instances, args.seed)
    failures = 0
    for inst in corpus:
        engines = ["flashlight"]
        if atoms_used(inst.formula) <= {"inc"}:
            engines.append("inclusion")
        problems = []
        for mode in Mode:
            want = [format_team(t) for t in brute_enum(inst.structure, inst.formula, mode)]
            for engine in engines:
                got = [format_team(t) for t in enumerate_teams(inst.structure, inst.formula, mode, engine)]
                if len(got) != len(set(got)) or sorted(got) != sorted(want):
                    problems.append(f"{engine}/{mode.value}")
        if "inclusion" in engines:
            full = full_team(inst.structure, free_vars(inst.formula))
            if max_subteam(inst.structure, full, inst.formula) != max_subteam_brute(inst.structure, full, inst.formula):
                problems.append("maxsub")
        status = "ok" if not problems else "MISMATCH " + " ".join(problems)
        failures += bool(problems)
        print(f"{status} {inst}", file=out)
    print(f"{len(corpus) - failures}/{len(corpus)} instances agree", file=out)
    return EXIT_OK if not failures else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="teamlogic", description="Team-semantics model checking and team enumeration.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_args(p, team: bool):
        p.add_argument("--structure", required=True, help="structure file")
        p.add_argument("--formula", required=True, help="file holding one formula")
        if team:
            p.add_argument("--team", required=True, help="team file")

    p = sub.add_parser("check", help="print sat/unsat: does the nonempty team satisfy the formula")
    model_args(p, team=True)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("enumerate", help="list satisfying teams, one per line")
    model_args(p, team=False)
    p.add_argument("--mode", default="all", choices=["all", "submax", "submin", "cardmax", "cardmin"])
    p.add_argument("--engine", default="auto", choices=["auto", "inclusion", "flashlight", "reference"])
    p.add_argument("--stats", action="store_true", help="append delay statistics")
    p.set_defaults(run=_cmd_enumerate)

    p = sub.add_parser("maxsubteam", help="largest satisfying subteam (inclusion logic)")
    model_args(p, team=True)
    p.set_defaults(run=_cmd_maxsubteam)

    p = sub.add_parser("reduce", help="hardness reductions as instance generators")
    rsub = p.add_subparsers(dest="target", required=True, parser_class=_Parser)
    q = rsub.add_parser("is2cnf", help="graph and k to a positive 2-CNF with a weight bound")
    q.add_argument("--graph", required=True)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("--star", action="store_true", help="first add an apex vertex (proper independent sets)")
    q.set_defaults(run=_cmd_reduce)
    q = rsub.add_parser("cnf2struct", help="DIMACS CNF to a (P, N) structure plus sentence")
    q.add_argument("--cnf", required=True)
    which = q.add_mutually_exclusive_group()
    which.add_argument("--chi", action="store_true", help="satisfiability sentence (default)")
    which.add_argument("--myopic", action="store_true", help="myopic sentence for dual-Horn input")
    q.set_defaults(run=_cmd_reduce)

    p = sub.add_parser("selftest", help="cross-check every engine against brute force on a random corpus")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--instances", type=int, default=30)
    p.set_defaults(run=_cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceExceeded, CapacityError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ContractError, UnsupportedFragment, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
