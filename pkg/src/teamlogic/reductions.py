"""Hardness constructions as instance generators.

* CNF formulas become structures over (P, N): ``P(C, x)`` when variable x
  occurs positively in clause C, ``N(C, x)`` when negatively.
* :func:`chi_sentence` is a fixed sentence with one free unary relation R
  whose models on an encoded CNF are exactly its satisfying assignments.
* :func:`nonempty_lift` turns "some R" into "some nonempty R".
* The chain IS → IS* → MZDH* → relational cardinality-minimum problem maps
  graphs to dual-Horn CNFs and then to structures with a myopic sentence.

Relational sentences here are classical (Tarski) sentences, separate from
the team-logic formulas of :mod:`teamlogic.formula`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

from .core import Structure
from .errors import CapacityError, ContractError, ParseError

# -- propositional side ---------------------------------------------------


@dataclass(frozen=True)
class PropCnf:
    """CNF over variables 1..num_vars; literals are signed integers as in DIMACS."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ContractError("variable count must be non-negative")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            if not clause:
                raise ContractError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ContractError(f"literal {lit} outside variables 1..{self.num_vars}")

    def satisfied_by(self, true_vars: Iterable[int]) -> bool:
        """``true_vars``: the 1-based variables set to 1."""
        beta = set(true_vars)
        return all(any((lit > 0) == (abs(lit) in beta) for lit in clause) for clause in self.clauses)

    def is_dual_horn(self) -> bool:
        return all(sum(lit < 0 for lit in clause) <= 1 for clause in self.clauses)

    def assignments(self) -> list[frozenset[int]]:
        """All assignments as sets of true variables, in increasing bitmask order."""
        v = self.num_vars
        return [frozenset(i + 1 for i in range(v) if code >> i & 1) for code in range(1 << v)]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise ContractError("vertex count must be non-negative")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ContractError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ContractError(f"edge ({u},{v}) outside 0..{self.n - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def of(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        return cls(n, frozenset(edges))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        return not any(u in vs and v in vs for u, v in self.edges)

    def max_independent_set(self, proper: bool = False) -> int:
        """Size of a largest independent set; ``proper`` excludes V itself."""
        top = self.n - 1 if proper else self.n
        for size in range(top, -1, -1):
            if any(self.is_independent(c) for c in combinations(range(self.n), size)):
                return size
        return -1  # unreachable for proper=False; for n=0 with proper there is no proper subset


def has_independent_set(graph: Graph, k: int, proper: bool = False) -> bool:
    return graph.max_independent_set(proper) >= k


# -- relational sentences -------------------------------------------------


@dataclass(frozen=True)
class RTrue:
    pass


@dataclass(frozen=True)
class RFalse:
    pass


@dataclass(frozen=True)
class RAtom:
    """``rel`` is P, N, R or ``=``."""

    rel: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class RNot:
    sub: "RelSentence"


@dataclass(frozen=True)
class RAnd:
    left: "RelSentence"
    right: "RelSentence"


@dataclass(frozen=True)
class ROr:
    left: "RelSentence"
    right: "RelSentence"


@dataclass(frozen=True)
class RImplies:
    left: "RelSentence"
    right: "RelSentence"


@dataclass(frozen=True)
class RForall:
    var: str
    body: "RelSentence"


@dataclass(frozen=True)
class RExists:
    var: str
    body: "RelSentence"


RelSentence = Union[RTrue, RFalse, RAtom, RNot, RAnd, ROr, RImplies, RForall, RExists]


def P(c: str, x: str) -> RAtom:
    return RAtom("P", (c, x))


def N(c: str, x: str) -> RAtom:
    return RAtom("N", (c, x))


def R(x: str) -> RAtom:
    return RAtom("R", (x,))


def rel_free_vars(phi: RelSentence) -> frozenset[str]:
    if isinstance(phi, (RTrue, RFalse)):
        return frozenset()
    if isinstance(phi, RAtom):
        return frozenset(phi.args)
    if isinstance(phi, RNot):
        return rel_free_vars(phi.sub)
    if isinstance(phi, (RAnd, ROr, RImplies)):
        return rel_free_vars(phi.left) | rel_free_vars(phi.right)
    if isinstance(phi, (RForall, RExists)):
        return rel_free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a relational sentence: {phi!r}")


def format_sentence(phi: RelSentence) -> str:
    if isinstance(phi, RTrue):
        return "true"
    if isinstance(phi, RFalse):
        return "false"
    if isinstance(phi, RAtom):
        if phi.rel == "=":
            return f"{phi.args[0]}={phi.args[1]}"
        return f"{phi.rel}({','.join(phi.args)})"
    if isinstance(phi, RNot):
        return f"~{format_sentence(phi.sub)}"
    if isinstance(phi, (RAnd, ROr, RImplies)):
        op = {RAnd: "&", ROr: "|", RImplies: "->"}[type(phi)]
        return f"({format_sentence(phi.left)} {op} {format_sentence(phi.right)})"
    if isinstance(phi, (RForall, RExists)):
        q = "forall" if isinstance(phi, RForall) else "exists"
        return f"{q} {phi.var}. {format_sentence(phi.body)}"
    raise TypeError(f"not a relational sentence: {phi!r}")


def _is_clause(c: str) -> RelSentence:
    # clause elements are exactly those with at least one literal
    return RExists("z", ROr(P(c, "z"), N(c, "z")))


def chi_sentence(guarded: bool = True) -> RelSentence:
    """``forall C. exists x. ((P(C,x) & R(x)) | (N(C,x) & ~R(x)))``.

    With ``guarded`` (the default) C only ranges over clause elements; the
    bare form also quantifies over variable elements, which have no
    literals, and is then false on every encoded CNF.
    """
    body = RExists("x", ROr(RAnd(P("C", "x"), R("x")), RAnd(N("C", "x"), RNot(R("x")))))
    if guarded:
        body = RImplies(_is_clause("C"), body)
    return RForall("C", body)


def myopic_sentence(guarded: bool = True) -> RelSentence:
    """The myopic sentence used for dual-Horn CNFs::

        forall x. (R(x) -> forall C. ((~exists z. N(C,z) -> exists y. (P(C,y) & R(y)))
                                      & (N(C,x) -> exists y. (P(C,y) & R(y)))))

    ``guarded`` restricts C to clause elements, as for :func:`chi_sentence`.
    """
    witness = RExists("y", RAnd(P("C", "y"), R("y")))
    inner = RAnd(
        RImplies(RNot(RExists("z", N("C", "z"))), witness),
        RImplies(N("C", "x"), witness),
    )
    if guarded:
        inner = RImplies(_is_clause("C"), inner)
    return RForall("x", RImplies(R("x"), RForall("C", inner)))


def substitute_false(phi: RelSentence) -> RelSentence:
    """``phi`` with every ``R(...)`` replaced by false."""
    if isinstance(phi, RAtom):
        return RFalse() if phi.rel == "R" else phi
    if isinstance(phi, (RTrue, RFalse)):
        return phi
    if isinstance(phi, RNot):
        return RNot(substitute_false(phi.sub))
    if isinstance(phi, (RAnd, ROr, RImplies)):
        return type(phi)(substitute_false(phi.left), substitute_false(phi.right))
    if isinstance(phi, (RForall, RExists)):
        return type(phi)(phi.var, substitute_false(phi.body))
    raise TypeError(f"not a relational sentence: {phi!r}")


def nonempty_lift(phi: RelSentence) -> RelSentence:
    """``phi(R) | phi(empty)``: has a nonempty model iff ``phi`` has any model."""
    return ROr(phi, substitute_false(phi))


def _check_closed(phi: RelSentence) -> None:
    free = rel_free_vars(phi)
    if free:
        raise ContractError(f"sentence has free variables {sorted(free)}")


def classical_eval(structure: Structure, relation: Iterable[int], phi: RelSentence) -> bool:
    """Tarski satisfaction of ``phi`` in ``structure`` with R interpreted as ``relation``."""
    _check_closed(phi)
    rel = frozenset(relation)
    for e in rel:
        if not 0 <= e < structure.universe_size:
            raise ContractError(f"R member {e} outside the universe")
    universe = range(structure.universe_size)

    def ev(f: RelSentence, env: dict[str, int]) -> bool:
        if isinstance(f, RAtom):
            vals = tuple(env[a] for a in f.args)
            if f.rel == "=":
                return vals[0] == vals[1]
            if f.rel == "R":
                return vals[0] in rel
            return vals in structure.relation(f.rel)
        if isinstance(f, RTrue):
            return True
        if isinstance(f, RFalse):
            return False
        if isinstance(f, RNot):
            return not ev(f.sub, env)
        if isinstance(f, RAnd):
            return ev(f.left, env) and ev(f.right, env)
        if isinstance(f, ROr):
            return ev(f.left, env) or ev(f.right, env)
        if isinstance(f, RImplies):
            return not ev(f.left, env) or ev(f.right, env)
        if isinstance(f, RForall):
            return all(ev(f.body, {**env, f.var: a}) for a in universe)
        if isinstance(f, RExists):
            return any(ev(f.body, {**env, f.var: a}) for a in universe)
        raise TypeError(f"not a relational sentence: {f!r}")

    return ev(phi, {})


def eval_all_relations(structure: Structure, phi: RelSentence, domain: Iterable[int]) -> int:
    """Evaluate ``phi`` for every R ⊆ ``domain`` at once.

    Returns a bitmask over candidate codes: bit r is set iff ``phi`` holds
    with R = {domain[j] : bit j of r}. Truth values are bit vectors over
    the candidates, so connectives become bitwise operations.
    """
    _check_closed(phi)
    dom = list(domain)
    count = 1 << len(dom)
    full = (1 << count) - 1
    member = {}
    for j, e in enumerate(dom):
        mask = 0
        for r in range(count):
            if r >> j & 1:
                mask |= 1 << r
        member[e] = mask
    universe = range(structure.universe_size)

    def ev(f: RelSentence, env: dict[str, int]) -> int:
        if isinstance(f, RAtom):
            vals = tuple(env[a] for a in f.args)
            if f.rel == "=":
                return full if vals[0] == vals[1] else 0
            if f.rel == "R":
                return member.get(vals[0], 0)
            return full if vals in structure.relation(f.rel) else 0
        if isinstance(f, RTrue):
            return full
        if isinstance(f, RFalse):
            return 0
        if isinstance(f, RNot):
            return full ^ ev(f.sub, env)
        if isinstance(f, RAnd):
            left = ev(f.left, env)
            return left & ev(f.right, env) if left else 0
        if isinstance(f, ROr):
            left = ev(f.left, env)
            return left | ev(f.right, env) if left != full else full
        if isinstance(f, RImplies):
            left = ev(f.left, env)
            return (full ^ left) | ev(f.right, env) if left else full
        if isinstance(f, RForall):
            acc = full
            for a in universe:
                acc &= ev(f.body, {**env, f.var: a})
                if not acc:
                    break
            return acc
        if isinstance(f, RExists):
            acc = 0
            for a in universe:
                acc |= ev(f.body, {**env, f.var: a})
                if acc == full:
                    break
            return acc
        raise TypeError(f"not a relational sentence: {f!r}")

    return ev(phi, {})


@dataclass(frozen=True)
class WeightAtMost:
    """Nonempty relations with at most ``k`` members."""

    k: int


Constraint = Union[None, str, WeightAtMost]

RELATION_CAP = 20


def sat_rel_brute(structure: Structure, phi: RelSentence, constraint: Constraint = None,
                  domain: Iterable[int] | None = None) -> list[frozenset[int]]:
    """All R ⊆ ``domain`` (default: the universe) satisfying ``phi`` and the
    constraint (None, ``"nonempty"`` or :class:`WeightAtMost`), ordered by
    their bitmask over the domain."""
    dom = list(range(structure.universe_size) if domain is None else domain)
    if len(dom) > RELATION_CAP:
        raise CapacityError(f"{len(dom)} candidate elements exceed the cap of {RELATION_CAP}")
    if constraint not in (None, "nonempty") and not isinstance(constraint, WeightAtMost):
        raise ContractError(f"unknown constraint {constraint!r}")
    models = eval_all_relations(structure, phi, dom)
    out = []
    for r in range(1 << len(dom)):
        if not models >> r & 1:
            continue
        size = r.bit_count()
        if constraint == "nonempty" and size == 0:
            continue
        if isinstance(constraint, WeightAtMost) and not 1 <= size <= constraint.k:
            continue
        out.append(frozenset(dom[j] for j in range(len(dom)) if r >> j & 1))
    return out


# -- encodings and reductions ----------------------------------------------


def encode_cnf(cnf: PropCnf, allow_empty: bool = False) -> Structure:
    """Universe: variables x1..xv (elements 0..v-1) then clauses C1..Cm."""
    if not cnf.clauses and not allow_empty:
        raise ContractError("CNF has no clauses")
    v = cnf.num_vars
    size = v + len(cnf.clauses)
    if size == 0:
        raise ContractError("CNF has neither variables nor clauses")
    pos, neg = set(), set()
    for i, clause in enumerate(cnf.clauses):
        c = v + i
        for lit in clause:
            (pos if lit > 0 else neg).add((c, abs(lit) - 1))
    labels = tuple(f"x{i + 1}" for i in range(v)) + tuple(f"C{i + 1}" for i in range(len(cnf.clauses)))
    return Structure.build(size, {"P": pos, "N": neg}, {"P": 2, "N": 2}, labels=labels)


def variable_elements(cnf: PropCnf) -> range:
    return range(cnf.num_vars)


def relation_of(beta: Iterable[int]) -> frozenset[int]:
    """Propositional assignment (1-based true variables) as a unary relation."""
    return frozenset(i - 1 for i in beta)


def assignment_of(relation: Iterable[int]) -> frozenset[int]:
    return frozenset(e + 1 for e in relation)


def is_to_is_star(graph: Graph, k: int) -> tuple[Graph, int]:
    """Add a vertex adjacent to every old vertex, so every independent set
    of the old graph is a proper one of the new graph."""
    apex = graph.n
    return Graph(graph.n + 1, graph.edges | {(u, apex) for u in range(graph.n)}), k


def is_star_to_mzdh(graph: Graph, k: int) -> tuple[PropCnf, int]:
    """One clause (x_i | x_j) per edge; a false variable marks a chosen vertex."""
    clauses = tuple(sorted((u + 1, v + 1) for u, v in graph.edges))
    return PropCnf(graph.n, clauses), graph.n - k


def mzdh_to_rel(cnf: PropCnf, k: int, guarded: bool = True) -> tuple[Structure, RelSentence, int]:
    if not cnf.is_dual_horn():
        raise ContractError("CNF is not dual-Horn (a clause has two negative literals)")
    return encode_cnf(cnf, allow_empty=True), myopic_sentence(guarded), k


# -- file formats ------------------------------------------------------------


def parse_dimacs(text: str) -> PropCnf:
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf VARS CLAUSES'", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer in problem line", lineno) from None
            continue
        if num_vars is None:
            raise ParseError("clause before the problem line", lineno)
        for col, tok in enumerate(line.split(), 1):
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno, col) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno, col)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise ParseError(f"literal {lit} exceeds {num_vars} variables", lineno, col)
            else:
                current.append(lit)
    if num_vars is None:
        raise ParseError("missing problem line")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != num_clauses:
        raise ParseError(f"problem line announces {num_clauses} clauses, found {len(clauses)}")
    return PropCnf(num_vars, tuple(clauses))


def format_dimacs(cnf: PropCnf, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty graph file")
    lineno, head = rows[0]
    try:
        n, m = map(int, head)
    except ValueError:
        raise ParseError("expected 'N M' header", lineno) from None
    if len(rows) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(rows) - 1}")
    edges = []
    for lineno, parts in rows[1:]:
        if len(parts) != 2:
            raise ParseError("expected 'u v'", lineno)
        try:
            u, v = map(int, parts)
        except ValueError:
            raise ParseError("non-integer vertex", lineno) from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParseError(f"bad edge {u} {v}", lineno)
        edges.append((u, v))
    return Graph.of(n, edges)


def format_graph(graph: Graph) -> str:
    lines = [f"{graph.n} {len(graph.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(graph.edges))
    return "\n".join(lines) + "\n"
