"""Team-logic formulas: AST, parser, printer and fragment analysis.

Grammar (whitespace-insensitive, binary connectives always parenthesised)::

    formula := ("exists" | "forall") VAR "." formula
             | "(" formula ("&" | "|") formula ")"
             | atom
    atom    := VAR "=" VAR | VAR "!=" VAR | REL "(" vars ")" | "!" REL "(" vars ")"
             | "dep(" vars ";" vars ")" | "inc(" vars ";" vars ")"
             | "ind(" vars? ";" vars ";" vars ")"

Variables inside a list are separated by commas or blanks.
``ind(z; x; y)`` reads "x is independent of y given z".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Union

from .core import Vocabulary
from .errors import ContractError, ParseError

KEYWORDS = frozenset({"exists", "forall", "dep", "inc", "ind"})
ATOM_KINDS = ("dep", "inc", "ind")


@dataclass(frozen=True)
class Node:
    # Preorder index within the enclosing formula; -1 until numbered.
    nid: int = field(default=-1, compare=False, repr=False, kw_only=True)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Eq(Node):
    left: str
    right: str


@dataclass(frozen=True)
class Neq(Node):
    left: str
    right: str


@dataclass(frozen=True)
class Rel(Node):
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class NegRel(Node):
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class And(Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or(Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists(Node):
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall(Node):
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Dep(Node):
    """Functional dependence: equal ``xs`` values force equal ``ys`` values."""

    xs: tuple[str, ...]
    ys: tuple[str, ...]


@dataclass(frozen=True)
class Inc(Node):
    """Inclusion: every ``xs`` value of the team occurs as some ``ys`` value."""

    xs: tuple[str, ...]
    ys: tuple[str, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ContractError(
                f"inclusion atom needs tuples of equal length, got {len(self.xs)} and {len(self.ys)}"
            )


@dataclass(frozen=True)
class Ind(Node):
    """Conditional independence ``xs ⊥_zs ys``."""

    zs: tuple[str, ...]
    xs: tuple[str, ...]
    ys: tuple[str, ...]


Formula = Union[Eq, Neq, Rel, NegRel, And, Or, Exists, Forall, Dep, Inc, Ind]
LITERALS = (Eq, Neq, Rel, NegRel)
DEPENDENCY_ATOMS = (Dep, Inc, Ind)


@dataclass(frozen=True)
class FragmentInfo:
    atoms: frozenset[str]
    free_vars: tuple[str, ...]
    width: int

    @property
    def is_flat(self) -> bool:
        return not self.atoms

    @property
    def downward_closed(self) -> bool:
        return self.atoms <= {"dep"}

    @property
    def union_closed(self) -> bool:
        return self.atoms <= {"inc"}


def children(node: Formula) -> tuple[Formula, ...]:
    if isinstance(node, (And, Or)):
        return (node.left, node.right)
    if isinstance(node, (Exists, Forall)):
        return (node.body,)
    return ()


def preorder(node: Formula) -> Iterator[Formula]:
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(children(cur)))


def number(node: Formula) -> Formula:
    """Copy of ``node`` whose subformulas carry preorder ids 0, 1, 2, ..."""
    counter = [0]

    def walk(n):
        nid = counter[0]
        counter[0] += 1
        if isinstance(n, (And, Or)):
            left = walk(n.left)
            right = walk(n.right)
            return replace(n, left=left, right=right, nid=nid)
        if isinstance(n, (Exists, Forall)):
            return replace(n, body=walk(n.body), nid=nid)
        return replace(n, nid=nid)

    return walk(node)


def is_numbered(node: Formula) -> bool:
    return all(n.nid == i for i, n in enumerate(preorder(node)))


def variables_of(node: Formula) -> tuple[str, ...]:
    """Variables an atom or literal mentions, in order of appearance."""
    if isinstance(node, (Eq, Neq)):
        return (node.left, node.right)
    if isinstance(node, (Rel, NegRel)):
        return node.args
    if isinstance(node, (Dep, Inc)):
        return node.xs + node.ys
    if isinstance(node, Ind):
        return node.zs + node.xs + node.ys
    raise TypeError(f"{type(node).__name__} is not an atom")


def free_vars(node: Formula) -> tuple[str, ...]:
    return tuple(sorted(_free(node)))


def _free(node: Formula) -> frozenset[str]:
    if isinstance(node, (And, Or)):
        return _free(node.left) | _free(node.right)
    if isinstance(node, (Exists, Forall)):
        return _free(node.body) - {node.var}
    return frozenset(variables_of(node))


def atoms_used(node: Formula) -> frozenset[str]:
    kinds = {Dep: "dep", Inc: "inc", Ind: "ind"}
    return frozenset(kinds[type(n)] for n in preorder(node) if type(n) in kinds)


def width(node: Formula) -> int:
    return max(len(_free(n)) for n in preorder(node))


def fragment(node: Formula) -> FragmentInfo:
    return FragmentInfo(atoms_used(node), free_vars(node), width(node))


def relation_symbols(node: Formula) -> dict[str, int]:
    """Relation symbols used, with the arity of their first occurrence."""
    found: dict[str, int] = {}
    for n in preorder(node):
        if isinstance(n, (Rel, NegRel)):
            found.setdefault(n.name, len(n.args))
    return found


def depth(node: Formula) -> int:
    return 1 + max((depth(c) for c in children(node)), default=0)


def _vars(names) -> str:
    return ",".join(names)


def format_formula(node: Formula) -> str:
    """Canonical text accepted by :func:`parse`."""
    if isinstance(node, Eq):
        return f"{node.left}={node.right}"
    if isinstance(node, Neq):
        return f"{node.left}!={node.right}"
    if isinstance(node, Rel):
        return f"{node.name}({_vars(node.args)})"
    if isinstance(node, NegRel):
        return f"!{node.name}({_vars(node.args)})"
    if isinstance(node, And):
        return f"({format_formula(node.left)} & {format_formula(node.right)})"
    if isinstance(node, Or):
        return f"({format_formula(node.left)} | {format_formula(node.right)})"
    if isinstance(node, Exists):
        return f"exists {node.var}. {format_formula(node.body)}"
    if isinstance(node, Forall):
        return f"forall {node.var}. {format_formula(node.body)}"
    if isinstance(node, Dep):
        return f"dep({_vars(node.xs)};{_vars(node.ys)})"
    if isinstance(node, Inc):
        return f"inc({_vars(node.xs)};{_vars(node.ys)})"
    if isinstance(node, Ind):
        return f"ind({_vars(node.zs)};{_vars(node.xs)};{_vars(node.ys)})"
    raise TypeError(f"not a formula: {node!r}")


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>!=|[=!()&|.,;]))")


@dataclass
class _Tok:
    kind: str  # "ident", "op" or "end"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(offset):
        line = 0
        while line + 1 < len(line_starts) and line_starts[line + 1] <= offset:
            line += 1
        return line + 1, offset - line_starts[line] + 1

    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            offset = pos + len(rest) - len(rest.lstrip())
            raise ParseError(f"unexpected character {text[offset]!r}", *where(offset))
        kind = "ident" if m.group("ident") else "op"
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), *where(start)))
        pos = m.end()
    toks.append(_Tok("end", "", *where(len(text))))
    return toks


class _Parser:
    def __init__(self, text: str, vocabulary: Vocabulary | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.vocabulary = vocabulary
        self.arities: dict[str, int] = {}

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def take(self, text: str | None = None, kind: str | None = None) -> _Tok:
        tok = self.peek()
        if text is not None and tok.text != text:
            self.fail(f"expected {text!r} but found {tok.text or 'end of input'!r}")
        if kind is not None and tok.kind != kind:
            self.fail(f"expected {kind} but found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def variable(self) -> str:
        tok = self.take(kind="ident")
        if tok.text in KEYWORDS:
            self.fail(f"keyword {tok.text!r} cannot be used as a variable", tok)
        return tok.text

    def varlist(self, allow_empty: bool = False) -> tuple[str, ...]:
        names = []
        while self.peek().kind == "ident":
            names.append(self.variable())
            if self.peek().text == ",":
                self.take(",")
                if self.peek().kind != "ident":
                    self.fail("expected a variable after ','")
        if not names and not allow_empty:
            self.fail("expected a nonempty variable list")
        return tuple(names)

    def parse(self) -> Formula:
        node = self.formula()
        if self.peek().kind != "end":
            self.fail(f"unexpected trailing input {self.peek().text!r}")
        return node

    def formula(self) -> Formula:
        tok = self.peek()
        pos = (tok.line, tok.col)
        if tok.text == "(":
            self.take("(")
            left = self.formula()
            op = self.peek()
            if op.text not in ("&", "|"):
                self.fail(f"expected '&' or '|' but found {op.text or 'end of input'!r}")
            self.take()
            right = self.formula()
            self.take(")")
            cls = And if op.text == "&" else Or
            return cls(left, right, pos=pos)
        if tok.kind == "ident" and tok.text in ("exists", "forall") and self.peek(1).text != "(":
            self.take()
            var = self.variable()
            self.take(".")
            body = self.formula()
            cls = Exists if tok.text == "exists" else Forall
            return cls(var, body, pos=pos)
        if tok.text == "!":
            self.take("!")
            name_tok = self.take(kind="ident")
            if name_tok.text in KEYWORDS:
                self.fail("negation applies to relational atoms only", name_tok)
            args = self.arguments()
            self.check_relation(name_tok, len(args))
            return NegRel(name_tok.text, args, pos=pos)
        if tok.kind == "ident" and self.peek(1).text == "(":
            self.take()
            if tok.text in ATOM_KINDS:
                return self.dependency_atom(tok, pos)
            args = self.arguments()
            self.check_relation(tok, len(args))
            return Rel(tok.text, args, pos=pos)
        if tok.kind == "ident":
            left = self.variable()
            op = self.peek()
            if op.text not in ("=", "!="):
                self.fail(f"expected '=' or '!=' after variable {left!r}")
            self.take()
            right = self.variable()
            return (Eq if op.text == "=" else Neq)(left, right, pos=pos)
        self.fail(f"unexpected {tok.text or 'end of input'!r}")

    def arguments(self) -> tuple[str, ...]:
        self.take("(")
        args = self.varlist()
        self.take(")")
        return args

    def dependency_atom(self, tok: _Tok, pos) -> Formula:
        self.take("(")
        if tok.text == "ind":
            zs = self.varlist(allow_empty=True)
            self.take(";")
            xs = self.varlist()
            self.take(";")
            ys = self.varlist()
            self.take(")")
            return Ind(zs, xs, ys, pos=pos)
        xs = self.varlist()
        self.take(";")
        ys = self.varlist()
        self.take(")")
        if tok.text == "dep":
            return Dep(xs, ys, pos=pos)
        if len(xs) != len(ys):
            raise ParseError(
                f"inclusion atom needs tuples of equal length, got {len(xs)} and {len(ys)}",
                tok.line, tok.col,
            )
        return Inc(xs, ys, pos=pos)

    def check_relation(self, tok: _Tok, arity: int) -> None:
        name = tok.text
        if self.vocabulary is not None:
            if name not in self.vocabulary:
                self.fail(f"unknown relation {name!r}", tok)
            expected = self.vocabulary.arity(name)
        else:
            expected = self.arities.setdefault(name, arity)
        if arity != expected:
            self.fail(f"relation {name!r} has arity {expected}, used with {arity} arguments", tok)


def parse(text: str, vocabulary: Vocabulary | None = None) -> Formula:
    """Parse formula text into a numbered AST.

    With a vocabulary, relation names and arities are checked against it;
    otherwise every use of a relation must agree on its arity.
    """
    return number(_Parser(text, vocabulary).parse())


def check_vocabulary(node: Formula, vocabulary: Vocabulary) -> None:
    """Raise ParseError if ``node`` uses a relation outside ``vocabulary``."""
    for n in preorder(node):
        if isinstance(n, (Rel, NegRel)):
            line, col = n.pos or (None, None)
            if n.name not in vocabulary:
                raise ParseError(f"unknown relation {n.name!r}", line, col)
            if vocabulary.arity(n.name) != len(n.args):
                raise ParseError(
                    f"relation {n.name!r} has arity {vocabulary.arity(n.name)}, "
                    f"used with {len(n.args)} arguments", line, col,
                )
