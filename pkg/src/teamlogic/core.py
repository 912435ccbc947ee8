"""Finite structures, assignments and teams.

Universe elements are the integers ``0..n-1``. An assignment space over a
sorted variable tuple ``(v1, ..., vk)`` numbers every assignment by the base-n
numeral of its value tuple with ``v1`` most significant, so index order and
lexicographic order coincide. A team is a subset of that index range, stored
as a Python int used as a bit vector.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import CapacityError, ContractError, ParseError

# Largest number of assignments an AssignmentSpace may index.
ASSIGNMENT_CAP = 1 << 20


@dataclass(frozen=True)
class Vocabulary:
    """Relation symbols with their arities."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise ContractError(f"duplicate relation names in {names}")
        for name, arity in self.relations:
            if arity < 1:
                raise ContractError(f"relation {name} has arity {arity} < 1")

    def arity(self, name: str) -> int:
        for rel, arity in self.relations:
            if rel == name:
                return arity
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(rel == name for rel, _ in self.relations)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)


@dataclass(frozen=True)
class Structure:
    """A finite relational structure over the universe ``0..universe_size-1``.

    ``relations`` maps each symbol to ``(arity, tuples)``. ``labels`` optionally
    names the elements for display (CNF variables, clauses, graph vertices).
    """

    universe_size: int
    relations: tuple[tuple[str, int, frozenset[tuple[int, ...]]], ...] = ()
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.universe_size < 1:
            raise ContractError("the universe must be nonempty")
        seen = set()
        for name, arity, tuples in self.relations:
            if name in seen:
                raise ContractError(f"relation {name} interpreted twice")
            seen.add(name)
            if arity < 1:
                raise ContractError(f"relation {name} has arity {arity} < 1")
            for tup in tuples:
                if len(tup) != arity:
                    raise ContractError(f"tuple {tup} in {name} does not have arity {arity}")
                if any(not 0 <= v < self.universe_size for v in tup):
                    raise ContractError(f"tuple {tup} in {name} leaves the universe")
        if self.labels is not None and len(self.labels) != self.universe_size:
            raise ContractError("label table size differs from the universe size")

    @classmethod
    def build(
        cls,
        universe_size: int,
        relations: Mapping[str, Iterable[Sequence[int]]] | None = None,
        arities: Mapping[str, int] | None = None,
        labels: Sequence[str] | None = None,
    ) -> Structure:
        """Convenience constructor from a ``{name: tuples}`` mapping.

        Arities are inferred from the tuples unless given; an empty relation
        needs an explicit arity.
        """
        rels = []
        arities = dict(arities or {})
        for name, tuples in sorted((relations or {}).items()):
            tuples = frozenset(tuple(int(v) for v in t) for t in tuples)
            arity = arities.pop(name, None)
            if arity is None:
                if not tuples:
                    raise ContractError(f"cannot infer the arity of empty relation {name}")
                arity = len(next(iter(tuples)))
            rels.append((name, arity, tuples))
        for name, arity in sorted(arities.items()):
            rels.append((name, arity, frozenset()))
        rels.sort()
        return cls(universe_size, tuple(rels), tuple(labels) if labels is not None else None)

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple((name, arity) for name, arity, _ in self.relations))

    def relation(self, name: str) -> frozenset[tuple[int, ...]]:
        for rel, _, tuples in self.relations:
            if rel == name:
                return tuples
        raise KeyError(f"relation {name} is not interpreted")

    def arity(self, name: str) -> int:
        for rel, arity, _ in self.relations:
            if rel == name:
                return arity
        raise KeyError(f"relation {name} is not interpreted")

    def label(self, element: int) -> str:
        return self.labels[element] if self.labels is not None else str(element)


@dataclass(frozen=True)
class AssignmentSpace:
    """All assignments of ``variables`` (sorted) into ``0..size-1``."""

    variables: tuple[str, ...]
    size: int

    def __post_init__(self):
        if list(self.variables) != sorted(set(self.variables)):
            raise ContractError(f"variables must be sorted and distinct: {self.variables}")
        if self.size < 1:
            raise ContractError("the universe must be nonempty")
        if self.size ** len(self.variables) > ASSIGNMENT_CAP:
            raise CapacityError(
                f"{self.size}^{len(self.variables)} assignments exceed the cap of {ASSIGNMENT_CAP}"
            )

    @classmethod
    def of(cls, variables: Iterable[str], size: int) -> AssignmentSpace:
        return cls(tuple(sorted(set(variables))), size)

    def __len__(self) -> int:
        return self.size ** len(self.variables)

    @property
    def full_mask(self) -> int:
        return (1 << len(self)) - 1

    def position(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise ContractError(f"variable {var} not in {self.variables}") from None

    def index(self, values: Sequence[int]) -> int:
        if len(values) != len(self.variables):
            raise ContractError(f"expected {len(self.variables)} values, got {len(values)}")
        idx = 0
        for v in values:
            if not 0 <= v < self.size:
                raise ContractError(f"value {v} outside universe of size {self.size}")
            idx = idx * self.size + v
        return idx

    def values(self, index: int) -> tuple[int, ...]:
        return _rows(self)[index]

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        """Value tuples of every assignment, by index."""
        return _rows(self)

    def with_variable(self, var: str) -> AssignmentSpace:
        if var in self.variables:
            return self
        return AssignmentSpace.of(self.variables + (var,), self.size)

    def assignment(self, index: int) -> Assignment:
        return Assignment(self, index)


@functools.lru_cache(maxsize=256)
def _rows(space: AssignmentSpace) -> tuple[tuple[int, ...], ...]:
    n, k = space.size, len(space.variables)
    rows = [()]
    for _ in range(k):
        rows = [row + (v,) for row in rows for v in range(n)]
    return tuple(rows)


@dataclass(frozen=True, order=False)
class Assignment:
    """One assignment of a space, identified by its index."""

    space: AssignmentSpace
    index: int

    def __post_init__(self):
        if not 0 <= self.index < len(self.space):
            raise ContractError(f"index {self.index} outside the assignment space")

    @classmethod
    def from_values(cls, space: AssignmentSpace, values: Mapping[str, int] | Sequence[int]) -> Assignment:
        if isinstance(values, Mapping):
            if set(values) != set(space.variables):
                raise ContractError(f"assignment domain {sorted(values)} != {space.variables}")
            values = [values[v] for v in space.variables]
        return cls(space, space.index(values))

    @property
    def values(self) -> tuple[int, ...]:
        return self.space.values(self.index)

    def __getitem__(self, var: str) -> int:
        return self.values[self.space.position(var)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.space.variables, self.values))

    def __lt__(self, other):
        if other is BOTTOM:
            return False
        return lex_compare(self, other) < 0

    def __gt__(self, other):
        if other is BOTTOM:
            return True
        return lex_compare(self, other) > 0

    def __str__(self) -> str:
        return "[" + ",".join(f"{v}={a}" for v, a in zip(self.space.variables, self.values)) + "]"


class _Bottom:
    """Marker below every assignment; the maximum of the empty team."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __gt__(self, other):
        return False

    def __repr__(self):
        return "BOTTOM"


BOTTOM = _Bottom()


def lex_compare(s: Assignment, t: Assignment) -> int:
    """Return -1, 0 or 1 as ``s`` is lexicographically below, equal to or above ``t``."""
    if s.space.variables != t.space.variables or s.space.size != t.space.size:
        raise ContractError("assignments over different variable orders or universes")
    a, b = s.values, t.values
    return (a > b) - (a < b)


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Team:
    """A set of assignments of one space, held as a bit vector over indices."""

    space: AssignmentSpace
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> len(self.space):
            raise ContractError("team contains indices outside its assignment space")

    @classmethod
    def from_indices(cls, space: AssignmentSpace, indices: Iterable[int]) -> Team:
        bits = 0
        for i in indices:
            if not 0 <= i < len(space):
                raise ContractError(f"index {i} outside the assignment space")
            bits |= 1 << i
        return cls(space, bits)

    @classmethod
    def from_rows(cls, space: AssignmentSpace, rows: Iterable[Sequence[int] | Mapping[str, int]]) -> Team:
        return cls.from_indices(space, (Assignment.from_values(space, r).index for r in rows))

    @classmethod
    def parse(cls, text: str, space: AssignmentSpace) -> Team:
        """Inverse of ``str(team)``: ``{[x=0,y=1],[x=1,y=1]}``."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("team must be enclosed in braces")
        body = body[1:-1].strip()
        rows = []
        while body:
            if not body.startswith("["):
                raise ParseError(f"expected '[' in team text near {body[:10]!r}")
            end = body.find("]")
            if end < 0:
                raise ParseError("unterminated assignment in team text")
            pairs = body[1:end].strip()
            row = {}
            for pair in pairs.split(",") if pairs else []:
                var, _, val = pair.partition("=")
                try:
                    row[var.strip()] = int(val)
                except ValueError:
                    raise ParseError(f"bad binding {pair!r}") from None
            rows.append(row)
            body = body[end + 1:].lstrip()
            if body.startswith(","):
                body = body[1:].lstrip()
        try:
            team = cls.from_rows(space, rows)
        except ContractError as exc:
            raise ParseError(str(exc)) from None
        if len(team) != len(rows):
            raise ParseError("duplicate assignment in team text")
        return team

    def indices(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __iter__(self) -> Iterator[Assignment]:
        return (Assignment(self.space, i) for i in iter_bits(self.bits))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, item) -> bool:
        if isinstance(item, Assignment):
            if item.space != self.space:
                return False
            item = item.index
        return bool(self.bits >> item & 1)

    def _same(self, other: Team) -> None:
        if not isinstance(other, Team) or other.space != self.space:
            raise ContractError("teams over different assignment spaces")

    def __or__(self, other: Team) -> Team:
        self._same(other)
        return Team(self.space, self.bits | other.bits)

    def __and__(self, other: Team) -> Team:
        self._same(other)
        return Team(self.space, self.bits & other.bits)

    def __sub__(self, other: Team) -> Team:
        self._same(other)
        return Team(self.space, self.bits & ~other.bits)

    def __le__(self, other: Team) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: Team) -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: Team) -> bool:
        return other <= self

    def __gt__(self, other: Team) -> bool:
        return other < self

    def sort_key(self) -> tuple[int, ...]:
        """Canonical order: lexicographic on ascending member indices."""
        return tuple(iter_bits(self.bits))

    def __str__(self) -> str:
        return "{" + ",".join(str(s) for s in self) + "}"


def full_team(structure: Structure | int, variables: Iterable[str]) -> Team:
    """The team of all assignments of ``variables``."""
    n = structure if isinstance(structure, int) else structure.universe_size
    space = AssignmentSpace.of(variables, n)
    return Team(space, space.full_mask)


def team_max(team: Team) -> Assignment | _Bottom:
    """Largest member in lexicographic order, or BOTTOM for the empty team."""
    if not team.bits:
        return BOTTOM
    return Assignment(team.space, team.bits.bit_length() - 1)


@functools.lru_cache(maxsize=1024)
def extension_table(space: AssignmentSpace, var: str) -> tuple[AssignmentSpace, tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Index map for ``s -> s(a/var)``.

    Returns the target space, ``table[i][a]`` (index of ``s_i(a/var)``) and
    ``masks[i]`` (bit vector of all extensions of ``s_i``).
    """
    target = space.with_variable(var)
    pos = target.position(var)
    fresh = var not in space.variables
    table = []
    masks = []
    for row in space.rows:
        if fresh:
            base = list(row[:pos]) + [0] + list(row[pos:])
        else:
            base = list(row)
        ext = []
        for a in range(space.size):
            base[pos] = a
            ext.append(target.index(base))
        table.append(tuple(ext))
        mask = 0
        for j in ext:
            mask |= 1 << j
        masks.append(mask)
    return target, tuple(table), tuple(masks)


def extend_all(team: Team, var: str, structure: Structure | int | None = None) -> Team:
    """``X[A/x]``: every member extended (or overwritten) at ``var`` by every element."""
    _check_universe(team, structure)
    target, _, masks = extension_table(team.space, var)
    bits = 0
    for i in iter_bits(team.bits):
        bits |= masks[i]
    return Team(target, bits)


def extend_fn(
    team: Team,
    var: str,
    choice: Mapping[Assignment | int, Iterable[int]] | Callable[[Assignment], Iterable[int]],
    structure: Structure | int | None = None,
) -> Team:
    """``X[F/x]`` for a supplementing choice ``F`` of nonempty value sets."""
    _check_universe(team, structure)
    target, table, _ = extension_table(team.space, var)
    bits = 0
    for s in team:
        if callable(choice):
            values = choice(s)
        elif s in choice:
            values = choice[s]
        else:
            values = choice.get(s.index, ())
        values = set(values)
        if not values:
            raise ContractError(f"empty value set for {s}; lax semantics needs F(s) nonempty")
        for a in values:
            if not 0 <= a < team.space.size:
                raise ContractError(f"value {a} outside the universe")
            bits |= 1 << table[s.index][a]
    return Team(target, bits)


def _check_universe(team: Team, structure) -> None:
    if structure is None:
        return
    n = structure if isinstance(structure, int) else structure.universe_size
    if n != team.space.size:
        raise ContractError("team and structure have different universes")
