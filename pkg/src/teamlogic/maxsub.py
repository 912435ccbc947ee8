"""Maximal satisfying subteams for inclusion-logic formulas.

Inclusion logic is closed under unions, so every team X has a unique largest
subteam satisfying a formula. :class:`MaxSubteam` computes it by a greatest
fixpoint recursion over the formula; :func:`max_subteam_brute` is the
definitional reference used to validate it.
"""

from __future__ import annotations

from .core import AssignmentSpace, Structure, Team, extension_table, iter_bits
from .errors import CapacityError, ContractError, UnsupportedFragment
from .formula import (
    And, Exists, Forall, Formula, Inc, Or, atoms_used, free_vars, is_numbered, number,
)
from ._flat import FlatTables


class MaxSubteam:
    """Fixpoint solver for ``M(phi, X)``; counts elementary steps in ``steps``."""

    def __init__(self, structure: Structure, tables: FlatTables | None = None):
        self.structure = structure
        self.tables = tables or FlatTables(structure)
        self.steps = 0
        self._atoms: dict[int, frozenset[str]] = {}

    def _atoms_of(self, node: Formula) -> frozenset[str]:
        atoms = self._atoms.get(node.nid)
        if atoms is None:
            atoms = self._atoms[node.nid] = atoms_used(node)
        return atoms

    def compute(self, node: Formula, space: AssignmentSpace, bits: int) -> int:
        if not bits:
            return 0
        self.steps += 1
        atoms = self._atoms_of(node)
        if not atoms:
            self.steps += bits.bit_count()
            return bits & self.tables.mask(node, space)
        if not atoms <= {"inc"}:
            raise UnsupportedFragment(f"maximal subteams need inclusion logic, found {sorted(atoms)}")
        if isinstance(node, Inc):
            return self._inclusion(node, space, bits)
        if isinstance(node, Or):
            return self.compute(node.left, space, bits) | self.compute(node.right, space, bits)
        if isinstance(node, And):
            while True:
                nxt = self.compute(node.left, space, bits) & self.compute(node.right, space, bits)
                if nxt == bits:
                    return bits
                bits = nxt
        if isinstance(node, Exists):
            target, _, masks = extension_table(space, node.var)
            ext = 0
            for i in iter_bits(bits):
                ext |= masks[i]
            kept = self.compute(node.body, target, ext)
            out = 0
            for i in iter_bits(bits):
                self.steps += 1
                if masks[i] & kept:
                    out |= 1 << i
            return out
        if isinstance(node, Forall):
            target, _, masks = extension_table(space, node.var)
            while True:
                ext = 0
                for i in iter_bits(bits):
                    ext |= masks[i]
                kept = self.compute(node.body, target, ext)
                nxt = 0
                for i in iter_bits(bits):
                    self.steps += 1
                    if masks[i] & ~kept == 0:
                        nxt |= 1 << i
                if nxt == bits:
                    return bits
                bits = nxt
        raise TypeError(f"unexpected node {type(node).__name__}")

    def _inclusion(self, node: Inc, space: AssignmentSpace, bits: int) -> int:
        rows = space.rows
        xpos = [space.position(v) for v in node.xs]
        ypos = [space.position(v) for v in node.ys]
        while True:
            members = list(iter_bits(bits))
            self.steps += 2 * len(members)
            targets = {tuple(rows[i][p] for p in ypos) for i in members}
            nxt = bits
            for i in members:
                if tuple(rows[i][p] for p in xpos) not in targets:
                    nxt &= ~(1 << i)
            if nxt == bits:
                return bits
            bits = nxt


def _prepare(structure: Structure, team: Team, formula: Formula) -> Formula:
    if team.space.size != structure.universe_size:
        raise ContractError("team and structure have different universes")
    missing = set(free_vars(formula)) - set(team.space.variables)
    if missing:
        raise ContractError(f"team does not assign free variables {sorted(missing)}")
    return formula if is_numbered(formula) else number(formula)


def max_subteam(structure: Structure, team: Team, formula: Formula) -> Team:
    """Largest subteam of ``team`` satisfying an inclusion-logic formula."""
    atoms = atoms_used(formula)
    if not atoms <= {"inc"}:
        raise UnsupportedFragment(f"maximal subteams need inclusion logic, found {sorted(atoms)}")
    formula = _prepare(structure, team, formula)
    solver = MaxSubteam(structure)
    return Team(team.space, solver.compute(formula, team.space, team.bits))


BRUTE_MEMBER_CAP = 20


def max_subteam_brute(structure: Structure, team: Team, formula: Formula, cap: int = BRUTE_MEMBER_CAP) -> Team:
    """Reference: the largest satisfying subteam found by exhaustive search.

    Subteams are scanned by descending size; by union closure the first hit
    is the union of all satisfying subteams. Satisfaction is decided by the
    checker with the fixpoint delegation switched off.
    """
    from itertools import combinations

    from .checker import Checker, EvalConfig

    atoms = atoms_used(formula)
    if not atoms <= {"inc"}:
        raise UnsupportedFragment("brute-force maximal subteams need a union-closed (inclusion) formula")
    if len(team) > cap:
        raise CapacityError(f"team of {len(team)} members exceeds the brute-force cap of {cap}")
    formula = _prepare(structure, team, formula)
    checker = Checker(structure, formula, EvalConfig(memo_enabled=False, maxsub_enabled=False))
    members = team.indices()
    for size in range(len(members), 0, -1):
        for combo in combinations(members, size):
            bits = 0
            for i in combo:
                bits |= 1 << i
            if checker.satisfies(Team(team.space, bits)):
                return Team(team.space, bits)
    return Team(team.space, 0)
