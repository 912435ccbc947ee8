"""Seeded random instances (structure, formula) for cross-checking engines."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .checker import Checker, EvalConfig
from .core import AssignmentSpace, Structure, Team
from .errors import ResourceExceeded
from .formula import (
    And, Dep, Eq, Exists, Forall, Formula, Inc, Ind, Neq, NegRel, Or, Rel,
    atoms_used, depth, format_formula, free_vars, number, preorder,
)

FRAGMENTS = ("inc", "dep", "ind")
FREE = ("x", "y")


@dataclass(frozen=True)
class Instance:
    ident: int
    fragment: str
    structure: Structure
    formula: Formula

    @property
    def text(self) -> str:
        return format_formula(self.formula)

    def __str__(self) -> str:
        rels = ", ".join(
            f"{name}/{arity}={sorted(tuples)}" for name, arity, tuples in self.structure.relations
        )
        return f"#{self.ident} [{self.fragment}] n={self.structure.universe_size} {rels} :: {self.text}"


def random_structure(rng: random.Random, n: int, max_relations: int = 2, max_arity: int = 2) -> Structure:
    rels = {}
    arities = {}
    for r in range(rng.randint(1, max_relations)):
        name = "RS"[r]
        arity = rng.randint(1, max_arity)
        density = rng.choice((0.3, 0.5, 0.7))
        tuples = []
        for code in range(n**arity):
            tup = tuple((code // n**p) % n for p in reversed(range(arity)))
            if rng.random() < density:
                tuples.append(tup)
        rels[name] = tuples
        arities[name] = arity
    return Structure.build(n, rels, arities)


class FormulaGenerator:
    """Random formulas over ``structure``'s vocabulary with atoms from one
    fragment; free variables stay within x, y."""

    def __init__(self, rng: random.Random, structure: Structure, fragment: str, max_depth: int = 4):
        self.rng = rng
        self.structure = structure
        self.fragment = fragment
        self.max_depth = max_depth

    def literal(self, scope: list[str]) -> Formula:
        rng = self.rng
        kind = rng.choice(("eq", "neq", "rel", "negrel", "rel"))
        if kind in ("eq", "neq"):
            a, b = rng.choice(scope), rng.choice(scope)
            return Eq(a, b) if kind == "eq" else Neq(a, b)
        name, arity, _ = rng.choice(self.structure.relations)
        args = tuple(rng.choice(scope) for _ in range(arity))
        return Rel(name, args) if kind == "rel" else NegRel(name, args)

    def atom(self, scope: list[str]) -> Formula:
        rng = self.rng

        def tup(k):
            return tuple(rng.choice(scope) for _ in range(k))

        if self.fragment == "dep":
            return Dep(tup(rng.choice((1, 1, 2))), tup(1))
        if self.fragment == "inc":
            k = rng.choice((1, 1, 2))
            return Inc(tup(k), tup(k))
        return Ind(tup(rng.choice((0, 0, 1))), tup(1), tup(1))

    def formula(self, d: int, scope: list[str], flat: bool = False) -> Formula:
        rng = self.rng
        if d <= 1 or rng.random() < 0.25:
            if not flat and rng.random() < 0.5:
                return self.atom(scope)
            return self.literal(scope)
        kind = rng.choice(("and", "or", "or", "exists", "forall"))
        if kind in ("and", "or"):
            cls = And if kind == "and" else Or
            return cls(self.formula(d - 1, scope, flat), self.formula(d - 1, scope, flat))
        var = rng.choice(("z", "z", "x", "y"))
        inner = scope if var in scope else scope + [var]
        body = self.formula(d - 1, inner, flat)
        return Exists(var, body) if kind == "exists" else Forall(var, body)

    def draw(self) -> Formula:
        """A formula that really uses an atom of the fragment."""
        while True:
            phi = self.formula(self.max_depth, list(FREE))
            if self.fragment in atoms_used(phi) and depth(phi) <= self.max_depth:
                return number(phi)


PROBE_STEPS = 100_000


def feasible(structure: Structure, formula: Formula, budget: int = PROBE_STEPS) -> bool:
    """Cheap test that exhaustive reference evaluation will finish: the
    full team and the teams one short of it must each be decided by the
    memo-free evaluator within ``budget`` steps."""
    from .reference import REFERENCE_CONFIG

    space = AssignmentSpace.of(free_vars(formula), structure.universe_size)
    config = EvalConfig(budget, REFERENCE_CONFIG.memo_enabled, REFERENCE_CONFIG.fast_paths_enabled,
                        REFERENCE_CONFIG.maxsub_enabled)
    checker = Checker(structure, formula, config)
    full = space.full_mask
    try:
        for bits in [full] + [full & ~(1 << i) for i in range(len(space))]:
            checker.satisfies(Team(space, bits))
    except ResourceExceeded:
        return False
    return True


def build_corpus(count: int = 240, seed: int = 2024, sizes=(2, 3), max_depth: int = 4) -> list[Instance]:
    """``count`` instances cycling through fragments and universe sizes.

    Formulas whose exhaustive reference check would be too slow (see
    :func:`feasible`) are redrawn.
    """
    rng = random.Random(seed)
    out = []
    for i in range(count):
        fragment = FRAGMENTS[i % len(FRAGMENTS)]
        n = sizes[(i // len(FRAGMENTS)) % len(sizes)]
        while True:
            structure = random_structure(rng, n)
            phi = FormulaGenerator(rng, structure, fragment, max_depth).draw()
            if feasible(structure, phi):
                break
        out.append(Instance(i, fragment, structure, phi))
    return out


def has_atom_under_quantifier(phi: Formula) -> bool:
    return any(isinstance(node, (Exists, Forall)) and atoms_used(node.body) for node in preorder(phi))
