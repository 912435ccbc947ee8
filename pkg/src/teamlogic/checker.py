"""Exact evaluation of lax team semantics.

With fast paths off, every connective is evaluated straight from its
definition: split disjunction tries every cover ``Y ∪ Z = X`` and the lax
existential tries every choice of nonempty value sets. The fast paths use the
closure properties of the fragment a subformula lives in:

* atom-free subformulas are flat (a mask test);
* inclusion-logic subformulas are union closed and are decided through
  their maximal subteam;
* dependence-logic subformulas are downward closed, so splits can be taken
  disjoint, existential choices single valued, and partial candidates pruned.

Everything else falls back to exhaustive search with memoisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import AssignmentSpace, Structure, Team, extension_table, iter_bits
from .errors import ContractError, ResourceExceeded
from .formula import (
    And, Dep, Eq, Exists, Forall, Formula, Inc, Ind, Neq, NegRel, Or, Rel,
    atoms_used, free_vars, is_numbered, number, preorder,
)
from .maxsub import MaxSubteam
from ._flat import FlatTables

FLAT, UNION, DOWN, GENERAL = "flat", "union", "down", "general"


@dataclass(frozen=True)
class EvalConfig:
    step_limit: int = 10**8
    memo_enabled: bool = True
    fast_paths_enabled: bool = True
    # Decide inclusion-logic subformulas through the fixpoint solver.
    # Only consulted when fast paths are on.
    maxsub_enabled: bool = True

    def __post_init__(self):
        if self.step_limit <= 0:
            raise ContractError("step_limit must be positive")


def closure_kind(node: Formula) -> str:
    atoms = atoms_used(node)
    if not atoms:
        return FLAT
    if atoms <= {"inc"}:
        return UNION
    if atoms <= {"dep"}:
        return DOWN
    return GENERAL


class Checker:
    """Satisfaction of one formula over one structure, for many teams.

    The memo table lives as long as the checker and is keyed by
    (subformula id, assignment space, team bits); evaluation is pure, so
    reuse across calls cannot change answers.
    """

    def __init__(self, structure: Structure, formula: Formula, config: EvalConfig | None = None):
        self.structure = structure
        self.formula = formula if is_numbered(formula) else number(formula)
        self.config = config or EvalConfig()
        self.free = free_vars(self.formula)
        self.kinds = {n.nid: closure_kind(n) for n in preorder(self.formula)}
        self.tables = FlatTables(structure)
        self.maxsub = MaxSubteam(structure, self.tables)
        self.total_steps = 0
        self._memo: dict[tuple[int, AssignmentSpace, int], bool] = {}
        self._steps = 0

    def check_team(self, team: Team) -> None:
        if team.space.size != self.structure.universe_size:
            raise ContractError("team and structure have different universes")
        missing = set(self.free) - set(team.space.variables)
        if missing:
            raise ContractError(f"team does not assign free variables {sorted(missing)}")

    def satisfies(self, team: Team) -> bool:
        """``A ⊨_X phi``; the empty team satisfies everything."""
        self.check_team(team)
        self._steps = 0
        try:
            return self._sat(self.formula, team.space, team.bits)
        finally:
            self.total_steps += self._steps

    def ver_team(self, team: Team) -> bool:
        return bool(team.bits) and self.satisfies(team)

    # -- bookkeeping -------------------------------------------------------

    def _tick(self, amount: int = 1) -> None:
        self._steps += amount
        if self._steps > self.config.step_limit:
            raise ResourceExceeded(f"evaluation exceeded {self.config.step_limit} steps")

    def _sat(self, node: Formula, space: AssignmentSpace, bits: int) -> bool:
        if not bits:
            return True
        self._tick()
        if not self.config.memo_enabled:
            return self._eval(node, space, bits)
        key = (node.nid, space, bits)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._eval(node, space, bits)
        return hit

    def _max(self, node: Formula, space: AssignmentSpace, bits: int) -> int:
        if self.kinds[node.nid] == FLAT:
            self._tick()
            return bits & self.tables.mask(node, space)
        before = self.maxsub.steps
        out = self.maxsub.compute(node, space, bits)
        self._tick(self.maxsub.steps - before)
        return out

    def _has_max(self, node: Formula) -> bool:
        kind = self.kinds[node.nid]
        return kind == FLAT or (kind == UNION and self.config.maxsub_enabled)

    def _down(self, node: Formula) -> bool:
        return self.kinds[node.nid] in (FLAT, DOWN)

    # -- evaluation --------------------------------------------------------

    def _eval(self, node: Formula, space: AssignmentSpace, bits: int) -> bool:
        fast = self.config.fast_paths_enabled
        if fast and self._has_max(node):
            if self.kinds[node.nid] == FLAT:
                return bits & ~self.tables.mask(node, space) == 0
            return self._max(node, space, bits) == bits
        if isinstance(node, (Eq, Neq, Rel, NegRel)):
            return self._literal(node, space, bits)
        if isinstance(node, (Dep, Inc, Ind)):
            self._tick(bits.bit_count())
            return atom_holds(node, space, bits, indexed=fast)
        if isinstance(node, And):
            return self._sat(node.left, space, bits) and self._sat(node.right, space, bits)
        if isinstance(node, Or):
            return self._or_fast(node, space, bits) if fast else self._or_naive(node, space, bits)
        if isinstance(node, Exists):
            if fast and self._down(node.body):
                return self._exists_single(node, space, bits)
            return self._exists_lax(node, space, bits, dedupe=fast)
        if isinstance(node, Forall):
            target, _, masks = extension_table(space, node.var)
            ext = 0
            for i in iter_bits(bits):
                ext |= masks[i]
            return self._sat(node.body, target, ext)
        raise TypeError(f"unexpected node {type(node).__name__}")

    def _literal(self, node: Formula, space: AssignmentSpace, bits: int) -> bool:
        rows = space.rows
        if isinstance(node, (Eq, Neq)):
            p, q = space.position(node.left), space.position(node.right)
            want = isinstance(node, Eq)
            for i in iter_bits(bits):
                self._tick()
                if (rows[i][p] == rows[i][q]) != want:
                    return False
            return True
        rel = self.structure.relation(node.name)
        pos = [space.position(v) for v in node.args]
        want = isinstance(node, Rel)
        for i in iter_bits(bits):
            self._tick()
            if (tuple(rows[i][p] for p in pos) in rel) != want:
                return False
        return True

    # Split disjunction ---------------------------------------------------

    def _or_naive(self, node: Or, space: AssignmentSpace, bits: int) -> bool:
        for left in _submasks(bits):
            if not self._sat(node.left, space, left):
                continue
            rest = bits & ~left
            for extra in _submasks(left):
                self._tick()
                if self._sat(node.right, space, rest | extra):
                    return True
        return False

    def _or_fast(self, node: Or, space: AssignmentSpace, bits: int) -> bool:
        left, right = node.left, node.right
        # A union-closed side may take its maximal subteam; the other side
        # then has to cover whatever is left.
        if self._has_max(right):
            return self._cover(left, space, bits, bits & ~self._max(right, space, bits))
        if self._has_max(left):
            return self._cover(right, space, bits, bits & ~self._max(left, space, bits))
        if self._down(left) and self._down(right):
            return self._partition(left, right, space, bits)
        if self._down(left):
            return self._disjoint_split(left, right, space, bits)
        if self._down(right):
            return self._disjoint_split(right, left, space, bits)
        return self._split_families(left, right, space, bits)

    def _cover(self, node: Formula, space: AssignmentSpace, bits: int, need: int) -> bool:
        """Some Y with need ⊆ Y ⊆ bits satisfies node."""
        if self._down(node):
            return self._sat(node, space, need)
        if self._has_max(node):
            return need & ~self._max(node, space, bits) == 0
        for extra in _submasks(bits & ~need):
            self._tick()
            if self._sat(node, space, need | extra):
                return True
        return False

    def _partition(self, left: Formula, right: Formula, space: AssignmentSpace, bits: int) -> bool:
        # Both sides downward closed: disjoint parts suffice, and a failing
        # partial part can never recover.
        members = list(iter_bits(bits))
        stack = [(0, 0, 0)]
        while stack:
            i, lb, rb = stack.pop()
            if i == len(members):
                return True
            b = 1 << members[i]
            for nl, nr in ((lb, rb | b), (lb | b, rb)):
                self._tick()
                if self._sat(left, space, nl) and self._sat(right, space, nr):
                    stack.append((i + 1, nl, nr))
        return False

    def _disjoint_split(self, down: Formula, other: Formula, space: AssignmentSpace, bits: int) -> bool:
        # The downward-closed side can give up every member the other covers.
        for part in _submasks(bits):
            self._tick()
            if self._sat(other, space, part) and self._sat(down, space, bits & ~part):
                return True
        return False

    def _split_families(self, left: Formula, right: Formula, space: AssignmentSpace, bits: int) -> bool:
        members = list(iter_bits(bits))
        t = len(members)
        size = 1 << t
        # charge the table up front so the step limit fires before allocation
        self._tick(size)
        expand = [0] * size
        for c in range(1, size):
            low = c & -c
            expand[c] = expand[c ^ low] | (1 << members[low.bit_length() - 1])
        # up[c]: some Z ⊇ expand[c] inside bits satisfies the right disjunct.
        up = [self._sat(right, space, expand[c]) for c in range(size)]
        for j in range(t):
            b = 1 << j
            self._tick(size)
            for c in range(size):
                if not c & b and up[c | b]:
                    up[c] = True
        full = size - 1
        for c in range(size - 1, -1, -1):
            if up[full ^ c] and self._sat(left, space, expand[c]):
                return True
        return False

    # Lax existential -----------------------------------------------------

    def _exists_single(self, node: Exists, space: AssignmentSpace, bits: int) -> bool:
        target, table, _ = extension_table(space, node.var)
        members = list(iter_bits(bits))
        stack = [(0, 0)]
        seen = set()
        while stack:
            i, z = stack.pop()
            if i == len(members):
                return True
            row = table[members[i]]
            for a in range(len(row) - 1, -1, -1):
                nz = z | 1 << row[a]
                self._tick()
                if (i + 1, nz) in seen:
                    continue
                seen.add((i + 1, nz))
                if self._sat(node.body, target, nz):
                    stack.append((i + 1, nz))
        return False

    def _exists_lax(self, node: Exists, space: AssignmentSpace, bits: int, dedupe: bool) -> bool:
        target, table, _ = extension_table(space, node.var)
        n = space.size
        choices = []
        for i in iter_bits(bits):
            row = table[i]
            opts = []
            for subset in range(1, 1 << n):
                mask = 0
                for a in range(n):
                    if subset >> a & 1:
                        mask |= 1 << row[a]
                opts.append(mask)
            if dedupe:
                opts.sort(key=lambda m: -m.bit_count())
            choices.append(opts)
        seen = set()
        for combo in product(*choices):
            z = 0
            for m in combo:
                z |= m
            self._tick()
            if dedupe:
                if z in seen:
                    continue
                seen.add(z)
            if self._sat(node.body, target, z):
                return True
        return False


def _submasks(bits: int):
    """All submasks of ``bits``, from ``bits`` down to 0."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


def _project(rows, positions):
    return [tuple(r[p] for p in positions) for r in rows]


def atom_holds(atom: Formula, space: AssignmentSpace, bits: int, indexed: bool = True) -> bool:
    """Evaluate a dependency atom on the team ``bits`` of ``space``.

    ``indexed=False`` follows the quantifier structure of the definitions
    literally (quadratic/cubic); the default uses hash indexes.
    """
    rows = [space.rows[i] for i in iter_bits(bits)]
    if isinstance(atom, Dep):
        xs = _project(rows, [space.position(v) for v in atom.xs])
        ys = _project(rows, [space.position(v) for v in atom.ys])
        if not indexed:
            return all(ys[i] == ys[j] for i in range(len(rows)) for j in range(len(rows)) if xs[i] == xs[j])
        seen: dict = {}
        for x, y in zip(xs, ys):
            if seen.setdefault(x, y) != y:
                return False
        return True
    if isinstance(atom, Inc):
        xs = _project(rows, [space.position(v) for v in atom.xs])
        ys = _project(rows, [space.position(v) for v in atom.ys])
        if not indexed:
            return all(any(xs[i] == ys[j] for j in range(len(rows))) for i in range(len(rows)))
        targets = set(ys)
        return all(x in targets for x in xs)
    if isinstance(atom, Ind):
        zs = _project(rows, [space.position(v) for v in atom.zs])
        xs = _project(rows, [space.position(v) for v in atom.xs])
        ys = _project(rows, [space.position(v) for v in atom.ys])
        m = len(rows)
        if not indexed:
            for s in range(m):
                for t in range(m):
                    if zs[s] != zs[t]:
                        continue
                    if not any(xs[u] == xs[s] and ys[u] == ys[t] and zs[u] == zs[s] for u in range(m)):
                        return False
            return True
        groups: dict = {}
        for z, x, y in zip(zs, xs, ys):
            xset, yset, pairs = groups.setdefault(z, (set(), set(), set()))
            xset.add(x)
            yset.add(y)
            pairs.add((x, y))
        return all(len(p) == len(a) * len(b) for a, b, p in groups.values())
    raise TypeError(f"{type(atom).__name__} is not a dependency atom")


def satisfies(structure: Structure, team: Team, formula: Formula, config: EvalConfig | None = None) -> bool:
    """``A ⊨_X phi`` under lax semantics."""
    return Checker(structure, formula, config).satisfies(team)


def ver_team(structure: Structure, team: Team, formula: Formula, config: EvalConfig | None = None) -> bool:
    """``A ⊨_X phi`` and ``X`` nonempty."""
    return Checker(structure, formula, config).ver_team(team)


def eval_atom(structure: Structure, team: Team, atom: Formula, indexed: bool = True) -> bool:
    if not isinstance(atom, (Dep, Inc, Ind)):
        raise ContractError(f"{type(atom).__name__} is not a dependency atom")
    if team.space.size != structure.universe_size:
        raise ContractError("team and structure have different universes")
    for v in atom.zs + atom.xs + atom.ys if isinstance(atom, Ind) else atom.xs + atom.ys:
        if v not in team.space.variables:
            raise ContractError(f"team does not assign {v}")
    return atom_holds(atom, team.space, team.bits, indexed=indexed)
