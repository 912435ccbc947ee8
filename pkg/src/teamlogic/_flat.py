"""Per-assignment (Tarski) evaluation of atom-free formulas.

On singleton teams lax team semantics coincides with classical satisfaction,
and atom-free formulas are flat, so a team satisfies such a formula exactly
when it is contained in the mask of individually satisfying assignments.
"""

from __future__ import annotations

from .core import AssignmentSpace, Structure
from .formula import And, Eq, Exists, Forall, Formula, Neq, NegRel, Or, Rel


def classical(structure: Structure, node: Formula, env: dict[str, int]) -> bool:
    if isinstance(node, Eq):
        return env[node.left] == env[node.right]
    if isinstance(node, Neq):
        return env[node.left] != env[node.right]
    if isinstance(node, Rel):
        return tuple(env[v] for v in node.args) in structure.relation(node.name)
    if isinstance(node, NegRel):
        return tuple(env[v] for v in node.args) not in structure.relation(node.name)
    if isinstance(node, And):
        return classical(structure, node.left, env) and classical(structure, node.right, env)
    if isinstance(node, Or):
        return classical(structure, node.left, env) or classical(structure, node.right, env)
    if isinstance(node, (Exists, Forall)):
        quant = any if isinstance(node, Exists) else all
        return quant(
            classical(structure, node.body, {**env, node.var: a})
            for a in range(structure.universe_size)
        )
    raise TypeError(f"{type(node).__name__} is not flat")


class FlatTables:
    """Cache of satisfying-assignment masks, keyed by (node id, space).

    One instance serves one numbered formula over one structure.
    """

    def __init__(self, structure: Structure):
        self.structure = structure
        self._masks: dict[tuple[int, AssignmentSpace], int] = {}

    def mask(self, node: Formula, space: AssignmentSpace) -> int:
        key = (node.nid, space)
        mask = self._masks.get(key)
        if mask is None:
            mask = 0
            names = space.variables
            for i, row in enumerate(space.rows):
                if classical(self.structure, node, dict(zip(names, row))):
                    mask |= 1 << i
            self._masks[key] = mask
        return mask
