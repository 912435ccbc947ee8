"""Ground-truth solvers used to validate the enumeration engines.

Everything here walks subteams by plain index counting and compares
candidates pairwise; no recursion, no memo table and no fixpoint solver, so a
bug in the engines is unlikely to be mirrored here.
"""

from __future__ import annotations

from functools import lru_cache

from .checker import Checker, EvalConfig
from .core import AssignmentSpace, Structure, Team
from .errors import CapacityError
from .formula import Formula, free_vars, is_numbered, number
from .oracles import OracleSuite

DEFAULT_REFERENCE_CAP = 16

REFERENCE_CONFIG = EvalConfig(memo_enabled=False, maxsub_enabled=False)


@lru_cache(maxsize=16)
def _satisfying(structure: Structure, formula: Formula, cap: int) -> tuple[AssignmentSpace, tuple[int, ...]]:
    formula = formula if is_numbered(formula) else number(formula)
    space = AssignmentSpace.of(free_vars(formula), structure.universe_size)
    if len(space) > cap:
        raise CapacityError(f"assignment space of {len(space)} exceeds the reference cap of {cap}")
    checker = Checker(structure, formula, REFERENCE_CONFIG)
    sat = []
    for bits in range(1, 1 << len(space)):
        if checker.satisfies(Team(space, bits)):
            sat.append(bits)
    return space, tuple(sat)


def brute_enum(structure: Structure, formula: Formula, mode, cap: int = DEFAULT_REFERENCE_CAP) -> list[Team]:
    """Exact solution set for ``mode``, as teams in increasing bitmask order."""
    from .enumeration import Mode

    mode = Mode(mode)
    space, sat = _satisfying(structure, formula, cap)
    if mode is Mode.ALL:
        chosen = sat
    elif mode is Mode.SUBSET_MAX:
        chosen = [a for a in sat if not any(b != a and a & b == a for b in sat)]
    elif mode is Mode.SUBSET_MIN:
        chosen = [a for a in sat if not any(b != a and a & b == b for b in sat)]
    else:
        sizes = [a.bit_count() for a in sat]
        if not sizes:
            chosen = []
        else:
            best = max(sizes) if mode is Mode.CARD_MAX else min(sizes)
            chosen = [a for a, size in zip(sat, sizes) if size == best]
    return [Team(space, bits) for bits in chosen]


class NaiveOracles(OracleSuite):
    """Oracles answered by scanning every team of the space against the
    definitions, with satisfaction decided once per team up front."""

    def __init__(self, structure: Structure, formula: Formula, cap: int = DEFAULT_REFERENCE_CAP):
        super().__init__(structure, formula)
        space, sat = _satisfying(structure, self.formula, cap)
        self._sat = sat

    def _ver_team(self, x: int) -> bool:
        return x in set(self._sat)

    def _ext_team(self, x: int, y: int) -> bool:
        return any(b != x and b & x == x and not b & y for b in self._sat)

    def _ext_card_team(self, x: int, y: int, k: int) -> bool:
        return any(b != x and b & x == x and not b & y and b.bit_count() == k for b in self._sat)

    def _ext_max_team(self, x: int, y: int) -> bool:
        for b in self._sat:
            if b != x and b & x == x and not b & y:
                if not any(c != b and c & b == b for c in self._sat):
                    return True
        return False

    def _proper_subteam_sat(self, x: int) -> bool:
        return any(b != x and b & x == b for b in self._sat)
