"""Decision oracles for flashlight enumeration.

Enumerators only talk to :class:`OracleSuite`, so a smarter backend (a SAT
encoding, say) can replace :class:`BruteForceOracles` without touching them.
All teams passed in must live in the suite's assignment space.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import Counter
from itertools import combinations

from .checker import Checker, EvalConfig
from .core import AssignmentSpace, Structure, Team, iter_bits
from .errors import CapacityError, ContractError
from .formula import Formula, free_vars, is_numbered, number

ORACLE_NAMES = ("ver_team", "ext_team", "ext_card_team", "ext_max_team", "proper_subteam_sat")

DEFAULT_ORACLE_CAP = 16


class OracleSuite(ABC):
    """Oracles for one fixed (structure, formula) pair.

    Public methods count each query in ``calls`` and delegate to the
    ``_``-prefixed hooks. ``steps`` is the elementary work done inside the
    oracles, reported by implementations that can measure it.
    """

    def __init__(self, structure: Structure, formula: Formula):
        self.structure = structure
        self.formula = formula if is_numbered(formula) else number(formula)
        self.space = AssignmentSpace.of(free_vars(self.formula), structure.universe_size)
        self.calls: Counter[str] = Counter()
        self.steps = 0

    @property
    def total_calls(self) -> int:
        return sum(self.calls.values())

    def _bits(self, team: Team) -> int:
        if team.space != self.space:
            raise ContractError("team is not over the oracle's assignment space")
        return team.bits

    def _disjoint(self, x: Team, y: Team) -> tuple[int, int]:
        xb, yb = self._bits(x), self._bits(y)
        if xb & yb:
            raise ContractError("X and the forbidden set Y must be disjoint")
        return xb, yb

    def ver_team(self, x: Team) -> bool:
        self.calls["ver_team"] += 1
        return self._ver_team(self._bits(x))

    def ext_team(self, x: Team, y: Team) -> bool:
        self.calls["ext_team"] += 1
        return self._ext_team(*self._disjoint(x, y))

    def ext_card_team(self, x: Team, y: Team, k: int) -> bool:
        self.calls["ext_card_team"] += 1
        if not 0 <= k <= len(self.space):
            raise ContractError(f"k={k} outside 0..{len(self.space)}")
        return self._ext_card_team(*self._disjoint(x, y), k)

    def ext_max_team(self, x: Team, y: Team) -> bool:
        self.calls["ext_max_team"] += 1
        return self._ext_max_team(*self._disjoint(x, y))

    def proper_subteam_sat(self, x: Team) -> bool:
        self.calls["proper_subteam_sat"] += 1
        bits = self._bits(x)
        if not bits:
            raise ContractError("proper_subteam_sat needs a nonempty team")
        return self._proper_subteam_sat(bits)

    @abstractmethod
    def _ver_team(self, x: int) -> bool: ...

    @abstractmethod
    def _ext_team(self, x: int, y: int) -> bool: ...

    @abstractmethod
    def _ext_card_team(self, x: int, y: int, k: int) -> bool: ...

    @abstractmethod
    def _ext_max_team(self, x: int, y: int) -> bool: ...

    @abstractmethod
    def _proper_subteam_sat(self, x: int) -> bool: ...


def ascending_submasks(bits: int):
    """Nonempty submasks of ``bits`` in increasing integer order."""
    sub = 0
    while True:
        sub = (sub - bits) & bits
        if not sub:
            return
        yield sub


class BruteForceOracles(OracleSuite):
    """Exhaustive oracles: candidate teams are scanned in increasing bitmask
    order and checked with the exact evaluator (answers are cached)."""

    def __init__(self, structure: Structure, formula: Formula, config: EvalConfig | None = None,
                 cap: int = DEFAULT_ORACLE_CAP):
        super().__init__(structure, formula)
        if len(self.space) > cap:
            raise CapacityError(f"assignment space of {len(self.space)} exceeds the oracle cap of {cap}")
        self.checker = Checker(structure, self.formula, config)
        self._cache: dict[int, bool] = {}
        self._maximal: list[int] | None = None

    def _sat(self, bits: int) -> bool:
        self.steps += 1
        hit = self._cache.get(bits)
        if hit is None:
            before = self.checker.total_steps
            hit = self._cache[bits] = self.checker.satisfies(Team(self.space, bits))
            self.steps += self.checker.total_steps - before
        return hit

    def _ver_team(self, x: int) -> bool:
        return bool(x) and self._sat(x)

    def _ext_team(self, x: int, y: int) -> bool:
        free = self.space.full_mask & ~x & ~y
        return any(self._sat(x | extra) for extra in ascending_submasks(free))

    def _ext_card_team(self, x: int, y: int, k: int) -> bool:
        need = k - x.bit_count()
        if need < 1:
            return False
        free = list(iter_bits(self.space.full_mask & ~x & ~y))
        for combo in combinations(free, need):
            bits = x
            for i in combo:
                bits |= 1 << i
            if self._sat(bits):
                return True
        return False

    def maximal_teams(self) -> list[int]:
        """Bitmasks of all subset-maximal satisfying nonempty teams."""
        if self._maximal is None:
            m = len(self.space)
            size = 1 << m
            sat = [False] + [self._sat(b) for b in range(1, size)]
            # up[b]: some satisfying team contains b
            up = sat[:]
            for j in range(m):
                bit = 1 << j
                self.steps += size
                for b in range(size):
                    if not b & bit and up[b | bit]:
                        up[b] = True
            self._maximal = [
                b for b in range(1, size)
                if sat[b] and not any(up[b | 1 << j] for j in range(m) if not b >> j & 1)
            ]
        return self._maximal

    def _ext_max_team(self, x: int, y: int) -> bool:
        for b in self.maximal_teams():
            self.steps += 1
            if b != x and b & x == x and not b & y:
                return True
        return False

    def _proper_subteam_sat(self, x: int) -> bool:
        return any(self._sat(sub) for sub in ascending_submasks(x) if sub != x)
