"""Enumeration of satisfying teams.

Two families of engines:

* inclusion engines for FO(⊆), driven by the maximal-subteam fixpoint
  (polynomial delay for all and subset-minimal teams, a single call for the
  unique maximal team);
* flashlight engines for any fragment, driven by an :class:`OracleSuite`.

Every engine returns a :class:`SolutionStream`, a pull-based iterator that
records the work done between consecutive outputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from statistics import fmean
from typing import Callable, Iterator

from .core import AssignmentSpace, Structure, Team, iter_bits
from .errors import ContractError, UnsupportedFragment
from .formula import Formula, atoms_used, free_vars, is_numbered, number
from .maxsub import MaxSubteam
from .oracles import BruteForceOracles, OracleSuite


class Mode(enum.Enum):
    ALL = "all"
    SUBSET_MAX = "submax"
    SUBSET_MIN = "submin"
    CARD_MAX = "cardmax"
    CARD_MIN = "cardmin"


@dataclass
class DelayStats:
    """Work between outputs: entry 0 is before the first output, the last
    entry after the final one, so there are ``outputs + 1`` gaps."""

    gap_steps: list[int] = field(default_factory=list)
    gap_calls: list[int] = field(default_factory=list)

    @property
    def outputs(self) -> int:
        return max(len(self.gap_steps) - 1, 0)

    @property
    def max_gap_steps(self) -> int:
        return max(self.gap_steps, default=0)

    @property
    def mean_gap_steps(self) -> float:
        return fmean(self.gap_steps) if self.gap_steps else 0.0

    @property
    def max_gap_calls(self) -> int:
        return max(self.gap_calls, default=0)

    @property
    def mean_gap_calls(self) -> float:
        return fmean(self.gap_calls) if self.gap_calls else 0.0

    @property
    def total_steps(self) -> int:
        return sum(self.gap_steps)

    @property
    def total_calls(self) -> int:
        return sum(self.gap_calls)

    def summary(self) -> str:
        return "\n".join([
            f"outputs {self.outputs}",
            f"gaps {len(self.gap_steps)}",
            f"steps total {self.total_steps} max {self.max_gap_steps} mean {self.mean_gap_steps:.3f}",
            f"calls total {self.total_calls} max {self.max_gap_calls} mean {self.mean_gap_calls:.3f}",
        ])


class SolutionStream:
    """Iterator of teams; ``stats`` is complete once the stream is exhausted."""

    def __init__(self, source: Iterator[Team], measure: Callable[[], tuple[int, int]]):
        self._source = source
        self._measure = measure
        self._mark = (0, 0)
        self.stats = DelayStats()
        self.done = False

    def _close_gap(self) -> None:
        steps, calls = self._measure()
        self.stats.gap_steps.append(steps - self._mark[0])
        self.stats.gap_calls.append(calls - self._mark[1])
        self._mark = (steps, calls)

    def __iter__(self) -> SolutionStream:
        return self

    def __next__(self) -> Team:
        if self.done:
            raise StopIteration
        try:
            team = next(self._source)
        except StopIteration:
            self.done = True
            self._close_gap()
            raise
        self._close_gap()
        return team

    def collect(self) -> list[Team]:
        return list(self)


class _Meter:
    def __init__(self):
        self.steps = 0
        self.calls = 0


def _space_for(structure: Structure, formula: Formula) -> tuple[Formula, AssignmentSpace]:
    formula = formula if is_numbered(formula) else number(formula)
    return formula, AssignmentSpace.of(free_vars(formula), structure.universe_size)


def _require_inclusion(formula: Formula) -> None:
    atoms = atoms_used(formula)
    if not atoms <= {"inc"}:
        raise UnsupportedFragment(f"inclusion engines need FO(inc), found {sorted(atoms)}")


# -- inclusion engines ----------------------------------------------------

def _inclusion_stream(structure: Structure, formula: Formula, body) -> SolutionStream:
    _require_inclusion(formula)
    formula, space = _space_for(structure, formula)
    solver = MaxSubteam(structure)
    meter = _Meter()

    def maxsub(bits: int) -> int:
        meter.calls += 1
        return solver.compute(formula, space, bits)

    source = (Team(space, b) for b in body(space, maxsub, meter))
    return SolutionStream(source, lambda: (meter.steps + solver.steps, meter.calls))


def enum_all_inclusion(structure: Structure, formula: Formula) -> SolutionStream:
    """All nonempty satisfying teams of an FO(⊆) formula, polynomial delay."""

    def body(space, maxsub, meter):
        # explicit stack of (X, Y) calls; children pushed in reverse so the
        # ascending loop order is kept
        stack = [(space.full_mask, 0)]
        while stack:
            x, y = stack.pop()
            x = maxsub(x)
            meter.steps += 1
            if not x or y & ~x:
                continue
            yield x
            children = []
            for s in iter_bits(x & ~y):
                meter.steps += 1
                children.append((x & ~(1 << s), y | (x & ((1 << s) - 1))))
            stack.extend(reversed(children))

    return _inclusion_stream(structure, formula, body)


def enum_min_inclusion(structure: Structure, formula: Formula) -> SolutionStream:
    """Subset-minimal nonempty satisfying teams of an FO(⊆) formula."""

    def body(space, maxsub, meter):
        stack = [(space.full_mask, 0)]
        while stack:
            x, y = stack.pop()
            x = maxsub(x)
            meter.steps += 1
            if not x or y & ~x:
                continue
            if all(maxsub(x & ~(1 << s)) == 0 for s in iter_bits(x)):
                yield x
                continue
            children = []
            for s in iter_bits(x & ~y):
                meter.steps += 1
                children.append((x & ~(1 << s), y | (x & ((1 << s) - 1))))
            stack.extend(reversed(children))

    return _inclusion_stream(structure, formula, body)


def enum_max_inclusion(structure: Structure, formula: Formula, mode: Mode = Mode.SUBSET_MAX) -> SolutionStream:
    """The unique maximal satisfying team (for both SubsetMax and CardMax)."""
    if mode not in (Mode.SUBSET_MAX, Mode.CARD_MAX):
        raise ContractError(f"enum_max_inclusion handles submax/cardmax, not {mode.value}")

    def body(space, maxsub, meter):
        x = maxsub(space.full_mask)
        if x:
            yield x

    return _inclusion_stream(structure, formula, body)


# -- flashlight engines ---------------------------------------------------

def _oracles_for(structure: Structure, formula: Formula, oracles: OracleSuite | None) -> OracleSuite:
    if oracles is None:
        return BruteForceOracles(structure, formula)
    if oracles.structure != structure:
        raise ContractError("oracle suite was built for a different structure")
    return oracles


def _flashlight_stream(oracles: OracleSuite, body) -> SolutionStream:
    space = oracles.space
    meter = _Meter()
    source = (Team(space, b) for b in body(space, lambda b: Team(space, b), meter))
    start = (oracles.steps, oracles.total_calls)
    return SolutionStream(
        source,
        lambda: (meter.steps + oracles.steps - start[0], oracles.total_calls - start[1]),
    )


def _forbidden(x: int) -> tuple[int, int]:
    """(index of max(X) or -1, the assignments below max(X) missing from X)."""
    top = x.bit_length() - 1
    if top < 0:
        return top, 0
    return top, ~x & ((1 << top) - 1)


def _flashlight(oracles: OracleSuite, meter: _Meter, visit):
    """Shared DFS skeleton; ``visit(x, y)`` returns (emit, descend)."""
    m = len(oracles.space)

    def rec(x: int):
        meter.steps += 1
        top, y = _forbidden(x)
        emit, descend = visit(x, y)
        if emit:
            yield x
        if descend:
            for s in range(top + 1, m):
                meter.steps += 1
                yield from rec(x | 1 << s)

    return rec(0)


def enum_all_flashlight(structure: Structure, formula: Formula, oracles: OracleSuite | None = None) -> SolutionStream:
    """All nonempty satisfying teams with ExtTeam/VerTeam oracles."""
    oracles = _oracles_for(structure, formula, oracles)

    def body(space, team, meter):
        def visit(x, y):
            return oracles.ver_team(team(x)), oracles.ext_team(team(x), team(y))
        return _flashlight(oracles, meter, visit)

    return _flashlight_stream(oracles, body)


def enum_card(structure: Structure, formula: Formula, k: int, oracles: OracleSuite | None = None) -> SolutionStream:
    """Satisfying teams of cardinality exactly ``k``."""
    oracles = _oracles_for(structure, formula, oracles)
    if not 1 <= k <= len(oracles.space):
        raise ContractError(f"k={k} outside 1..{len(oracles.space)}")

    def body(space, team, meter):
        return _flashlight(oracles, meter, _card_visit(oracles, team, k))

    return _flashlight_stream(oracles, body)


def _card_visit(oracles: OracleSuite, team, k: int):
    def visit(x, y):
        if x.bit_count() == k and oracles.ver_team(team(x)):
            return True, False
        return False, oracles.ext_card_team(team(x), team(y), k)
    return visit


def _extreme(oracles: OracleSuite, direction: str) -> int | None:
    if direction not in ("max", "min"):
        raise ContractError(f"direction must be 'max' or 'min', not {direction!r}")
    m = len(oracles.space)
    sizes = range(m, 0, -1) if direction == "max" else range(1, m + 1)
    empty = Team(oracles.space, 0)
    for k in sizes:
        if oracles.ext_card_team(empty, empty, k):
            return k
    return None


def find_extreme_card(structure: Structure, formula: Formula, direction: str,
                      oracles: OracleSuite | None = None) -> int | None:
    """Largest or smallest size of a nonempty satisfying team, or None."""
    return _extreme(_oracles_for(structure, formula, oracles), direction)


def enum_card_extreme(structure: Structure, formula: Formula, direction: str,
                      oracles: OracleSuite | None = None) -> SolutionStream:
    """Cardinality-maximum (``"max"``) or -minimum (``"min"``) satisfying teams."""
    oracles = _oracles_for(structure, formula, oracles)
    if direction not in ("max", "min"):
        raise ContractError(f"direction must be 'max' or 'min', not {direction!r}")

    def body(space, team, meter):
        # the size search runs inside the stream so it is charged to the first gap
        k = _extreme(oracles, direction)
        if k is None:
            return
        yield from _flashlight(oracles, meter, _card_visit(oracles, team, k))

    return _flashlight_stream(oracles, body)


def enum_min_flashlight(structure: Structure, formula: Formula, oracles: OracleSuite | None = None) -> SolutionStream:
    """Subset-minimal satisfying teams.

    A satisfying team ends its branch (its superteams are never minimal) and
    is emitted only when no nonempty proper subteam satisfies the formula.
    """
    oracles = _oracles_for(structure, formula, oracles)

    def body(space, team, meter):
        def visit(x, y):
            if oracles.ver_team(team(x)):
                return not oracles.proper_subteam_sat(team(x)), False
            return False, oracles.ext_team(team(x), team(y))
        return _flashlight(oracles, meter, visit)

    return _flashlight_stream(oracles, body)


def enum_subsetmax_flashlight(structure: Structure, formula: Formula,
                              oracles: OracleSuite | None = None) -> SolutionStream:
    """Subset-maximal satisfying teams, pruned with ExtMaxTeam."""
    oracles = _oracles_for(structure, formula, oracles)

    def body(space, team, meter):
        def visit(x, y):
            emit = oracles.ver_team(team(x)) and not oracles.ext_team(team(x), team(0))
            return emit, oracles.ext_max_team(team(x), team(y))
        return _flashlight(oracles, meter, visit)

    return _flashlight_stream(oracles, body)


# -- dispatch -------------------------------------------------------------

ENGINES = ("auto", "inclusion", "flashlight", "reference")


def enumerate_teams(structure: Structure, formula: Formula, mode: Mode | str,
                    engine: str = "auto", oracles: OracleSuite | None = None) -> SolutionStream:
    """Pick the engine for ``mode``; ``auto`` uses the inclusion engines for
    pure FO(⊆) formulas and flashlight search otherwise."""
    mode = Mode(mode)
    if engine not in ENGINES:
        raise ContractError(f"unknown engine {engine!r}")
    if engine == "auto":
        engine = "inclusion" if atoms_used(formula) <= {"inc"} else "flashlight"
    if engine == "reference":
        from .reference import brute_enum

        formula, space = _space_for(structure, formula)
        teams = brute_enum(structure, formula, mode)
        return SolutionStream(iter(teams), lambda: (0, 0))
    if engine == "inclusion":
        _require_inclusion(formula)
        if mode is Mode.ALL:
            return enum_all_inclusion(structure, formula)
        if mode is Mode.SUBSET_MIN:
            return enum_min_inclusion(structure, formula)
        if mode in (Mode.SUBSET_MAX, Mode.CARD_MAX):
            return enum_max_inclusion(structure, formula, mode)
        # Cardinality-minimum is hard even for inclusion logic; use the oracle search.
        return enum_card_extreme(structure, formula, "min", oracles)
    if mode is Mode.ALL:
        return enum_all_flashlight(structure, formula, oracles)
    if mode is Mode.SUBSET_MAX:
        return enum_subsetmax_flashlight(structure, formula, oracles)
    if mode is Mode.SUBSET_MIN:
        return enum_min_flashlight(structure, formula, oracles)
    return enum_card_extreme(structure, formula, "max" if mode is Mode.CARD_MAX else "min", oracles)
