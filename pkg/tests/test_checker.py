import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from naive_semantics import holds
from teamlogic import (
    AssignmentSpace, Checker, ContractError, EvalConfig, ResourceExceeded, Structure, Team,
    eval_atom, full_team, parse, satisfies, ver_team,
)
from teamlogic.corpus import FormulaGenerator, feasible, random_structure
from teamlogic.maxsub import max_subteam

BUDGET = 200_000

CONFIGS = [
    EvalConfig(),
    EvalConfig(memo_enabled=False),
    EvalConfig(maxsub_enabled=False),
    EvalConfig(fast_paths_enabled=False),
    EvalConfig(fast_paths_enabled=False, memo_enabled=False),
]


def test_split_example(example_structure, example_team):
    phi = parse("(R(x,y) | !R(x,y))")
    for cfg in CONFIGS:
        assert satisfies(example_structure, example_team, phi, cfg)
    assert ver_team(example_structure, example_team, phi)


def test_empty_team_satisfies_everything(example_structure, xy2):
    empty = Team(xy2, 0)
    for text in ["x!=x", "inc(x;y)", "(dep(x;y) & !R(x,y))", "forall x. x!=y"]:
        assert satisfies(example_structure, empty, parse(text))
        assert not ver_team(example_structure, empty, parse(text))


def test_dependence_violation(plain2, xy2):
    team = Team.from_rows(xy2, [(0, 0), (0, 1)])
    assert not satisfies(plain2, team, parse("dep(x;y)"))


def test_inclusion_singleton(plain2, xy2):
    # witness t = s: s(x) = 1 = t(y)
    assert ver_team(plain2, Team.from_rows(xy2, [(1, 1)]), parse("inc(x;y)"))


def test_eval_atom_examples(plain2, xy2, example_team):
    full = full_team(plain2, ["x", "y"])
    assert eval_atom(plain2, full, parse("ind(;x;y)"))
    assert not eval_atom(plain2, example_team, parse("inc(x;y)"))
    for i in range(4):
        assert eval_atom(plain2, Team.from_indices(xy2, [i]), parse("dep(x;y)"))
    with pytest.raises(ContractError):
        eval_atom(plain2, full, parse("x=y"))


@pytest.mark.parametrize("text", ["dep(x;y)", "inc(x;y)", "ind(;x;y)", "ind(x;y;x)", "dep(x y;x)", "inc(x y;y x)"])
def test_atom_indexed_matches_pairwise(plain2, xy2, text):
    atom = parse(text)
    for bits in range(1 << 4):
        team = Team(xy2, bits)
        assert eval_atom(plain2, team, atom, indexed=True) == eval_atom(plain2, team, atom, indexed=False)


def test_contract_errors(example_structure):
    x_only = AssignmentSpace.of(["x"], 2)
    with pytest.raises(ContractError):
        satisfies(example_structure, full_team(2, ["x"]), parse("R(x,y)"))
    with pytest.raises(ContractError):
        satisfies(example_structure, Team(AssignmentSpace.of(["x", "y"], 3), 1), parse("R(x,y)"))
    with pytest.raises(ContractError):
        EvalConfig(step_limit=0)
    assert x_only.size == 2


def test_step_limit_is_an_error_not_an_answer():
    structure = Structure.build(3)
    phi = parse("exists z. (ind(;x;z) | ind(;y;z))")
    team = full_team(structure, ["x", "y"])
    with pytest.raises(ResourceExceeded):
        satisfies(structure, team, phi, EvalConfig(step_limit=50))


def _relations(structure):
    return {name: set(tuples) for name, _, tuples in structure.relations}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["inc", "dep", "ind"]))
def test_agrees_with_definitional_semantics(seed, frag):
    rng = random.Random(seed)
    structure = random_structure(rng, 2)
    phi = FormulaGenerator(rng, structure, frag, 3).draw()
    space = AssignmentSpace.of(["x", "y"], 2)
    rels = _relations(structure)
    checkers = [Checker(structure, phi, cfg) for cfg in CONFIGS]
    for bits in range(1 << 4):
        team = Team(space, bits)
        want = holds(2, rels, {tuple(zip(space.variables, a.values)) for a in team}, phi)
        for checker in checkers:
            assert checker.satisfies(team) == want, (str(team), str(phi))


def _answer(checker, team):
    try:
        return checker.satisfies(team)
    except ResourceExceeded:
        return None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["inc", "dep", "ind"]))
def test_config_toggles_do_not_change_answers_n3(seed, frag):
    rng = random.Random(seed)
    structure = random_structure(rng, 3)
    phi = FormulaGenerator(rng, structure, frag, 3).draw()
    assume(feasible(structure, phi))
    space = AssignmentSpace.of(["x", "y"], 3)
    fast = Checker(structure, phi, EvalConfig(BUDGET))
    slow = Checker(structure, phi, EvalConfig(BUDGET, memo_enabled=False, maxsub_enabled=False))
    naive = Checker(structure, phi, EvalConfig(BUDGET, fast_paths_enabled=False))
    teams = [rng.getrandbits(9) for _ in range(12)]
    for bits in teams:
        team = Team(space, bits)
        want = _answer(fast, team)
        if want is None:
            continue
        assert _answer(slow, team) in (want, None)
        if bits.bit_count() <= 3:
            assert _answer(naive, team) in (want, None)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_inclusion_satisfaction_iff_fixpoint(seed):
    rng = random.Random(seed)
    structure = random_structure(rng, rng.choice((2, 3)))
    phi = FormulaGenerator(rng, structure, "inc", 4).draw()
    assume(feasible(structure, phi))
    space = AssignmentSpace.of(["x", "y"], structure.universe_size)
    checker = Checker(structure, phi, EvalConfig(maxsub_enabled=False))
    for _ in range(6):
        team = Team(space, rng.getrandbits(len(space)))
        assert checker.satisfies(team) == (max_subteam(structure, team, phi) == team)
