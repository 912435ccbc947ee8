import random

import pytest
from hypothesis import given, settings, strategies as st

from teamlogic import CapacityError, ContractError, Structure, Team, parse
from teamlogic.corpus import FormulaGenerator, random_structure
from teamlogic.oracles import BruteForceOracles, ascending_submasks
from teamlogic.reference import NaiveOracles


@pytest.fixture
def inc2(plain2):
    return BruteForceOracles(plain2, parse("inc(x;y)"))


@pytest.fixture
def dep2(plain2):
    return BruteForceOracles(plain2, parse("dep(x;y)"))


def rows(oracles, *values):
    return Team.from_rows(oracles.space, list(values))


def test_ext_team_examples(inc2):
    empty = Team(inc2.space, 0)
    assert inc2.ext_team(rows(inc2, (0, 1)), empty)
    assert inc2.ext_team(rows(inc2, (0, 1)), rows(inc2, (1, 0)))
    full = Team(inc2.space, inc2.space.full_mask)
    assert not inc2.ext_team(full, empty)


def test_ext_card_team_examples(inc2, plain2):
    empty = Team(inc2.space, 0)
    assert inc2.ext_card_team(empty, empty, 4)
    assert inc2.ext_card_team(empty, empty, 1)
    never = BruteForceOracles(plain2, parse("(x!=x & y=y)"))
    nothing = Team(never.space, 0)
    assert not any(never.ext_card_team(nothing, nothing, k) for k in range(1, 5))


def test_ext_max_team_examples(dep2):
    empty = Team(dep2.space, 0)
    assert dep2.ext_max_team(rows(dep2, (0, 0)), empty)
    assert not dep2.ext_max_team(Team(dep2.space, dep2.space.full_mask), empty)
    assert not dep2.ext_max_team(rows(dep2, (0, 0), (0, 1)), empty)
    assert len(dep2.maximal_teams()) == 4


def test_proper_subteam_sat_examples(inc2):
    assert not inc2.proper_subteam_sat(rows(inc2, (0, 1), (1, 0)))
    assert inc2.proper_subteam_sat(Team(inc2.space, inc2.space.full_mask))
    for i in range(4):
        assert not inc2.proper_subteam_sat(Team.from_indices(inc2.space, [i]))
    with pytest.raises(ContractError):
        inc2.proper_subteam_sat(Team(inc2.space, 0))


def test_contract_checks(inc2, xy2):
    a = rows(inc2, (0, 1))
    with pytest.raises(ContractError):
        inc2.ext_team(a, a)
    with pytest.raises(ContractError):
        inc2.ext_card_team(a, Team(inc2.space, 0), 5)
    from teamlogic import AssignmentSpace

    with pytest.raises(ContractError):
        inc2.ver_team(Team(AssignmentSpace.of(["x", "y"], 3), 1))


def test_counters(inc2):
    empty = Team(inc2.space, 0)
    inc2.ver_team(empty)
    inc2.ext_team(empty, empty)
    inc2.ext_team(empty, empty)
    assert inc2.calls["ver_team"] == 1
    assert inc2.calls["ext_team"] == 2
    assert inc2.total_calls == 3
    assert inc2.steps > 0


def test_cap():
    structure = Structure.build(5)
    with pytest.raises(CapacityError):
        BruteForceOracles(structure, parse("inc(x;y)"))


def test_ascending_submasks():
    assert list(ascending_submasks(0b1010)) == [0b0010, 0b1000, 0b1010]
    assert list(ascending_submasks(0)) == []


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["inc", "dep", "ind"]))
def test_brute_matches_naive_scan(seed, frag):
    rng = random.Random(seed)
    structure = random_structure(rng, 2)
    phi = FormulaGenerator(rng, structure, frag, 3).draw()
    fast = BruteForceOracles(structure, phi)
    slow = NaiveOracles(structure, phi)
    space = fast.space
    for _ in range(10):
        x = rng.getrandbits(len(space))
        y = rng.getrandbits(len(space)) & ~x
        tx, ty = Team(space, x), Team(space, y)
        assert fast.ver_team(tx) == slow.ver_team(tx)
        ext = fast.ext_team(tx, ty)
        assert ext == slow.ext_team(tx, ty)
        ext_max = fast.ext_max_team(tx, ty)
        assert ext_max == slow.ext_max_team(tx, ty)
        if ext_max:
            assert ext
        for k in range(len(space) + 1):
            card = fast.ext_card_team(tx, ty, k)
            assert card == slow.ext_card_team(tx, ty, k)
            if card and k > x.bit_count():
                assert ext
        if x:
            assert fast.proper_subteam_sat(tx) == slow.proper_subteam_sat(tx)
