import random

import pytest
from hypothesis import given, settings, strategies as st

from naive_semantics import as_rows, by_mode, solutions
from teamlogic import Structure, Team, UnsupportedFragment, parse
from teamlogic.corpus import FormulaGenerator, random_structure
from teamlogic.enumeration import (
    DelayStats, Mode, enum_all_flashlight, enum_all_inclusion, enum_card, enum_card_extreme,
    enum_max_inclusion, enum_min_flashlight, enum_min_inclusion, enum_subsetmax_flashlight,
    enumerate_teams, find_extreme_card,
)
from teamlogic.reference import brute_enum

INC = parse("inc(x;y)")
DEP = parse("dep(x;y)")
IND = parse("ind(;x;y)")
NEVER = parse("(x!=x & y=y)")


def bits(stream):
    return [t.bits for t in stream]


def rowsets(stream):
    return {tuple(t.space.values(i) for i in t.indices()) for t in stream}


def test_all_inclusion(plain2):
    out = enum_all_inclusion(plain2, INC).collect()
    assert len(out) == 11
    assert out[0].bits == 0b1111
    assert enum_all_inclusion(plain2, NEVER).collect() == []


def test_min_inclusion(plain2):
    assert rowsets(enum_min_inclusion(plain2, INC)) == {((0, 0),), ((1, 1),), ((0, 1), (1, 0))}
    assert sorted(bits(enum_min_inclusion(plain2, parse("(inc(x;x) & y=y)")))) == [1, 2, 4, 8]
    assert enum_min_inclusion(plain2, NEVER).collect() == []


def test_max_inclusion(plain2):
    for mode in (Mode.SUBSET_MAX, Mode.CARD_MAX):
        assert bits(enum_max_inclusion(plain2, INC, mode)) == [0b1111]
        assert enum_max_inclusion(plain2, NEVER, mode).collect() == []
    structure = Structure.build(2, {"R": [(0, 0)]})
    phi = parse("(inc(x;y) & !R(x,y))")
    assert bits(enum_max_inclusion(structure, phi)) == [0b1110]


def test_inclusion_engines_reject_other_atoms(plain2):
    with pytest.raises(UnsupportedFragment):
        enum_all_inclusion(plain2, DEP).collect()
    with pytest.raises(UnsupportedFragment):
        enumerate_teams(plain2, DEP, "all", engine="inclusion")


def test_all_flashlight(plain2):
    assert len(enum_all_flashlight(plain2, DEP).collect()) == 8
    assert set(bits(enum_all_flashlight(plain2, INC))) == set(bits(enum_all_inclusion(plain2, INC)))
    ind = set(bits(enum_all_flashlight(plain2, IND)))
    assert 0b1111 in ind and 0b0111 not in ind


def test_card(plain2):
    two = rowsets(enum_card(plain2, DEP, 2))
    assert two == {((0, 0), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 0)), ((0, 1), (1, 1))}
    assert enum_card(plain2, DEP, 3).collect() == []
    assert bits(enum_card(plain2, INC, 4)) == [0b1111]


def test_find_extreme_card(plain2):
    assert find_extreme_card(plain2, DEP, "max") == 2
    assert find_extreme_card(plain2, INC, "min") == 1
    assert find_extreme_card(plain2, NEVER, "max") is None


def test_card_extreme(plain2):
    assert rowsets(enum_card_extreme(plain2, INC, "min")) == {((0, 0),), ((1, 1),)}
    assert len(enum_card_extreme(plain2, DEP, "max").collect()) == 4
    assert sorted(bits(enum_card_extreme(plain2, DEP, "min"))) == [1, 2, 4, 8]


def test_min_flashlight(plain2):
    assert set(bits(enum_min_flashlight(plain2, INC))) == set(bits(enum_min_inclusion(plain2, INC)))
    assert sorted(bits(enum_min_flashlight(plain2, DEP))) == [1, 2, 4, 8]
    assert sorted(bits(enum_min_flashlight(plain2, IND))) == [1, 2, 4, 8]


def test_subsetmax_flashlight(plain2):
    assert len(enum_subsetmax_flashlight(plain2, DEP).collect()) == 4
    assert bits(enum_subsetmax_flashlight(plain2, INC)) == [0b1111]
    assert enum_subsetmax_flashlight(plain2, NEVER).collect() == []


def test_delay_stats_gaps(plain2):
    stream = enum_all_flashlight(plain2, DEP)
    out = stream.collect()
    assert stream.done
    assert stream.stats.outputs == len(out) == 8
    assert len(stream.stats.gap_steps) == len(stream.stats.gap_calls) == 9
    assert stream.stats.total_calls > 0
    assert "outputs 8" in stream.stats.summary()
    empty = enum_all_inclusion(plain2, NEVER)
    empty.collect()
    assert len(empty.stats.gap_steps) == 1
    assert DelayStats().max_gap_steps == 0


def test_unknown_engine(plain2):
    from teamlogic import ContractError

    with pytest.raises(ContractError):
        enumerate_teams(plain2, INC, "all", engine="magic")
    with pytest.raises(ValueError):
        enumerate_teams(plain2, INC, "everything")


CANONICAL = {
    "inc(x;y)": {"all": 11, "submax": 1, "submin": 3, "cardmax": 1, "cardmin": 2},
    "dep(x;y)": {"all": 8, "submax": 4, "submin": 4, "cardmax": 4, "cardmin": 4},
    "ind(;x;y)": {"all": 9, "submax": 1, "submin": 4, "cardmax": 1, "cardmin": 4},
}


@pytest.mark.parametrize("text", sorted(CANONICAL))
@pytest.mark.parametrize("engine", ["auto", "flashlight", "reference"])
def test_canonical_counts(plain2, text, engine):
    phi = parse(text)
    sols = solutions(2, {}, ["x", "y"], phi)
    for mode, count in CANONICAL[text].items():
        want = by_mode(sols, mode)
        assert len(want) == count
        got = enumerate_teams(plain2, phi, mode, engine=engine).collect()
        assert len(got) == count
        assert sorted(sorted(t.space.values(i) for i in t.indices()) for t in got) == as_rows(want, ["x", "y"])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["inc", "dep", "ind"]))
def test_engines_agree_with_reference(seed, frag):
    rng = random.Random(seed)
    structure = random_structure(rng, 2)
    phi = FormulaGenerator(rng, structure, frag, 3).draw()
    engines = ["auto", "flashlight", "reference"] + (["inclusion"] if frag == "inc" else [])
    for mode in Mode:
        want = [t.bits for t in brute_enum(structure, phi, mode)]
        for engine in engines:
            got = [t.bits for t in enumerate_teams(structure, phi, mode, engine=engine)]
            assert len(got) == len(set(got)), (engine, mode)
            assert sorted(got) == want, (engine, mode, str(phi))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["inc", "dep", "ind"]))
def test_mode_algebra(seed, frag):
    rng = random.Random(seed)
    structure = random_structure(rng, 2)
    phi = FormulaGenerator(rng, structure, frag, 3).draw()
    every = set(bits(enumerate_teams(structure, phi, "all")))
    minimal = set(bits(enumerate_teams(structure, phi, "submin")))
    maximal = set(bits(enumerate_teams(structure, phi, "submax")))
    assert minimal <= every and maximal <= every
    for b in maximal:
        assert not any(c != b and c & b == b for c in every)
    for direction, mode in (("max", "cardmax"), ("min", "cardmin")):
        k = find_extreme_card(structure, phi, direction)
        sizes = {t.bit_count() for t in bits(enumerate_teams(structure, phi, mode))}
        assert sizes == (set() if k is None else {k})


def test_order_is_deterministic(corpus):
    for inst in corpus[:30]:
        for mode in Mode:
            first = [str(t) for t in enumerate_teams(inst.structure, inst.formula, mode)]
            second = [str(t) for t in enumerate_teams(inst.structure, inst.formula, mode)]
            assert first == second


def test_team_rendering_is_canonical(plain2):
    out = enum_min_inclusion(plain2, INC).collect()
    assert all(isinstance(t, Team) for t in out)
    assert "{[x=0,y=1],[x=1,y=0]}" in {str(t) for t in out}
