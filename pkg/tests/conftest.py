import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from teamlogic import AssignmentSpace, Structure, Team  # noqa: E402


@pytest.fixture
def example_structure():
    return Structure.build(2, {"R": [(0, 1), (1, 0)]})


@pytest.fixture
def xy2():
    return AssignmentSpace.of(["x", "y"], 2)


@pytest.fixture
def example_team(xy2):
    return Team.from_rows(xy2, [(0, 1), (1, 1)])


@pytest.fixture
def plain2():
    """Two elements, no relations."""
    return Structure.build(2)


@pytest.fixture(scope="session")
def corpus():
    from teamlogic.corpus import build_corpus

    return build_corpus(240, seed=2024)


@pytest.fixture(scope="session")
def corpus_truth(corpus):
    """Reference solution sets per corpus instance: ident -> mode -> bitmasks."""
    from teamlogic.enumeration import Mode
    from teamlogic.reference import brute_enum

    return {
        inst.ident: {mode: {t.bits for t in brute_enum(inst.structure, inst.formula, mode)} for mode in Mode}
        for inst in corpus
    }
