"""Team-semantics model checking and enumeration of satisfying teams."""

from .core import (
    BOTTOM, Assignment, AssignmentSpace, Structure, Team, Vocabulary,
    extend_all, extend_fn, full_team, lex_compare, team_max,
)
from .errors import (
    CapacityError, ContractError, ParseError, ResourceExceeded, TeamLogicError, UnsupportedFragment,
)
from .formula import format_formula, fragment, free_vars, parse
from .checker import Checker, EvalConfig, eval_atom, satisfies, ver_team
from .maxsub import max_subteam, max_subteam_brute

__version__ = "0.1.0"
