"""Independent, definition-level team semantics for small instances.

Teams are frozensets of assignments, assignments are tuples of
(variable, value) pairs. Every connective is evaluated by exhaustive search
straight from its definition; nothing is shared with the package except the
formula AST classes.
"""

from itertools import chain, combinations, product

from teamlogic.formula import And, Dep, Eq, Exists, Forall, Inc, Ind, Neq, NegRel, Or, Rel


def assignment(**values):
    return tuple(sorted(values.items()))


def team_of(variables, rows):
    return frozenset(tuple(sorted(zip(variables, row))) for row in rows)


def all_assignments(variables, n):
    return [tuple(sorted(zip(variables, vals))) for vals in product(range(n), repeat=len(variables))]


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def _get(s, var):
    return dict(s)[var]


def _set(s, var, value):
    d = dict(s)
    d[var] = value
    return tuple(sorted(d.items()))


def _proj(s, names):
    d = dict(s)
    return tuple(d[v] for v in names)


def holds(n, relations, team, phi):
    """``relations``: dict name -> set of tuples."""
    team = frozenset(team)
    if not team:
        return True
    if isinstance(phi, Eq):
        return all(_get(s, phi.left) == _get(s, phi.right) for s in team)
    if isinstance(phi, Neq):
        return all(_get(s, phi.left) != _get(s, phi.right) for s in team)
    if isinstance(phi, Rel):
        return all(_proj(s, phi.args) in relations[phi.name] for s in team)
    if isinstance(phi, NegRel):
        return all(_proj(s, phi.args) not in relations[phi.name] for s in team)
    if isinstance(phi, And):
        return holds(n, relations, team, phi.left) and holds(n, relations, team, phi.right)
    if isinstance(phi, Or):
        for left in subsets(team):
            left = frozenset(left)
            rest = team - left
            for extra in subsets(left):
                if holds(n, relations, left, phi.left) and holds(n, relations, rest | frozenset(extra), phi.right):
                    return True
        return False
    if isinstance(phi, Exists):
        members = sorted(team)
        choices = [c for c in subsets(range(n)) if c]
        for pick in product(choices, repeat=len(members)):
            ext = frozenset(_set(s, phi.var, a) for s, vals in zip(members, pick) for a in vals)
            if holds(n, relations, ext, phi.body):
                return True
        return False
    if isinstance(phi, Forall):
        return holds(n, relations, frozenset(_set(s, phi.var, a) for s in team for a in range(n)), phi.body)
    if isinstance(phi, Dep):
        return all(_proj(s, phi.ys) == _proj(t, phi.ys)
                   for s in team for t in team if _proj(s, phi.xs) == _proj(t, phi.xs))
    if isinstance(phi, Inc):
        return all(any(_proj(s, phi.xs) == _proj(t, phi.ys) for t in team) for s in team)
    if isinstance(phi, Ind):
        for s in team:
            for t in team:
                if _proj(s, phi.zs) != _proj(t, phi.zs):
                    continue
                if not any(_proj(u, phi.xs) == _proj(s, phi.xs) and _proj(u, phi.ys) == _proj(t, phi.ys)
                           and _proj(u, phi.zs) == _proj(s, phi.zs) for u in team):
                    return False
        return True
    raise TypeError(phi)


def solutions(n, relations, variables, phi):
    """All nonempty satisfying teams over ``variables`` (as frozensets)."""
    space = all_assignments(variables, n)
    return [frozenset(c) for c in subsets(space) if c and holds(n, relations, frozenset(c), phi)]


def by_mode(sols, mode):
    if mode == "all":
        return list(sols)
    if mode == "submax":
        return [a for a in sols if not any(a < b for b in sols)]
    if mode == "submin":
        return [a for a in sols if not any(b < a for b in sols)]
    if not sols:
        return []
    sizes = [len(a) for a in sols]
    best = max(sizes) if mode == "cardmax" else min(sizes)
    return [a for a in sols if len(a) == best]


def as_rows(team_sets, variables):
    """Canonical comparable form: sorted list of sorted value tuples."""
    return sorted(sorted(tuple(dict(s)[v] for v in variables) for s in t) for t in team_sets)
