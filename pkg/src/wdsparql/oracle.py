"""Deliberately naive evaluator used as a differential-testing oracle.

Shares nothing with ``semantics`` beyond the pattern types and the final
``Mapping`` wrapper. Internally mappings are frozensets of ``(var, term)``
pairs, every operator is a nested loop over its inputs, and triples are
matched by scanning the whole graph.
"""

from __future__ import annotations

from .algebra import (
    And,
    Bound,
    Conj,
    Disj,
    EqConst,
    EqVar,
    Filter,
    Not,
    Opt,
    Select,
    Triple,
    Union,
    Var,
)
from .errors import ResourceLimit
from .semantics import Mapping

DEFAULT_CAP = 10**6


def _compatible(a: frozenset, b: frozenset) -> bool:
    da = dict(a)
    return all(da.get(v, t) == t for v, t in b)


def _truth(c, mu: dict):
    # None stands for the third truth value (error)
    if isinstance(c, Bound):
        return c.var in mu
    if isinstance(c, EqConst):
        return None if c.var not in mu else mu[c.var] == c.term
    if isinstance(c, EqVar):
        if c.left not in mu or c.right not in mu:
            return None
        return mu[c.left] == mu[c.right]
    if isinstance(c, Not):
        x = _truth(c.arg, mu)
        return None if x is None else not x
    a, b = _truth(c.left, mu), _truth(c.right, mu)
    table = {
        Conj: {(True, True): True, (False, None): False, (None, False): False},
        Disj: {(False, False): False, (True, None): True, (None, True): True},
    }[type(c)]
    if (a, b) in table:
        return table[(a, b)]
    if None in (a, b):
        return None
    return a and b if isinstance(c, Conj) else a or b


def brute_force_evaluate(p, g, cap: int = DEFAULT_CAP) -> frozenset:
    """Evaluate by the textbook definitions.

    Raises ResourceLimit when an intermediate result exceeds ``cap``.
    """

    def check(s):
        if len(s) > cap:
            raise ResourceLimit(f"intermediate result of {len(s)} mappings")
        return s

    def ev(q) -> set:
        if isinstance(q, Triple):
            out = set()
            for triple in g.triples:
                mu = {}
                ok = True
                for pat, val in zip(q.terms(), triple):
                    if isinstance(pat, Var):
                        if pat in mu and mu[pat] != val:
                            ok = False
                        mu[pat] = val
                    elif pat != val:
                        ok = False
                if ok:
                    out.add(frozenset(mu.items()))
            return check(out)
        if isinstance(q, (And, Opt)):
            left, right = ev(q.left), ev(q.right)
            joined = check({a | b for a in left for b in right if _compatible(a, b)})
            if isinstance(q, And):
                return joined
            rest = {a for a in left if not any(_compatible(a, b) for b in right)}
            return check(joined | rest)
        if isinstance(q, Union):
            return check(ev(q.left) | ev(q.right))
        if isinstance(q, Filter):
            return {mu for mu in ev(q.pattern) if _truth(q.constraint, dict(mu)) is True}
        if isinstance(q, Select):
            return {frozenset((v, t) for v, t in mu if v in q.variables)
                    for mu in ev(q.pattern)}
        raise TypeError(f"not a pattern: {q!r}")

    return frozenset(Mapping(mu) for mu in ev(p))
