"""Random patterns and graphs for differential and property testing.

Everything is driven by a ``random.Random`` instance so that a seed pins
the whole instance. Vocabulary is tiny on purpose: few constants and at
most four variables make joins, OPT misses and filter errors common.
"""

from __future__ import annotations

import random

from .algebra import (
    And,
    Blank,
    Bound,
    Conj,
    Disj,
    EqConst,
    EqVar,
    Filter,
    Iri,
    Literal,
    Not,
    Opt,
    Pattern,
    Triple,
    Union,
    Var,
    is_opt_normal_form,
    number_opts,
    opt_count,
    variables,
)
from .semantics import Graph
from .wellformed import is_well_designed

VARS = tuple(Var(n) for n in "xyzw")
SUBJECTS = (Iri("a"), Iri("b"), Iri("c"), Blank("n1"))
PREDICATES = (Iri("p"), Iri("q"))
OBJECTS = (Iri("a"), Iri("b"), Iri("c"), Literal("l"))


def random_graph(rng: random.Random, max_triples: int = 12) -> Graph:
    n = rng.randint(0, max_triples)
    return Graph((rng.choice(SUBJECTS), rng.choice(PREDICATES), rng.choice(OBJECTS))
                 for _ in range(n))


def random_triple(rng: random.Random, vs=VARS) -> Triple:
    def pick(consts, p_var):
        return rng.choice(vs) if rng.random() < p_var else rng.choice(consts)

    return Triple(pick(SUBJECTS[:3], 0.7), pick(PREDICATES, 0.15), pick(OBJECTS, 0.6))


def random_constraint(rng: random.Random, vs, depth: int = 2):
    vs = sorted(vs, key=lambda v: v.name) or list(VARS[:1])
    if depth == 0 or rng.random() < 0.5:
        kind = rng.randrange(3)
        if kind == 0:
            return Bound(rng.choice(vs))
        if kind == 1:
            return EqConst(rng.choice(vs), rng.choice(OBJECTS))
        return EqVar(rng.choice(vs), rng.choice(vs))
    kind = rng.randrange(3)
    if kind == 0:
        return Not(random_constraint(rng, vs, depth - 1))
    left = random_constraint(rng, vs, depth - 1)
    right = random_constraint(rng, vs, depth - 1)
    return Conj(left, right) if kind == 1 else Disj(left, right)


def random_pattern(rng: random.Random, max_ops: int = 8,
                   kinds=("and", "opt", "filter", "union"),
                   safe_filters: bool = False, vs=VARS) -> Pattern:
    """Random pattern with at most ``max_ops`` operator nodes."""

    def gen(n: int) -> Pattern:
        if n == 0:
            return random_triple(rng, vs)
        kind = rng.choice(kinds)
        if kind == "filter":
            inner = gen(n - 1)
            scope = variables(inner) if safe_filters else vs
            return Filter(inner, random_constraint(rng, scope))
        k = rng.randint(0, n - 1)
        left, right = gen(k), gen(n - 1 - k)
        return {"and": And, "opt": Opt, "union": Union}[kind](left, right)

    return number_opts(gen(rng.randint(0, max_ops)))


def random_af_pattern(rng: random.Random, max_ops: int = 2, vs=VARS) -> Pattern:
    return random_pattern(rng, max_ops, kinds=("and", "and", "filter"),
                          safe_filters=True, vs=vs)


def random_onf(rng: random.Random, max_opts: int = 6, leaf_ops: int = 1,
               vs=VARS) -> Pattern:
    """Random ONF pattern: a random OPT tree with small AF leaves."""

    def gen(n: int) -> Pattern:
        if n == 0:
            return random_af_pattern(rng, leaf_ops, vs)
        k = rng.randint(0, n - 1)
        return Opt(gen(k), gen(n - 1 - k))

    return number_opts(gen(rng.randint(0, max_opts)))


def random_well_designed_onf(rng: random.Random, max_opts: int = 6,
                             min_opts: int = 0, attempts: int = 10_000) -> Pattern:
    for _ in range(attempts):
        p = random_onf(rng, max_opts)
        if is_well_designed(p) and opt_count(p) >= min_opts:
            return p
    raise RuntimeError("could not sample a well-designed ONF pattern")


def random_well_designed_non_onf(rng: random.Random, max_ops: int = 8,
                                 attempts: int = 10_000) -> Pattern:
    for _ in range(attempts):
        p = random_pattern(rng, max_ops, kinds=("and", "opt", "opt", "filter"),
                           safe_filters=True)
        if not is_opt_normal_form(p) and is_well_designed(p):
            return p
    raise RuntimeError("could not sample a well-designed non-ONF pattern")

