"""Terms, constraints and graph patterns, plus structural measures.

All node types are frozen dataclasses. ``Opt`` nodes carry an ``opt_id``
used only for labelling (OPT1, OPT2, ...); it is excluded from equality and
hashing, so ``==`` on patterns is structural equality ignoring OPT labels.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Union as _U

from .errors import NotInOptNormalForm

# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class Literal:
    value: str

    def __str__(self) -> str:
        return '"' + self.value.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True, slots=True)
class Blank:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    def __str__(self) -> str:
        return f"?{self.name}"


Constant = _U[Iri, Literal, Blank]
Term = _U[Iri, Literal, Blank, Var]

def term_sort_key(t: Term) -> tuple[int, str]:
    """Canonical order: IRIs, then blank nodes, then literals; by text."""
    if isinstance(t, Iri):
        return (0, t.value)
    if isinstance(t, Blank):
        return (1, t.label)
    if isinstance(t, Literal):
        return (2, t.value)
    return (3, t.name)


def is_constant(t) -> bool:
    return isinstance(t, (Iri, Literal, Blank))


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Bound:
    var: Var


@dataclass(frozen=True, slots=True)
class EqConst:
    var: Var
    term: Constant

    def __post_init__(self):
        if not is_constant(self.term):
            raise TypeError(f"EqConst needs a constant term, got {self.term!r}")


@dataclass(frozen=True, slots=True)
class EqVar:
    left: Var
    right: Var


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Constraint"


@dataclass(frozen=True, slots=True)
class Conj:
    left: "Constraint"
    right: "Constraint"


@dataclass(frozen=True, slots=True)
class Disj:
    left: "Constraint"
    right: "Constraint"


Constraint = _U[Bound, EqConst, EqVar, Not, Conj, Disj]

# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        for pos, t in (("subject", self.subject), ("predicate", self.predicate),
                       ("object", self.object)):
            if isinstance(t, Blank):
                raise ValueError(f"blank node not allowed in triple pattern {pos}")
        if isinstance(self.predicate, Literal):
            raise ValueError("literal not allowed in predicate position")

    def terms(self) -> tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)


@dataclass(frozen=True, slots=True)
class And:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Opt:
    left: "Pattern"
    right: "Pattern"
    opt_id: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class Union:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True, slots=True)
class Filter:
    pattern: "Pattern"
    constraint: Constraint


@dataclass(frozen=True, slots=True)
class Select:
    variables: frozenset
    pattern: "Pattern"

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))


Pattern = _U[Triple, And, Opt, Union, Filter, Select]
TriplePattern = Triple


def and_all(*patterns: Pattern) -> Pattern:
    """Left-associated AND chain."""
    return reduce(And, patterns)


def opt_chain(base: Pattern, *optionals: Pattern) -> Pattern:
    """Build ``base OPT p1 OPT ... OPT pm`` (left-associated)."""
    p = base
    for o in optionals:
        p = Opt(p, o)
    return p


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

Path = tuple[int, ...]


def children(p: Pattern) -> tuple[Pattern, ...]:
    if isinstance(p, (And, Opt, Union)):
        return (p.left, p.right)
    if isinstance(p, (Filter, Select)):
        return (p.pattern,)
    return ()


def with_children(p: Pattern, kids: tuple[Pattern, ...]) -> Pattern:
    if isinstance(p, (And, Opt, Union)):
        return replace(p, left=kids[0], right=kids[1])
    if isinstance(p, (Filter, Select)):
        return replace(p, pattern=kids[0])
    return p


def walk(p: Pattern, path: Path = ()) -> Iterator[tuple[Path, Pattern]]:
    """Preorder walk yielding ``(path, subpattern)`` pairs."""
    yield path, p
    for i, c in enumerate(children(p)):
        yield from walk(c, path + (i,))


def subpattern_at(p: Pattern, path: Path) -> Pattern:
    for i in path:
        p = children(p)[i]
    return p


def replace_at(p: Pattern, path: Path, new: Pattern) -> Pattern:
    if not path:
        return new
    kids = list(children(p))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(p, tuple(kids))


def number_opts(p: Pattern, start: int = 1) -> Pattern:
    """Return a copy of ``p`` whose OPT nodes are numbered in preorder."""
    counter = iter(range(start, 1 << 62))

    def go(q):
        if isinstance(q, Opt):
            oid = next(counter)
            return Opt(go(q.left), go(q.right), oid)
        kids = children(q)
        if not kids:
            return q
        return with_children(q, tuple(go(k) for k in kids))

    return go(p)


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------


def _constraint_vars(c: Constraint) -> set[Var]:
    if isinstance(c, Bound):
        return {c.var}
    if isinstance(c, EqConst):
        return {c.var}
    if isinstance(c, EqVar):
        return {c.left, c.right}
    if isinstance(c, Not):
        return _constraint_vars(c.arg)
    return _constraint_vars(c.left) | _constraint_vars(c.right)


def variables(x) -> frozenset[Var]:
    """Variables occurring syntactically in a pattern, triple or constraint."""
    if isinstance(x, Triple):
        return frozenset(t for t in x.terms() if isinstance(t, Var))
    if isinstance(x, (Bound, EqConst, EqVar, Not, Conj, Disj)):
        return frozenset(_constraint_vars(x))
    if isinstance(x, Filter):
        return variables(x.pattern) | variables(x.constraint)
    if isinstance(x, Select):
        return x.variables | variables(x.pattern)
    if isinstance(x, (And, Opt, Union)):
        return variables(x.left) | variables(x.right)
    raise TypeError(f"not a pattern or constraint: {x!r}")


def is_af_pattern(p: Pattern) -> bool:
    """True iff ``p`` is built from triples with AND and FILTER only."""
    if isinstance(p, Triple):
        return True
    if isinstance(p, And):
        return is_af_pattern(p.left) and is_af_pattern(p.right)
    if isinstance(p, Filter):
        return is_af_pattern(p.pattern)
    return False


def is_opt_normal_form(p: Pattern) -> bool:
    if isinstance(p, Opt):
        return is_opt_normal_form(p.left) and is_opt_normal_form(p.right)
    return is_af_pattern(p)


def _require_onf(p: Pattern) -> None:
    if not is_opt_normal_form(p):
        raise NotInOptNormalForm("pattern is not in OPT normal form")


def _spine(p: Pattern) -> tuple[Pattern, list[Pattern]]:
    parts = []
    while isinstance(p, Opt):
        parts.append(p.right)
        p = p.left
    parts.reverse()
    return p, parts


def bgp(p: Pattern) -> Pattern:
    """The mandatory AF head ``P0`` of an ONF pattern ``P0 OPT P1 ... OPT Pm``."""
    _require_onf(p)
    return _spine(p)[0]


def optional_parts(p: Pattern) -> list[Pattern]:
    """The optional parts ``[P1, ..., Pm]`` of an ONF pattern, left to right."""
    _require_onf(p)
    return _spine(p)[1]


def opt_depth(p: Pattern) -> int:
    _require_onf(p)
    return _depth(p)


def _depth(p: Pattern) -> int:
    _, parts = _spine(p)
    if not parts:
        return 0
    return 1 + max(_depth(q) for q in parts)


def opt_count(p: Pattern) -> int:
    return sum(1 for _, q in walk(p) if isinstance(q, Opt))


def structural_equals(p: Pattern, q: Pattern) -> bool:
    """Tree identity ignoring OPT labels (this is also what ``==`` does)."""
    return p == q
