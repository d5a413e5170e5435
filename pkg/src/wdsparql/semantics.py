"""Set semantics of graph patterns over in-memory RDF graphs.

Mappings are immutable and hashable; a mapping set is a plain
``frozenset`` of them. Joins and differences hash-partition on the
variables bound in *every* mapping of both operands, then confirm full
compatibility inside each bucket, so they agree with the nested-loop
definitions on mappings with ragged domains (as produced by OPT).
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from collections.abc import Iterable, Iterator
from collections.abc import Mapping as _MappingABC

from .algebra import (
    And,
    Blank,
    Bound,
    Conj,
    Constraint,
    Disj,
    EqConst,
    EqVar,
    Filter,
    Iri,
    Literal,
    Not,
    Opt,
    Pattern,
    Select,
    Term,
    Triple,
    Union,
    Var,
    term_sort_key,
)
from .surface import format_term, parse_ntriples


class Mapping(_MappingABC):
    """Finite partial function from variables to constants."""

    __slots__ = ("_d", "_hash")

    def __init__(self, items=()):
        d = dict(items)
        for k, v in d.items():
            if not isinstance(k, Var) or isinstance(v, Var):
                raise TypeError(f"bad binding {k!r} -> {v!r}")
        self._d = d
        self._hash = None

    @classmethod
    def _trusted(cls, d: dict) -> "Mapping":
        m = cls.__new__(cls)
        m._d = d
        m._hash = None
        return m

    def __getitem__(self, v: Var) -> Term:
        return self._d[v]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, v) -> bool:
        return v in self._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return self._d == other._d
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"?{v.name}→{format_term(t)}" for v, t in
                          sorted(self._d.items(), key=lambda kv: kv[0].name))
        return "{" + inner + "}"

    def dom(self) -> frozenset[Var]:
        return frozenset(self._d)

    def compatible(self, other: "Mapping") -> bool:
        a, b = (self._d, other._d) if len(self._d) <= len(other._d) else (other._d, self._d)
        for v, t in a.items():
            u = b.get(v)
            if u is not None and u != t:
                return False
        return True

    def merge(self, other: "Mapping") -> "Mapping":
        d = dict(self._d)
        d.update(other._d)
        return Mapping._trusted(d)

    def restrict(self, vs) -> "Mapping":
        return Mapping._trusted({v: t for v, t in self._d.items() if v in vs})

    def subsumed_by(self, other: "Mapping") -> bool:
        """True iff ``other`` extends this mapping."""
        return all(other._d.get(v) == t for v, t in self._d.items())

    def sort_key(self) -> tuple:
        items = sorted(self._d.items(), key=lambda kv: kv[0].name)
        return (tuple(v.name for v, _ in items),
                tuple(term_sort_key(t) for _, t in items))


MappingSet = frozenset
EMPTY_MAPPING = Mapping()
UNIT = frozenset({EMPTY_MAPPING})


def canonical(omega: Iterable[Mapping]) -> list[Mapping]:
    return sorted(omega, key=Mapping.sort_key)


def compatible(m1: Mapping, m2: Mapping) -> bool:
    return m1.compatible(m2)


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------


class Graph:
    """Immutable set of RDF triples indexed by subject, predicate and object."""

    def __init__(self, triples: Iterable[tuple[Term, Term, Term]] = ()):
        ts = frozenset(tuple(t) for t in triples)
        for s, p, o in ts:
            if not isinstance(s, (Iri, Blank)):
                raise TypeError(f"subject must be an IRI or blank node: {s!r}")
            if not isinstance(p, Iri):
                raise TypeError(f"predicate must be an IRI: {p!r}")
            if not isinstance(o, (Iri, Blank, Literal)):
                raise TypeError(f"object must be an RDF term: {o!r}")
        self._triples = ts
        by_s, by_p, by_o = defaultdict(list), defaultdict(list), defaultdict(list)
        for t in ts:
            by_s[t[0]].append(t)
            by_p[t[1]].append(t)
            by_o[t[2]].append(t)
        self._index = (dict(by_s), dict(by_p), dict(by_o))

    @classmethod
    def from_ntriples(cls, text: str) -> "Graph":
        return cls(parse_ntriples(text))

    @property
    def triples(self) -> frozenset:
        return self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self):
        return iter(self._triples)

    def __contains__(self, t) -> bool:
        return tuple(t) in self._triples

    def match(self, s=None, p=None, o=None) -> Iterable[tuple]:
        """Triples agreeing with the given positions; ``None`` is a wildcard."""
        best = None
        for pos, val in enumerate((s, p, o)):
            if val is None:
                continue
            bucket = self._index[pos].get(val, ())
            if best is None or len(bucket) < len(best):
                best = bucket
        if best is None:
            return self._triples
        return [t for t in best
                if (s is None or t[0] == s) and (p is None or t[1] == p)
                and (o is None or t[2] == o)]


# ---------------------------------------------------------------------------
# Mapping-set algebra
# ---------------------------------------------------------------------------


def _certain_vars(omega) -> frozenset:
    it = iter(omega)
    common = set(next(it).dom())
    for m in it:
        common.intersection_update(m._d)
        if not common:
            break
    return frozenset(common)


def _partition(omega1, omega2):
    keys = sorted(_certain_vars(omega1) & _certain_vars(omega2), key=lambda v: v.name)
    buckets = defaultdict(list)
    for m in omega2:
        buckets[tuple(m._d[v] for v in keys)].append(m)
    return keys, buckets


def join(omega1, omega2) -> frozenset:
    if not omega1 or not omega2:
        return frozenset()
    keys, buckets = _partition(omega1, omega2)
    out = set()
    for m1 in omega1:
        for m2 in buckets.get(tuple(m1._d[v] for v in keys), ()):
            if m1.compatible(m2):
                out.add(m1.merge(m2))
    return frozenset(out)


def diff(omega1, omega2) -> frozenset:
    if not omega1 or not omega2:
        return frozenset(omega1)
    keys, buckets = _partition(omega1, omega2)
    out = []
    for m1 in omega1:
        bucket = buckets.get(tuple(m1._d[v] for v in keys), ())
        if not any(m1.compatible(m2) for m2 in bucket):
            out.append(m1)
    return frozenset(out)


def left_join(omega1, omega2) -> frozenset:
    return join(omega1, omega2) | diff(omega1, omega2)


def union(omega1, omega2) -> frozenset:
    return frozenset(omega1) | frozenset(omega2)


def project(omega, vs) -> frozenset:
    vs = frozenset(vs)
    return frozenset(m.restrict(vs) for m in omega)


class TruthValue(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    ERROR = "error"


_T, _F, _E = TruthValue.TRUE, TruthValue.FALSE, TruthValue.ERROR


def eval_constraint(c: Constraint, m: Mapping) -> TruthValue:
    """Three-valued (Kleene) evaluation; unbound variables in ``=`` give error."""
    if isinstance(c, Bound):
        return _T if c.var in m else _F
    if isinstance(c, EqConst):
        if c.var not in m:
            return _E
        return _T if m[c.var] == c.term else _F
    if isinstance(c, EqVar):
        if c.left not in m or c.right not in m:
            return _E
        return _T if m[c.left] == m[c.right] else _F
    if isinstance(c, Not):
        v = eval_constraint(c.arg, m)
        return _E if v is _E else (_F if v is _T else _T)
    a = eval_constraint(c.left, m)
    b = eval_constraint(c.right, m)
    if isinstance(c, Conj):
        if a is _F or b is _F:
            return _F
        return _T if a is _T and b is _T else _E
    if isinstance(c, Disj):
        if a is _T or b is _T:
            return _T
        return _F if a is _F and b is _F else _E
    raise TypeError(f"not a constraint: {c!r}")


def eval_triple(tp: Triple, g: Graph) -> frozenset:
    terms = tp.terms()
    fixed = [None if isinstance(t, Var) else t for t in terms]
    out = set()
    for triple in g.match(*fixed):
        d: dict = {}
        for t, val in zip(terms, triple):
            if isinstance(t, Var):
                prev = d.get(t)
                if prev is not None and prev != val:
                    break
                d[t] = val
        else:
            out.add(Mapping._trusted(d))
    return frozenset(out)


def evaluate(p: Pattern, g: Graph) -> frozenset:
    """``[[p]]_g`` as a frozenset of mappings."""
    if isinstance(p, Triple):
        return eval_triple(p, g)
    if isinstance(p, And):
        left = evaluate(p.left, g)
        if not left:
            return frozenset()
        return join(left, evaluate(p.right, g))
    if isinstance(p, Opt):
        left = evaluate(p.left, g)
        if not left:
            return frozenset()
        return left_join(left, evaluate(p.right, g))
    if isinstance(p, Union):
        return union(evaluate(p.left, g), evaluate(p.right, g))
    if isinstance(p, Filter):
        return frozenset(m for m in evaluate(p.pattern, g)
                         if eval_constraint(p.constraint, m) is _T)
    if isinstance(p, Select):
        return project(evaluate(p.pattern, g), p.variables)
    raise TypeError(f"not a pattern: {p!r}")


# ---------------------------------------------------------------------------
# Answer serialization
# ---------------------------------------------------------------------------


def _pairs(m: Mapping) -> list[tuple[str, str]]:
    return [(f"?{v.name}", format_term(m[v])) for v in sorted(m, key=lambda v: v.name)]


def format_tsv(m: Mapping) -> str:
    return "\t".join(f"{k}={t}" for k, t in _pairs(m))


def format_json(m: Mapping) -> str:
    return json.dumps(dict(_pairs(m)), ensure_ascii=False)


def serialize_answers(omega, fmt: str = "tsv") -> str:
    line = {"tsv": format_tsv, "json": format_json}[fmt]
    return "".join(line(m) + "\n" for m in canonical(omega))
