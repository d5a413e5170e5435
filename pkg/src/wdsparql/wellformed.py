"""Membership test for the UNION-free well-designed fragment.

Violations are reported, never raised, in preorder of the offending node.
A single top-level ``Select`` is treated as an output projection and skipped.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from .algebra import (
    Filter,
    Opt,
    Pattern,
    Select,
    Triple,
    Union,
    Var,
    variables,
    walk,
)
from .errors import NotWellDesigned


class ViolationKind(enum.Enum):
    UNSAFE_FILTER = "UnsafeFilter"
    BAD_OPT_VARIABLE = "BadOptVariable"
    UNION_PRESENT = "UnionPresent"
    NESTED_SELECT = "NestedSelect"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    path: tuple[int, ...]
    message: str
    variable: Var | None = None
    opt_id: int | None = None

    def as_record(self) -> dict:
        return {
            "kind": self.kind.value,
            "path": list(self.path),
            "opt_id": self.opt_id,
            "variable": None if self.variable is None else f"?{self.variable.name}",
            "message": self.message,
        }


def _strip_select(p: Pattern) -> tuple[Pattern, tuple[int, ...]]:
    if isinstance(p, Select):
        return p.pattern, (0,)
    return p, ()


def _unsafe(path, q: Filter) -> list[Violation]:
    missing = variables(q.constraint) - variables(q.pattern)
    return [
        Violation(ViolationKind.UNSAFE_FILTER, path,
                  f"FILTER at {list(path)} uses ?{v.name}, which does not occur "
                  f"in the filtered pattern", variable=v)
        for v in sorted(missing, key=lambda v: v.name)
    ]


def check_safe(p: Pattern) -> list[Violation]:
    """One UnsafeFilter per variable of a FILTER not bound by its operand."""
    root, base = _strip_select(p)
    out = []
    for path, q in walk(root, base):
        if isinstance(q, Filter):
            out.extend(_unsafe(path, q))
    return out


def _occurrences(p: Pattern) -> Counter:
    """Multiset of syntactic variable occurrences (triples and constraints)."""
    counts: Counter = Counter()
    for _, q in walk(p):
        if isinstance(q, Triple):
            counts.update(t for t in q.terms() if isinstance(t, Var))
        elif isinstance(q, Filter):
            counts.update(variables(q.constraint))
        elif isinstance(q, Select):
            counts.update(q.variables)
    return counts


def check_well_designed(p: Pattern) -> list[Violation]:
    root, base = _strip_select(p)
    total = _occurrences(root)
    out: list[Violation] = []
    for path, q in walk(root, base):
        if isinstance(q, Union):
            out.append(Violation(ViolationKind.UNION_PRESENT, path,
                                 f"UNION at {list(path)} is outside the fragment"))
        elif isinstance(q, Select):
            out.append(Violation(ViolationKind.NESTED_SELECT, path,
                                 f"SELECT at {list(path)} is nested"))
        elif isinstance(q, Filter):
            out.extend(_unsafe(path, q))
        elif isinstance(q, Opt):
            inside = _occurrences(q)
            left_vars = variables(q.left)
            for v in sorted(variables(q.right), key=lambda v: v.name):
                if v in left_vars or total[v] - inside[v] <= 0:
                    continue
                out.append(Violation(
                    ViolationKind.BAD_OPT_VARIABLE, path,
                    f"?{v.name} occurs in the optional side of OPT{q.opt_id} and "
                    f"outside it, but not in its mandatory side",
                    variable=v, opt_id=q.opt_id))
    return out


def is_well_designed(p: Pattern) -> bool:
    return not check_well_designed(p)


def require_well_designed(p: Pattern) -> None:
    violations = check_well_designed(p)
    if violations:
        raise NotWellDesigned(violations)

