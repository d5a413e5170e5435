"""Rewriting well-designed patterns into OPT normal form.

Three equivalences push OPT upwards past FILTER and AND:

    R1  (P OPT R) FILTER C  ->  (P FILTER C) OPT R
    R2  (P OPT R) AND Q     ->  (P AND Q) OPT R
    R3  P AND (Q OPT R)     ->  (P AND Q) OPT R

R2 and R3 only preserve semantics for well-designed inputs. Rewriting is
leftmost-innermost (postorder, left child first), trying R1, R2, R3 in that
order at each node, so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    And,
    Filter,
    Opt,
    Pattern,
    Select,
    Union,
    children,
    is_opt_normal_form,
    opt_count,
    replace_at,
    subpattern_at,
    walk,
)
from .errors import UnsupportedNode
from .surface import print_pattern
from .wellformed import require_well_designed

__all__ = [
    "RewriteStep",
    "RewriteTrace",
    "apply_rewrite_step",
    "is_opt_normal_form",
    "to_opt_normal_form",
]


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    path: tuple[int, ...]
    before: str
    after: str


@dataclass
class RewriteTrace:
    steps: list[RewriteStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def replay(self, p: Pattern) -> Pattern:
        for step in self.steps:
            p = apply_rule(p, step.rule, step.path)
        return p

    def format(self) -> str:
        return "\n".join(
            f"{i}. {s.rule} at {list(s.path)}: {s.before}  =>  {s.after}"
            for i, s in enumerate(self.steps, start=1)
        )


def _rewrite_here(q: Pattern) -> tuple[str, Pattern] | None:
    if isinstance(q, Filter) and isinstance(q.pattern, Opt):
        o = q.pattern
        return "R1", Opt(Filter(o.left, q.constraint), o.right, o.opt_id)
    if isinstance(q, And):
        if isinstance(q.left, Opt):
            o = q.left
            return "R2", Opt(And(o.left, q.right), o.right, o.opt_id)
        if isinstance(q.right, Opt):
            o = q.right
            return "R3", Opt(And(q.left, o.left), o.right, o.opt_id)
    return None


def apply_rule(p: Pattern, rule: str, path: tuple[int, ...]) -> Pattern:
    """Apply one named rule at ``path``; used to replay a trace."""
    hit = _rewrite_here(subpattern_at(p, path))
    if hit is None or hit[0] != rule:
        raise ValueError(f"rule {rule} does not apply at {list(path)}")
    return replace_at(p, path, hit[1])


def _find_redex(q: Pattern, path: tuple[int, ...]):
    for i, c in enumerate(children(q)):
        found = _find_redex(c, path + (i,))
        if found is not None:
            return found
    hit = _rewrite_here(q)
    if hit is None:
        return None
    return path, hit[0], q, hit[1]


def _check_supported(p: Pattern) -> None:
    for path, q in walk(p):
        if isinstance(q, (Union, Select)):
            raise UnsupportedNode(
                f"{type(q).__name__} at {list(path)} cannot be normalized")


def apply_rewrite_step(p: Pattern) -> tuple[Pattern, RewriteStep] | None:
    """One leftmost-innermost rewrite, or ``None`` if no rule applies."""
    _check_supported(p)
    found = _find_redex(p, ())
    if found is None:
        return None
    path, rule, before, after = found
    step = RewriteStep(rule, path, print_pattern(before), print_pattern(after))
    return replace_at(p, path, after), step


def to_opt_normal_form(p: Pattern, check: bool = True) -> tuple[Pattern, RewriteTrace]:
    """Rewrite a well-designed pattern into an equivalent ONF pattern.

    A top-level SELECT is kept around the result; trace paths are relative
    to the full input, so ``trace.replay(p)`` reproduces the output.

    Raises NotWellDesigned if the input is outside the fragment. With
    ``check=False`` any UNION-free pattern is rewritten, but the result is
    then only guaranteed to be in ONF, not equivalent.
    """
    if check:
        require_well_designed(p)
    prefix: tuple[int, ...] = ()
    body = p
    if isinstance(p, Select):
        body, prefix = p.pattern, (0,)
    trace = RewriteTrace()
    limit = max(1, opt_count(body) * sum(1 for _ in walk(body)))
    while True:
        res = apply_rewrite_step(body)
        if res is None:
            break
        body, step = res
        trace.steps.append(RewriteStep(step.rule, prefix + step.path,
                                       step.before, step.after))
        if len(trace.steps) > limit:
            raise RuntimeError("rewrite step bound exceeded")
    assert is_opt_normal_form(body)
    if isinstance(p, Select):
        return Select(p.variables, body), trace
    return body, trace
