"""Well-designed trees and k-approximation by pruning.

A well-designed tree mirrors an ONF pattern: OPT nodes inside, AF-patterns
at the leaves. The k-approximation keeps the tree down to level ``k - 1`` of
the left-deep level traversal and collapses every OPT candidate found there
to its leftmost leaf (the mandatory part of that optional subtree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union as _U

from .algebra import (
    Opt,
    Pattern,
    Select,
    is_af_pattern,
    is_opt_normal_form,
    walk,
    replace_at,
)
from .errors import NotInOptNormalForm
from .surface import print_pattern
from .wellformed import require_well_designed


@dataclass(frozen=True, slots=True)
class Leaf:
    pattern: Pattern

    def __post_init__(self):
        if not is_af_pattern(self.pattern):
            raise ValueError("leaf of a well-designed tree must be an AF-pattern")


@dataclass(frozen=True, slots=True)
class OptNode:
    left: "WdTree"
    right: "WdTree"
    opt_id: int = field(default=0, compare=False)


WdTree = _U[OptNode, Leaf]
TreePath = tuple[int, ...]


def build_tree(p: Pattern) -> WdTree:
    """Tree for a well-designed ONF pattern.

    Raises NotInOptNormalForm or NotWellDesigned.
    """
    if not is_opt_normal_form(p):
        raise NotInOptNormalForm("pattern is not in OPT normal form")
    require_well_designed(p)
    return _build(p)


def _build(p: Pattern) -> WdTree:
    if isinstance(p, Opt):
        return OptNode(_build(p.left), _build(p.right), p.opt_id)
    return Leaf(p)


def to_pattern(t: WdTree) -> Pattern:
    if isinstance(t, OptNode):
        return Opt(to_pattern(t.left), to_pattern(t.right), t.opt_id)
    return t.pattern


def leftmost_traversal(t: WdTree) -> list[WdTree]:
    """The root followed by the leftmost traversal of its left child."""
    out = [t]
    while isinstance(t, OptNode):
        t = t.left
        out.append(t)
    return out


def leftmost_leaf(t: WdTree) -> Leaf:
    while isinstance(t, OptNode):
        t = t.left
    return t


def _lt_with_paths(t: WdTree, path: TreePath) -> list[tuple[TreePath, WdTree]]:
    out = [(path, t)]
    while isinstance(t, OptNode):
        t = t.left
        path = path + (0,)
        out.append((path, t))
    return out


def _levels(t: WdTree) -> list[tuple[list, list]]:
    """Levels as ``(traversal, candidates)`` lists of ``(path, node)`` pairs."""
    levels = []
    frontier = [((), t)]
    while True:
        traversal = []
        for path, node in frontier:
            traversal.extend(_lt_with_paths(node, path))
        candidates = [(path + (1,), node.right) for path, node in traversal
                      if isinstance(node, OptNode)]
        levels.append((traversal, candidates))
        if not candidates:
            return levels
        frontier = candidates


@dataclass(frozen=True)
class LdltLevel:
    traversal: list[WdTree]
    candidates: list[WdTree]
    # LM(n) for each OPT candidate; None marks a leaf candidate
    leftmost: list[Leaf | None]


@dataclass(frozen=True)
class LdltReport:
    levels: list[LdltLevel]

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, i: int) -> LdltLevel:
        return self.levels[i]

    def rows(self, label: Callable[[WdTree], str] | None = None) -> list[tuple]:
        """``(level, traversal, candidates, leftmost)`` with nodes as labels."""
        label = label or default_label
        out = []
        for i, lev in enumerate(self.levels):
            out.append((
                i,
                [label(n) for n in lev.traversal],
                [label(n) for n in lev.candidates],
                ["×" if m is None else label(m) for m in lev.leftmost],
            ))
        return out

    def format(self, label: Callable[[WdTree], str] | None = None) -> str:
        header = ("Level", "Traversal List", "Candidates", "Leftmost")
        body = [(str(i), ", ".join(a), ", ".join(b), ", ".join(c))
                for i, a, b, c in self.rows(label)]
        widths = [max(len(r[j]) for r in [header, *body]) for j in range(4)]
        sep = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
        lines = [sep]
        for r in [header, *body]:
            lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(r, widths)) + " |")
            if r is header:
                lines.append(sep)
        lines.append(sep)
        return "\n".join(lines)


def left_deep_level_traversal(t: WdTree) -> LdltReport:
    levels = []
    for traversal, candidates in _levels(t):
        levels.append(LdltLevel(
            traversal=[n for _, n in traversal],
            candidates=[n for _, n in candidates],
            leftmost=[leftmost_leaf(n) if isinstance(n, OptNode) else None
                      for _, n in candidates],
        ))
    return LdltReport(levels)


def tree_depth(t: WdTree) -> int:
    """Index of the last LDLT level; equals the OPT-depth of the pattern."""
    return len(_levels(t)) - 1


def _replace_tree(t: WdTree, path: TreePath, new: WdTree) -> WdTree:
    if not path:
        return new
    if path[0] == 0:
        return OptNode(_replace_tree(t.left, path[1:], new), t.right, t.opt_id)
    return OptNode(t.left, _replace_tree(t.right, path[1:], new), t.opt_id)


def k_approximation_tree(t: WdTree, k: int) -> WdTree:
    """Spanning tree whose pattern is the k-approximation of ``t``'s pattern."""
    if k < 0:
        raise ValueError("k must be a natural number")
    if k == 0:
        return leftmost_leaf(t)
    levels = _levels(t)
    if k >= len(levels) - 1:
        return t
    _, candidates = levels[k - 1]
    for path, node in candidates:
        if isinstance(node, OptNode):
            t = _replace_tree(t, path, leftmost_leaf(node))
    return t


def k_approximate(p: Pattern, k: int) -> Pattern:
    """The k-approximate pattern of a well-designed ONF pattern.

    A top-level SELECT is kept and the approximation applied beneath it.
    Raises NotInOptNormalForm or NotWellDesigned.
    """
    if isinstance(p, Select):
        return Select(p.variables, k_approximate(p.pattern, k))
    return to_pattern(k_approximation_tree(build_tree(p), k))


def reductions(p: Pattern) -> frozenset:
    """All patterns obtained by replacing one ``P1 OPT P2`` with ``P1``."""
    return frozenset(replace_at(p, path, q.left)
                     for path, q in walk(p) if isinstance(q, Opt))


def reduction_closure(p: Pattern, limit: int = 100_000) -> frozenset:
    """Reflexive-transitive closure of ``reductions``; small patterns only."""
    seen = {p}
    todo = [p]
    while todo:
        for r in reductions(todo.pop()):
            if r not in seen:
                seen.add(r)
                todo.append(r)
                if len(seen) > limit:
                    raise RuntimeError("reduction closure exceeds limit")
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def default_label(n: WdTree) -> str:
    if isinstance(n, OptNode):
        return f"OPT{n.opt_id}"
    return print_pattern(n.pattern)


def render_tree(t: WdTree, label: Callable[[WdTree], str] | None = None) -> str:
    label = label or default_label
    lines = [label(t)]

    def go(node, prefix):
        kids = [node.left, node.right] if isinstance(node, OptNode) else []
        for i, kid in enumerate(kids):
            last = i == len(kids) - 1
            lines.append(prefix + ("└── " if last else "├── ") + label(kid))
            go(kid, prefix + ("    " if last else "│   "))

    go(t, "")
    return "\n".join(lines)
