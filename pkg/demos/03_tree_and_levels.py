"""
Well-designed trees and left-deep levels
========================================

An ONF pattern maps onto a binary tree with OPT at the inner nodes and
OPT-free patterns at the leaves. Walking it level by level, where each
level is reached through right children, exposes the nesting depth that
approximation cuts.
"""

from wdsparql import And, Bound, Filter, Iri, Opt, Triple, Var, build_tree
from wdsparql.algebra import number_opts
from wdsparql.wdtree import OptNode, left_deep_level_traversal, render_tree, tree_depth

x = Var("x")
t = {i: Triple(x, Iri(f"p{i}"), Var(f"v{i}")) for i in range(1, 8)}
p0 = Filter(And(t[1], t[3]), Bound(Var("v1")))
names = {p0: "p0", **{tp: f"t{i}" for i, tp in t.items()}}

p = number_opts(Opt(Opt(p0, t[2]), Opt(Opt(t[4], t[5]), Opt(t[6], t[7]))))
tree = build_tree(p)


def label(n):
    return f"OPT{n.opt_id}" if isinstance(n, OptNode) else names[n.pattern]


print(render_tree(tree, label))
print()
print(left_deep_level_traversal(tree).format(label))
print("depth:", tree_depth(tree))
