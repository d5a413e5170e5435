"""
k-approximations
================

The k-approximation keeps the mandatory part and the first k levels of
optional nesting. k = 0 drops every OPTIONAL; once k reaches the OPT-depth
the query comes back unchanged.
"""

from wdsparql import k_approximate, opt_count, opt_depth, parse_pattern, print_pattern
from wdsparql.wdtree import reduction_closure

q = parse_pattern("""
{ ?x rdf:type professor
  OPTIONAL { ?x workFor ?d
             OPTIONAL { ?d subOrganizationOf ?u
                        OPTIONAL { ?u name ?n } } }
  OPTIONAL { ?x teachOf ?c } }
""")
print("depth", opt_depth(q), "OPTs", opt_count(q))
for k in range(opt_depth(q) + 1):
    a = k_approximate(q, k)
    print(f"k={k} opts={opt_count(a)}  {print_pattern(a)}")

# each approximation is reachable by deleting OPTIONAL parts one at a time
closure = reduction_closure(q)
inside = all(k_approximate(q, k) in closure for k in range(4))
print(f"reduction closure has {len(closure)} patterns; approximations inside: {inside}")
