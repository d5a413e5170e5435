"""
Parsing queries and checking well-designedness
==============================================

A query is written in a small SPARQL-like surface syntax and parsed into
an algebra tree. ``check_well_designed`` lists every reason the pattern
falls outside the fragment the approximation machinery accepts.
"""

from wdsparql import check_well_designed, parse_pattern, print_pattern

# a professor, optionally where they work, and within that what they teach
q = parse_pattern("""
{ ?x rdf:type professor
  OPTIONAL { ?x workFor ?y
             OPTIONAL { ?x teachOf ?z } } }
""")
print(print_pattern(q))
print("violations:", check_well_designed(q))

# ?z is shared by two OPTIONAL arms but not by the mandatory part
bad = parse_pattern("{?x p ?y OPTIONAL {?y q ?z} OPTIONAL {?x r ?z}}")
for v in check_well_designed(bad):
    print(v.kind.value, "-", v.message)

# FILTER variables must be bound by the filtered pattern
unsafe = parse_pattern("{?x p ?y FILTER(BOUND(?w))}")
for v in check_well_designed(unsafe):
    print(v.kind.value, "-", v.message)
