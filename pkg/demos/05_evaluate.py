"""
Evaluating exact and approximate queries
========================================

Answers are sets of variable mappings. Approximate answers are partial:
every answer of a coarser approximation is extended by some answer of a
finer one, so a client can show results early and refine them later.
"""

from wdsparql import Graph, evaluate, k_approximate, parse_pattern
from wdsparql.oracle import brute_force_evaluate
from wdsparql.semantics import serialize_answers

data = Graph.from_ntriples("""\
<JonSmith> <workFor> <SemanticUniversity> .
<JonSmith> <teachOf> <LizBen> .
<JonSmith> <rdf:type> <professor> .
<LizBen> <rdf:type> <master> .
<LizBen> <advisor> <JonSmith> .
<LizBen> <takesCourse> <Ontology> .
""")
q = parse_pattern("{?x rdf:type professor OPTIONAL {?x workFor ?y OPTIONAL {?x teachOf ?z}}}")

for k in range(3):
    answers = evaluate(k_approximate(q, k), data)
    print(f"k={k}")
    print(serialize_answers(answers), end="")

# the naive evaluator agrees
print("oracle agrees:", brute_force_evaluate(q, data) == evaluate(q, data))
print(serialize_answers(evaluate(q, data), "json"), end="")
