"""Four equivalent characterizations of the safely-deselectable variables.

A variable can be auto-deselected exactly when it is (1) false in every
minimal model, (2) dispensable per the subset-quantifier definition, (3) free
of negation in the closed-world sense, and (4) in every maximal deselectable
set.  This script computes all four on the running example.
"""

from confik import (
    dispensable_brute,
    dispensable_vars,
    enumerate_minimal_models,
    free_of_negation,
    from_dimacs,
    maximal_deselectable_sets,
)

cs = from_dimacs(open(__file__.rsplit("/", 1)[0] + "/uv_xy.cnf").read())
t = cs.var_table
names = lambda vs: sorted(t.name_of(v) for v in vs)  # noqa: E731

mm = enumerate_minimal_models(cs)
print("minimal models:", [set(m.true_names(t)) or "{}" for m in mm.models])

via_minimal = dispensable_vars(cs).dispensable
print("false in all minimal models:   ", names(via_minimal))

via_definition = {v for v in range(4) if dispensable_brute(cs, v)}
print("dispensable (subset quantifier):", names(via_definition))

via_gcwa = {v for v in range(4) if free_of_negation(cs, v)}
print("free of negation (closed world):", names(via_gcwa))

maximal = maximal_deselectable_sets(cs)
print("maximal deselectable sets:     ", [names(s) for s in maximal])
via_intersection = set.intersection(*map(set, maximal))
print("their intersection:            ", names(via_intersection))

assert via_minimal == via_definition == via_gcwa == via_intersection
print("\nall four characterizations agree")
