"""Feature models: text format, propositional semantics, CNF, DIMACS.

Run from the repository root:  python demos/01_feature_models.py
"""

from confik import all_models, parse_model, print_model, to_cnf, to_dimacs, translate

MODEL = open(__file__.rsplit("/", 1)[0] + "/fig1b.fm").read()

print("--- model text ---")
print(MODEL)

fm = parse_model(MODEL)
print("features:", [f.name for f in fm.features])
print("groups:", [(fm.name_of(g.parent), g.kind, [fm.name_of(m) for m in g.members]) for g in fm.groups])

# translation: one conjunct per modeling primitive
expr = translate(fm)
cs = to_cnf(expr, fm.var_table)
print("\n--- clausal form ---")
for clause in cs.clauses:
    print("  " + " | ".join(("" if lit.positive else "!") + fm.var_table.name_of(lit.var) for lit in clause))

# every satisfying assignment is one valid feature combination
print("\n--- the product space ---")
for model in all_models(cs):
    print("  {" + ", ".join(sorted(model.true_names(fm.var_table))) + "}")

print("\n--- DIMACS export ---")
print(to_dimacs(cs))

# the printer gives back the canonical text form
assert parse_model(print_model(fm)).features == fm.features
print("round-trip ok")
