"""An interactive configuration session, step by step.

The user selects a (which implicitly deselects its xor-sibling b), selects c,
and finally deselects d; after that exactly one combination is left.
"""

from confik import apply_decision, is_complete, new_session, parse_model, retract, to_cnf, translate

fm = parse_model(open(__file__.rsplit("/", 1)[0] + "/fig1b.fm").read())
cs = to_cnf(translate(fm), fm.var_table)


def show(session, title):
    print(f"--- {title} ---")
    for vid, status in session.var_status().items():
        print(f"  {fm.var_table.name_of(vid):<2} {status}")
    print(f"  complete: {is_complete(session)}\n")


s = new_session(cs)
show(s, "fresh session (root and mandatory child are inferred immediately)")

s = apply_decision(s, fm.id_of("a"), True)
show(s, "user selects a -> b is implicitly deselected")

s = apply_decision(s, fm.id_of("c"), True)
show(s, "user selects c (no further effects)")

s = apply_decision(s, fm.id_of("d"), False)
show(s, "user deselects d -> process finished")
print("final combination: {" + ", ".join(s.selected_names()) + "}")

# decisions can be retracted; inferred/auto decisions are recomputed
s = retract(s, fm.id_of("a"))
show(s, "after retracting a (c and d survive, a/b reopen)")
