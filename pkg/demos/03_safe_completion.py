"""The safe completion function versus blind completion.

On (u | v) & (x -> y): x and y can be deselected without deciding anything
for the user, but u versus v is a real choice, so those two are highlighted
instead.  Blind completion would just pick some model.
"""

from confik import (
    apply_decision,
    complete_blind,
    dispensable_vars,
    from_dimacs,
    is_complete,
    new_session,
    shopping_principle,
)

cs = from_dimacs(open(__file__.rsplit("/", 1)[0] + "/uv_xy.cnf").read())
t = cs.var_table

report = dispensable_vars(cs)
print("dispensable:", sorted(t.name_of(v) for v in report.dispensable))
print("needs attention:", sorted(t.name_of(v) for v in report.needs_attention))

s = new_session(cs)
s = shopping_principle(s)
print("\nafter the safe completion call:")
for vid, status in s.var_status().items():
    marker = "  <-- needs attention" if vid in s.highlight else ""
    print(f"  {t.name_of(vid):<2} {status}{marker}")

s = apply_decision(s, t.id_of("u"), True)
s = shopping_principle(s)
print("\nafter choosing u and calling it again:")
for vid, status in s.var_status().items():
    print(f"  {t.name_of(vid):<2} {status}")
print("complete:", is_complete(s))

# scenario A for contrast: binds everything in one shot
blind = complete_blind(new_session(cs))
print("\nblind completion picks:", "{" + ", ".join(blind.selected_names()) + "}")
